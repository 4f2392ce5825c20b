use super::{CellKind, CwComplex};
use crate::angles::AngleContext;
use crate::error::{Error, Result};
use crate::linalg::BitVec;
use crate::triangulation::{complement_pair, quad_of_edge, CurvePath, GluingData, IdealTriangulation, EDGES};
use std::collections::VecDeque;

/// The relative 2-cocycle with value `alpha(q)` on both rectangles parallel to `q`.
pub fn rect(cx: &CwComplex, g: &GluingData, alpha: &BitVec) -> Result<BitVec> {
    let n = cx.num_tetrahedra();
    if alpha.len() != 3 * n {
        return Err(Error::InvalidArgument(format!("expected {} quad values, got {}", 3 * n, alpha.len())));
    }
    if !g.edges_mod2().mul_vec(alpha).is_zero() {
        return Err(Error::InvalidArgument("rect needs a vector in the kernel of G mod 2".into()));
    }
    let mut out = BitVec::zeros(cx.num_cells(2));
    for tet in 0..n {
        for (e, &(a, b)) in EDGES.iter().enumerate() {
            if alpha.get(quad_of_edge(e) * n + tet) {
                out.set(cx.rectangle(tet, a, b), true);
            }
        }
    }
    Ok(out)
}

/// `Y(sigma) = sigma + sum over large hexagons F in the support of delta(b_F)`.
pub fn fanning(cx: &CwComplex, sigma: &BitVec) -> BitVec {
    let hex = cx.kind_mask(2, CellKind::LargeHexagon);
    let mut b = BitVec::zeros(cx.num_cells(1));
    for f in sigma.ones().filter(|&f| hex.get(f)) {
        // long edges of F, counted mod 2
        for e in cx.boundary_matrix(2).row(f).ones() {
            if cx.cells(1)[e].kind == CellKind::LongEdge {
                b.flip(e);
            }
        }
    }
    sigma.xor(&cx.coboundary(2, &b))
}

/// A cochain `sigma` on large hexagons with `Y(sigma) = rect(s)`, seeded with 0 on hexagon 0.
pub fn defanning(cx: &CwComplex, ctx: &AngleContext, s: &BitVec) -> Result<BitVec> {
    if !ctx.in_s(s) {
        return Err(Error::InvalidArgument("defanning needs tetrahedron sums 0 and even parity".into()));
    }
    let r = rect(cx, ctx.gluing(), s)?;
    let n = cx.num_tetrahedra();
    let nh = cx.num_large_hexagons();
    // constraints sigma(F_x) + sigma(F_y) = rect(s)(r) for the rectangle r between F_x and F_y
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nh];
    for tet in 0..n {
        for &(a, b) in &EDGES {
            let (x, y) = complement_pair(a, b);
            let (hx, hy) = (cx.large_hexagon(tet, x), cx.large_hexagon(tet, y));
            let val = r.get(cx.rectangle(tet, a, b));
            adj[hx].push((hy, val));
            adj[hy].push((hx, val));
        }
    }
    let mut label: Vec<Option<bool>> = vec![None; nh];
    for seed in 0..nh {
        if label[seed].is_some() {
            continue;
        }
        label[seed] = Some(false);
        let mut queue = VecDeque::from([seed]);
        while let Some(u) = queue.pop_front() {
            let lu = label[u].unwrap();
            for &(w, val) in &adj[u] {
                match label[w] {
                    None => {
                        label[w] = Some(lu ^ val);
                        queue.push_back(w);
                    }
                    Some(lw) if lw != lu ^ val => {
                        return Err(Error::Inconsistency(format!("defanning is inconsistent at hexagon {w}")));
                    }
                    _ => {}
                }
            }
        }
    }
    let mut sigma = BitVec::zeros(cx.num_cells(2));
    for (h, l) in label.iter().enumerate() {
        sigma.set(h, l.unwrap());
    }
    if fanning(cx, &sigma) != r {
        return Err(Error::Inconsistency("fanning of the defanned cochain differs from rect(s)".into()));
    }
    Ok(sigma)
}

/// Crossing counts of `path` with the large hexagons, and the fanned cocycle.
pub fn curve_dual_cocycle(cx: &CwComplex, t: &IdealTriangulation, path: &CurvePath) -> Result<(BitVec, BitVec)> {
    if !path.is_reduced() {
        return Err(Error::InvalidArgument("curve must be reduced".into()));
    }
    let mut c = BitVec::zeros(cx.num_cells(2));
    for &(tet, f) in path.crossings() {
        c.flip(cx.large_hexagon(tet, f));
    }
    let _ = t;
    let y = fanning(cx, &c);
    Ok((c, y))
}

/// Restriction of an absolute cochain to the boundary subcomplex.
pub fn restrict_to_boundary(cx: &CwComplex, c: &BitVec) -> BitVec {
    let m = cx.boundary_mask(2);
    BitVec::from_bools(&c.to_bools().iter().zip(m.to_bools()).map(|(x, y)| *x && y).collect::<Vec<_>>())
}

/// A relative cochain read as an absolute one.
pub fn include_relative(cx: &CwComplex, c: &BitVec) -> Result<BitVec> {
    if c.ones().any(|i| cx.cells(2)[i].boundary) {
        return Err(Error::NotCocycle("relative cochain is nonzero on the boundary".into()));
    }
    Ok(c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_t00, Support};
    use crate::fixtures;

    fn bits(b: &[u8]) -> BitVec {
        BitVec::from_parities(b.iter().map(|&x| x as i64))
    }

    #[test]
    fn m003_rect_classes() {
        let t = fixtures::m003();
        let ctx = AngleContext::new(&t).unwrap();
        let cx = build_t00(&t).unwrap();
        let h = cx.cohomology(2, Support::Relative).unwrap();
        let r1 = rect(&cx, ctx.gluing(), &bits(&[0, 0, 0, 0, 1, 1])).unwrap();
        let r2 = rect(&cx, ctx.gluing(), &bits(&[0, 0, 1, 1, 0, 0])).unwrap();
        assert_eq!(r1.count_ones(), 4);
        assert_eq!(h.reduce(&r1).unwrap(), bits(&[1]));
        assert!(h.reduce(&r2).unwrap().is_zero());
    }

    #[test]
    fn defanning_inverts_fanning() {
        let t = fixtures::m004();
        let ctx = AngleContext::new(&t).unwrap();
        let cx = build_t00(&t).unwrap();
        for row in &ctx.lt().l {
            let s = BitVec::from_parities(row.iter().copied());
            let sigma = defanning(&cx, &ctx, &s).unwrap();
            assert_eq!(fanning(&cx, &sigma), rect(&cx, ctx.gluing(), &s).unwrap());
        }
    }
}
