//! Peripheral curves read off the cusp triangulations.
//!
//! The cusp triangle `(t, v)` has a corner at each tetrahedral edge `{v, w}` and a side in each
//! face `f != v`. A positively oriented tetrahedron sits in upper half-space as `(0, inf, 1, z)`
//! with `Im z > 0`, so seen from the cusp the corners `(a, b, c)` run anticlockwise exactly when
//! `(v, a, b, c)` is an odd arrangement. A normal arc contributes `+1` to the quad facing the
//! corner it cuts off when the corner lies on its left (the arc turns anticlockwise around it),
//! and `-1` otherwise.

use super::{is_even_arrangement, CurvePath, IdealTriangulation};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, IntMatrix};
use num_traits::ToPrimitive;
use std::collections::{HashMap, VecDeque};

/// `a -> b -> c` is anticlockwise as seen from the cusp at `v`.
pub fn anticlockwise(v: u8, a: u8, b: u8, c: u8) -> bool {
    !is_even_arrangement(v, a, b, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveRole {
    Meridian,
    Longitude,
}

/// Closed normal curve in one cusp triangulation.
#[derive(Clone, Debug)]
pub struct CuspCycle {
    pub cusp: usize,
    /// Side crossings `(t, v, f)`: leave cusp triangle `(t, v)` through its side in face `f`.
    pub crossings: Vec<(usize, u8, u8)>,
    /// Signed corner coefficients `G(gamma, .)`.
    pub coefficients: Vec<i64>,
}

impl CuspCycle {
    /// The same curve viewed as a path through the tetrahedra.
    pub fn path(&self, t: &IdealTriangulation) -> CurvePath {
        CurvePath::from_crossings(t, self.crossings.iter().map(|&(tet, _, f)| (tet, f)).collect())
            .expect("cusp cycle is closed")
    }
}

#[derive(Clone, Debug)]
pub struct PeripheralCurve {
    pub cusp: usize,
    pub role: CurveRole,
    pub coefficients: Vec<i64>,
    /// The curve as an integer combination of cusp cycles.
    pub components: Vec<(CuspCycle, i64)>,
}

struct CuspTriangulation<'a> {
    t: &'a IdealTriangulation,
    cusp: usize,
    tris: Vec<(usize, u8)>,
    index: HashMap<(usize, u8), usize>,
    /// Primal edge id and start corner for every side copy `(tri, f)`.
    side: HashMap<(usize, u8), (usize, u8)>,
    num_sides: usize,
}

impl<'a> CuspTriangulation<'a> {
    fn new(t: &'a IdealTriangulation, cusp: usize) -> Self {
        let tris = t.cusp_vertices(cusp).to_vec();
        let index: HashMap<(usize, u8), usize> = tris.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut side = HashMap::new();
        let mut num_sides = 0;
        for (i, &(tet, v)) in tris.iter().enumerate() {
            for f in (0..4u8).filter(|&f| f != v) {
                if side.contains_key(&(i, f)) {
                    continue;
                }
                let (a, b) = super::complement_pair(v, f);
                side.insert((i, f), (num_sides, a));
                let g = t.gluing(tet, f);
                let j = index[&(g.tet, g.perm.apply(v))];
                side.insert((j, g.face), (num_sides, g.perm.apply(a)));
                let _ = b;
                num_sides += 1;
            }
        }
        CuspTriangulation { t, cusp, tris, index, side, num_sides }
    }

    /// Crossing `(tri, f)` lands in triangle `tri'` through its side `f'`.
    fn across(&self, tri: usize, f: u8) -> (usize, u8) {
        let (tet, v) = self.tris[tri];
        let g = self.t.gluing(tet, f);
        (self.index[&(g.tet, g.perm.apply(v))], g.face)
    }

    fn fundamental_cycles(&self) -> Vec<Vec<(usize, u8)>> {
        let m = self.tris.len();
        let mut parent: Vec<Option<(usize, u8)>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut tree_side = vec![false; self.num_sides];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let v = self.tris[u].1;
            for f in (0..4u8).filter(|&f| f != v) {
                let (w, _) = self.across(u, f);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((u, f));
                    tree_side[self.side[&(u, f)].0] = true;
                    queue.push_back(w);
                }
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "cusp triangulation is connected");
        let to_root = |mut x: usize| {
            let mut rev = Vec::new();
            while let Some(c) = parent[x] {
                rev.push(c);
                x = c.0;
            }
            rev.reverse();
            rev
        };
        let mut done = vec![false; self.num_sides];
        let mut cycles = Vec::new();
        for u in 0..m {
            let v = self.tris[u].1;
            for f in (0..4u8).filter(|&f| f != v) {
                let id = self.side[&(u, f)].0;
                if tree_side[id] || done[id] {
                    continue;
                }
                done[id] = true;
                let (w, _) = self.across(u, f);
                let mut cs = to_root(u);
                cs.push((u, f));
                cs.extend(to_root(w).into_iter().rev().map(|(a, g)| self.across(a, g)));
                cycles.push(self.reduce(cs));
            }
        }
        cycles
    }

    fn reduce(&self, cs: Vec<(usize, u8)>) -> Vec<(usize, u8)> {
        let mut stack: Vec<(usize, u8)> = Vec::new();
        for c in cs {
            if stack.last().is_some_and(|&top| self.across(top.0, top.1) == c) {
                stack.pop();
            } else {
                stack.push(c);
            }
        }
        let mut dq: VecDeque<(usize, u8)> = stack.into();
        while dq.len() >= 2 {
            let b = *dq.back().unwrap();
            if self.across(b.0, b.1) == *dq.front().unwrap() {
                dq.pop_back();
                dq.pop_front();
            } else {
                break;
            }
        }
        dq.into()
    }

    /// Arcs `(tri, side in, side out)` of a cyclic crossing sequence.
    fn arcs(&self, cs: &[(usize, u8)]) -> Vec<(usize, u8, u8)> {
        let m = cs.len();
        (0..m)
            .map(|i| {
                let (tri, f_in) = self.across(cs[i].0, cs[i].1);
                let next = cs[(i + 1) % m];
                debug_assert_eq!(next.0, tri);
                (tri, f_in, next.1)
            })
            .collect()
    }

    fn coefficients(&self, cs: &[(usize, u8)]) -> Vec<i64> {
        let mut g = vec![0i64; self.t.num_quads()];
        for (tri, f_in, f_out) in self.arcs(cs) {
            let (tet, v) = self.tris[tri];
            let w = super::fourth_vertex(v, f_in, f_out);
            let sign = if anticlockwise(v, w, f_out, f_in) { 1 } else { -1 };
            let q = super::quad_of_edge(super::edge_index(v, w));
            g[self.t.quad_column(tet, q)] += sign;
        }
        g
    }

    /// Signed crossings of a dual cycle with the oriented primal edges.
    fn crossing_cochain(&self, cs: &[(usize, u8)]) -> Vec<i64> {
        let mut phi = vec![0i64; self.num_sides];
        for &(tri, f) in cs {
            let v = self.tris[tri].1;
            let (id, p) = self.side[&(tri, f)];
            let q = super::fourth_vertex(v, f, p);
            phi[id] += if anticlockwise(v, p, q, f) { 1 } else { -1 };
        }
        phi
    }

    /// A primal 1-cycle homotopic to the dual cycle, pushing every arc onto its corner.
    fn primal_pushoff(&self, cs: &[(usize, u8)]) -> Vec<i64> {
        let mut half = vec![0i64; self.num_sides];
        for (tri, f_in, f_out) in self.arcs(cs) {
            let v = self.tris[tri].1;
            let w = super::fourth_vertex(v, f_in, f_out);
            // from the midpoint of side f_in to corner w
            let (id, p) = self.side[&(tri, f_in)];
            half[id] += if w == p { -1 } else { 1 };
            // from corner w to the midpoint of side f_out
            let (id, p) = self.side[&(tri, f_out)];
            half[id] += if w == p { 1 } else { -1 };
        }
        half.iter()
            .map(|&h| {
                debug_assert!(h % 2 == 0, "push-off is not a cycle");
                h / 2
            })
            .collect()
    }
}

/// All fundamental cycles of the cusp dual graphs, cusp by cusp.
pub fn cusp_cycles(t: &IdealTriangulation) -> Vec<CuspCycle> {
    let mut out = Vec::new();
    for c in 0..t.num_cusps() {
        let ct = CuspTriangulation::new(t, c);
        for cs in ct.fundamental_cycles() {
            out.push(to_cycle(&ct, &cs));
        }
    }
    out
}

fn to_cycle(ct: &CuspTriangulation, cs: &[(usize, u8)]) -> CuspCycle {
    CuspCycle {
        cusp: ct.cusp,
        crossings: cs.iter().map(|&(tri, f)| (ct.tris[tri].0, ct.tris[tri].1, f)).collect(),
        coefficients: ct.coefficients(cs),
    }
}

/// Intersection numbers of the fundamental cycles of one cusp.
fn intersection_matrix(ct: &CuspTriangulation, cycles: &[Vec<(usize, u8)>]) -> Vec<Vec<i64>> {
    let phis: Vec<Vec<i64>> = cycles.iter().map(|c| ct.crossing_cochain(c)).collect();
    let pushes: Vec<Vec<i64>> = cycles.iter().map(|c| ct.primal_pushoff(c)).collect();
    phis.iter()
        .map(|phi| pushes.iter().map(|p| phi.iter().zip(p).map(|(a, b)| a * b).sum()).collect())
        .collect()
}

/// A meridian/longitude pair with `iota(mu, lambda) = 1` for every cusp.
pub fn peripheral_basis(t: &IdealTriangulation) -> Result<Vec<PeripheralCurve>> {
    let mut out = Vec::new();
    for c in 0..t.num_cusps() {
        let ct = CuspTriangulation::new(t, c);
        let cycles = ct.fundamental_cycles();
        let inter = intersection_matrix(&ct, &cycles);
        for i in 0..inter.len() {
            if inter[i][i] != 0 || (0..inter.len()).any(|j| inter[i][j] != -inter[j][i]) {
                return Err(Error::Inconsistency(format!("intersection form of cusp {c} is not alternating")));
            }
        }
        let (mu, lambda) = symplectic_pair(&inter).ok_or(Error::NonTorusCusp { cusp: c, euler: 0 })?;
        let combine = |coef: &[i64]| -> (Vec<i64>, Vec<(CuspCycle, i64)>) {
            let mut g = vec![0i64; t.num_quads()];
            let mut parts = Vec::new();
            for (i, &a) in coef.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let cyc = to_cycle(&ct, &cycles[i]);
                for (x, y) in g.iter_mut().zip(&cyc.coefficients) {
                    *x += a * y;
                }
                parts.push((cyc, a));
            }
            (g, parts)
        };
        let (gm, pm) = combine(&mu);
        let (gl, pl) = combine(&lambda);
        let check: i64 = (0..mu.len()).flat_map(|i| (0..lambda.len()).map(move |j| (i, j)))
            .map(|(i, j)| mu[i] * inter[i][j] * lambda[j])
            .sum();
        if check != 1 {
            return Err(Error::Inconsistency(format!("peripheral basis of cusp {c} has intersection {check}")));
        }
        out.push(PeripheralCurve { cusp: c, role: CurveRole::Meridian, coefficients: gm, components: pm });
        out.push(PeripheralCurve { cusp: c, role: CurveRole::Longitude, coefficients: gl, components: pl });
    }
    Ok(out)
}

/// Coefficient vectors `(a, b)` with `a^T I b = 1`, preferring single cycles.
fn symplectic_pair(inter: &[Vec<i64>]) -> Option<(Vec<i64>, Vec<i64>)> {
    let m = inter.len();
    let unit = |i: usize| {
        let mut v = vec![0i64; m];
        v[i] = 1;
        v
    };
    for i in 0..m {
        for j in i + 1..m {
            match inter[i][j] {
                1 => return Some((unit(i), unit(j))),
                -1 => return Some((unit(j), unit(i))),
                _ => {}
            }
        }
    }
    // rows of U^{-1} I span the functionals iota(x, .) of a homology basis
    let snf = smith_normal_form(&IntMatrix::from_rows(inter, m));
    if snf.rank() != 2 || snf.invariants.iter().any(|d| d != &1.into()) {
        return None;
    }
    let row = |k: usize| -> Vec<i64> { snf.u_inv.row(k).iter().map(|x| x.to_i64().unwrap()).collect() };
    let (a, b) = (row(0), row(1));
    let pair: i64 = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| a[i] * inter[i][j] * b[j]).sum();
    match pair {
        1 => Some((a, b)),
        -1 => Some((b, a)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn basis_pairs_to_one() {
        for t in [fixtures::m003(), fixtures::m004()] {
            let basis = peripheral_basis(&t).unwrap();
            assert_eq!(basis.len(), 2);
            assert_eq!(basis[0].role, CurveRole::Meridian);
        }
    }

    #[test]
    fn cusp_cycles_are_reduced_paths() {
        let t = fixtures::m004();
        for c in cusp_cycles(&t) {
            assert!(c.path(&t).is_reduced());
        }
    }
}
