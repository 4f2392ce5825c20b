//! Face co-orientations, orientations of the 1-cells of the doubly truncated complex, and the
//! SL(2,C) labelling by `S`, `T` and `H_W`.
//!
//! Orientations come from a fixed straight model of a tetrahedron whose handedness agrees with
//! [`anticlockwise`]: long and medium edges circulate around the co-orientation of their large
//! hexagon, short edges around the outward direction of their tetrahedral edge.

use super::Flattening;
use crate::complex::{CellKind, CwComplex};
use crate::error::{Error, Result};
use crate::linalg::BitVec;
use crate::tol::Tolerances;
use crate::triangulation::{complement_pair, fourth_vertex, quad_between_faces, quad_of_edge, edge_index, IdealTriangulation};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::VecDeque;

pub type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Inverse of a determinant-one matrix.
fn inv(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

fn identity() -> Mat2 {
    [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]
}

fn distance_to_scalar(a: &Mat2, s: f64) -> f64 {
    let d = [a[0][0] - s, a[0][1], a[1][0], a[1][1] - s];
    d.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub const S: [[f64; 2]; 2] = [[0.0, -1.0], [1.0, 0.0]];
pub const T: [[f64; 2]; 2] = [[1.0, -1.0], [0.0, 1.0]];

fn real(m: [[f64; 2]; 2]) -> Mat2 {
    [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]]
}

fn h(w: Complex64) -> Mat2 {
    [[(w / 2.0).exp(), c(0.0)], [c(0.0), (-w / 2.0).exp()]]
}

type V3 = [f64; 3];

// Vertex positions of the model tetrahedron.
const P: [V3; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, -1.0, 1.0], [-1.0, 1.0, -1.0]];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add_scaled(a: V3, b: V3, s: f64) -> V3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Position of the 0-cell near vertex `v`, on edge `vw`, in face `f`.
fn point(v: u8, w: u8, f: u8) -> V3 {
    let x = fourth_vertex(v, w, f);
    let p = P[v as usize];
    add_scaled(add_scaled(p, sub(P[w as usize], p), 0.3), sub(P[x as usize], p), 0.1)
}

fn face_centre(f: u8) -> V3 {
    let mut s = [0.0; 3];
    for u in (0..4u8).filter(|&u| u != f) {
        s = add_scaled(s, P[u as usize], 1.0 / 3.0);
    }
    s
}

/// `a -> b` turns positively around the axis through `centre` with direction `axis`.
fn turns_positively(a: V3, b: V3, centre: V3, axis: V3) -> bool {
    dot3(cross(sub(a, centre), sub(b, centre)), axis) > 0.0
}

/// Local 0-cell `(v, w, f)` of a tetrahedron.
type Corner = (u8, u8, u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Local {
    Long { f: u8, a: u8, b: u8 },
    Medium { v: u8, f: u8 },
    Short { v: u8, w: u8 },
}

impl Local {
    fn endpoints(self) -> (Corner, Corner) {
        match self {
            Local::Long { f, a, b } => ((a, b, f), (b, a, f)),
            Local::Medium { v, f } => {
                let (x, y) = complement_pair(v, f);
                ((v, x, f), (v, y, f))
            }
            Local::Short { v, w } => {
                let (x, y) = complement_pair(v, w);
                ((v, w, x), (v, w, y))
            }
        }
    }

    fn cell(self, cx: &CwComplex, tet: usize) -> usize {
        match self {
            Local::Long { f, a, b } => cx.long(tet, f, a, b),
            Local::Medium { v, f } => cx.medium(tet, v, f),
            Local::Short { v, w } => cx.short(tet, v, w),
        }
    }
}

/// The edge with these local endpoints, traversed from `from` to `to`.
fn local_edge(from: Corner, to: Corner) -> Local {
    let ((v1, w1, f1), (v2, w2, f2)) = (from, to);
    if f1 == f2 && v1 == w2 && w1 == v2 {
        Local::Long { f: f1, a: v1.min(w1), b: v1.max(w1) }
    } else if f1 == f2 && v1 == v2 {
        Local::Medium { v: v1, f: f1 }
    } else if v1 == v2 && w1 == w2 {
        Local::Short { v: v1, w: w1 }
    } else {
        panic!("corners {from:?} and {to:?} are not adjacent")
    }
}

/// Co-orientation per face side: `inward[t][f]` points into tetrahedron `t` through face `f`.
///
/// Seeded outward at face 0 of tetrahedron 0 and continued by the parity rule: two faces of a
/// tetrahedron have equal sidedness exactly when `delta` is odd on the quad between them.
pub fn coorient(t: &IdealTriangulation, delta: &BitVec) -> Result<Vec<[bool; 4]>> {
    let n = t.num_tetrahedra();
    let mut inward: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let quad = |tet: usize, f1: u8, f2: u8| delta.get(t.quad_column(tet, quad_between_faces(f1, f2)));
    inward[0][0] = Some(false);
    let mut queue = VecDeque::from([(0usize, 0u8)]);
    while let Some((tet, f)) = queue.pop_front() {
        let side = inward[tet][f as usize].unwrap();
        let g = t.gluing(tet, f);
        let mut next = vec![((g.tet, g.face), !side)];
        for f2 in (0..4u8).filter(|&f2| f2 != f) {
            next.push(((tet, f2), side ^ !quad(tet, f, f2)));
        }
        for ((u, h), want) in next {
            match inward[u][h as usize] {
                None => {
                    inward[u][h as usize] = Some(want);
                    queue.push_back((u, h));
                }
                Some(have) if have != want => {
                    return Err(Error::Inconsistency(format!(
                        "co-orientation monodromy at face {h} of tetrahedron {u}; delta has odd parity"
                    )));
                }
                _ => {}
            }
        }
    }
    Ok(inward.iter().map(|r| r.map(|x| x.expect("dual graph is connected"))).collect())
}

/// Global orientation and label of one 1-cell.
#[derive(Clone, Debug, Serialize)]
pub struct OrientedEdge {
    pub kind: CellKind,
    pub from: usize,
    pub to: usize,
    #[serde(skip)]
    pub label: Mat2,
}

#[derive(Clone, Debug)]
pub struct Labelling {
    pub inward: Vec<[bool; 4]>,
    pub w: Vec<Complex64>,
    pub delta: BitVec,
    /// Indexed by 1-cell.
    pub edges: Vec<OrientedEdge>,
}

impl Labelling {
    fn positive(&self, tet: usize, e: Local) -> bool {
        let (a, b) = e.endpoints();
        let (pa, pb) = (point(a.0, a.1, a.2), point(b.0, b.1, b.2));
        match e {
            Local::Long { f, .. } | Local::Medium { f, .. } => {
                let centre = face_centre(f);
                let into = sub(P[f as usize], centre);
                let normal = if self.inward[tet][f as usize] { into } else { sub([0.0; 3], into) };
                turns_positively(pa, pb, centre, normal)
            }
            Local::Short { v, w } => {
                let (pv, pw) = (P[v as usize], P[w as usize]);
                turns_positively(pa, pb, add_scaled(pv, sub(pw, pv), 0.3), sub(pv, pw))
            }
        }
    }

    fn local_label(&self, t: &IdealTriangulation, tet: usize, e: Local) -> Mat2 {
        match e {
            Local::Long { .. } => real(S),
            Local::Medium { .. } => real(T),
            Local::Short { v, w } => h(self.w[t.quad_column(tet, quad_of_edge(edge_index(v, w)))]),
        }
    }

    /// Label for walking the local edge from `from` to `to` in tetrahedron `tet`.
    fn step(&self, t: &IdealTriangulation, tet: usize, from: Corner, to: Corner) -> Mat2 {
        let e = local_edge(from, to);
        let forward = (e.endpoints().0 == from) == self.positive(tet, e);
        let m = self.local_label(t, tet, e);
        if forward {
            m
        } else {
            inv(&m)
        }
    }

    /// Path-ordered product: the label of each step multiplies on the left.
    fn holonomy(&self, t: &IdealTriangulation, steps: &[(usize, Corner, Corner)]) -> Mat2 {
        steps.iter().fold(identity(), |acc, &(tet, from, to)| mul(&self.step(t, tet, from, to), &acc))
    }
}

fn closed_walk(tet: usize, corners: &[Corner]) -> Vec<(usize, Corner, Corner)> {
    (0..corners.len()).map(|i| (tet, corners[i], corners[(i + 1) % corners.len()])).collect()
}

/// Orients the 1-cells from the face co-orientations and labels them.
pub fn build_labelling(cx: &CwComplex, t: &IdealTriangulation, fl: &Flattening) -> Result<Labelling> {
    let delta = fl.delta_bits();
    let inward = coorient(t, &delta)?;
    let mut lab = Labelling { inward, w: fl.w.clone(), delta, edges: Vec::new() };
    let mut edges: Vec<Option<OrientedEdge>> = vec![None; cx.num_cells(1)];
    for tet in 0..cx.num_tetrahedra() {
        let mut locals = Vec::new();
        for f in 0..4u8 {
            for v in (0..4u8).filter(|&v| v != f) {
                locals.push(Local::Medium { v, f });
                for w in (v + 1..4).filter(|&w| w != f) {
                    locals.push(Local::Long { f, a: v, b: w });
                }
            }
        }
        for v in 0..4u8 {
            for w in (0..4u8).filter(|&w| w != v) {
                locals.push(Local::Short { v, w });
            }
        }
        for e in locals {
            let (a, b) = e.endpoints();
            let (ga, gb) = (cx.vertex(tet, a.0, a.1, a.2), cx.vertex(tet, b.0, b.1, b.2));
            let (from, to) = if lab.positive(tet, e) { (ga, gb) } else { (gb, ga) };
            let id = e.cell(cx, tet);
            match &edges[id] {
                None => {
                    let label = if lab.positive(tet, e) { lab.local_label(t, tet, e) } else { inv(&lab.local_label(t, tet, e)) };
                    let label = if from == ga { label } else { inv(&label) };
                    edges[id] = Some(OrientedEdge { kind: cx.cells(1)[id].kind, from, to, label });
                }
                Some(prev) if from != to && (prev.from, prev.to) != (from, to) => {
                    return Err(Error::Inconsistency(format!("1-cell {id} receives opposite orientations from its copies")));
                }
                _ => {}
            }
        }
    }
    lab.edges = edges.into_iter().map(|e| e.expect("every 1-cell has a copy")).collect();
    Ok(lab)
}

#[derive(Clone, Debug, Serialize)]
pub struct CellHolonomy {
    pub cell: usize,
    pub kind: CellKind,
    /// `+1` or `-1`: the holonomy is within tolerance of this multiple of the identity.
    pub sign: i8,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabellingReport {
    pub cells: Vec<CellHolonomy>,
    /// Cells whose holonomy is `-I`.
    #[serde(skip)]
    pub sign_cochain: BitVec,
    pub max_distance: f64,
    /// Every 2-cell other than a rectangle has holonomy `+I`.
    pub non_rectangle_identity: bool,
    /// Largest `|det - 1|` over the labels.
    pub max_determinant_error: f64,
    /// Largest distance of a diagonal entry of a peripheral monodromy from 1.
    pub peripheral_diagonal_error: f64,
    pub unipotent: bool,
}

/// Holonomy around every 2-cell and the diagonal of the peripheral monodromies.
pub fn verify_labelling(cx: &CwComplex, t: &IdealTriangulation, lab: &Labelling, tol: &Tolerances) -> Result<LabellingReport> {
    let n = cx.num_tetrahedra();
    let mut hol: Vec<Option<(f64, i8)>> = vec![None; cx.num_cells(2)];
    let mut record = |cell: usize, m: Mat2| -> Result<()> {
        let (dp, dm) = (distance_to_scalar(&m, 1.0), distance_to_scalar(&m, -1.0));
        let (d, s) = if dp <= dm { (dp, 1) } else { (dm, -1) };
        if d > tol.mat {
            return Err(Error::Inconsistency(format!(
                "holonomy of 2-cell {cell} ({:?}) is {d:e} away from +-I",
                cx.cells(2)[cell].kind
            )));
        }
        match hol[cell] {
            Some((_, s0)) if s0 != s => {
                return Err(Error::Inconsistency(format!("copies of 2-cell {cell} have different holonomy signs")));
            }
            Some((d0, _)) => hol[cell] = Some((d0.max(d), s)),
            None => hol[cell] = Some((d, s)),
        }
        Ok(())
    };
    for tet in 0..n {
        for f in 0..4u8 {
            let vs: Vec<u8> = (0..4u8).filter(|&u| u != f).collect();
            let (a, b, cc) = (vs[0], vs[1], vs[2]);
            let corners = [(a, b, f), (b, a, f), (b, cc, f), (cc, b, f), (cc, a, f), (a, cc, f)];
            record(cx.large_hexagon(tet, f), lab.holonomy(t, &closed_walk(tet, &corners)))?;
        }
        for v in 0..4u8 {
            let vs: Vec<u8> = (0..4u8).filter(|&u| u != v).collect();
            let (a, b, cc) = (vs[0], vs[1], vs[2]);
            let corners = [(v, a, b), (v, a, cc), (v, b, cc), (v, b, a), (v, cc, a), (v, cc, b)];
            record(cx.boundary_hexagon(tet, v), lab.holonomy(t, &closed_walk(tet, &corners)))?;
        }
        for (a, b) in crate::triangulation::EDGES {
            let (x, y) = complement_pair(a, b);
            let corners = [(a, b, x), (b, a, x), (b, a, y), (a, b, y)];
            record(cx.rectangle(tet, a, b), lab.holonomy(t, &closed_walk(tet, &corners)))?;
        }
    }
    for (class, ec) in t.edge_classes().iter().enumerate() {
        for end in 0..2u8 {
            let steps: Vec<(usize, Corner, Corner)> = ec
                .embeddings
                .iter()
                .map(|e| {
                    let (v, w) = if end == 0 { (e.tail, e.head) } else { (e.head, e.tail) };
                    (e.tet, (v, w, e.entry_face), (v, w, e.exit_face))
                })
                .collect();
            record(cx.disc(class, end), lab.holonomy(t, &steps))?;
        }
    }

    let mut cells = Vec::with_capacity(hol.len());
    let mut sign_cochain = BitVec::zeros(cx.num_cells(2));
    let mut non_rectangle_identity = true;
    for (cell, h) in hol.iter().enumerate() {
        let (distance, sign) = h.expect("every 2-cell has a copy");
        let kind = cx.cells(2)[cell].kind;
        if sign < 0 {
            sign_cochain.set(cell, true);
            non_rectangle_identity &= kind == CellKind::Rectangle;
        }
        cells.push(CellHolonomy { cell, kind, sign, distance });
    }
    let max_distance = cells.iter().map(|c| c.distance).fold(0.0, f64::max);
    let max_determinant_error = lab.edges.iter().map(|e| (det(&e.label) - 1.0).norm()).fold(0.0, f64::max);
    let peripheral_diagonal_error = peripheral_diagonal_error(cx, lab);
    Ok(LabellingReport {
        cells,
        sign_cochain,
        max_distance,
        non_rectangle_identity,
        max_determinant_error,
        peripheral_diagonal_error,
        unipotent: peripheral_diagonal_error <= tol.mat,
    })
}

// Fundamental cycles of a spanning forest of the boundary 1-skeleton generate the peripheral
// groups; all labels there are upper triangular, so the diagonal of a cycle is read off directly.
fn peripheral_diagonal_error(cx: &CwComplex, lab: &Labelling) -> f64 {
    let nv = cx.num_cells(0);
    let mut adj: Vec<Vec<(usize, Mat2)>> = vec![Vec::new(); nv];
    let mut non_tree = Vec::new();
    for e in lab.edges.iter().filter(|e| matches!(e.kind, CellKind::MediumEdge | CellKind::ShortEdge)) {
        adj[e.from].push((e.to, e.label));
        adj[e.to].push((e.from, inv(&e.label)));
    }
    let mut gauge: Vec<Option<Mat2>> = vec![None; nv];
    for root in 0..nv {
        if gauge[root].is_some() || adj[root].is_empty() {
            continue;
        }
        gauge[root] = Some(identity());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let gu = gauge[u].unwrap();
            for &(w, m) in &adj[u] {
                if gauge[w].is_none() {
                    gauge[w] = Some(mul(&m, &gu));
                    queue.push_back(w);
                }
            }
        }
    }
    for e in lab.edges.iter().filter(|e| matches!(e.kind, CellKind::MediumEdge | CellKind::ShortEdge)) {
        let cycle = mul(&mul(&inv(&gauge[e.to].unwrap()), &e.label), &gauge[e.from].unwrap());
        non_tree.push(cycle);
    }
    non_tree.iter().map(|m| (m[0][0] - 1.0).norm().max((m[1][1] - 1.0).norm())).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::anticlockwise;

    #[test]
    fn model_handedness_matches_the_cusp_convention() {
        for v in 0..4u8 {
            let others: Vec<u8> = (0..4u8).filter(|&u| u != v).collect();
            for &a in &others {
                for &b in &others {
                    for &cc in &others {
                        if a == b || b == cc || a == cc {
                            continue;
                        }
                        let pv = P[v as usize];
                        let corner = |u: u8| add_scaled(pv, sub(P[u as usize], pv), 0.3);
                        let centre = add_scaled(add_scaled(add_scaled([0.0; 3], corner(a), 1.0 / 3.0), corner(b), 1.0 / 3.0), corner(cc), 1.0 / 3.0);
                        // seen from the cusp means looking along the inward direction
                        let geometric = dot3(cross(sub(corner(b), corner(a)), sub(corner(cc), corner(a))), sub(pv, centre)) > 0.0;
                        assert_eq!(geometric, anticlockwise(v, a, b, cc), "{v}: {a}{b}{cc}");
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_identities() {
        let (s, tm) = (real(S), real(T));
        let ts = mul(&tm, &s);
        assert!(distance_to_scalar(&mul(&mul(&ts, &ts), &ts), 1.0) < 1e-15);
        assert!(distance_to_scalar(&mul(&s, &inv(&s)), 1.0) < 1e-15);
        let w = Complex64::new(0.3, 1.1);
        let hs = mul(&h(w), &s);
        assert!(distance_to_scalar(&mul(&hs, &hs), -1.0) < 1e-12);
    }
}
