//! The doubly truncated cell complex and its mod-2 cohomology.
//!
//! Cells of one doubly truncated tetrahedron `t`, before identification:
//!
//! * vertex `(v, w, f)`: corner shared by boundary hexagon `v`, rectangle `{v, w}` and large
//!   hexagon `f`;
//! * long edge `(f, {v, w})` in face `f` along edge `{v, w}`; medium edge `(v, f)` between
//!   large hexagon `f` and boundary hexagon `v`; short edge `(v, w)` where rectangle `{v, w}`
//!   meets boundary hexagon `v`;
//! * large hexagon `f`, boundary hexagon `v`, rectangle `{v, w}`; and the body.
//!
//! Face gluings identify vertices, long and medium edges and large hexagons. Each edge class
//! adds two discs (one per end) bounded by short edges and a cylinder bounded by its
//! rectangles and discs.

mod cochains;
mod cohomology;

pub use cochains::{curve_dual_cocycle, defanning, fanning, include_relative, rect, restrict_to_boundary};
pub use cohomology::{Cohomology, Support};

use crate::error::{Error, Result};
use crate::linalg::{z2_rank, BitVec, Z2Matrix};
use crate::triangulation::{complement_pair, edge_index, IdealTriangulation, EDGES};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Vertex,
    LongEdge,
    MediumEdge,
    ShortEdge,
    LargeHexagon,
    BoundaryHexagon,
    Rectangle,
    EdgeDisc,
    Body,
    Cylinder,
}

impl CellKind {
    pub fn dim(self) -> usize {
        use CellKind::*;
        match self {
            Vertex => 0,
            LongEdge | MediumEdge | ShortEdge => 1,
            LargeHexagon | BoundaryHexagon | Rectangle | EdgeDisc => 2,
            Body | Cylinder => 3,
        }
    }

    pub fn on_boundary(self) -> bool {
        use CellKind::*;
        matches!(self, Vertex | MediumEdge | ShortEdge | BoundaryHexagon | EdgeDisc)
    }
}

/// Lowest-indexed raw cell an identified cell came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tet: Option<usize>,
    /// Tetrahedron vertices naming the cell, as in the module docs.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub kind: CellKind,
    pub boundary: bool,
    pub provenance: Provenance,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn vertex_key(t: usize, v: u8, w: u8, f: u8) -> usize {
    t * 64 + (v as usize) * 16 + (w as usize) * 4 + f as usize
}

fn long_key(t: usize, f: u8, v: u8, w: u8) -> usize {
    let (a, b) = (v.min(w), v.max(w));
    t * 64 + (f as usize) * 16 + (a as usize) * 4 + b as usize
}

fn medium_key(t: usize, v: u8, f: u8) -> usize {
    t * 16 + (v as usize) * 4 + f as usize
}

fn distinct(xs: &[u8]) -> bool {
    xs.iter().enumerate().all(|(i, a)| xs[..i].iter().all(|b| a != b))
}

/// Doubly truncated complex of an ideal triangulation.
#[derive(Clone, Debug)]
pub struct CwComplex {
    n: usize,
    num_classes: usize,
    cells: [Vec<Cell>; 4],
    /// `boundary[k]`: rows are `k`-cells, columns `(k-1)`-cells (`boundary[0]` is empty).
    boundary: [Z2Matrix; 4],
    vertex_ids: Vec<usize>,
    long_ids: Vec<usize>,
    medium_ids: Vec<usize>,
    hex_ids: Vec<usize>,
    short_base: usize,
    bhex_base: usize,
    rect_base: usize,
    disc_base: usize,
    cyl_base: usize,
}

const NONE: usize = usize::MAX;

fn identify(
    raw: usize,
    valid: impl Fn(usize) -> bool,
    glue: impl Fn(&mut UnionFind),
    make: impl Fn(usize) -> Cell,
    out: &mut Vec<Cell>,
) -> Vec<usize> {
    let mut uf = UnionFind::new(raw);
    glue(&mut uf);
    let mut ids = vec![NONE; raw];
    let mut root_id = vec![NONE; raw];
    for key in (0..raw).filter(|&k| valid(k)) {
        let r = uf.find(key);
        if root_id[r] == NONE {
            root_id[r] = out.len();
            out.push(make(key));
        }
        ids[key] = root_id[r];
    }
    ids
}

impl CwComplex {
    pub fn build(t: &IdealTriangulation) -> Result<Self> {
        let n = t.num_tetrahedra();
        let classes = t.edge_classes();
        let mut cells: [Vec<Cell>; 4] = Default::default();
        let cell = |kind: CellKind, prov: Provenance| Cell { kind, boundary: kind.on_boundary(), provenance: prov };
        let prov = |tet: usize, vertices: Vec<u8>, face: Option<u8>| Provenance {
            tet: Some(tet),
            vertices,
            face,
            edge_class: None,
            end: None,
        };

        // vertices
        let vertex_ids = identify(
            64 * n,
            |k| distinct(&[(k % 64 / 16) as u8, (k % 16 / 4) as u8, (k % 4) as u8]),
            |uf| {
                for tet in 0..n {
                    for f in 0..4u8 {
                        let g = t.gluing(tet, f);
                        for v in (0..4u8).filter(|&v| v != f) {
                            for w in (0..4u8).filter(|&w| w != f && w != v) {
                                let (pv, pw) = (g.perm.apply(v), g.perm.apply(w));
                                uf.union(vertex_key(tet, v, w, f), vertex_key(g.tet, pv, pw, g.face));
                            }
                        }
                    }
                }
            },
            |k| cell(CellKind::Vertex, prov(k / 64, vec![(k % 64 / 16) as u8, (k % 16 / 4) as u8], Some((k % 4) as u8))),
            &mut cells[0],
        );

        // long edges, then medium edges
        let long_ids = identify(
            64 * n,
            |k| {
                let (f, a, b) = ((k % 64 / 16) as u8, (k % 16 / 4) as u8, (k % 4) as u8);
                a < b && f != a && f != b
            },
            |uf| {
                for tet in 0..n {
                    for f in 0..4u8 {
                        let g = t.gluing(tet, f);
                        for &(a, b) in EDGES.iter().filter(|&&(a, b)| a != f && b != f) {
                            uf.union(long_key(tet, f, a, b), long_key(g.tet, g.face, g.perm.apply(a), g.perm.apply(b)));
                        }
                    }
                }
            },
            |k| cell(CellKind::LongEdge, prov(k / 64, vec![(k % 16 / 4) as u8, (k % 4) as u8], Some((k % 64 / 16) as u8))),
            &mut cells[1],
        );
        let medium_ids = identify(
            16 * n,
            |k| (k % 16 / 4) != (k % 4),
            |uf| {
                for tet in 0..n {
                    for f in 0..4u8 {
                        let g = t.gluing(tet, f);
                        for v in (0..4u8).filter(|&v| v != f) {
                            uf.union(medium_key(tet, v, f), medium_key(g.tet, g.perm.apply(v), g.face));
                        }
                    }
                }
            },
            |k| cell(CellKind::MediumEdge, prov(k / 16, vec![(k % 16 / 4) as u8], Some((k % 4) as u8))),
            &mut cells[1],
        );
        let short_base = cells[1].len();
        for tet in 0..n {
            for v in 0..4u8 {
                for w in (0..4u8).filter(|&w| w != v) {
                    cells[1].push(cell(CellKind::ShortEdge, prov(tet, vec![v, w], None)));
                }
            }
        }

        // 2-cells
        let hex_ids = identify(
            4 * n,
            |_| true,
            |uf| {
                for tet in 0..n {
                    for f in 0..4u8 {
                        let g = t.gluing(tet, f);
                        uf.union(tet * 4 + f as usize, g.tet * 4 + g.face as usize);
                    }
                }
            },
            |k| cell(CellKind::LargeHexagon, prov(k / 4, vec![], Some((k % 4) as u8))),
            &mut cells[2],
        );
        let bhex_base = cells[2].len();
        for tet in 0..n {
            for v in 0..4u8 {
                cells[2].push(cell(CellKind::BoundaryHexagon, prov(tet, vec![v], None)));
            }
        }
        let rect_base = cells[2].len();
        for tet in 0..n {
            for &(a, b) in &EDGES {
                cells[2].push(cell(CellKind::Rectangle, prov(tet, vec![a, b], None)));
            }
        }
        let disc_base = cells[2].len();
        for class in 0..classes.len() {
            for end in 0..2u8 {
                cells[2].push(cell(
                    CellKind::EdgeDisc,
                    Provenance { tet: None, vertices: vec![], face: None, edge_class: Some(class), end: Some(end) },
                ));
            }
        }
        for tet in 0..n {
            cells[3].push(cell(CellKind::Body, prov(tet, vec![], None)));
        }
        let cyl_base = cells[3].len();
        for class in 0..classes.len() {
            cells[3].push(cell(
                CellKind::Cylinder,
                Provenance { tet: None, vertices: vec![], face: None, edge_class: Some(class), end: None },
            ));
        }

        let mut cx = CwComplex {
            n,
            num_classes: classes.len(),
            boundary: [
                Z2Matrix::zeros(cells[0].len(), 0),
                Z2Matrix::zeros(cells[1].len(), cells[0].len()),
                Z2Matrix::zeros(cells[2].len(), cells[1].len()),
                Z2Matrix::zeros(cells[3].len(), cells[2].len()),
            ],
            cells,
            vertex_ids,
            long_ids,
            medium_ids,
            hex_ids,
            short_base,
            bhex_base,
            rect_base,
            disc_base,
            cyl_base,
        };
        cx.fill_boundaries(t);
        cx.validate()?;
        Ok(cx)
    }


    // Identified cells get their boundary from the copy that created them.
    fn is_representative(&self, dim: usize, id: usize, tet: usize, vertices: &[u8], face: u8) -> bool {
        let p = &self.cells[dim][id].provenance;
        p.tet == Some(tet) && p.vertices == vertices && p.face == Some(face)
    }

    fn fill_boundaries(&mut self, t: &IdealTriangulation) {
        for tet in 0..self.n {
            for f in 0..4u8 {
                for &(a, b) in EDGES.iter().filter(|&&(a, b)| a != f && b != f) {
                    let e = self.long(tet, f, a, b);
                    if !self.is_representative(1, e, tet, &[a, b], f) {
                        continue;
                    }
                    self.boundary[1].flip(e, self.vertex(tet, a, b, f));
                    self.boundary[1].flip(e, self.vertex(tet, b, a, f));
                }
                for v in (0..4u8).filter(|&v| v != f) {
                    let (x, y) = complement_pair(v, f);
                    let e = self.medium(tet, v, f);
                    if !self.is_representative(1, e, tet, &[v], f) {
                        continue;
                    }
                    self.boundary[1].flip(e, self.vertex(tet, v, x, f));
                    self.boundary[1].flip(e, self.vertex(tet, v, y, f));
                }
            }
            for v in 0..4u8 {
                for w in (0..4u8).filter(|&w| w != v) {
                    let (x, y) = complement_pair(v, w);
                    let e = self.short(tet, v, w);
                    self.boundary[1].flip(e, self.vertex(tet, v, w, x));
                    self.boundary[1].flip(e, self.vertex(tet, v, w, y));
                }
            }
            // 2-cells
            for f in 0..4u8 {
                let h = self.large_hexagon(tet, f);
                if !self.is_representative(2, h, tet, &[], f) {
                    continue;
                }
                for &(a, b) in EDGES.iter().filter(|&&(a, b)| a != f && b != f) {
                    let e = self.long(tet, f, a, b);
                    self.boundary[2].flip(h, e);
                }
                for v in (0..4u8).filter(|&v| v != f) {
                    let e = self.medium(tet, v, f);
                    self.boundary[2].flip(h, e);
                }
            }
            for v in 0..4u8 {
                let h = self.boundary_hexagon(tet, v);
                for w in (0..4u8).filter(|&w| w != v) {
                    let (m, s) = (self.medium(tet, v, w), self.short(tet, v, w));
                    self.boundary[2].flip(h, m);
                    self.boundary[2].flip(h, s);
                }
            }
            for &(a, b) in &EDGES {
                let r = self.rectangle(tet, a, b);
                let (x, y) = complement_pair(a, b);
                let cells = [self.long(tet, x, a, b), self.long(tet, y, a, b), self.short(tet, a, b), self.short(tet, b, a)];
                for c in cells {
                    self.boundary[2].flip(r, c);
                }
            }
            // body
            let body = self.body(tet);
            for i in 0..4u8 {
                let (h, bh) = (self.large_hexagon(tet, i), self.boundary_hexagon(tet, i));
                self.boundary[3].flip(body, h);
                self.boundary[3].flip(body, bh);
            }
            for &(a, b) in &EDGES {
                let r = self.rectangle(tet, a, b);
                self.boundary[3].flip(body, r);
            }
        }
        for (class, ec) in t.edge_classes().iter().enumerate() {
            let cyl = self.cylinder(class);
            for end in 0..2u8 {
                let d = self.disc(class, end);
                self.boundary[3].flip(cyl, d);
            }
            for emb in &ec.embeddings {
                let r = self.rectangle(emb.tet, emb.tail, emb.head);
                self.boundary[3].flip(cyl, r);
                let (d0, d1) = (self.disc(class, 0), self.disc(class, 1));
                let (s0, s1) = (self.short(emb.tet, emb.tail, emb.head), self.short(emb.tet, emb.head, emb.tail));
                self.boundary[2].flip(d0, s0);
                self.boundary[2].flip(d1, s1);
            }
        }
    }

    fn validate(&self) -> Result<()> {
        for k in 1..3 {
            if !self.boundary[k + 1].mul(&self.boundary[k]).is_zero() {
                return Err(Error::InconsistentGluing(format!("boundary of boundary is nonzero in degree {}", k + 1)));
            }
        }
        if self.euler_characteristic() != 0 {
            return Err(Error::InconsistentGluing(format!(
                "truncated complex has Euler characteristic {}",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.n
    }

    pub fn num_edge_classes(&self) -> usize {
        self.num_classes
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        &self.cells[dim]
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.cells[dim].len()
    }

    /// Rows are `dim`-cells, columns `(dim-1)`-cells.
    pub fn boundary_matrix(&self, dim: usize) -> &Z2Matrix {
        &self.boundary[dim]
    }

    /// `delta^{dim-1}` applied to a `(dim-1)`-cochain.
    pub fn coboundary(&self, dim: usize, cochain: &BitVec) -> BitVec {
        self.boundary[dim].mul_vec(cochain)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..4).map(|k| if k % 2 == 0 { 1 } else { -1 } * self.cells[k].len() as i64).sum()
    }

    /// Number of connected components.
    pub fn h0_dimension(&self) -> usize {
        self.cells[0].len() - z2_rank(&self.boundary[1])
    }

    /// Indicator of the cells of dimension `dim` lying on the boundary.
    pub fn boundary_mask(&self, dim: usize) -> BitVec {
        BitVec::from_bools(&self.cells[dim].iter().map(|c| c.boundary).collect::<Vec<_>>())
    }

    pub fn kind_mask(&self, dim: usize, kind: CellKind) -> BitVec {
        BitVec::from_bools(&self.cells[dim].iter().map(|c| c.kind == kind).collect::<Vec<_>>())
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.cells[kind.dim()].iter().filter(|c| c.kind == kind).count()
    }

    pub fn vertex(&self, tet: usize, v: u8, w: u8, f: u8) -> usize {
        self.vertex_ids[vertex_key(tet, v, w, f)]
    }

    pub fn long(&self, tet: usize, f: u8, v: u8, w: u8) -> usize {
        self.long_ids[long_key(tet, f, v, w)]
    }

    pub fn medium(&self, tet: usize, v: u8, f: u8) -> usize {
        self.medium_ids[medium_key(tet, v, f)]
    }

    pub fn short(&self, tet: usize, v: u8, w: u8) -> usize {
        let w_rank = if w > v { w - 1 } else { w };
        self.short_base + tet * 12 + (v as usize) * 3 + w_rank as usize
    }

    pub fn large_hexagon(&self, tet: usize, f: u8) -> usize {
        self.hex_ids[tet * 4 + f as usize]
    }

    pub fn num_large_hexagons(&self) -> usize {
        self.bhex_base
    }

    pub fn boundary_hexagon(&self, tet: usize, v: u8) -> usize {
        self.bhex_base + tet * 4 + v as usize
    }

    pub fn rectangle(&self, tet: usize, v: u8, w: u8) -> usize {
        self.rect_base + tet * 6 + edge_index(v, w)
    }

    pub fn disc(&self, class: usize, end: u8) -> usize {
        self.disc_base + class * 2 + end as usize
    }

    pub fn body(&self, tet: usize) -> usize {
        tet
    }

    pub fn cylinder(&self, class: usize) -> usize {
        self.cyl_base + class
    }

    /// Cells, kinds and boundary matrices as JSON.
    pub fn debug_json(&self) -> serde_json::Value {
        let dims: Vec<serde_json::Value> = (0..4)
            .map(|k| {
                let boundary: Vec<Vec<usize>> = if k == 0 {
                    vec![]
                } else {
                    self.boundary[k].row_vecs().iter().map(|r| r.ones().collect()).collect()
                };
                serde_json::json!({ "dim": k, "cells": self.cells[k], "boundary": boundary })
            })
            .collect();
        serde_json::json!({ "euler_characteristic": self.euler_characteristic(), "dimensions": dims })
    }
}

/// Shorthand for [`CwComplex::build`].
pub fn build_t00(t: &IdealTriangulation) -> Result<CwComplex> {
    CwComplex::build(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn m003_census() {
        let cx = build_t00(&fixtures::m003()).unwrap();
        assert_eq!(cx.count(CellKind::Vertex), 24);
        assert_eq!(cx.count(CellKind::LongEdge), 12);
        assert_eq!(cx.count(CellKind::MediumEdge), 12);
        assert_eq!(cx.count(CellKind::ShortEdge), 24);
        assert_eq!(cx.count(CellKind::LargeHexagon), 4);
        assert_eq!(cx.count(CellKind::BoundaryHexagon), 8);
        assert_eq!(cx.count(CellKind::Rectangle), 12);
        assert_eq!(cx.count(CellKind::EdgeDisc), 4);
        assert_eq!(cx.count(CellKind::Cylinder), 2);
        assert_eq!(cx.euler_characteristic(), 0);
        assert_eq!(cx.h0_dimension(), 1);
    }

    #[test]
    fn debug_json_lists_every_cell() {
        let cx = build_t00(&fixtures::m004()).unwrap();
        let j = cx.debug_json();
        let total: usize = (0..4).map(|k| j["dimensions"][k]["cells"].as_array().unwrap().len()).sum();
        assert_eq!(total, (0..4).map(|k| cx.num_cells(k)).sum::<usize>());
    }
}
