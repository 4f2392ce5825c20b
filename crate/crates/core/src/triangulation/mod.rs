//! Ideal triangulations: parsing, edge classes, cusps and quad bookkeeping.
//!
//! Vertex `v` of a tetrahedron is opposite face `v`. Tetrahedral edges are indexed
//! `01, 02, 03, 12, 13, 23`, and the quad of type `q` faces the edge pair
//! `{01,23}`, `{02,13}`, `{03,12}` for `q = 0, 1, 2`. The quad column of `(t, q)` is `q*N + t`.

mod curves;
mod gluing;
mod peripheral;

pub use curves::{cycle_basis, curve_coefficients_mod2, edge_loop, CurvePath, Step};
pub use gluing::{gluing_matrices, GluingData};
pub use peripheral::{anticlockwise, cusp_cycles, peripheral_basis, CuspCycle, CurveRole, PeripheralCurve};

use crate::error::{Error, Result};
use serde::Deserialize;

pub const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the tetrahedral edge joining vertices `a != b`.
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

/// Quad type facing tetrahedral edge `e` (and its opposite edge `5 - e`).
pub fn quad_of_edge(e: usize) -> usize {
    e.min(5 - e)
}

/// Quad type facing the edge common to faces `f1 != f2`, i.e. the edge joining the other two vertices.
pub fn quad_between_faces(f1: u8, f2: u8) -> usize {
    quad_of_edge(edge_index(f1, f2))
}

/// The two vertices other than `a` and `b`, in increasing order.
pub fn complement_pair(a: u8, b: u8) -> (u8, u8) {
    let mut it = (0u8..4).filter(|&x| x != a && x != b);
    (it.next().unwrap(), it.next().unwrap())
}

/// The vertex other than `a`, `b` and `c`.
pub fn fourth_vertex(a: u8, b: u8, c: u8) -> u8 {
    6 - a - b - c
}

/// Vertex permutation `i -> p[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize]
    }

    pub fn inverse(&self) -> Perm {
        let mut q = [0u8; 4];
        for i in 0..4 {
            q[self.0[i] as usize] = i as u8;
        }
        Perm(q)
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = [false; 4];
        self.0.iter().all(|&x| x < 4 && !std::mem::replace(&mut seen[x as usize], true))
    }

    pub fn is_odd(&self) -> bool {
        let mut inv = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        inv % 2 == 1
    }
}

/// Sign of the arrangement `(a, b, c, d)` of `{0,1,2,3}`; `true` for even.
pub fn is_even_arrangement(a: u8, b: u8, c: u8, d: u8) -> bool {
    !Perm([a, b, c, d]).is_odd()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm,
}

/// One tetrahedral edge in the cyclic walk around an edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEmbedding {
    pub tet: usize,
    /// Endpoints in the direction of the class orientation.
    pub tail: u8,
    pub head: u8,
    pub entry_face: u8,
    pub exit_face: u8,
}

impl EdgeEmbedding {
    pub fn edge(&self) -> usize {
        edge_index(self.tail, self.head)
    }

    pub fn quad(&self) -> usize {
        quad_of_edge(self.edge())
    }
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    pub embeddings: Vec<EdgeEmbedding>,
    /// Cusps at the tail and head ends.
    pub ends: [usize; 2],
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.embeddings.len()
    }
}

#[derive(Clone, Debug)]
pub struct IdealTriangulation {
    pub name: String,
    n: usize,
    gluings: Vec<[Gluing; 4]>,
    explicit_peripheral: Option<Vec<Vec<i64>>>,
    edge_classes: Vec<EdgeClass>,
    /// `(class, same_direction)` for every tetrahedral edge; `same_direction` means the
    /// class orientation runs from the lower to the higher vertex index.
    edge_of: Vec<[(usize, bool); 6]>,
    cusp_of: Vec<[usize; 4]>,
    cusps: Vec<Vec<(usize, u8)>>,
    /// Canonical face gluings `(t, f)` with `(t, f) < (t', f')`.
    faces: Vec<(usize, u8)>,
    face_id: Vec<[usize; 4]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangulationFile {
    name: String,
    tetrahedra: usize,
    gluings: Vec<Vec<Option<(usize, usize, [i64; 4])>>>,
    #[serde(default)]
    peripheral: Option<Vec<Vec<i64>>>,
}

pub fn parse_triangulation(text: &str) -> Result<IdealTriangulation> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty triangulation file".into()));
    }
    let file: TriangulationFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = file.tetrahedra;
    if n < 2 {
        return Err(Error::Parse(format!("need at least 2 tetrahedra, got {n}")));
    }
    if file.gluings.len() != n {
        return Err(Error::Parse(format!("expected {n} gluing rows, got {}", file.gluings.len())));
    }
    let mut gluings = Vec::with_capacity(n);
    for (t, row) in file.gluings.iter().enumerate() {
        if row.len() != 4 {
            let face = row.len().min(3);
            return Err(Error::UngluedFace { tet: t, face });
        }
        let mut g = [Gluing { tet: 0, face: 0, perm: Perm([0, 1, 2, 3]) }; 4];
        for (f, entry) in row.iter().enumerate() {
            let Some((t2, f2, p)) = *entry else {
                return Err(Error::UngluedFace { tet: t, face: f });
            };
            if t2 >= n || f2 > 3 {
                return Err(Error::Parse(format!("gluing ({t},{f}) targets ({t2},{f2}) out of range")));
            }
            if p.iter().any(|&x| !(0..4).contains(&x)) {
                return Err(Error::Parse(format!("gluing ({t},{f}) has an invalid permutation")));
            }
            let perm = Perm([p[0] as u8, p[1] as u8, p[2] as u8, p[3] as u8]);
            if !perm.is_valid() {
                return Err(Error::Parse(format!("gluing ({t},{f}) has an invalid permutation")));
            }
            if perm.apply(f as u8) as usize != f2 {
                return Err(Error::InconsistentGluing(format!(
                    "gluing ({t},{f}): permutation sends face {f} to {}, not {f2}",
                    perm.apply(f as u8)
                )));
            }
            g[f] = Gluing { tet: t2, face: f2 as u8, perm };
        }
        gluings.push(g);
    }
    IdealTriangulation::new(file.name, gluings, file.peripheral)
}

impl IdealTriangulation {
    pub fn new(name: String, gluings: Vec<[Gluing; 4]>, peripheral: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let n = gluings.len();
        // involution and orientation
        for t in 0..n {
            for f in 0..4u8 {
                let g = gluings[t][f as usize];
                if g.tet == t && g.face == f {
                    return Err(Error::InconsistentGluing(format!("face ({t},{f}) glued to itself")));
                }
                let back = gluings[g.tet][g.face as usize];
                if back.tet != t || back.face != f || back.perm != g.perm.inverse() {
                    return Err(Error::UngluedFace { tet: t, face: f as usize });
                }
                if !g.perm.is_odd() {
                    return Err(Error::Orientation { tet: t, face: f as usize });
                }
            }
        }
        let mut faces = Vec::new();
        let mut face_id = vec![[usize::MAX; 4]; n];
        for t in 0..n {
            for f in 0..4u8 {
                if face_id[t][f as usize] == usize::MAX {
                    let g = gluings[t][f as usize];
                    face_id[t][f as usize] = faces.len();
                    face_id[g.tet][g.face as usize] = faces.len();
                    faces.push((t, f));
                }
            }
        }
        let cusp_of = compute_cusps(&gluings);
        let k = cusp_of.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut cusps = vec![Vec::new(); k];
        for (t, row) in cusp_of.iter().enumerate() {
            for v in 0..4u8 {
                cusps[row[v as usize]].push((t, v));
            }
        }
        let (edge_classes, edge_of) = compute_edges(&gluings, &cusp_of)?;
        let tri = IdealTriangulation {
            name,
            n,
            gluings,
            explicit_peripheral: None,
            edge_classes,
            edge_of,
            cusp_of,
            cusps,
            faces,
            face_id,
        };
        tri.check_torus_cusps()?;
        if tri.edge_classes.len() != n {
            return Err(Error::Inconsistency(format!(
                "{} edge classes for {n} tetrahedra with torus cusps",
                tri.edge_classes.len()
            )));
        }
        let mut tri = tri;
        if let Some(rows) = peripheral {
            if rows.len() != 2 * k || rows.iter().any(|r| r.len() != 3 * n) {
                return Err(Error::Parse(format!(
                    "peripheral matrix must be {}x{}, got {}x{}",
                    2 * k,
                    3 * n,
                    rows.len(),
                    rows.first().map_or(0, |r| r.len())
                )));
            }
            tri.explicit_peripheral = Some(rows);
        }
        Ok(tri)
    }

    fn check_torus_cusps(&self) -> Result<()> {
        for (c, corners) in self.cusps.iter().enumerate() {
            let triangles = corners.len() as i64;
            let mut ends = 0i64;
            for e in &self.edge_classes {
                ends += e.ends.iter().filter(|&&x| x == c).count() as i64;
            }
            if triangles % 2 != 0 {
                return Err(Error::NonTorusCusp { cusp: c, euler: i64::MIN });
            }
            let euler = ends - 3 * triangles / 2 + triangles;
            if euler != 0 {
                return Err(Error::NonTorusCusp { cusp: c, euler });
            }
        }
        Ok(())
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.n
    }

    pub fn num_cusps(&self) -> usize {
        self.cusps.len()
    }

    pub fn num_quads(&self) -> usize {
        3 * self.n
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize]
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    /// Edge class of tetrahedral edge `e` of `tet`, with a flag telling whether the class
    /// orientation runs from the lower to the higher vertex.
    pub fn edge_class_of(&self, tet: usize, e: usize) -> (usize, bool) {
        self.edge_of[tet][e]
    }

    /// Edge class end `(class, 0 = tail | 1 = head)` at vertex `v` of the tetrahedral edge `{v, w}`.
    pub fn edge_end(&self, tet: usize, v: u8, w: u8) -> (usize, usize) {
        let (class, up) = self.edge_of[tet][edge_index(v, w)];
        let tail_is_v = (v < w) == up;
        (class, if tail_is_v { 0 } else { 1 })
    }

    pub fn cusp_of(&self, tet: usize, v: u8) -> usize {
        self.cusp_of[tet][v as usize]
    }

    /// Ideal vertices `(tet, v)` of each cusp, sorted.
    pub fn cusp_vertices(&self, cusp: usize) -> &[(usize, u8)] {
        &self.cusps[cusp]
    }

    pub fn explicit_peripheral(&self) -> Option<&[Vec<i64>]> {
        self.explicit_peripheral.as_deref()
    }

    /// Number of face gluings (`2N`).
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_id(&self, tet: usize, face: u8) -> usize {
        self.face_id[tet][face as usize]
    }

    /// Canonical representative `(t, f)` of each glued face pair.
    pub fn faces(&self) -> &[(usize, u8)] {
        &self.faces
    }

    pub fn quad_column(&self, tet: usize, q: usize) -> usize {
        q * self.n + tet
    }

    /// `inc(E, V)`: the number of ends of edge class `E` at cusp `V`.
    pub fn incidence(&self, class: usize, cusp: usize) -> i64 {
        self.edge_classes[class].ends.iter().filter(|&&c| c == cusp).count() as i64
    }

    /// Drops explicit peripheral rows so that they are derived from the cusp triangulation.
    pub fn without_explicit_peripheral(&self) -> Self {
        let mut t = self.clone();
        t.explicit_peripheral = None;
        t
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn compute_cusps(gluings: &[[Gluing; 4]]) -> Vec<[usize; 4]> {
    let n = gluings.len();
    let mut parent: Vec<usize> = (0..4 * n).collect();
    for t in 0..n {
        for f in 0..4u8 {
            let g = gluings[t][f as usize];
            for v in (0..4u8).filter(|&v| v != f) {
                let a = find(&mut parent, 4 * t + v as usize);
                let b = find(&mut parent, 4 * g.tet + g.perm.apply(v) as usize);
                if a != b {
                    // keep the smaller index as root so labels follow the lowest representative
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut label = vec![usize::MAX; 4 * n];
    let mut next = 0;
    let mut out = vec![[0usize; 4]; n];
    for x in 0..4 * n {
        let r = find(&mut parent, x);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[x / 4][x % 4] = label[r];
    }
    out
}

type EdgeData = (Vec<EdgeClass>, Vec<[(usize, bool); 6]>);

fn compute_edges(gluings: &[[Gluing; 4]], cusp_of: &[[usize; 4]]) -> Result<EdgeData> {
    let n = gluings.len();
    let mut edge_of = vec![[(usize::MAX, false); 6]; n];
    let mut classes = Vec::new();
    for t0 in 0..n {
        for e0 in 0..6 {
            if edge_of[t0][e0].0 != usize::MAX {
                continue;
            }
            let id = classes.len();
            let (a0, b0) = EDGES[e0];
            let (c0, d0) = complement_pair(a0, b0);
            let mut cur = EdgeEmbedding { tet: t0, tail: a0, head: b0, entry_face: c0, exit_face: d0 };
            let mut embeddings = Vec::new();
            loop {
                let e = cur.edge();
                let slot = edge_of[cur.tet][e];
                if slot.0 != usize::MAX {
                    let back_at_start = cur.tet == t0 && e == e0;
                    if !back_at_start || slot.0 != id {
                        return Err(Error::InconsistentGluing(format!(
                            "edge walk from tetrahedron {t0} edge {e0} revisits tetrahedron {} edge {e}",
                            cur.tet
                        )));
                    }
                    if cur.tail != a0 || cur.exit_face != d0 {
                        return Err(Error::InconsistentGluing(format!(
                            "edge of tetrahedron {t0} with vertices {a0}{b0} is identified with itself in reverse"
                        )));
                    }
                    break;
                }
                edge_of[cur.tet][e] = (id, cur.tail < cur.head);
                embeddings.push(cur);
                let g = gluings[cur.tet][cur.exit_face as usize];
                let tail = g.perm.apply(cur.tail);
                let head = g.perm.apply(cur.head);
                let entry = g.face;
                let exit = fourth_vertex(tail, head, entry);
                cur = EdgeEmbedding { tet: g.tet, tail, head, entry_face: entry, exit_face: exit };
            }
            let ends = [cusp_of[t0][a0 as usize], cusp_of[t0][b0 as usize]];
            classes.push(EdgeClass { embeddings, ends });
        }
    }
    Ok((classes, edge_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn quad_types_pair_opposite_edges() {
        assert_eq!(quad_of_edge(edge_index(0, 1)), 0);
        assert_eq!(quad_of_edge(edge_index(2, 3)), 0);
        assert_eq!(quad_of_edge(edge_index(0, 2)), 1);
        assert_eq!(quad_of_edge(edge_index(1, 3)), 1);
        assert_eq!(quad_of_edge(edge_index(0, 3)), 2);
        assert_eq!(quad_of_edge(edge_index(1, 2)), 2);
        // faces 2 and 3 share edge 01
        assert_eq!(quad_between_faces(2, 3), 0);
    }

    #[test]
    fn m003_structure() {
        let t = fixtures::m003();
        assert_eq!(t.num_tetrahedra(), 2);
        assert_eq!(t.edge_classes().len(), 2);
        assert_eq!(t.num_cusps(), 1);
        let valence: usize = t.edge_classes().iter().map(EdgeClass::valence).sum();
        assert_eq!(valence, 12);
    }

    #[test]
    fn rejects_unglued_face() {
        let text = r#"{"name":"x","tetrahedra":2,"gluings":[
            [[1,0,[0,1,3,2]],[1,1,[2,1,0,3]],[1,2,[0,3,2,1]],null],
            [[0,0,[0,1,3,2]],[0,1,[2,1,0,3]],[0,2,[0,3,2,1]],[0,3,[1,0,2,3]]]]}"#;
        assert_eq!(parse_triangulation(text).unwrap_err(), Error::UngluedFace { tet: 0, face: 3 });
    }

    #[test]
    fn rejects_unknown_fields_and_even_perms() {
        let base = fixtures::M003_JSON;
        let extra = base.replacen("{", "{\"bogus\": 1, ", 1);
        assert!(matches!(parse_triangulation(&extra), Err(Error::Parse(_))));
        let even = r#"{"name":"x","tetrahedra":2,"gluings":[
            [[1,0,[0,1,2,3]],[1,1,[0,1,2,3]],[1,2,[0,1,2,3]],[1,3,[0,1,2,3]]],
            [[0,0,[0,1,2,3]],[0,1,[0,1,2,3]],[0,2,[0,1,2,3]],[0,3,[0,1,2,3]]]]}"#;
        assert!(matches!(parse_triangulation(even), Err(Error::Orientation { .. })));
    }

    #[test]
    fn rejects_empty_input() {
        assert!(matches!(parse_triangulation("  "), Err(Error::Parse(_))));
    }
}
