use super::{quad_between_faces, IdealTriangulation};
use crate::error::{Error, Result};
use crate::linalg::BitVec;
use std::collections::VecDeque;

/// One passage through a tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub tet: usize,
    pub entry_face: u8,
    pub exit_face: u8,
}

/// Closed path in general position, recorded as the cyclic sequence of face crossings.
///
/// Crossing `(t, f)` leaves tetrahedron `t` through its face `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePath {
    crossings: Vec<(usize, u8)>,
    reduced: bool,
}

impl CurvePath {
    pub fn empty() -> Self {
        CurvePath { crossings: Vec::new(), reduced: true }
    }

    /// Builds a closed path from consecutive crossings; each crossing must leave the tetrahedron
    /// entered by the previous one.
    pub fn from_crossings(t: &IdealTriangulation, crossings: Vec<(usize, u8)>) -> Result<Self> {
        let m = crossings.len();
        for i in 0..m {
            let (tet, face) = crossings[i];
            let g = t.gluing(tet, face);
            let next = crossings[(i + 1) % m];
            if next.0 != g.tet {
                return Err(Error::Inconsistency(format!(
                    "crossing {i} arrives in tetrahedron {} but the next one leaves {}",
                    g.tet, next.0
                )));
            }
        }
        let mut p = CurvePath { crossings, reduced: false };
        p.reduced = p.steps_raw(t).iter().all(|s| s.entry_face != s.exit_face);
        Ok(p)
    }

    pub fn crossings(&self) -> &[(usize, u8)] {
        &self.crossings
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    fn steps_raw(&self, t: &IdealTriangulation) -> Vec<Step> {
        let m = self.crossings.len();
        (0..m)
            .map(|i| {
                let g = t.gluing(self.crossings[i].0, self.crossings[i].1);
                let exit = self.crossings[(i + 1) % m].1;
                Step { tet: g.tet, entry_face: g.face, exit_face: exit }
            })
            .collect()
    }

    /// Passages through tetrahedra, in order.
    pub fn steps(&self, t: &IdealTriangulation) -> Vec<Step> {
        self.steps_raw(t)
    }

    /// Cancels immediate backtracking, cyclically, until none is left.
    pub fn reduce(&self, t: &IdealTriangulation) -> CurvePath {
        let inverse = |c: (usize, u8)| {
            let g = t.gluing(c.0, c.1);
            (g.tet, g.face)
        };
        let mut stack: Vec<(usize, u8)> = Vec::with_capacity(self.crossings.len());
        for &c in &self.crossings {
            if stack.last().is_some_and(|&top| inverse(top) == c) {
                stack.pop();
            } else {
                stack.push(c);
            }
        }
        let mut dq: VecDeque<(usize, u8)> = stack.into();
        while dq.len() >= 2 && inverse(*dq.back().unwrap()) == *dq.front().unwrap() {
            dq.pop_back();
            dq.pop_front();
        }
        CurvePath { crossings: dq.into(), reduced: true }
    }

    /// Concatenation of two closed paths based at the same tetrahedron (unreduced).
    pub fn concat(&self, other: &CurvePath) -> CurvePath {
        let mut crossings = self.crossings.clone();
        crossings.extend_from_slice(&other.crossings);
        CurvePath { crossings, reduced: false }
    }

    /// Mod-2 indicator of the glued faces crossed an odd number of times.
    pub fn face_crossings_mod2(&self, t: &IdealTriangulation) -> BitVec {
        let mut v = BitVec::zeros(t.num_faces());
        for &(tet, f) in &self.crossings {
            v.flip(t.face_id(tet, f));
        }
        v
    }
}

/// `G_2(theta, .)`: for each passage, the quad facing the edge shared by the entry and exit faces.
pub fn curve_coefficients_mod2(t: &IdealTriangulation, path: &CurvePath) -> Result<BitVec> {
    let mut v = BitVec::zeros(t.num_quads());
    for s in path.steps(t) {
        if s.entry_face == s.exit_face {
            return Err(Error::Inconsistency(format!(
                "path backtracks through face {} of tetrahedron {}",
                s.entry_face, s.tet
            )));
        }
        v.flip(t.quad_column(s.tet, quad_between_faces(s.entry_face, s.exit_face)));
    }
    Ok(v)
}

/// Small loop encircling edge class `class`.
pub fn edge_loop(t: &IdealTriangulation, class: usize) -> CurvePath {
    let crossings = t.edge_classes()[class].embeddings.iter().map(|e| (e.tet, e.exit_face)).collect();
    CurvePath::from_crossings(t, crossings).expect("edge walk is closed")
}

/// Breadth-first spanning tree of the dual graph rooted at tetrahedron 0: parent crossing per tet.
pub(crate) fn dual_spanning_tree(t: &IdealTriangulation) -> (Vec<Option<(usize, u8)>>, Vec<bool>) {
    let n = t.num_tetrahedra();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_face = vec![false; t.num_faces()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for f in 0..4u8 {
            let g = t.gluing(u, f);
            if !seen[g.tet] {
                seen[g.tet] = true;
                parent[g.tet] = Some((u, f));
                tree_face[t.face_id(u, f)] = true;
                queue.push_back(g.tet);
            }
        }
    }
    (parent, tree_face)
}

fn path_from_root(parent: &[Option<(usize, u8)>], mut tet: usize) -> Vec<(usize, u8)> {
    let mut rev = Vec::new();
    while let Some(c) = parent[tet] {
        rev.push(c);
        tet = c.0;
    }
    rev.reverse();
    rev
}

/// Spanning-tree cycle basis of the dual graph, one reduced loop per non-tree face gluing.
pub fn cycle_basis(t: &IdealTriangulation) -> Vec<CurvePath> {
    let (parent, tree_face) = dual_spanning_tree(t);
    let inverse = |c: (usize, u8)| {
        let g = t.gluing(c.0, c.1);
        (g.tet, g.face)
    };
    t.faces()
        .iter()
        .enumerate()
        .filter(|(id, _)| !tree_face[*id])
        .map(|(_, &(u, f))| {
            let v = t.gluing(u, f).tet;
            let mut crossings = path_from_root(&parent, u);
            crossings.push((u, f));
            let back: Vec<(usize, u8)> = path_from_root(&parent, v).into_iter().rev().map(inverse).collect();
            crossings.extend(back);
            CurvePath { crossings, reduced: false }.reduce(t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::triangulation::gluing_matrices;

    #[test]
    fn m003_has_three_basis_loops() {
        let t = fixtures::m003();
        let basis = cycle_basis(&t);
        assert_eq!(basis.len(), 3);
        assert!(basis.iter().all(|p| p.is_reduced() && !p.is_empty()));
    }

    #[test]
    fn edge_loops_give_edge_rows_mod_two() {
        for t in [fixtures::m003(), fixtures::m004()] {
            let g = gluing_matrices(&t, None).unwrap();
            for e in 0..t.edge_classes().len() {
                let v = curve_coefficients_mod2(&t, &edge_loop(&t, e)).unwrap();
                assert_eq!(v, BitVec::from_parities(g.edges[e].iter().copied()));
            }
        }
    }

    #[test]
    fn backtracking_cancels_to_empty() {
        let t = fixtures::m003();
        let g = t.gluing(0, 2);
        let there_and_back = CurvePath { crossings: vec![(0, 2), (g.tet, g.face)], reduced: false };
        assert!(!CurvePath::from_crossings(&t, there_and_back.crossings.clone()).unwrap().is_reduced());
        let r = there_and_back.reduce(&t);
        assert!(r.is_empty());
        assert!(curve_coefficients_mod2(&t, &r).unwrap().is_zero());
    }

    #[test]
    fn unreduced_path_is_rejected() {
        let t = fixtures::m003();
        let g = t.gluing(0, 1);
        let p = CurvePath::from_crossings(&t, vec![(0, 1), (g.tet, g.face)]).unwrap();
        assert!(curve_coefficients_mod2(&t, &p).is_err());
    }
}
