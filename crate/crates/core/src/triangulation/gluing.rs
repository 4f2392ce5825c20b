use super::{peripheral_basis, IdealTriangulation};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Z2Matrix};

/// Gluing matrices in block layout `[G | G' | G'']`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    pub n: usize,
    pub k: usize,
    /// Edge rows, `N x 3N`.
    pub edges: Vec<Vec<i64>>,
    /// Peripheral rows `mu_1, lambda_1, ..., mu_k, lambda_k`, `2k x 3N`.
    pub peripheral: Vec<Vec<i64>>,
}

impl GluingData {
    /// One of the blocks `G`, `G'`, `G''` of the edge rows.
    pub fn edge_block(&self, q: usize) -> Vec<Vec<i64>> {
        self.edges.iter().map(|r| r[q * self.n..(q + 1) * self.n].to_vec()).collect()
    }

    pub fn peripheral_block(&self, q: usize) -> Vec<Vec<i64>> {
        self.peripheral.iter().map(|r| r[q * self.n..(q + 1) * self.n].to_vec()).collect()
    }

    /// Tetrahedron rows `[I | I | I]`.
    pub fn tetrahedron_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|t| {
                let mut r = vec![0; 3 * self.n];
                for q in 0..3 {
                    r[q * self.n + t] = 1;
                }
                r
            })
            .collect()
    }

    /// The angle-equation matrix `A = [I I I; G G' G'']`.
    pub fn angle_matrix(&self) -> IntMatrix {
        let mut rows = self.tetrahedron_rows();
        rows.extend(self.edges.iter().cloned());
        IntMatrix::from_rows(&rows, 3 * self.n)
    }

    pub fn edge_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.edges, 3 * self.n)
    }

    pub fn peripheral_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.peripheral, 3 * self.n)
    }

    pub fn edges_mod2(&self) -> Z2Matrix {
        Z2Matrix::from_int_rows(&self.edges, 3 * self.n)
    }

    pub fn angle_matrix_mod2(&self) -> Z2Matrix {
        let mut rows = self.tetrahedron_rows();
        rows.extend(self.edges.iter().cloned());
        Z2Matrix::from_int_rows(&rows, 3 * self.n)
    }
}

/// Gluing matrices of `t`. Peripheral rows come from `peripheral` if given, then from the
/// triangulation file, and are otherwise derived from the cusp triangulations.
pub fn gluing_matrices(t: &IdealTriangulation, peripheral: Option<&[Vec<i64>]>) -> Result<GluingData> {
    let n = t.num_tetrahedra();
    let k = t.num_cusps();
    let mut edges = vec![vec![0i64; 3 * n]; t.edge_classes().len()];
    for (i, class) in t.edge_classes().iter().enumerate() {
        for emb in &class.embeddings {
            edges[i][t.quad_column(emb.tet, emb.quad())] += 1;
        }
    }
    let peripheral = match peripheral.or(t.explicit_peripheral()) {
        Some(rows) => {
            if rows.len() != 2 * k || rows.iter().any(|r| r.len() != 3 * n) {
                return Err(Error::Parse(format!("peripheral matrix must be {}x{}", 2 * k, 3 * n)));
            }
            rows.to_vec()
        }
        None => peripheral_basis(t)?.into_iter().map(|c| c.coefficients).collect(),
    };
    Ok(GluingData { n, k, edges, peripheral })
}
