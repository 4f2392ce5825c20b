use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, BitVec, IntMatrix, Z2Matrix};
use crate::triangulation::GluingData;

/// Leading-trailing deformation matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LtMatrices {
    pub n: usize,
    /// `L = [G''-G' | G-G'' | G'-G]`, one row per edge class.
    pub l: Vec<Vec<i64>>,
    /// The first `N-1` rows of `L`; only for a single cusp.
    pub l_star: Option<Vec<Vec<i64>>>,
    /// Peripheral deformations `l_mu_1, l_lambda_1, ...`.
    pub l_boundary: Vec<Vec<i64>>,
}

/// `l(q) = G(q'') - G(q')` for a coefficient row in block layout.
pub fn lt_row(row: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; 3 * n];
    for t in 0..n {
        let g = [row[t], row[n + t], row[2 * n + t]];
        for q in 0..3 {
            out[q * n + t] = g[(q + 2) % 3] - g[(q + 1) % 3];
        }
    }
    out
}

/// `[l_theta]_2` from the mod-2 curve coefficients `G_2(theta, .)`.
pub fn lt_row_mod2(g2: &BitVec, n: usize) -> BitVec {
    let mut out = BitVec::zeros(3 * n);
    for t in 0..n {
        for q in 0..3 {
            let v = g2.get(((q + 2) % 3) * n + t) ^ g2.get(((q + 1) % 3) * n + t);
            out.set(q * n + t, v);
        }
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn lt_matrices(g: &GluingData) -> Result<LtMatrices> {
    let n = g.n;
    let l: Vec<Vec<i64>> = g.edges.iter().map(|r| lt_row(r, n)).collect();
    let l_boundary = g.peripheral.iter().map(|r| lt_row(r, n)).collect();
    let mut a = g.tetrahedron_rows();
    a.extend(g.edges.iter().cloned());
    a.extend(g.peripheral.iter().cloned());
    for (i, ar) in a.iter().enumerate() {
        for (j, lr) in l.iter().enumerate() {
            if dot(ar, lr) != 0 {
                return Err(Error::Inconsistency(format!("row {i} of [A; G_d] is not orthogonal to l_{j}")));
            }
        }
    }
    let sum: Vec<i64> = (0..3 * n).map(|c| l.iter().map(|r| r[c]).sum()).collect();
    if sum.iter().any(|&x| x != 0) {
        return Err(Error::Inconsistency("rows of L do not sum to zero".into()));
    }
    let l_star = (g.k == 1).then(|| l[..l.len() - 1].to_vec());
    Ok(LtMatrices { n, l, l_star, l_boundary })
}

impl LtMatrices {
    pub fn l_mod2(&self) -> Z2Matrix {
        Z2Matrix::from_int_rows(&self.l, 3 * self.n)
    }

    pub fn l_boundary_mod2(&self) -> Z2Matrix {
        Z2Matrix::from_int_rows(&self.l_boundary, 3 * self.n)
    }
}

/// `(dim TAS, dim TAS_0)`, from the ranks of the defining systems; checked against `(N+k, N-k)`.
pub fn space_dimensions(g: &GluingData) -> Result<(usize, usize)> {
    let n = g.n;
    let mut rows = g.tetrahedron_rows();
    rows.extend(g.edges.iter().cloned());
    let rank_a = smith_normal_form(&IntMatrix::from_rows(&rows, 3 * n)).rank();
    rows.extend(g.peripheral.iter().cloned());
    let rank_a0 = smith_normal_form(&IntMatrix::from_rows(&rows, 3 * n)).rank();
    let dims = (3 * n - rank_a, 3 * n - rank_a0);
    if dims != (n + g.k, n - g.k) {
        return Err(Error::Inconsistency(format!(
            "tangent spaces have dimensions {dims:?}, expected ({}, {})",
            n + g.k,
            n - g.k
        )));
    }
    let rank_l = smith_normal_form(&IntMatrix::from_rows(&lt_matrices(g)?.l, 3 * n)).rank();
    if rank_l != n - g.k {
        return Err(Error::Inconsistency(format!("L has rank {rank_l}, expected {}", n - g.k)));
    }
    Ok(dims)
}
