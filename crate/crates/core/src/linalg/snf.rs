use super::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Smith normal form `A = U * S * V` with `U`, `V` unimodular.
///
/// The inverses are kept as well: `u_inv * A * v_inv = S`.
#[derive(Clone, Debug, Serialize)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
    #[serde(serialize_with = "ser_bigints")]
    pub invariants: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// JSON dump of all five matrices and the invariant factors.
    pub fn debug_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snf serializes")
    }
}

struct Work {
    a: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    /// row[dst] -= k * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        let neg = -k;
        self.a.add_row_multiple(dst, src, &neg);
        self.p.add_row_multiple(dst, src, &neg);
        self.p_inv.add_col_multiple(src, dst, k);
    }

    /// col[dst] -= k * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        let neg = -k;
        self.a.add_col_multiple(dst, src, &neg);
        self.q.add_col_multiple(dst, src, &neg);
        self.q_inv.add_row_multiple(src, dst, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.p.negate_row(i);
        self.p_inv.negate_col(i);
    }
}

/// Smallest nonzero |entry| in the trailing block, ties to lowest (row, col).
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        p: IntMatrix::identity(m),
        p_inv: IntMatrix::identity(m),
        q: IntMatrix::identity(n),
        q_inv: IntMatrix::identity(n),
    };
    let mut invariants = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = find_pivot(&w.a, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let k = &w.a[(i, t)] / &w.a[(t, t)];
                w.sub_row(i, t, &k);
                if !w.a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let k = &w.a[(t, j)] / &w.a[(t, t)];
                w.sub_col(j, t, &k);
                if !w.a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder survived; move the smallest entry of row/column t to the corner
                let (pi, pj) = find_cross_pivot(&w.a, t);
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            // divisibility of the trailing block
            let d = w.a[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[(i, j)].is_multiple_of(&d)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.sub_row(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        invariants.push(w.a[(t, t)].clone());
    }
    SnfDecomposition { u: w.p_inv, s: w.a, v: w.q_inv, u_inv: w.p, v_inv: w.q, invariants }
}

fn find_cross_pivot(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs = a[(t, t)].abs();
    for i in t + 1..a.rows() {
        let x = a[(i, t)].abs();
        if !x.is_zero() && x < best_abs {
            best = (i, t);
            best_abs = x;
        }
    }
    for j in t + 1..a.cols() {
        let x = a[(t, j)].abs();
        if !x.is_zero() && x < best_abs {
            best = (t, j);
            best_abs = x;
        }
    }
    best
}
