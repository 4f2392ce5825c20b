use super::{smith_normal_form, IntMatrix, SnfDecomposition};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer solutions of `A x = b`: a particular solution plus a basis of `Ker_Z A`.
#[derive(Clone, Debug)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolution> {
    let snf = smith_normal_form(a);
    integer_solve_with(&snf, b)
}

/// Same as [`integer_solve`] with a precomputed decomposition of `A`.
pub fn integer_solve_with(snf: &SnfDecomposition, b: &[BigInt]) -> Option<IntegerSolution> {
    let (m, n) = (snf.s.rows(), snf.s.cols());
    assert_eq!(b.len(), m, "right-hand side has wrong length");
    let c = snf.u_inv.mul_vec(b);
    let r = snf.rank();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        if i < r {
            let (q, rem) = c[i].div_rem(&snf.invariants[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    let particular = snf.v_inv.mul_vec(&y);
    let kernel = (r..n).map(|j| snf.v_inv.column(j)).collect();
    Some(IntegerSolution { particular, kernel })
}

/// The solution set of a monomial system `prod_j w_j^{E_ij} = eps_i` on the torus `(S^1)^n`,
/// diagonalized by Smith normal form.
///
/// Writing `w_j = exp(2 pi i x_j)` the system reads `E x = b (mod 1)` with `b_i` in `{0, 1/2}`.
/// In the coordinates `y = V x` it becomes `s_i y_i = b'_i (mod 1)` with `b' = U^{-1} b`.
#[derive(Clone, Debug)]
pub struct TorusSystem {
    pub snf: SnfDecomposition,
    /// Parity bit of `b'_i` for every row of the diagonalized system.
    pub rhs_bits: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusComponents {
    pub count: u64,
    pub dim: usize,
}

impl TorusSystem {
    pub fn new(exponents: &IntMatrix, signs: &[i8]) -> Self {
        assert_eq!(exponents.rows(), signs.len(), "one sign per equation");
        let snf = smith_normal_form(exponents);
        let bits: Vec<BigInt> = signs.iter().map(|&s| BigInt::from((s < 0) as u8)).collect();
        let rhs_bits = snf.u_inv.mul_vec(&bits).iter().map(|x| x.is_odd()).collect();
        TorusSystem { snf, rhs_bits }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    pub fn variables(&self) -> usize {
        self.snf.s.cols()
    }

    pub fn is_empty_set(&self) -> bool {
        self.rhs_bits[self.rank()..].iter().any(|&b| b)
    }

    pub fn components(&self) -> Option<TorusComponents> {
        if self.is_empty_set() {
            return None;
        }
        let mut count = BigInt::one();
        for d in &self.snf.invariants {
            count *= d.abs();
        }
        Some(TorusComponents {
            count: count.to_u64().expect("component count overflows u64"),
            dim: self.variables() - self.rank(),
        })
    }

    /// Moduli of the finite component group, one per nonzero invariant factor.
    pub fn label_moduli(&self) -> Vec<u64> {
        self.snf.invariants.iter().map(|d| d.to_u64().expect("invariant factor overflows")).collect()
    }

    /// Component label of a solution given by exact angles `x` (in turns).
    pub fn label_of(&self, x: &[BigRational]) -> Vec<u64> {
        let y = mul_rational(&self.snf.v, x);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.snf
            .invariants
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut t = &y[i] * BigRational::from_integer(d.clone());
                if self.rhs_bits[i] {
                    t -= &half;
                }
                assert!(t.is_integer(), "angles do not solve the system");
                t.to_integer().mod_floor(d).to_u64().unwrap()
            })
            .collect()
    }

    /// The point of the component with the given label whose free coordinates vanish.
    pub fn point_of_label(&self, label: &[u64]) -> Vec<BigRational> {
        let n = self.variables();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut y = vec![BigRational::zero(); n];
        for (i, d) in self.snf.invariants.iter().enumerate() {
            let mut num = BigRational::from_integer(BigInt::from(label[i]));
            if self.rhs_bits[i] {
                num += &half;
            }
            y[i] = num / BigRational::from_integer(d.clone());
        }
        mul_rational(&self.snf.v_inv, &y)
    }

    /// All labels in lexicographic order.
    pub fn labels(&self) -> Vec<Vec<u64>> {
        let moduli = self.label_moduli();
        let mut out = vec![Vec::new()];
        for &m in &moduli {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for prefix in &out {
                for k in 0..m {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

pub fn torus_solution_components(exponents: &IntMatrix, signs: &[i8]) -> Option<TorusComponents> {
    TorusSystem::new(exponents, signs).components()
}

fn mul_rational(m: &IntMatrix, x: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(m.cols(), x.len());
    (0..m.rows())
        .map(|i| {
            let mut acc = BigRational::zero();
            for (a, b) in m.row(i).iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    acc += BigRational::from_integer(a.clone()) * b;
                }
            }
            acc
        })
        .collect()
}
