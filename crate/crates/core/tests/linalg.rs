use circle_angles::linalg::{integer_solve, smith_normal_form, z2_rank, z2_solve, BitVec, IntMatrix, TorusSystem, Z2Matrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

// Fraction-free Gaussian elimination.
fn bareiss_det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn det_of(m: &IntMatrix) -> i128 {
    bareiss_det(&m.to_i64_rows())
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn square() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_round_trip_and_unimodularity(rows in matrix()) {
        let a = IntMatrix::from_i64(&rows);
        let d = smith_normal_form(&a);
        prop_assert_eq!(d.u.mul(&d.s).mul(&d.v), a.clone());
        prop_assert_eq!(d.u_inv.mul(&a).mul(&d.v_inv), d.s.clone());
        prop_assert_eq!(d.u.mul(&d.u_inv), IntMatrix::identity(a.rows()));
        prop_assert_eq!(d.v.mul(&d.v_inv), IntMatrix::identity(a.cols()));
        prop_assert_eq!(det_of(&d.u).abs(), 1);
        prop_assert_eq!(det_of(&d.v).abs(), 1);
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                let x = &d.s.row(i)[j];
                if i == j && i < d.rank() {
                    prop_assert_eq!(x, &d.invariants[i]);
                    prop_assert!(x.is_positive());
                } else {
                    prop_assert!(x.is_zero());
                }
            }
        }
        for w in d.invariants.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_invariants_multiply_to_the_determinant(rows in square()) {
        let d = smith_normal_form(&IntMatrix::from_i64(&rows));
        let det = bareiss_det(&rows);
        if det == 0 {
            prop_assert!(d.rank() < rows.len());
        } else {
            let prod = d.invariants.iter().fold(BigInt::from(1), |acc, x| acc * x);
            prop_assert_eq!(prod, BigInt::from(det.abs()));
        }
    }

    #[test]
    fn integer_solutions_solve(rows in matrix(), seed in prop::collection::vec(-5i64..=5, 5)) {
        let a = IntMatrix::from_i64(&rows);
        let x: Vec<i64> = seed[..a.cols()].to_vec();
        let b = a.mul_vec_i64(&x);
        let sol = integer_solve(&a, &b).expect("b lies in the image");
        prop_assert_eq!(a.mul_vec(&sol.particular), b);
        for k in &sol.kernel {
            prop_assert!(a.mul_vec(k).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn z2_rank_matches_span_enumeration(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 7), 1..=7)) {
        let m = Z2Matrix::from_rows(7, rows.iter().map(|r| BitVec::from_bools(r)).collect());
        let mut span = std::collections::BTreeSet::new();
        for mask in 0u32..1 << rows.len() {
            let mut v = BitVec::zeros(7);
            for (i, r) in m.row_vecs().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(r);
                }
            }
            span.insert(v.to_u8s());
        }
        prop_assert_eq!(1usize << z2_rank(&m), span.len());
    }

    #[test]
    fn z2_solve_kernel_and_particular(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 1..=6), x in prop::collection::vec(any::<bool>(), 6)) {
        let m = Z2Matrix::from_rows(6, rows.iter().map(|r| BitVec::from_bools(r)).collect());
        let b = m.mul_vec(&BitVec::from_bools(&x));
        let sol = z2_solve(&m, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&sol.particular), b);
        prop_assert_eq!(sol.kernel.len(), 6 - z2_rank(&m));
        for k in &sol.kernel {
            prop_assert!(m.mul_vec(k).is_zero());
        }
    }

    // Points of a finite solution set are roots of unity of order dividing 2|det|.
    #[test]
    fn torus_components_match_brute_force(rows in (1usize..=2).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)),
                                          signs in prop::collection::vec(prop::bool::ANY, 2)) {
        let det = bareiss_det(&rows);
        prop_assume!(det != 0);
        let n = rows.len();
        let eps: Vec<i8> = signs[..n].iter().map(|&s| if s { -1 } else { 1 }).collect();
        let sys = TorusSystem::new(&IntMatrix::from_i64(&rows), &eps);
        let comps = sys.components().unwrap();
        let l = 2 * det.unsigned_abs() as i64;
        let mut count = 0u64;
        let total = (l as u64).pow(n as u32);
        for idx in 0..total {
            let x: Vec<i64> = (0..n).map(|j| (idx / (l as u64).pow(j as u32) % l as u64) as i64).collect();
            // sum_j E_ij x_j / l = b_i / 2 mod 1
            let ok = rows.iter().zip(&eps).all(|(r, &e)| {
                let s: i64 = r.iter().zip(&x).map(|(a, b)| a * b).sum();
                (2 * s - if e < 0 { l } else { 0 }).rem_euclid(2 * l) == 0
            });
            count += ok as u64;
        }
        prop_assert_eq!(comps.dim, 0);
        prop_assert_eq!(comps.count, count);
        // labels are realised by their points
        for label in sys.labels() {
            let p: Vec<BigRational> = sys.point_of_label(&label);
            prop_assert_eq!(sys.label_of(&p), label);
        }
        prop_assert_eq!(sys.labels().len() as u64, count);
    }
}
