mod common;

use circle_angles::linalg::{integer_solve, IntMatrix};
use circle_angles::triangulation::{gluing_matrices, peripheral_basis};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// Coordinates of the derived curves in the file's peripheral basis, modulo the angle equations.
fn change_of_basis(name: &str) -> Vec<[[i64; 2]; 2]> {
    let t = common::triangulation(name);
    let given = gluing_matrices(&t, None).unwrap();
    let derived = gluing_matrices(&t.without_explicit_peripheral(), None).unwrap();
    let mut rows = given.tetrahedron_rows();
    rows.extend(given.edges.iter().cloned());
    let a = rows.len();
    rows.extend(given.peripheral.iter().cloned());
    let m = IntMatrix::from_rows(&rows, 3 * t.num_tetrahedra()).transpose();
    let coords: Vec<Vec<i64>> = derived
        .peripheral
        .iter()
        .map(|d| {
            let b: Vec<BigInt> = d.iter().map(|&x| x.into()).collect();
            let sol = integer_solve(&m, &b).unwrap_or_else(|| panic!("{name}: derived curve not in the lattice"));
            sol.particular[a..].iter().map(|x| x.to_i64().unwrap()).collect()
        })
        .collect();
    (0..t.num_cusps())
        .map(|c| {
            for (i, row) in coords[2 * c..2 * c + 2].iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    assert!(j / 2 == c || x == 0, "{name}: curve {i} of cusp {c} leaks into cusp {}", j / 2);
                }
            }
            let r = |i: usize, j: usize| coords[2 * c + i][2 * c + j];
            [[r(0, 0), r(0, 1)], [r(1, 0), r(1, 1)]]
        })
        .collect()
}

#[test]
fn derived_basis_is_oriented_like_the_census() {
    for name in common::CENSUS {
        for m in change_of_basis(name) {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert_eq!(det, 1, "{name}: change of basis {m:?}");
        }
    }
}

#[test]
fn derived_curves_have_trivial_holonomy_at_complete_structure() {
    for name in common::CENSUS {
        let t = common::triangulation(name).without_explicit_peripheral();
        let z = common::shapes(name);
        let n = z.len();
        let logs: Vec<Complex64> = z
            .iter()
            .map(|z| z.ln())
            .chain(z.iter().map(|z| (1.0 / (1.0 - z)).ln()))
            .chain(z.iter().map(|z| ((z - 1.0) / z).ln()))
            .collect();
        for c in peripheral_basis(&t).unwrap() {
            let h: Complex64 = c.coefficients.iter().zip(&logs).map(|(&g, l)| l * g as f64).sum();
            assert!(h.norm() < 1e-8, "{name}: cusp {} {:?} has log holonomy {h}", c.cusp, c.role);
            assert_eq!(c.coefficients.len(), 3 * n);
        }
    }
}
