mod common;

use circle_angles::angles::{CircleAngleStructure, Space};
use circle_angles::linalg::{z2_solve, BitVec, Z2Matrix};
use circle_angles::obstruction::Obstruction;
use circle_angles::{Exec, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

// Basis of the vectors with tetrahedron sums 0 and even parity along every audit loop.
fn s_basis(ob: &Obstruction) -> Vec<BitVec> {
    let ctx = ob.angles();
    let n = ctx.gluing().n;
    let mut rows: Vec<BitVec> = (0..n)
        .map(|t| {
            let mut r = BitVec::zeros(3 * n);
            for q in 0..3 {
                r.set(q * n + t, true);
            }
            r
        })
        .collect();
    rows.extend(ctx.loops().iter().map(|l| l.coefficients.clone()));
    let m = Z2Matrix::from_rows(3 * n, rows);
    z2_solve(&m, &BitVec::zeros(m.nrows())).unwrap().kernel
}

#[test]
fn component_counts_follow_the_cohomology() {
    for name in common::CENSUS {
        let ob = Obstruction::new(&common::triangulation(name)).unwrap();
        let meta = common::meta(name);
        let rel = ob.enumerate_components(Space::Sa0, Exec::default()).unwrap();
        assert_eq!(rel.components.len(), 1 << meta.h1_z2, "{name}: SA0");
        let abs = ob.enumerate_components(Space::Sa, Exec::default()).unwrap();
        assert_eq!(abs.components.len(), 1 << meta.h1_hat_z2, "{name}: SA");
        // every relative class is hit exactly once
        let classes: BTreeSet<Vec<u8>> = rel.components.iter().map(|c| c.class.clone()).collect();
        assert_eq!(classes.len(), 1 << ob.relative().dim());
        let (sa, sa0) = ob.angles().space_dimensions().unwrap();
        assert!(rel.components.iter().all(|c| c.dim == sa0), "{name}");
        assert!(abs.components.iter().all(|c| c.dim == sa), "{name}");
    }
}

#[test]
fn equal_classes_mean_equal_components() {
    let tol = Tolerances::default();
    for name in ["m003", "m004", "m009", "m125"] {
        let ob = Obstruction::new(&common::triangulation(name)).unwrap();
        for (space, relative) in [(Space::Sa0, true), (Space::Sa, false)] {
            let rep = ob.enumerate_components(space, Exec::Sequential).unwrap();
            for a in &rep.components {
                for b in &rep.components {
                    let wa = CircleAngleStructure::from_signs(&BitVec::from_parities(a.representative.iter().map(|&x| x as i64)));
                    let wb = CircleAngleStructure::from_signs(&BitVec::from_parities(b.representative.iter().map(|&x| x as i64)));
                    let same = ob.angles().same_component(&wa, &wb, relative, &tol).unwrap();
                    assert_eq!(same, a.class == b.class, "{name} {space:?}");
                }
            }
        }
    }
}

#[test]
fn class_does_not_depend_on_the_representative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pairs = 0;
    for name in ["m003", "m004", "m009", "m125", "L6a4"] {
        let ob = Obstruction::new(&common::triangulation(name)).unwrap();
        let s = s_basis(&ob);
        let l = ob.angles().lt().l_mod2();
        let comps = ob.enumerate_components(Space::Sa0, Exec::Sequential).unwrap();
        for _ in 0..20 {
            let c = &comps.components[rng.gen_range(0..comps.components.len())];
            let mut a1 = BitVec::from_parities(c.representative.iter().map(|&x| x as i64));
            for v in &s {
                if rng.gen::<bool>() {
                    a1.xor_assign(v);
                }
            }
            let mut a2 = a1.clone();
            for r in l.row_vecs() {
                if rng.gen::<bool>() {
                    a2.xor_assign(r);
                }
            }
            assert!(ob.angles().is_even_structure(&a1) && ob.angles().is_even_structure(&a2));
            let c1 = ob.class_of_signs(&a1, Space::Sa0).unwrap();
            let c2 = ob.class_of_signs(&a2, Space::Sa0).unwrap();
            assert_eq!(c1.coordinates, c2.coordinates, "{name}");
            pairs += 1;
        }
    }
    assert!(pairs >= 100);
}

#[test]
fn figure_eight_has_two_relative_components() {
    let ob = Obstruction::new(&common::triangulation("m004")).unwrap();
    let rep = ob.enumerate_components(Space::Sa0, Exec::Sequential).unwrap();
    assert_eq!(rep.components.len(), 2);
    assert_ne!(rep.components[0].class, rep.components[1].class);
}

#[test]
fn parallel_and_sequential_reports_agree() {
    for name in ["m009", "L6a4", "s776"] {
        let ob = Obstruction::new(&common::triangulation(name)).unwrap();
        for space in [Space::Sa0, Space::Sa] {
            assert_eq!(
                ob.enumerate_components(space, Exec::Sequential).unwrap(),
                ob.enumerate_components(space, Exec::Parallel).unwrap()
            );
        }
    }
}

#[test]
fn phi_of_any_structure_restricts_trivially() {
    let tol = Tolerances::default();
    for name in ["m003", "m004", "m009", "L6a4"] {
        let t = common::triangulation(name);
        let ob = Obstruction::new(&t).unwrap();
        let z = common::shapes(name);
        let n = t.num_tetrahedra();
        let mut omega = vec![num_complex::Complex64::new(0.0, 0.0); 3 * n];
        for (i, &zi) in z.iter().enumerate() {
            let one = num_complex::Complex64::new(1.0, 0.0);
            let zs = [zi, one / (one - zi), (zi - one) / zi];
            for q in 0..3 {
                omega[q * n + i] = zs[q] / zs[q].norm();
            }
        }
        let w = CircleAngleStructure::new(ob.angles().gluing(), omega, &tol).unwrap();
        // class_of_signs checks the boundary restriction
        ob.phi(&w, &tol).unwrap();
        ob.phi0(&w, &tol).unwrap();
    }
}
