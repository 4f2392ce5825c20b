mod common;

use circle_angles::angles::{lt_row_mod2, AngleContext, LoopKind};
use circle_angles::complex::{build_t00, CellKind, curve_dual_cocycle, defanning, fanning, include_relative, rect, Support};
use circle_angles::linalg::{z2_in_image, BitVec, Z2Span};
use circle_angles::triangulation::{curve_coefficients_mod2, cusp_cycles, edge_loop, IdealTriangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// H_1(M; Z2) of the dual 2-complex: cycles of the dual graph modulo edge loops,
// optionally also modulo the peripheral curves.
fn dual_graph_h1(t: &IdealTriangulation, kill_peripheral: bool) -> usize {
    let n = t.num_tetrahedra();
    let incidence: Vec<BitVec> = t
        .faces()
        .iter()
        .map(|&(u, f)| {
            let mut v = BitVec::zeros(n);
            v.flip(u);
            v.flip(t.gluing(u, f).tet);
            v
        })
        .collect();
    let cycles = t.num_faces() - Z2Span::from_vectors(n, incidence.iter()).dim();
    let mut rel: Vec<BitVec> = (0..t.edge_classes().len()).map(|e| edge_loop(t, e).face_crossings_mod2(t)).collect();
    if kill_peripheral {
        rel.extend(cusp_cycles(t).iter().map(|c| c.path(t).face_crossings_mod2(t)));
    }
    cycles - Z2Span::from_vectors(t.num_faces(), rel.iter()).dim()
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitVec {
    BitVec::from_bools(&(0..len).map(|_| rng.gen::<bool>()).collect::<Vec<_>>())
}

#[test]
fn coboundary_squares_to_zero_on_every_fixture() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in common::CENSUS {
        let cx = build_t00(&common::triangulation(name)).unwrap();
        for k in 0..2 {
            let prod = cx.boundary_matrix(k + 2).mul(cx.boundary_matrix(k + 1));
            assert!(prod.is_zero(), "{name}: degree {k}");
            let c = random_bits(&mut rng, cx.num_cells(k));
            assert!(cx.coboundary(k + 2, &cx.coboundary(k + 1, &c)).is_zero());
        }
        assert_eq!(cx.euler_characteristic(), 0, "{name}");
        assert_eq!(cx.h0_dimension(), 1, "{name}");
    }
}

#[test]
fn second_cohomology_matches_dual_graph_homology() {
    for name in common::CENSUS {
        let t = common::triangulation(name);
        let meta = common::meta(name);
        let cx = build_t00(&t).unwrap();
        let rel = cx.cohomology(2, Support::Relative).unwrap();
        let abs = cx.cohomology(2, Support::Absolute).unwrap();
        let bdry = cx.cohomology(2, Support::Boundary).unwrap();
        assert_eq!(rel.dim(), meta.h1_z2, "{name}: relative");
        assert_eq!(rel.dim(), dual_graph_h1(&t, false), "{name}: dual graph");
        let kernel = cx.restriction_kernel_dim(&abs, &bdry).unwrap();
        assert_eq!(kernel, meta.h1_hat_z2, "{name}: kernel of restriction");
        assert_eq!(kernel, dual_graph_h1(&t, true), "{name}: dual graph mod peripheral");
        assert_eq!(bdry.dim(), t.num_cusps(), "{name}: one class per torus");
    }
}

#[test]
fn fanning_preserves_class_of_random_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let names = ["m003", "m004", "m009", "m125", "L6a4", "s776"];
    let mut tested = 0;
    for name in names {
        let cx = build_t00(&common::triangulation(name)).unwrap();
        let rel = cx.cohomology(2, Support::Relative).unwrap();
        let on_boundary = cx.boundary_mask(1);
        for _ in 0..34 {
            let mut sigma = BitVec::zeros(cx.num_cells(2));
            for g in &rel.generators {
                if rng.gen::<bool>() {
                    sigma.xor_assign(g);
                }
            }
            let mut b = random_bits(&mut rng, cx.num_cells(1));
            for i in on_boundary.ones() {
                b.set(i, false);
            }
            sigma.xor_assign(&cx.coboundary(2, &b));
            let y = fanning(&cx, &sigma);
            assert!(y.ones().all(|i| cx.cells(2)[i].kind != CellKind::LargeHexagon));
            assert_eq!(rel.reduce(&y).unwrap(), rel.reduce(&sigma).unwrap(), "{name}");
            tested += 1;
        }
    }
    assert!(tested >= 200);
}

fn all_vectors(len: usize) -> impl Iterator<Item = BitVec> {
    (0u64..1 << len).map(move |m| BitVec::from_bools(&(0..len).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
}

#[test]
fn rect_class_vanishes_exactly_on_image_of_l() {
    for name in ["m003", "m004"] {
        let t = common::triangulation(name);
        let ctx = AngleContext::new(&t).unwrap();
        let cx = build_t00(&t).unwrap();
        let rel = cx.cohomology(2, Support::Relative).unwrap();
        let lt = ctx.lt().l_mod2().transpose();
        let mut in_s = 0;
        let mut classes = std::collections::BTreeSet::new();
        for s in all_vectors(ctx.num_quads()) {
            if !ctx.in_s(&s) {
                continue;
            }
            in_s += 1;
            let r = rect(&cx, ctx.gluing(), &s).unwrap();
            let class = rel.reduce(&r).unwrap();
            assert_eq!(class.is_zero(), z2_in_image(&lt, &s), "{name}: {:?}", s.to_u8s());
            classes.insert(class.to_u8s());
        }
        assert!(in_s > 1);
        // every relative class is hit
        assert_eq!(classes.len(), 1 << rel.dim(), "{name}");
    }
}

#[test]
fn defanning_reproduces_rect_on_s() {
    for name in ["m003", "m004", "m009"] {
        let t = common::triangulation(name);
        let ctx = AngleContext::new(&t).unwrap();
        let cx = build_t00(&t).unwrap();
        for row in ctx.lt().l_mod2().row_vecs() {
            let sigma = defanning(&cx, &ctx, row).unwrap();
            assert_eq!(fanning(&cx, &sigma), rect(&cx, ctx.gluing(), row).unwrap());
            // flipping the seed complements sigma on the hexagons and leaves Y unchanged
            let mut flipped = sigma.clone();
            for h in 0..cx.num_large_hexagons() {
                flipped.flip(h);
            }
            assert_eq!(fanning(&cx, &flipped), fanning(&cx, &sigma));
        }
    }
}

#[test]
fn curve_duals_fan_to_rect_of_leading_trailing_vector() {
    for name in common::CENSUS {
        let t = common::triangulation(name);
        let ctx = AngleContext::new(&t).unwrap();
        let cx = build_t00(&t).unwrap();
        let rel = cx.cohomology(2, Support::Relative).unwrap();
        let abs = cx.cohomology(2, Support::Absolute).unwrap();
        for l in ctx.loops() {
            let (c, y) = curve_dual_cocycle(&cx, &t, &l.path).unwrap();
            let lv = lt_row_mod2(&curve_coefficients_mod2(&t, &l.path).unwrap(), t.num_tetrahedra());
            let r = rect(&cx, ctx.gluing(), &lv).unwrap();
            assert_eq!(y, r, "{name}: {:?}", l.kind);
            assert_eq!(rel.reduce(&c).unwrap(), rel.reduce(&y).unwrap());
            match l.kind {
                LoopKind::Edge { .. } => assert!(rel.is_trivial(&r).unwrap(), "{name}: edge loop"),
                LoopKind::Peripheral { .. } => {
                    assert!(abs.is_trivial(&include_relative(&cx, &r).unwrap()).unwrap(), "{name}: peripheral")
                }
                LoopKind::Basis => {}
            }
        }
    }
}
