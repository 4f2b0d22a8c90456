use proptest::prelude::*;
use std::sync::{Arc, OnceLock};
use tcf::complex::{fixtures, Complex, Face};
use tcf::gates::left_mul_permutation;
use tcf::group::{enumerate_group, GroupElement};
use tcf::instance::{Instance, InstanceConfig, LocalInstance};
use tcf::sheaf::{sparse_mul, Sheaf};
use tcf::suites::color_cycle;

fn q2() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| Instance::build(&InstanceConfig::default()).unwrap())
}

// |SL_n(F_Q)| = Q^{n(n-1)/2} ∏_{i=2..n} (Q^i − 1), written out by hand.
fn sl3_order(big_q: u128) -> u128 {
    big_q.pow(3) * (big_q.pow(2) - 1) * (big_q.pow(3) - 1)
}

#[test]
fn group_orders_match_closed_form() {
    assert_eq!(q2().table.len() as u128, sl3_order(2));
    assert_eq!(sl3_order(2), 168);
    let cfg = InstanceConfig { eta: 2, ..Default::default() };
    let t = enumerate_group(2, Arc::new(cfg.ring().unwrap()), cfg.enumeration_cap).unwrap();
    assert_eq!(t.len() as u128, sl3_order(4));
    assert_eq!(t.len(), 60480);
    assert!(t.verify_commutator_relation());
}

#[test]
fn group_is_closed_and_has_unit_determinant() {
    let t = &q2().table;
    for a in 0..t.len() as u32 {
        assert_eq!(t.element(a).det(t.ring()), 1);
        let inv = t.element(a).inverse(t.ring());
        assert!(t.element(a).mul(&inv, t.ring()).is_identity());
        for b in (0..t.len() as u32).step_by(7) {
            t.mul_ids(a, b).unwrap();
        }
    }
}

#[test]
fn left_action_is_free_and_transitive_automorphism() {
    let inst = q2();
    let identity: Vec<usize> = (0..=2).collect();
    for g in 0..inst.table.len() as u32 {
        let perm = left_mul_permutation(&inst.table, g).unwrap();
        // regular action: g·e = g, and each g moves every top when g ≠ e
        assert_eq!(perm[0], g);
        if g != 0 {
            assert!(perm.iter().enumerate().all(|(h, &gh)| gh != h as u32));
        }
        assert!(inst.complex.is_automorphism(&perm, &identity));
        assert!(inst.primal.is_invariant_under(&perm, &identity));
    }
    let cycle = inst.table.type_cycle_permutation().unwrap();
    assert!(inst.complex.is_automorphism(&cycle, &color_cycle(2)));
    assert!(inst.primal.is_invariant_under(&cycle, &color_cycle(2)));
    assert!(inst.dual.is_invariant_under(&cycle, &color_cycle(2)));
}

#[test]
fn faces_are_cosets() {
    let inst = q2();
    let c = &inst.complex;
    let n = inst.table.len();
    for mask in 1u32..8 {
        let gens: Vec<usize> = (0..3).filter(|&j| mask >> j & 1 == 0).collect();
        let k = inst.table.orbit_of(0, &gens).len();
        assert_eq!(c.face_count(mask) * k, n, "type {mask:b}");
        for g in (0..n as u32).step_by(5) {
            let mut coset = inst.table.orbit_of(g, &gens);
            coset.sort_unstable();
            let f = c.face_of(mask, g);
            assert_eq!(c.up(mask, f), coset.as_slice());
        }
    }
    let s = c.verify_structure();
    assert!(s.all_pass() && s.uniform_counts, "{s:?}");
}

#[test]
fn q4_structure() {
    let inst = Instance::build(&InstanceConfig { eta: 2, ..Default::default() }).unwrap();
    let s = inst.complex.verify_structure();
    assert!(s.all_pass() && s.uniform_counts, "{s:?}");
    assert_eq!(inst.complex.face_count(1), 945);
    assert_eq!(inst.complex.face_count(3), 15120);
    let cycle = inst.table.type_cycle_permutation().unwrap();
    assert!(inst.complex.is_automorphism(&cycle, &color_cycle(2)));
    // δ¹δ⁰ = 0 on the large instance as well
    let d0 = inst.primal.coboundary(0).unwrap();
    let d1 = inst.primal.coboundary(1).unwrap();
    assert!(sparse_mul(&d1, &d0).unwrap().is_zero());
}

#[test]
fn no_fixed_points_on_vertex_links() {
    for eta in [1, 2, 3] {
        let li = LocalInstance::build(&InstanceConfig { eta, ..Default::default() }).unwrap();
        let k0 = li.table.k0_elements().unwrap();
        for &h in &k0 {
            let e = li.table.element(h);
            if !e.is_identity() {
                assert!(li.table.fixed_point_free_on_link(e).unwrap(), "q={} h={h}", 1 << eta);
            }
        }
    }
}

#[test]
fn sheaf_is_a_cochain_complex() {
    let inst = q2();
    for s in [&inst.primal, &inst.dual] {
        let a = s.coboundary(0).unwrap();
        let b = s.coboundary(1).unwrap();
        assert!(sparse_mul(&b, &a).unwrap().is_zero());
        assert!(s.coboundary(2).is_err());
        let h = s.cohomology().unwrap();
        assert_eq!(h.euler_cochains(), h.euler_cohomology());
        assert!(s.is_flasque());
        assert!(s.is_locally_acyclic().unwrap());
        assert!(s.tensor_bound_slack().unwrap() >= 0);
    }
}

#[test]
fn poincare_duality_of_cohomology() {
    let inst = q2();
    let h = inst.primal.cohomology().unwrap();
    let hd = inst.dual.cohomology().unwrap();
    assert_eq!(h.cohomology_dims[0], hd.cohomology_dims[2]);
    assert_eq!(h.cohomology_dims[2], hd.cohomology_dims[0]);
    assert_eq!(h.cohomology_dims, vec![1, 23, 1]);
}

fn constant_cohomology(c: Complex) -> Vec<usize> {
    let s = Sheaf::constant(Arc::new(c)).unwrap();
    let h = s.cohomology().unwrap();
    assert_eq!(h.euler_cochains(), h.euler_cohomology());
    h.cohomology_dims
}

#[test]
fn fixture_cohomology_is_topological() {
    // constant-coefficient cohomology over F₂ of the underlying spaces
    assert_eq!(constant_cohomology(fixtures::single_triangle()), vec![1, 0, 0]);
    assert_eq!(constant_cohomology(fixtures::octahedron()), vec![1, 0, 1]);
    assert_eq!(constant_cohomology(fixtures::torus()), vec![1, 2, 1]);
    assert_eq!(constant_cohomology(fixtures::cross_polytope(3)), vec![1, 0, 0, 1]);
    assert_eq!(constant_cohomology(fixtures::suspended_torus()), vec![1, 0, 2, 1]);
}

#[test]
fn fixture_structure_and_local_acyclicity() {
    for c in [fixtures::single_triangle(), fixtures::octahedron(), fixtures::torus(), fixtures::cross_polytope(3), fixtures::suspended_torus()] {
        let s = c.verify_structure();
        assert!(s.all_pass(), "{s:?}");
    }
    let sphere = Sheaf::constant(Arc::new(fixtures::cross_polytope(3))).unwrap();
    assert!(sphere.is_locally_acyclic().unwrap());
    let susp = Sheaf::constant(Arc::new(fixtures::suspended_torus())).unwrap();
    assert!(!susp.is_locally_acyclic().unwrap());
}

#[test]
fn corrupted_complex_is_flagged() {
    let text = fixtures::octahedron().to_text();
    // move one top out of a vertex's up-set without fixing the others
    let lines: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 1 { l.replacen(" 0", " 1", 1) } else { l.to_string() })
        .collect();
    let broken = lines.join("\n");
    assert_ne!(broken, text.trim_end());
    match Complex::from_text(&broken) {
        Err(_) => {}
        Ok(c) => assert!(!c.verify_structure().all_pass()),
    }
}

#[test]
fn links_are_complexes_of_lower_dimension() {
    let inst = q2();
    let c = &inst.complex;
    let link = c.link(Face { mask: 1, index: 0 }).unwrap();
    assert_eq!(link.complex.d(), 2);
    assert_eq!(link.complex.colors(), &[1, 2]);
    assert_eq!(link.tops.len(), c.up(1, 0).len());
    assert!(link.complex.verify_structure().all_pass());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn commutator_relation_on_random_roots(i in 0usize..3, j in 0usize..3, k in 0usize..3, a in 0u32..16, b in 0u32..16) {
        prop_assume!(i != j && j != k && i != k);
        let ring = tcf::algebra::RingTable::canonical(2, 2).unwrap();
        let x = GroupElement::elementary(3, i, j, a);
        let y = GroupElement::elementary(3, j, k, b);
        prop_assert_eq!(x.commutator(&y, &ring), GroupElement::elementary(3, i, k, ring.mul(a, b)));
    }

    #[test]
    fn vertex_stabilizers_fix_no_edge_pair(h in 1u32..1000) {
        // combinatorial cross-check of the matrix-level fixed-point test
        let inst = q2();
        let t = &inst.table;
        let c = &inst.complex;
        let k0 = t.enumerate_subgroup(1).unwrap();
        let g = k0[(h as usize) % k0.len()];
        prop_assume!(g != 0);
        let perm = left_mul_permutation(t, g).unwrap();
        prop_assert_eq!(c.face_of(1, perm[0]), c.face_of(1, 0));
        let star = c.up(1, c.face_of(1, 0));
        let fixes = |mask: u32| star.iter().any(|&x| c.face_of(mask, perm[x as usize]) == c.face_of(mask, x));
        let free = !fixes(0b011) || !fixes(0b101);
        prop_assert!(free);
        prop_assert_eq!(free, t.fixed_point_free_on_link(t.element(g)).unwrap());
    }
}
