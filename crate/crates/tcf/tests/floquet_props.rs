use proptest::prelude::*;
use std::sync::Arc;
use tcf::complex::fixtures;
use tcf::floquet::*;
use tcf::gf2::{BitVector, RowSpace};
use tcf::instance::{Instance, InstanceConfig};
use tcf::sheaf::Sheaf;
use tcf::suites;

// Textbook one-at-a-time measurement update on a list of generators
// (x-part, z-part), with signs ignored.
fn naive_measure(gens: &mut Vec<(BitVector, BitVector)>, m: &(BitVector, BitVector)) {
    let anti = |g: &(BitVector, BitVector)| g.0.dot(&m.1) != g.1.dot(&m.0);
    if let Some(p) = gens.iter().position(anti) {
        let pivot = gens[p].clone();
        for (i, g) in gens.iter_mut().enumerate() {
            if i != p && anti(g) {
                g.0.xor_assign(&pivot.0);
                g.1.xor_assign(&pivot.1);
            }
        }
        gens[p] = m.clone();
    } else {
        gens.push(m.clone());
    }
}

fn side(n: usize, gens: &[(BitVector, BitVector)], x: bool) -> RowSpace {
    let vs: Vec<BitVector> = gens.iter().map(|g| if x { g.0.clone() } else { g.1.clone() }).filter(|v| !v.is_zero()).collect();
    RowSpace::from_vectors(n, &vs)
}

fn same_space(a: &RowSpace, b: &RowSpace) -> bool {
    a.is_subspace_of(b) && b.is_subspace_of(a)
}

proptest! {
    #[test]
    fn css_measurement_matches_generic_update(
        start_zero in any::<bool>(),
        rounds in prop::collection::vec((any::<bool>(), prop::collection::vec(1u16..256, 1..4)), 1..8),
    ) {
        let n = 8;
        let mut g = if start_zero { CssGroup::all_zero_state(n) } else { CssGroup::empty(n) };
        let mut naive: Vec<(BitVector, BitVector)> =
            g.z.iter().map(|z| (BitVector::zeros(n), z.clone())).collect();
        for (is_x, checks) in rounds {
            let vs: Vec<BitVector> = checks.iter().map(|&c| BitVector::from_u64(n, c as u64)).collect();
            let kind = if is_x { CheckKind::X } else { CheckKind::Z };
            g.measure(kind, &vs);
            for v in &vs {
                let m = if is_x { (v.clone(), BitVector::zeros(n)) } else { (BitVector::zeros(n), v.clone()) };
                naive_measure(&mut naive, &m);
            }
            prop_assert!(g.is_abelian());
            prop_assert!(same_space(&RowSpace::from_vectors(n, &g.x), &side(n, &naive, true)));
            prop_assert!(same_space(&RowSpace::from_vectors(n, &g.z), &side(n, &naive, false)));
            for v in &vs {
                prop_assert!(g.contains(kind, v));
            }
        }
    }
}

fn schedule_invariants(sch: &FloquetSchedule) {
    assert_eq!(sch.period(), PERIOD);
    for (t, r) in sch.rounds.iter().enumerate() {
        assert_eq!(r.kind, if t % 2 == 0 { CheckKind::X } else { CheckKind::Z });
        assert_eq!(r.color, EdgeColor::CYCLE[t % 3]);
        assert!(!r.checks.is_empty());
    }
    // X and Z checks on edges of the same color commute; consecutive
    // rounds (different colors) do not
    for t in 0..3 {
        let (a, b) = (&sch.rounds[t], &sch.rounds[t + 3]);
        assert_eq!(a.color, b.color);
        assert_ne!(a.kind, b.kind);
        assert!(a.checks.iter().all(|u| b.checks.iter().all(|v| !u.dot(v))));
    }
    for t in 0..PERIOD {
        let (a, b) = (&sch.rounds[t], &sch.rounds[(t + 1) % PERIOD]);
        assert!(a.checks.iter().any(|u| b.checks.iter().any(|v| u.dot(v))), "rounds {t},{}", t + 1);
    }
}

#[test]
fn torus_schedule() {
    let s = Sheaf::constant(Arc::new(fixtures::torus())).unwrap();
    let d = s.dual().unwrap();
    let sch = FloquetSchedule::build(&s, &d).unwrap();
    schedule_invariants(&sch);
    let rep = run_period(&sch, Some(middle_vertex_operators(&s)), 1 << 10).unwrap();
    assert_eq!(rep.anomalies, 0);
    assert!(rep.steady.iter().all(|r| r.abelian && r.contained_in_state && r.state_rank == rep.n));
    assert!(run_period(&sch, None, 4).is_err());
}

#[test]
fn q2_floquet_suite() {
    let inst = Instance::build(&InstanceConfig::default()).unwrap();
    let sch = FloquetSchedule::build(&inst.primal, &inst.dual).unwrap();
    schedule_invariants(&sch);
    let r = suites::floquet(&inst).unwrap();
    let failed: Vec<_> = r.failures().iter().map(|c| c.name.clone()).collect();
    assert!(r.pass(), "{failed:?}");
    let lay = permutation_layout(&inst.complex, &inst.table.type_cycle_permutation().unwrap()).unwrap();
    assert_eq!(lay.group_sizes, vec![2, 2, 2]);
    assert_eq!(lay.fixed_points + 3 * lay.three_orbits, 168);
}

#[test]
fn q4_schedule_and_layout() {
    let inst = Instance::build(&InstanceConfig { eta: 2, ..Default::default() }).unwrap();
    let sch = FloquetSchedule::build(&inst.primal, &inst.dual).unwrap();
    assert_eq!(sch.period(), PERIOD);
    for t in 0..3 {
        let (a, b) = (&sch.rounds[t], &sch.rounds[t + 3]);
        let mut sa = tcf::gf2::SparseBitMatrix::new(sch.n);
        a.checks.iter().for_each(|v| sa.push_vector(v));
        let mut sb = tcf::gf2::SparseBitMatrix::new(sch.n);
        b.checks.iter().for_each(|v| sb.push_vector(v));
        assert!(sa.mul_transpose(&sb).unwrap().is_zero());
    }
    assert_eq!(sch.max_check_weight(), max_basis_weight(&inst.primal, 1).max(max_basis_weight(&inst.dual, 1)));
    let lay = permutation_layout(&inst.complex, &inst.table.type_cycle_permutation().unwrap()).unwrap();
    assert!(lay.maps_partitions && lay.cube_is_identity);
    assert_eq!(lay.group_sizes, vec![4, 4, 4]);
    // tracking the instantaneous group needs a tableau on all qubits
    assert!(run_period(&sch, None, 1 << 14).is_err());
}

#[test]
fn non_planar_complexes_are_rejected() {
    let s = Sheaf::constant(Arc::new(fixtures::cross_polytope(3))).unwrap();
    let d = s.dual().unwrap();
    assert!(FloquetSchedule::build(&s, &d).is_err());
}
