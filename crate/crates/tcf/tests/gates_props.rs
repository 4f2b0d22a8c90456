use proptest::prelude::*;
use std::sync::OnceLock;
use tcf::gates::*;
use tcf::gf2::BitVector;
use tcf::instance::{Instance, InstanceConfig};
use tcf::local_codes::reed_muller;
use tcf::suites;

// --- a small dense complex-matrix simulator used as an oracle -------------

type C = (f64, f64);
type M = Vec<Vec<C>>;

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn mat_mul(a: &M, b: &M) -> M {
    let n = a.len();
    let mut out = vec![vec![(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                let p = cmul(a[i][k], b[k][j]);
                out[i][j].0 += p.0;
                out[i][j].1 += p.1;
            }
        }
    }
    out
}

fn dagger(a: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (a[j][i].0, -a[j][i].1)).collect()).collect()
}

fn kron(a: &M, b: &M) -> M {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = cmul(a[i][j], b[k][l]);
                }
            }
        }
    }
    out
}

fn close(a: &M, b: &M) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9)
}

fn m2(a: [C; 4]) -> M {
    vec![vec![a[0], a[1]], vec![a[2], a[3]]]
}

const O: C = (0.0, 0.0);
const I1: C = (1.0, 0.0);

fn pauli_matrix(p: &Pauli) -> M {
    let x = m2([O, I1, I1, O]);
    let z = m2([I1, O, O, (-1.0, 0.0)]);
    let id = m2([I1, O, O, I1]);
    let mut out: M = vec![vec![I1]];
    for q in 0..p.len() {
        let mut f = id.clone();
        if p.x.get(q) {
            f = mat_mul(&f, &x);
        }
        if p.z.get(q) {
            f = mat_mul(&f, &z);
        }
        out = kron(&out, &f);
    }
    let ph = [I1, (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][p.phase as usize];
    out.iter().map(|r| r.iter().map(|&v| cmul(ph, v)).collect()).collect()
}

fn all_paulis(k: usize) -> Vec<Pauli> {
    (0..1u32 << (2 * k))
        .map(|b| Pauli {
            x: BitVector::from_u64(k, (b & ((1 << k) - 1)) as u64),
            z: BitVector::from_u64(k, (b >> k) as u64),
            phase: 0,
        })
        .collect()
}

fn check_against_matrix(g: &Gate, u: &M, k: usize) {
    for p in all_paulis(k) {
        let lhs = mat_mul(&mat_mul(u, &pauli_matrix(&p)), &dagger(u));
        let img = g.conjugate(&p);
        assert!(close(&lhs, &pauli_matrix(&img)), "{} on {}", g.name(), p.to_letters());
    }
}

#[test]
fn single_qubit_gates_match_matrices() {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let x = m2([O, I1, I1, O]);
    let z = m2([I1, O, O, (-1.0, 0.0)]);
    let s = m2([I1, O, O, (0.0, 1.0)]);
    let h = m2([(s2, 0.0), (s2, 0.0), (s2, 0.0), (-s2, 0.0)]);
    check_against_matrix(&Gate::X(0), &x, 1);
    check_against_matrix(&Gate::Z(0), &z, 1);
    check_against_matrix(&Gate::S(0), &s, 1);
    check_against_matrix(&Gate::H(0), &h, 1);
    // Γ = H S X
    let gamma = mat_mul(&mat_mul(&h, &s), &x);
    check_against_matrix(&Gate::Gamma(0), &gamma, 1);
}

#[test]
fn controlled_z_matches_matrix() {
    let mut cz = vec![vec![O; 4]; 4];
    for (i, row) in cz.iter_mut().enumerate() {
        row[i] = if i == 3 { (-1.0, 0.0) } else { I1 };
    }
    check_against_matrix(&Gate::Cz(0, 1), &cz, 2);
    check_against_matrix(&Gate::Cz(1, 0), &cz, 2);
}

#[test]
fn upsilon_is_a_cyclically_symmetric_clifford() {
    let g = Gate::Upsilon(0, 1, 2);
    assert!(is_valid_clifford(&g));
    let rot = Gate::Permute(vec![1, 2, 0]);
    for p in all_paulis(3) {
        let a = g.conjugate(&rot.conjugate(&p));
        let b = rot.conjugate(&g.conjugate(&p));
        assert_eq!(a, b);
    }
    assert_eq!(g.conjugate(&Pauli::parse("XII").unwrap()), Pauli::parse("YXX").unwrap());
    assert_eq!(g.conjugate(&Pauli::parse("ZII").unwrap()), Pauli::parse("XZZ").unwrap());
}

#[test]
fn all_local_gates_are_clifford() {
    for g in [Gate::X(0), Gate::Z(0), Gate::S(0), Gate::H(0), Gate::Gamma(0), Gate::Cz(0, 1), Gate::Upsilon(0, 1, 2)] {
        assert!(is_valid_clifford(&g), "{}", g.name());
    }
}

fn gate(n: u32) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Z),
        q.clone().prop_map(Gate::S),
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::Gamma),
        (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Gate::Cz(a, b)),
        (0..n, 0..n, 0..n).prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c).prop_map(|(a, b, c)| Gate::Upsilon(a, b, c)),
        Just(Gate::Permute((1..n).chain([0]).collect())),
    ]
}

fn pauli(n: usize) -> impl Strategy<Value = Pauli> {
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, phase)| Pauli {
        x: BitVector::from_u64(n, x & ((1 << n) - 1)),
        z: BitVector::from_u64(n, z & ((1 << n) - 1)),
        phase,
    })
}

proptest! {
    #[test]
    fn pauli_product_is_associative(a in pauli(6), b in pauli(6), c in pauli(6)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        prop_assert_eq!(ab.x.clone(), ba.x.clone());
        prop_assert_eq!(ab.phase == ba.phase, a.commutes(&b));
    }

    #[test]
    fn pauli_product_matches_matrices(a in pauli(2), b in pauli(2)) {
        prop_assert!(close(&mat_mul(&pauli_matrix(&a), &pauli_matrix(&b)), &pauli_matrix(&a.mul(&b))));
    }

    #[test]
    fn circuits_are_automorphisms(gates in prop::collection::vec(gate(6), 1..12), a in pauli(6), b in pauli(6)) {
        let circ = Circuit { n: 6, layers: gates.into_iter().map(|g| vec![g]).collect() };
        prop_assert!(circ.is_layered());
        let (ca, cb) = (circ.conjugate(&a), circ.conjugate(&b));
        prop_assert_eq!(circ.conjugate(&a.mul(&b)), ca.mul(&cb));
        prop_assert_eq!(ca.commutes(&cb), a.commutes(&b));
        prop_assert_eq!(ca.is_hermitian(), a.is_hermitian());
        prop_assert_eq!(ca.is_scalar(), a.is_scalar());
    }

    #[test]
    fn nonzero_products_match_brute_force(sets in prop::collection::vec(any::<u32>(), 1..9), t in 1usize..4) {
        let n = 32;
        let items: Vec<TupleItem> = sets.iter().map(|&s| TupleItem::from_vector(&BitVector::from_u64(n, s as u64), false, 1)).collect();
        let mut seen = Vec::new();
        for_each_nonzero_product(&items, n, t, |idx, w| seen.push((idx.to_vec(), w)));
        seen.sort();
        let mut want = Vec::new();
        for mask in 1u32..(1 << items.len()) {
            let idx: Vec<usize> = (0..items.len()).filter(|&i| mask >> i & 1 == 1).collect();
            if idx.len() > t {
                continue;
            }
            let w = idx.iter().fold(u32::MAX, |acc, &i| acc & sets[i]).count_ones() as usize;
            if w > 0 {
                want.push((idx, w));
            }
        }
        want.sort();
        prop_assert_eq!(seen, want);
    }
}

#[test]
fn overlapping_layers_are_rejected() {
    let c = Circuit { n: 3, layers: vec![vec![Gate::Cz(0, 1), Gate::S(1)]] };
    assert!(!c.is_layered());
    let t = transversal(4, Gate::S);
    assert!(t.is_layered() && t.depth() == 1 && t.gate_count() == 4);
    let cz = transversal_cz(3);
    assert_eq!(cz.n, 6);
    assert!(cz.is_layered());
    assert!(cz.netlist().contains("CZ 0 3"));
}

#[test]
fn transversal_s_fails_on_weight_two_stabilizers() {
    // ⟨XX, ZZ⟩: S⊗S maps XX to YY = −XX·ZZ
    let g = StabilizerGroup::new(&[Pauli::parse("XX").unwrap(), Pauli::parse("ZZ").unwrap()]).unwrap();
    let gens = vec![Pauli::parse("XX").unwrap(), Pauli::parse("ZZ").unwrap()];
    let rep = conjugate_and_verify(&g, &gens, &transversal(2, Gate::S));
    assert!(!rep.pass());
    assert_eq!(rep.negated, 1);
    // while the weight-4 check of ⟨XXXX, ZZZZ⟩ is preserved
    let gens = vec![Pauli::parse("XXXX").unwrap(), Pauli::parse("ZZZZ").unwrap()];
    let g = StabilizerGroup::new(&gens).unwrap();
    assert!(conjugate_and_verify(&g, &gens, &transversal(4, Gate::S)).pass());
}

#[test]
fn anticommuting_generators_are_rejected() {
    assert!(StabilizerGroup::new(&[Pauli::parse("XI").unwrap(), Pauli::parse("ZI").unwrap()]).is_err());
}

fn q2() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| Instance::build(&InstanceConfig::default()).unwrap())
}

#[test]
fn gate_suite_passes_on_q2() {
    let r = suites::gates(q2()).unwrap();
    let failed: Vec<_> = r.failures().iter().map(|c| c.name.clone()).collect();
    assert!(r.pass(), "{failed:?}");
}

#[test]
fn gate_suite_refuses_above_tableau_cap() {
    let inst = Instance::build(&InstanceConfig { tableau_cap: 200, ..Default::default() }).unwrap();
    assert!(matches!(suites::gates(&inst), Err(tcf::Error::CapExceeded { .. })));
}

#[test]
fn cz_conditions_fail_for_a_non_orthogonal_defining_code() {
    let inst = q2();
    let code = inst.code().unwrap();
    let items = tuple_items(&code, &[]);
    let ok = check_cz_conditions(&items, code.n, 2, &reed_muller(0, 1).unwrap()).unwrap();
    assert!(ok.pass());
    let bad = check_cz_conditions(&items, code.n, 2, &reed_muller(2, 3).unwrap()).unwrap();
    assert!(!bad.defining_d_orthogonal && !bad.pass());
}

#[test]
fn orbit_pair_parity_on_q4() {
    let inst = Instance::build(&InstanceConfig { eta: 2, ..Default::default() }).unwrap();
    let code = inst.code().unwrap();
    let t = &inst.table;
    let sampled = sample_elements_of_orders(t, &[2, 3, 7], 1).unwrap();
    assert_eq!(sampled.len(), 3);
    for (&o, &g) in &sampled {
        assert_eq!(element_order(t, g).unwrap(), o);
        let perm = left_mul_permutation(t, g).unwrap();
        for r in 0..code.h_x.rows() {
            assert_eq!(orbit_pairs_in_support(&perm, &code.h_x.row_vector(r)) % 2, 0, "order {o} check {r}");
        }
        let circ = g_orbit_circuit(t, g).unwrap();
        assert!(circ.is_layered() && circ.depth() <= 3);
    }
    let cycle = t.type_cycle_permutation().unwrap();
    assert!(t_plus_phase_circuit(&cycle).unwrap().depth() <= 3);
    assert!(t_plus_circuit(&cycle).unwrap().is_layered());
}
