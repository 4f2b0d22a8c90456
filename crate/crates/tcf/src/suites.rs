//! Verification suites: each runs a family of checks on a built instance
//! and returns named pass/fail verdicts with JSON details.

use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::colors_of;
use crate::css::{
    darboux, logical_basis, shrunk_logicals, span_report, unfolding_check, CssCode, DarbouxBasis, RateReport, TaggedVector,
};
use crate::error::{Error, Result};
use crate::floquet::{max_basis_weight, middle_vertex_operators, permutation_layout, run_period, FloquetSchedule};
use crate::gates::{
    check_cz_conditions, check_r_conditions, check_x_images, conjugate_and_verify, css_generators, element_order, g_orbit_circuit,
    half_shift_coupling, left_mul_permutation, logical_action, logical_phase_prediction, orbit_pairs_in_support, product_divisibility,
    sample_elements_of_orders, t_plus_circuit, t_plus_phase_circuit, transversal, transversal_cz, tuple_items, x_with_z_partners,
    y_with_x_partners, Circuit, Gate, LogicalAction, LogicalPaulis, StabilizerGroup,
};
use crate::gf2::{BitMatrix, BitVector, RowSpace};
use crate::group::sl_order;
use crate::instance::{Instance, LocalInstance};
use crate::local_codes::divisibility_level;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Structure,
    Sheaf,
    Css,
    Gates,
    Floquet,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Structure, Suite::Sheaf, Suite::Css, Suite::Gates, Suite::Floquet];

    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        Some(match s {
            "structure" => vec![Suite::Structure],
            "sheaf" => vec![Suite::Sheaf],
            "css" => vec![Suite::Css],
            "gates" => vec![Suite::Gates],
            "floquet" => vec![Suite::Floquet],
            "all" => Suite::ALL.to_vec(),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    /// Measured quantities reported without a pass/fail verdict.
    pub data: Value,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self { suite, checks: Vec::new(), data: json!({}) }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Serialize) {
        let detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self.checks.push(Check { name: name.to_string(), pass, detail });
    }

    fn datum(&mut self, key: &str, value: impl Serialize) {
        self.data[key] = serde_json::to_value(value).unwrap_or(Value::Null);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

pub fn run(inst: &Instance, suite: Suite) -> Result<SuiteReport> {
    match suite {
        Suite::Structure => structure(inst),
        Suite::Sheaf => sheaf(inst),
        Suite::Css => css(inst),
        Suite::Gates => gates(inst),
        Suite::Floquet => floquet(inst),
    }
}

/// The color map `j ↦ j + 1 (mod D + 1)`.
pub fn color_cycle(d: usize) -> Vec<usize> {
    (0..=d).map(|j| (j + 1) % (d + 1)).collect()
}

fn sampled_element(inst: &Instance) -> u32 {
    // deterministic for a given seed; never the identity
    1 + (inst.config.seed % (inst.table.len() as u64 - 1).max(1)) as u32
}

pub fn structure(inst: &Instance) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Structure);
    let d = inst.config.d;
    let expected = sl_order(d as u32 + 1, inst.ring().size() as u64);
    r.check("group_order", expected == Some(inst.table.len() as u128), json!({"enumerated": inst.table.len(), "formula": expected.map(|e| e.to_string())}));
    let s = inst.complex.verify_structure();
    r.check("complex_structure", s.all_pass(), &s);
    let cycle = inst.table.type_cycle_permutation()?;
    r.check("type_cycle_automorphism", inst.complex.is_automorphism(&cycle, &color_cycle(d)), json!({}));
    let g = sampled_element(inst);
    let left = left_mul_permutation(&inst.table, g)?;
    let identity: Vec<usize> = (0..=d).collect();
    r.check("left_multiplication_automorphism", inst.complex.is_automorphism(&left, &identity), json!({"g": g}));
    if d == 2 {
        r.check_no_fixed_point(&inst.table)?;
    }
    Ok(r)
}

impl SuiteReport {
    fn check_no_fixed_point(&mut self, table: &crate::group::GroupTable) -> Result<()> {
        let k0 = table.k0_elements()?;
        let mut failures = Vec::new();
        for &h in &k0 {
            let e = table.element(h);
            if !e.is_identity() && !table.fixed_point_free_on_link(e)? {
                failures.push(h);
            }
        }
        self.check("no_fixed_point", failures.is_empty(), json!({"k0": k0.len(), "with_fixed_points": failures}));
        Ok(())
    }
}

pub fn sheaf(inst: &Instance) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Sheaf);
    let s = &inst.primal;
    r.check("flasque", s.is_flasque(), json!({}));
    r.check("locally_acyclic", s.is_locally_acyclic()?, json!({}));
    let slack = s.tensor_bound_slack();
    r.check("tensor_bound", slack.is_none_or(|v| v >= 0), json!({"slack": slack}));
    let d = inst.config.d;
    let cycle = inst.table.type_cycle_permutation()?;
    r.check("invariant_under_type_cycle", s.is_invariant_under(&cycle, &color_cycle(d)), json!({}));
    let g = sampled_element(inst);
    let identity: Vec<usize> = (0..=d).collect();
    r.check("invariant_under_left_multiplication", s.is_invariant_under(&left_mul_permutation(&inst.table, g)?, &identity), json!({"g": g}));
    let h = s.cohomology()?;
    let alt = |v: &[usize]| v.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
    r.check("euler_characteristic", alt(&h.cochain_dims) == alt(&h.cohomology_dims), &h);
    let dh = inst.dual.cohomology()?;
    r.datum("dual_cohomology", &dh);
    Ok(r)
}

pub fn css(inst: &Instance) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Css);
    let code = inst.code()?;
    r.check("commutation", code.commutes(), json!({"h_x_rows": code.h_x.rows(), "h_z_rows": code.h_z.rows()}));
    let eo = code.even_overlap()?;
    r.check("even_overlap", eo.odd_pairs == 0, &eo);
    r.check("locally_supported", code.is_locally_supported(&inst.primal), json!({"max_check_weight": code.max_check_weight()}));
    let u = unfolding_check(&code, &inst.primal, &inst.dual, inst.config.rank_cap)?;
    r.check("unfolding", u.all_pass(), &u);
    let lb = logical_basis(&code, &inst.primal, &inst.dual)?;
    let sr = span_report(&code, &lb);
    r.check("logical_spans", sr.x_complete && sr.z_complete && sr.spans_equal != Some(false), &sr);
    r.datum("logical_census", lb.census().into_iter().map(|(t, (x, z))| (crate::css::type_label(t), json!({"x": x, "z": z}))).collect::<serde_json::Map<_, _>>());
    let rate = RateReport::for_sheaf(&inst.primal, Some(u.k))?;
    r.check("rate_identity", rate.identity_holds != Some(false), &rate);
    r.datum("weights", code.weight_histogram());
    Ok(r)
}

/// Darboux pairing of the X logicals of the two color types containing the
/// first color; reds come from the lower type.
pub fn darboux_for(code: &CssCode, inst: &Instance) -> Result<DarbouxBasis> {
    let lb = logical_basis(code, &inst.primal, &inst.dual)?;
    let types: Vec<u32> = lb.census().keys().copied().collect();
    if types.len() != 2 {
        return Err(Error::InvalidParameter(format!("expected two logical color types, found {}", types.len())));
    }
    let red: Vec<TaggedVector> = lb.x_of_type(types[0]).into_iter().cloned().collect();
    let blue: Vec<TaggedVector> = lb.x_of_type(types[1]).into_iter().cloned().collect();
    darboux(&red, &blue)
}

fn swap_pattern(a: &LogicalAction) -> bool {
    let k2 = a.x_images.len();
    let k = k2 / 2;
    (0..k2).all(|j| {
        let p = (j + k) % k2;
        let (xx, xz) = &a.x_images[j];
        let (zx, zz) = &a.z_images[j];
        xx.is_zero() && xz.weight() == 1 && xz.get(p) && zz.is_zero() && zx.weight() == 1 && zx.get(p)
    })
}

fn cross_block_pattern(count: usize) -> BitMatrix {
    // count = 2K logicals over two blocks of K each
    let big_k = count / 2;
    let k = big_k / 2;
    let mut m = BitMatrix::zeros(count, count);
    for j in 0..big_k {
        m.set(j, big_k + (j + k) % big_k, true);
        m.set(big_k + j, (j + k) % big_k, true);
    }
    m
}

/// Checks generator images and the logical coupling pattern of one circuit.
fn gate_checks(
    r: &mut SuiteReport,
    name: &str,
    group: &StabilizerGroup,
    gens: &[crate::gates::Pauli],
    lp: &LogicalPaulis,
    circ: &Circuit,
) -> LogicalAction {
    let conj = conjugate_and_verify(group, gens, circ);
    r.check(&format!("{name}_preserves_stabilizers"), conj.pass() && circ.is_layered(), json!({"report": conj, "depth": circ.depth()}));
    let a = logical_action(group, lp, circ);
    r.check(&format!("{name}_preserves_logical_space"), a.preserves_logical_space, json!({}));
    a
}

fn coupling_entries(m: &BitMatrix) -> Vec<(usize, usize)> {
    (0..m.rows()).flat_map(|i| m.row(i).iter_ones().map(move |j| (i, j)).collect::<Vec<_>>()).collect()
}

pub fn gates(inst: &Instance) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Gates);
    let cfg = &inst.config;
    if cfg.d != 2 || cfg.x != 0 {
        return Err(Error::InvalidParameter("the gate suite is defined for the 2D code with x = z = 0".into()));
    }
    let code = inst.code()?;
    let n = code.n;
    if 2 * n > cfg.tableau_cap {
        return Err(Error::CapExceeded { what: "tableau qubits (two blocks)".into(), needed: 2 * n as u64, cap: cfg.tableau_cap as u64 });
    }
    let gens = css_generators(&code, 1);
    let group = StabilizerGroup::new(&gens)?;
    let db = darboux_for(&code, inst)?;
    r.check("darboux", db.is_darboux(), json!({"pairs": db.pairs.len()}));
    let lp = LogicalPaulis::from_darboux(&db);
    r.check("logicals_canonical", lp.is_canonical() && lp.count() + group.rank() == n, json!({"logicals": lp.count(), "stabilizer_rank": group.rank()}));

    let s = gate_checks(&mut r, "transversal_s", &group, &gens, &lp, &transversal(n, Gate::S));
    r.check("transversal_s_coupling", s.x_parts_fixed() && s.coupling() == half_shift_coupling(lp.count()), json!({}));
    let h = gate_checks(&mut r, "transversal_h", &group, &gens, &lp, &transversal(n, Gate::H));
    r.check("transversal_h_swaps", swap_pattern(&h), json!({}));

    let gens2 = css_generators(&code, 2);
    let group2 = StabilizerGroup::new(&gens2)?;
    let lp2 = LogicalPaulis::concat(&[lp.embed(0, 2), lp.embed(1, 2)]);
    let cz = gate_checks(&mut r, "transversal_cz", &group2, &gens2, &lp2, &transversal_cz(n));
    r.check("transversal_cz_coupling", cz.x_parts_fixed() && cz.coupling() == cross_block_pattern(lp2.count()), json!({}));

    // predicted CZ pairs of transversal S agree with the Darboux pairing
    let tagged: Vec<TaggedVector> =
        db.pairs.iter().map(|p| p.0.clone()).chain(db.pairs.iter().map(|p| p.1.clone())).collect();
    let predicted = logical_phase_prediction(&tagged, 2, 0, &BitVector::ones(n), 0)?;
    let k = db.pairs.len();
    let expected: Vec<Vec<usize>> = (0..k).map(|j| vec![j, j + k]).collect();
    r.check("s_phase_prediction", predicted == expected, json!({"predicted_pairs": predicted.len()}));

    let table = &inst.table;
    let orders: Vec<usize> = [2usize, 3, 7].into_iter().filter(|&o| (1..table.len() as u32).any(|g| element_order(table, g).ok() == Some(o))).collect();
    let sampled = sample_elements_of_orders(table, &orders, cfg.seed)?;
    let mut couplings = serde_json::Map::new();
    for (&o, &g) in &sampled {
        let circ = g_orbit_circuit(table, g)?;
        let a = gate_checks(&mut r, &format!("orbit_order_{o}"), &group, &gens, &lp, &circ);
        let fwd = left_mul_permutation(table, g)?;
        let mut back = vec![0u32; n];
        for (h, &gh) in fwd.iter().enumerate() {
            back[gh as usize] = h as u32;
        }
        let img = check_x_images(&circ, |c| x_with_z_partners(n, c, &[fwd[c] as usize, back[c] as usize]));
        r.check(&format!("orbit_order_{o}_images"), img.pass() && img.sign_flips == 0, &img);
        let odd = (0..code.h_x.rows()).filter(|&i| orbit_pairs_in_support(&fwd, &code.h_x.row_vector(i)) % 2 == 1).count();
        r.check(&format!("orbit_order_{o}_pair_parity"), odd == 0, json!({"g": g, "odd_checks": odd}));
        couplings.insert(format!("orbit_order_{o}"), json!(coupling_entries(&a.coupling())));
    }

    let perm = table.type_cycle_permutation()?;
    let phase = t_plus_phase_circuit(&perm)?;
    let a = gate_checks(&mut r, "t_plus_phase", &group, &gens, &lp, &phase);
    couplings.insert("t_plus_phase".into(), json!(coupling_entries(&a.coupling())));
    let pi2: Vec<usize> = (0..n).map(|c| perm[perm[c] as usize] as usize).collect();
    let img = check_x_images(&phase, |c| x_with_z_partners(n, c, &[perm[c] as usize, pi2[c]]));
    r.check("t_plus_phase_images", img.pass(), &img);
    let full = t_plus_circuit(&perm)?;
    gate_checks(&mut r, "t_plus", &group, &gens, &lp, &full);
    let img = check_x_images(&full, |c| y_with_x_partners(n, c, &[perm[c] as usize, pi2[c]]));
    r.check("t_plus_images", img.pass(), &img);
    r.datum("logical_couplings", Value::Object(couplings));

    let defining = cfg.local_code()?;
    let items = tuple_items(&code, &tagged);
    let even = divisibility_level(&defining) >= cfg.d;
    let pd = product_divisibility(&items, n, cfg.d, even);
    r.check("product_divisibility", pd.violations == 0, json!({"census": pd, "d_even": even}));
    let czc = check_cz_conditions(&items, n, cfg.d, &defining)?;
    r.check("cz_conditions", czc.pass(), &czc);
    let rc = check_r_conditions(&items, n, cfg.d, &defining, cfg.d + 1);
    r.check("r_conditions", rc.strongest_full >= rc.strongest_local, &rc);
    Ok(r)
}

/// Product divisibility over stabilizer basis words and shrunk-complex
/// logicals of every type containing the first color; avoids global
/// elimination so it runs on the larger instances.
pub fn product_divisibility_shrunk(inst: &Instance) -> Result<(crate::gates::TupleCensus, bool, usize)> {
    let code = inst.code()?;
    let c = &inst.complex;
    let first = c.colors()[0];
    let mut logicals = Vec::new();
    for t in c.masks_at_level(code.x + 1) {
        if t >> first & 1 == 1 {
            logicals.extend(shrunk_logicals(&code, &inst.primal, &inst.dual, t)?);
        }
    }
    let valid = logicals.iter().all(|l| code.h_z.mul_vec(&l.vector).map(|s| s.is_zero()).unwrap_or(false)) && {
        let mut span = RowSpace::new(&code.h_x.to_dense());
        logicals.iter().all(|l| span.insert(&l.vector))
    };
    let defining = inst.config.local_code()?;
    let even = divisibility_level(&defining) >= inst.config.d;
    let items = tuple_items(&code, &logicals);
    Ok((product_divisibility(&items, code.n, inst.config.d, even), valid, logicals.len()))
}

pub fn floquet(inst: &Instance) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Floquet);
    let cfg = &inst.config;
    let code = inst.code()?;
    if code.n > cfg.tableau_cap {
        return Err(Error::CapExceeded { what: "tableau qubits".into(), needed: code.n as u64, cap: cfg.tableau_cap as u64 });
    }
    let sch = FloquetSchedule::build(&inst.primal, &inst.dual)?;
    let rep = run_period(&sch, Some(middle_vertex_operators(&inst.primal)), cfg.tableau_cap)?;
    let edge_weight = max_basis_weight(&inst.primal, 1).max(max_basis_weight(&inst.dual, 1));
    r.check("period", rep.period == 6, json!({}));
    r.check("no_anomalies", rep.anomalies == 0, json!({"anomalies": rep.anomalies}));
    r.check("returns_after_period", rep.returns_after_period, json!({}));
    r.check("check_weight", rep.max_check_weight == edge_weight, json!({"measured": rep.max_check_weight, "edge_basis": edge_weight}));
    let k = code.dimension(cfg.rank_cap)?;
    r.check("half_logical_dimension", k % 2 == 0 && rep.logical_dim_is(k / 2), json!({"k": k, "steady": rep.steady_logical_dims}));
    let life = rep.lifecycle.clone().expect("vertex operators supplied");
    r.check("vertex_lifecycle", life.matches_cycle(), &life);
    let perm = inst.table.type_cycle_permutation()?;
    let lay = permutation_layout(&inst.complex, &perm)?;
    r.check(
        "permutation_layout",
        lay.maps_partitions && lay.cube_is_identity,
        json!({"group_sizes": lay.group_sizes, "fixed_points": lay.fixed_points, "three_orbits": lay.three_orbits}),
    );
    r.datum("rounds", &rep.steady);
    Ok(r)
}

/// Local-only checks on the link of one vertex.
pub fn local(li: &LocalInstance) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Sheaf);
    let dim = li.vertex_dim();
    let len = li.vertex_len();
    let (ek, en) = li.edge_code();
    let rate = RateReport::from_local(dim, len, ek, en);
    r.check("tensor_bound", li.sheaf.tensor_bound_slack().is_none_or(|v| v >= 0), json!({"slack": li.sheaf.tensor_bound_slack()}));
    r.datum("vertex_code", json!({"dim": dim, "len": len}));
    r.datum("edge_code", json!({"dim": ek, "len": en, "max_basis_weight": max_basis_weight(&li.sheaf, 0)}));
    r.datum("rates", &rate);
    r.datum("colors", colors_of(li.complex.colors_mask()));
    if li.config.d == 2 {
        r.check_no_fixed_point(&li.table)?;
    }
    Ok(r)
}
