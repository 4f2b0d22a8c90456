//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use num_rational::Ratio;
use tcf::complex::fixtures;
use tcf::css::*;
use tcf::gates::{check_cz_conditions, product_divisibility, tuple_items};
use tcf::group::sl_order;
use tcf::instance::{Instance, InstanceConfig, LocalInstance};
use tcf::local_codes::{divisibility_level, LinearCode, dual_code, is_multi_orthogonal, reed_muller, star_product_code};
use tcf::sheaf::Sheaf;
use tcf::suites;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: impl Into<String>) -> Outcome {
    let d = detail.into();
    if ok {
        Ok(d)
    } else {
        Err(d)
    }
}

fn err(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

fn q2() -> Instance {
    Instance::build(&InstanceConfig::default()).unwrap()
}

fn q4() -> Instance {
    Instance::build(&InstanceConfig { eta: 2, ..Default::default() }).unwrap()
}

fn local(eta: u32, r: u32) -> LocalInstance {
    LocalInstance::build(&InstanceConfig { eta, r, ..Default::default() }).unwrap()
}

fn constant_pair(c: tcf::complex::Complex) -> (Sheaf, Sheaf) {
    let s = Sheaf::constant(Arc::new(c)).unwrap();
    let d = s.dual().unwrap();
    (s, d)
}

fn c1() -> Outcome {
    let dim = local(3, 1).vertex_dim();
    ensure(dim == 76, format!("dim = {dim}"))
}

fn c2() -> Outcome {
    let dim = local(5, 2).vertex_dim();
    ensure(dim == 5116, format!("dim = {dim}"))
}

fn c3() -> Outcome {
    let li = local(3, 1);
    let (ek, en) = li.edge_code();
    let r = RateReport::from_local(li.vertex_dim(), li.vertex_len(), ek, en);
    ensure(
        r.rho0 == Ratio::new(19, 128) && r.naive_bound == Ratio::new(7, 64),
        format!("rho0 = {}, bound = {}", r.rho0, r.naive_bound),
    )
}

fn c4() -> Outcome {
    let a = q2().table.len();
    let b = q4().table.len();
    ensure(
        a == 168 && b == 60480 && sl_order(3, 2) == Some(168) && sl_order(3, 4) == Some(60480),
        format!("|SL3(F2)| = {a}, |SL3(F4)| = {b}"),
    )
}

fn c5() -> Outcome {
    let inst = q2();
    let code = inst.code().map_err(err)?;
    let a = unfolding_check(&code, &inst.primal, &inst.dual, DEFAULT_RANK_CAP).map_err(err)?;
    let (s, d) = constant_pair(fixtures::torus());
    let tcode = CssCode::extract(&s, &d, 0, 0).map_err(err)?;
    let b = unfolding_check(&tcode, &s, &d, DEFAULT_RANK_CAP).map_err(err)?;
    ensure(
        a.formula_holds && b.formula_holds && a.k == 46 && b.k == 4,
        format!("q=2: k = {} = {}·{}; torus: k = {} = {}·{}", a.k, a.copies, a.sheaf_h, b.k, b.copies, b.sheaf_h),
    )
}

fn c6() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, inst) in [("q=2", q2()), ("q=4", q4())] {
        let code = inst.code().map_err(err)?;
        let s = inst.complex.verify_structure();
        let eo = code.even_overlap().map_err(err)?;
        let pass = code.commutes() && s.disjoint_union && s.intersection && eo.odd_pairs == 0;
        ok &= pass;
        notes.push(format!("{name}: {}", if pass { "ok" } else { "fail" }));
    }
    for (name, c, splits) in [
        ("torus", fixtures::torus(), vec![(0, 0)]),
        ("octahedron", fixtures::octahedron(), vec![(0, 0)]),
        ("16-cell", fixtures::cross_polytope(3), vec![(0, 1), (1, 0)]),
    ] {
        let st = c.verify_structure();
        let (s, d) = constant_pair(c);
        for (x, z) in splits {
            let code = CssCode::extract(&s, &d, x, z).map_err(err)?;
            let pass = code.commutes() && st.disjoint_union && st.intersection && code.even_overlap().map_err(err)?.odd_pairs == 0;
            ok &= pass;
            notes.push(format!("{name}({x},{z}): {}", if pass { "ok" } else { "fail" }));
        }
    }
    ensure(ok, notes.join(", "))
}

fn c7() -> Outcome {
    let inst = q2();
    let code = inst.code().map_err(err)?;
    let mut ok = true;
    for t in [0b011u32, 0b101] {
        let s = squares_for_type(&code, &inst.primal, &inst.dual, t).map_err(err)?;
        ok &= s.bottom_left && s.top_left && s.top_right && s.bottom_right && s.shrunk_is_complex;
    }
    ensure(ok, "both color types")
}

fn c8() -> Outcome {
    let r = suites::gates(&q2()).map_err(err)?;
    let names = r.failures().iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    ensure(r.pass(), if names.is_empty() { format!("{} checks", r.checks.len()) } else { format!("failed: {names:?}") })
}

fn c9() -> Outcome {
    let c = reed_muller(1, 3).map_err(err)?;
    let level = divisibility_level(&c);
    let words = c.codewords().map_err(err)?;
    let mut pairs = 0;
    let mut odd = 0;
    for a in &words {
        for b in &words {
            pairs += 1;
            odd += a.and_weight(b) % 2;
        }
    }
    // D = 2: C^{*(D−1)} = C
    let star = star_product_code(&c, 1).map_err(err)?;
    let in_dual = star.is_subcode_of(&dual_code(&c));
    let orth = is_multi_orthogonal(&[&c, &c], 2).map_err(err)?;
    let inst = q2();
    let code = inst.code().map_err(err)?;
    let db = suites::darboux_for(&code, &inst).map_err(err)?;
    let tagged: Vec<TaggedVector> = db.pairs.iter().flat_map(|p| [p.0.clone(), p.1.clone()]).collect();
    let even2 = divisibility_level(&inst.config.local_code().map_err(err)?) >= 2;
    let pd2 = product_divisibility(&tuple_items(&code, &tagged), code.n, 2, even2);
    let (pd4, valid4, count4) = suites::product_divisibility_shrunk(&q4()).map_err(err)?;
    ensure(
        level == 2 && pairs == 256 && odd == 0 && orth && in_dual && pd2.violations == 0 && pd4.violations == 0 && valid4,
        format!(
            "level {level}, {pairs} pairs ({odd} odd), star⊆dual {in_dual}; q=2 {} products/{} violations; q=4 {} products/{} violations over {count4} logicals",
            pd2.nonzero_products, pd2.violations, pd4.nonzero_products, pd4.violations
        ),
    )
}

fn no_fixed_point(table: &tcf::group::GroupTable) -> Result<(usize, usize), String> {
    let k0 = table.k0_elements().map_err(err)?;
    let mut bad = 0;
    for &h in &k0 {
        let e = table.element(h);
        if !e.is_identity() && !table.fixed_point_free_on_link(e).map_err(err)? {
            bad += 1;
        }
    }
    Ok((k0.len(), bad))
}

fn c10() -> Outcome {
    let (n2, b2) = no_fixed_point(&q2().table)?;
    let (n8, b8) = no_fixed_point(&local(3, 1).table)?;
    ensure(b2 == 0 && b8 == 0, format!("q=2: |K0| = {n2}, {b2} with fixed points; q=8: |K0| = {n8}, {b8} with fixed points"))
}

fn c11() -> Outcome {
    let r = suites::floquet(&q2()).map_err(err)?;
    let names = r.failures().iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    ensure(r.pass(), if names.is_empty() { format!("{} checks", r.checks.len()) } else { format!("failed: {names:?}") })
}

fn c12() -> Outcome {
    let mut notes = Vec::new();
    // local-mode report for q = 8
    let lr = suites::local(&local(3, 1)).map_err(err)?;
    notes.push(format!("local q=8 {}", if lr.pass() { "ok" } else { "fail" }));
    // condition checkers on the D = 3 fixture
    let (s, d) = constant_pair(fixtures::cross_polytope(3));
    let mut fixture_ok = s.is_locally_acyclic().map_err(err)? && s.is_flasque();
    for (x, z) in [(0, 1), (1, 0)] {
        let code = CssCode::extract(&s, &d, x, z).map_err(err)?;
        let items = tuple_items(&code, &[]);
        let pd = product_divisibility(&items, code.n, 3, false);
        fixture_ok &= code.commutes() && pd.violations == 0;
        if x == 0 {
            // the D-fold CZ condition concerns vertex X checks; the full
            // length-2 code is not 3-orthogonal and must be flagged
            let good = check_cz_conditions(&items, code.n, 3, &LinearCode::repetition(2)).map_err(err)?;
            let bad = check_cz_conditions(&items, code.n, 3, &LinearCode::full(2)).map_err(err)?;
            fixture_ok &= good.pass() && !bad.defining_d_orthogonal;
        }
    }
    let (st, _) = constant_pair(fixtures::suspended_torus());
    fixture_ok &= !st.is_locally_acyclic().map_err(err)?;
    notes.push(format!("D=3 fixtures {}", if fixture_ok { "ok" } else { "fail" }));
    // refusal at the caps
    let refused_group = matches!(Instance::build(&InstanceConfig { eta: 3, r: 1, ..Default::default() }), Err(tcf::Error::CapExceeded { .. }));
    let small_cap = Instance::build(&InstanceConfig { tableau_cap: 100, ..Default::default() }).unwrap();
    let refused_tableau = matches!(suites::gates(&small_cap), Err(tcf::Error::CapExceeded { .. }))
        && matches!(suites::floquet(&small_cap), Err(tcf::Error::CapExceeded { .. }));
    let refused_rank = matches!(q2().code().unwrap().dimension(100), Err(tcf::Error::CapExceeded { .. }));
    notes.push(format!("caps refused: group {refused_group}, tableau {refused_tableau}, rank {refused_rank}"));
    ensure(lr.pass() && fixture_ok && refused_group && refused_tableau && refused_rank, notes.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("vertex code dimension q=8", c1),
        ("vertex code dimension q=32", c2),
        ("rate bound", c3),
        ("group generation", c4),
        ("unfolding dimension formula", c5),
        ("CSS commutation and structure", c6),
        ("chain-map squares", c7),
        ("transversal gates q=2", c8),
        ("divisibility machinery", c9),
        ("no fixed point", c10),
        ("Floquet schedule q=2", c11),
        ("desk-scale limits", c12),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("PASS {:>2} {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {d} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
