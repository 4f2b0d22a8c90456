//! `tcf`: build Tanner color codes on SL_{D+1} coset complexes, run the
//! verification suites, and print reports.
//!
//! Exit codes: 0 pass, 1 finding (a check failed), 2 configuration error,
//! 3 resource cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tcf::complex::Complex;
use tcf::css::{type_label, RateReport};
use tcf::error::Error;
use tcf::floquet::max_basis_weight;
use tcf::gf2::{to_alist, to_matrix_market, SparseBitMatrix};
use tcf::instance::{Instance, InstanceConfig, LocalInstance};
use tcf::suites::{self, Suite, SuiteReport};

#[derive(Parser, Debug)]
#[command(name = "tcf", version, about = "Tanner color codes on coset complexes")]
struct Cli {
    #[command(flatten)]
    opts: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write h_x / h_z, metadata and the complex to --out (or a link report
    /// with --local-only).
    Build,
    /// Run verification suites; exit 0 iff every check passes.
    Verify {
        /// structure | sheaf | css | gates | floquet | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Check the structure of a complex dump (as written by `build`)
        /// instead of building an instance.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Print a summary (n, k, rates, weights, logical census, Floquet weights).
    Report {
        /// Read the metadata of a previous build instead of computing.
        #[arg(long)]
        from: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Alist,
    Mtx,
    Json,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// TOML file with InstanceConfig keys (d, eta, m, phi, r, x, z, caps, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimension D of the complex [default: 2].
    #[arg(long = "D", global = true)]
    d: Option<usize>,
    /// Field size q = 2^eta [default: 2].
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Degree m of the ring R_m = F_q[t]/φ [default: 1].
    #[arg(long, global = true)]
    m: Option<u32>,
    /// φ as hex coefficients from degree m down to 0, e.g. "1,2" [default: a shipped primitive].
    #[arg(long, global = true)]
    phi: Option<String>,
    /// Defining codes RM(r, eta), as "r,eta" [default: 0,1].
    #[arg(long, global = true)]
    rm: Option<String>,
    /// X-check level [default: 0].
    #[arg(long, global = true)]
    x: Option<usize>,
    /// Z-check level [default: D - 2 - x].
    #[arg(long, global = true)]
    z: Option<usize>,
    /// Only build the link of one color-0 vertex.
    #[arg(long, global = true)]
    local_only: bool,
    /// Maximum number of enumerated group elements [default: 4194304].
    #[arg(long, global = true)]
    cap_enumeration: Option<u64>,
    /// Maximum qubits for stabilizer simulation [default: 16384].
    #[arg(long, global = true)]
    cap_tableau: Option<usize>,
    /// Maximum qubits for global rank computations [default: 1048576].
    #[arg(long, global = true)]
    cap_rank: Option<usize>,
    /// Seed for sampled checks [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "tcf-out")]
    out: PathBuf,
    /// Matrix export format.
    #[arg(long, global = true, value_enum, default_value = "alist")]
    format: Format,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_) | Error::Parse { .. } | Error::NotPrimitive { .. } => 2,
            Error::CapExceeded { .. } => 3,
            Error::Finding(_) | Error::Dimension(_) | Error::Io(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(e) => e.into(),
            Err(e) => Failure { code: 1, message: format!("{e:#}") },
        }
    }
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

fn resolve_config(a: &ConfigArgs) -> Result<InstanceConfig, Failure> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
            toml::from_str::<InstanceConfig>(&text).map_err(|e| config_error(format!("{}: {e}", p.display())))?
        }
        None => InstanceConfig::default(),
    };
    if let Some(d) = a.d {
        cfg.d = d;
        cfg.z = d.saturating_sub(2 + cfg.x);
    }
    let mut eta_from_q = None;
    if let Some(q) = a.q {
        if !q.is_power_of_two() || q < 2 {
            return Err(config_error(format!("q = {q} is not a power of two")));
        }
        eta_from_q = Some(q.trailing_zeros());
        cfg.eta = q.trailing_zeros();
    }
    if let Some(rm) = &a.rm {
        let parts: Vec<&str> = rm.split(',').map(str::trim).collect();
        let parsed: Option<(u32, u32)> = match parts.as_slice() {
            [r, e] => r.parse().ok().zip(e.parse().ok()),
            _ => None,
        };
        let (r, eta) = parsed.ok_or_else(|| config_error(format!("--rm expects \"r,eta\", got {rm:?}")))?;
        if eta_from_q.is_some_and(|e| e != eta) {
            return Err(config_error(format!("--rm {rm} is inconsistent with --q {}", a.q.unwrap())));
        }
        cfg.r = r;
        cfg.eta = eta;
    }
    if let Some(m) = a.m {
        cfg.m = m;
    }
    if let Some(phi) = &a.phi {
        cfg.phi = Some(tcf::algebra::RingTable::parse_phi(phi)?);
    }
    if let Some(x) = a.x {
        cfg.x = x;
        cfg.z = cfg.d.saturating_sub(2 + x);
    }
    if let Some(z) = a.z {
        cfg.z = z;
    }
    if let Some(v) = a.cap_enumeration {
        cfg.enumeration_cap = v;
    }
    if let Some(v) = a.cap_tableau {
        cfg.tableau_cap = v;
    }
    if let Some(v) = a.cap_rank {
        cfg.rank_cap = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_matrix(dir: &Path, name: &str, m: &SparseBitMatrix, format: Format) -> anyhow::Result<PathBuf> {
    let (ext, text) = match format {
        Format::Alist => ("alist", to_alist(m)),
        Format::Mtx => ("mtx", to_matrix_market(m)),
        Format::Json => {
            let rows: Vec<&[u32]> = (0..m.rows()).map(|r| m.row(r)).collect();
            ("json", serde_json::to_string(&json!({"rows": m.rows(), "cols": m.cols(), "support": rows}))?)
        }
    };
    let path = dir.join(format!("{name}.{ext}"));
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn local_summary(li: &LocalInstance) -> serde_json::Value {
    let (ek, en) = li.edge_code();
    let rate = RateReport::from_local(li.vertex_dim(), li.vertex_len(), ek, en);
    json!({
        "vertex_code": {"dim": li.vertex_dim(), "len": li.vertex_len()},
        "edge_code": {"dim": ek, "len": en, "max_basis_weight": max_basis_weight(&li.sheaf, 0)},
        "rho0": rate.rho0.to_string(),
        "rate_lower_bound": rate.naive_bound.to_string(),
    })
}

fn metadata(cfg: &InstanceConfig, inst: &Instance) -> anyhow::Result<serde_json::Value> {
    let code = inst.code()?;
    Ok(json!({
        "config": cfg,
        "phi": inst.ring().phi(),
        "phi_auto_selected": cfg.phi.is_none() && cfg.m > 1,
        "group_order": inst.table.len(),
        "n": code.n,
        "h_x_rows": code.h_x.rows(),
        "h_z_rows": code.h_z.rows(),
        "max_check_weight": code.max_check_weight(),
    }))
}

fn cmd_build(cfg: &InstanceConfig, a: &ConfigArgs) -> Result<(), Failure> {
    std::fs::create_dir_all(&a.out).map_err(|e| Failure { code: 1, message: format!("{}: {e}", a.out.display()) })?;
    if a.local_only {
        let li = LocalInstance::build(cfg)?;
        let summary = local_summary(&li);
        let body = serde_json::to_string_pretty(&json!({"config": cfg, "link": summary})).map_err(anyhow::Error::from)?;
        std::fs::write(a.out.join("link.json"), &body).map_err(anyhow::Error::from)?;
        println!("{body}");
        return Ok(());
    }
    let inst = Instance::build(cfg)?;
    let code = inst.code()?;
    let hx = write_matrix(&a.out, "h_x", &code.h_x, a.format)?;
    let hz = write_matrix(&a.out, "h_z", &code.h_z, a.format)?;
    // Matrix Market copies are always written alongside the chosen format
    if !matches!(a.format, Format::Mtx) {
        write_matrix(&a.out, "h_x", &code.h_x, Format::Mtx)?;
        write_matrix(&a.out, "h_z", &code.h_z, Format::Mtx)?;
    }
    std::fs::write(a.out.join("complex.txt"), inst.complex.to_text()).map_err(anyhow::Error::from)?;
    let meta = metadata(cfg, &inst)?;
    std::fs::write(a.out.join("metadata.json"), serde_json::to_string_pretty(&meta).map_err(anyhow::Error::from)?)
        .map_err(anyhow::Error::from)?;
    println!("n = {}; wrote {} and {}", code.n, hx.display(), hz.display());
    Ok(())
}

fn print_suite(r: &SuiteReport) {
    for c in &r.checks {
        eprintln!("{} {:?}/{}", if c.pass { "PASS" } else { "FAIL" }, r.suite, c.name);
    }
}

fn cmd_verify(cfg: &InstanceConfig, a: &ConfigArgs, suite: &str) -> Result<(), Failure> {
    let suites = Suite::parse(suite).ok_or_else(|| config_error(format!("unknown suite {suite:?}")))?;
    let reports = if a.local_only {
        vec![suites::local(&LocalInstance::build(cfg)?)?]
    } else {
        let inst = Instance::build(cfg)?;
        suites.into_iter().map(|s| suites::run(&inst, s)).collect::<Result<Vec<_>, _>>()?
    };
    reports.iter().for_each(print_suite);
    let pass = reports.iter().all(SuiteReport::pass);
    let findings: Vec<_> = reports.iter().flat_map(|r| r.failures().into_iter().map(move |c| json!({"suite": r.suite, "check": c}))).collect();
    let out = json!({"pass": pass, "findings": findings, "reports": reports});
    println!("{}", serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?);
    if pass {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("{} check(s) failed", findings.len()) })
    }
}

fn cmd_verify_complex(path: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let report = Complex::from_text(&text)?.verify_structure();
    let pass = report.all_pass();
    eprintln!("{} Structure/complex_structure", if pass { "PASS" } else { "FAIL" });
    println!("{}", serde_json::to_string_pretty(&json!({"pass": pass, "structure": report})).map_err(anyhow::Error::from)?);
    if pass {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "the complex violates a structural property".into() })
    }
}

fn cmd_report(cfg: &InstanceConfig, a: &ConfigArgs, from: Option<&Path>) -> Result<(), Failure> {
    if let Some(dir) = from {
        let meta = dir.join("metadata.json");
        let link = dir.join("link.json");
        match std::fs::read_to_string(&meta).or_else(|_| std::fs::read_to_string(&link)) {
            Ok(text) => println!("{text}"),
            Err(_) => println!("nothing built in {}", dir.display()),
        }
        return Ok(());
    }
    if a.local_only {
        let li = LocalInstance::build(cfg)?;
        let s = local_summary(&li);
        println!("vertex code: dim {} of length {}", s["vertex_code"]["dim"], s["vertex_code"]["len"]);
        println!("ρ₀ = {}, rate ≥ {}", s["rho0"].as_str().unwrap_or(""), s["rate_lower_bound"].as_str().unwrap_or(""));
        println!("Floquet check weight (edge basis): {}", s["edge_code"]["max_basis_weight"]);
        println!("{}", serde_json::to_string_pretty(&s).map_err(anyhow::Error::from)?);
        return Ok(());
    }
    let inst = Instance::build(cfg)?;
    let code = inst.code()?;
    let k = code.dimension(cfg.rank_cap)?;
    let rate = RateReport::for_sheaf(&inst.primal, Some(k))?;
    let lb = tcf::css::logical_basis(&code, &inst.primal, &inst.dual)?;
    let census: serde_json::Map<String, serde_json::Value> =
        lb.census().into_iter().map(|(t, (x, z))| (type_label(t), json!({"x": x, "z": z}))).collect();
    let darboux = if cfg.d == 2 {
        suites::darboux_for(&code, &inst).ok().map(|db| {
            db.pairs
                .iter()
                .map(|(r, b)| json!({"red": type_label(r.color_type), "red_weight": r.vector.weight(), "blue": type_label(b.color_type), "blue_weight": b.vector.weight()}))
                .collect::<Vec<_>>()
        })
    } else {
        None
    };
    let floquet_weight = (cfg.d == 2).then(|| max_basis_weight(&inst.primal, 1).max(max_basis_weight(&inst.dual, 1)));
    println!("n = {}, k = {}", code.n, k);
    println!("ρ₀ = {}, rate = {}", rate.rho0, rate.exact_rate.map(|r| r.to_string()).unwrap_or_default());
    println!("max check weight = {}", code.max_check_weight());
    let out = json!({
        "n": code.n,
        "k": k,
        "rates": rate,
        "weights": code.weight_histogram(),
        "logical_census": census,
        "darboux_pairs": darboux,
        "floquet_check_weight": floquet_weight,
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Ok(v) = std::env::var("TCF_THREADS") {
        let n: usize = v.parse().map_err(|_| config_error(format!("TCF_THREADS={v:?} is not a number")))?;
        // the pool can only be configured once; later calls are harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = resolve_config(&cli.opts)?;
    match &cli.command {
        Command::Build => cmd_build(&cfg, &cli.opts),
        Command::Verify { complex: Some(path), .. } => cmd_verify_complex(path),
        Command::Verify { suite, complex: None } => cmd_verify(&cfg, &cli.opts, suite),
        Command::Report { from } => cmd_report(&cfg, &cli.opts, from.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
