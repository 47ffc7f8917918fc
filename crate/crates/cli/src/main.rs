use std::fmt;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use derived_discrete::complex::{complex_to_json, HomSolver};
use derived_discrete::gamma::{
    gamma_hom_dim, in_f, in_g, irreducible_targets, is_shifted_projective, theta_preimage, theta_vertex,
    GammaVertex, GammaWindow,
};
use derived_discrete::homcomb::{basis_kinds, BasisMapKind, PsiSign};
use derived_discrete::indecomposables::{build_complex, QuadWindow, Quadruple};
use derived_discrete::rigidity::{
    coniso_normal_form, construct_conjugation, validate_pseudo_identity, verify_naturality, ConnectingIsoData,
    PseudoIdentityData,
};
use derived_discrete::verify::{verify, Suite, VerifyConfig, REPORT_SCHEMA_VERSION};
use derived_discrete::{Algebra, Error};

/// Derived-discrete algebras Λ(n,m): morphism spaces, verification sweeps
/// and exports.
#[derive(Parser, Debug)]
#[command(name = "ddisc", version)]
struct Cli {
    /// Algebra parameters `n,m` with n ≥ 1, m ≥ 0.
    #[arg(long, global = true, allow_hyphen_values = true)]
    algebra: Option<String>,
    /// Range of k for quadruple windows.
    #[arg(long, global = true, default_value = "-2:2", allow_hyphen_values = true)]
    k: String,
    /// Maximal l for quadruple windows.
    #[arg(long, global = true, default_value_t = 4)]
    l: i32,
    /// Range of a for Γ windows.
    #[arg(long, global = true, default_value = "-2:2", allow_hyphen_values = true)]
    a: String,
    /// Range of b for Γ windows.
    #[arg(long, global = true, default_value = "-2:2", allow_hyphen_values = true)]
    b: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized rigidity inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cross-check with the linear-algebra oracle.
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    oracle: Switch,
    /// Fault injection for testing the verifier.
    #[arg(long, global = true, value_enum, hide = true)]
    fault: Option<Fault>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Fault {
    DropPsiSign,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension and basis of a morphism space between two indecomposables.
    Hom {
        /// `(i,a,b)` or `(k,u,l,v)`.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Run the verification suites on the configured windows.
    Verify {
        /// Seeded instances for the rigidity and connecting-iso suites.
        #[arg(long, default_value_t = 10)]
        instances: u64,
        /// Restrict to the named suites.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Irreducible maps between the Γ vertices of the window.
    ArExport,
    /// The complex of an indecomposable.
    Complex {
        /// `(i,a,b)` or `(k,u,l,v)`.
        #[arg(allow_hyphen_values = true)]
        object: String,
    },
    /// Check that seeded pseudo-identities are conjugate to the identity.
    RigidityCheck {
        #[arg(long, default_value_t = 1)]
        instances: u64,
        /// Use the identity functor instead of random data.
        #[arg(long)]
        identity: bool,
    },
    /// Translate between Γ vertices and quadruples.
    Theta {
        /// `(i,a,b)` or `(k,u,l,v)`.
        #[arg(allow_hyphen_values = true)]
        object: String,
    },
}

/// Bad input; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Clone, Copy, Debug)]
enum Object {
    Vertex(GammaVertex),
    Quad(Quadruple),
}

impl Object {
    fn parse(alg: &Algebra, s: &str) -> Result<Self> {
        let commas = s.matches(',').count();
        let obj = match commas {
            2 => Object::Vertex(s.parse::<GammaVertex>().map_err(|e| usage(e.to_string()))?),
            3 => Object::Quad(s.parse::<Quadruple>().map_err(|e| usage(e.to_string()))?),
            _ => return Err(usage(format!("expected (i,a,b) or (k,u,l,v), got {s:?}"))),
        };
        match obj {
            Object::Vertex(v) => v.check(alg),
            Object::Quad(q) => q.check(alg),
        }
        .map_err(|e| usage(e.to_string()))?;
        Ok(obj)
    }

    fn quadruple(&self, alg: &Algebra) -> Result<Quadruple> {
        match *self {
            Object::Vertex(v) => Ok(theta_vertex(alg, v)?),
            Object::Quad(q) => Ok(q),
        }
    }

    fn vertex(&self, alg: &Algebra) -> Result<GammaVertex> {
        match *self {
            Object::Vertex(v) => Ok(v),
            Object::Quad(q) => Ok(theta_preimage(alg, q)?),
        }
    }
}

fn parse_pair(s: &str, sep: char, what: &str) -> Result<(i64, i64)> {
    let bad = || usage(format!("{what}: expected two integers separated by '{sep}', got {s:?}"));
    let (x, y) = s.split_once(sep).ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

struct Config {
    alg: Algebra,
    quad: QuadWindow,
    gamma: GammaWindow,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let spec = cli.algebra.as_deref().ok_or_else(|| usage("--algebra n,m is required"))?;
        let (n, m) = parse_pair(spec, ',', "--algebra")?;
        let alg = Algebra::new(n, m).map_err(|e| usage(e.to_string()))?;
        let (k_lo, k_hi) = parse_pair(&cli.k, ':', "--k")?;
        let (a_lo, a_hi) = parse_pair(&cli.a, ':', "--a")?;
        let (b_lo, b_hi) = parse_pair(&cli.b, ':', "--b")?;
        if cli.l < 0 {
            return Err(usage("--l must be non-negative"));
        }
        let k = |x: i64| i32::try_from(x).map_err(|_| usage("--k out of range"));
        Ok(Config {
            alg,
            quad: QuadWindow::new(k(k_lo)?, k(k_hi)?, cli.l),
            gamma: GammaWindow::new(a_lo, a_hi, b_lo, b_hi),
        })
    }

    fn require_nonempty(&self) -> Result<()> {
        let (q, g) = (self.quad, self.gamma);
        if q.k_min > q.k_max || g.a_lo > g.a_hi || g.b_lo > g.b_hi {
            return Err(usage("window is empty"));
        }
        Ok(())
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn basis_label(kind: BasisMapKind) -> &'static str {
    match kind {
        BasisMapKind::Phi => "φ",
        BasisMapKind::Psi => "ψ",
    }
}

fn cmd_hom(cli: &Cli, cfg: &Config, from: &str, to: &str) -> Result<ExitCode> {
    let alg = &cfg.alg;
    let (x, y) = (Object::parse(alg, from)?, Object::parse(alg, to)?);
    let (labels, dim): (Vec<&str>, usize) = match (x, y) {
        (Object::Vertex(v), Object::Vertex(u)) => {
            let mut l = Vec::new();
            if in_f(alg, v, u) {
                l.push("f");
            }
            if in_g(alg, v, u) {
                l.push("g");
            }
            (l, gamma_hom_dim(alg, v, u))
        }
        _ => {
            let (p, q) = (x.quadruple(alg)?, y.quadruple(alg)?);
            let kinds = basis_kinds(alg, p, q);
            (kinds.iter().map(|k| basis_label(*k)).collect(), kinds.len())
        }
    };
    let oracle = if cli.oracle == Switch::On {
        let c = build_complex(alg, x.quadruple(alg)?)?;
        let d = build_complex(alg, y.quadruple(alg)?)?;
        Some(HomSolver::new(alg, &c, &d).dimension())
    } else {
        None
    };
    let agrees = oracle.is_none_or(|o| o == dim);
    match cli.format {
        Format::Json => print_json(&json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "hom",
            "from": from.trim(),
            "to": to.trim(),
            "dimension": dim,
            "basis": labels,
            "oracle_dimension": oracle,
            "agrees": agrees,
        })),
        _ => {
            if labels.is_empty() {
                println!("dim 0");
            } else {
                println!("dim {dim}: {}", labels.join(", "));
            }
            if let Some(o) = oracle {
                println!("oracle dim {o}: {}", if agrees { "agrees" } else { "DISAGREES" });
            }
        }
    }
    Ok(if agrees { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_suite(name: &str) -> Result<Suite> {
    Suite::ALL
        .into_iter()
        .find(|s| s.name() == name.trim())
        .ok_or_else(|| usage(format!("unknown suite {name:?}")))
}

fn cmd_verify(cli: &Cli, cfg: &Config, instances: u64, suites: &[String]) -> Result<ExitCode> {
    cfg.require_nonempty()?;
    let suites: Vec<Suite> =
        if suites.is_empty() { Suite::ALL.to_vec() } else { suites.iter().map(|s| parse_suite(s)).collect::<Result<_>>()? };
    let mut vc = VerifyConfig::new(cfg.quad, cfg.gamma);
    vc.instances = instances;
    vc.seed = cli.seed;
    vc.oracle = cli.oracle == Switch::On;
    if cli.fault == Some(Fault::DropPsiSign) {
        vc.psi_sign = PsiSign::Unsigned;
    }
    let report = verify(&cfg.alg, &suites, &vc).map_err(|e| match e {
        Error::InvalidWindow(_) => usage(e.to_string()),
        e => e.into(),
    })?;
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(&report)?),
        _ => {
            println!("algebra ({},{})", report.n, report.m);
            for s in &report.suites {
                let status = if s.passed { "PASS" } else { "FAIL" };
                println!("{:<15} {status} {} checked, {} failed", s.suite.name(), s.checked, s.failures);
                if let Some(c) = &s.counterexample {
                    println!("  counterexample: {c}");
                }
            }
            println!("{}", if report.passed { "all suites passed" } else { "verification FAILED" });
        }
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_ar_export(cli: &Cli, cfg: &Config) -> Result<ExitCode> {
    let alg = &cfg.alg;
    let vs = cfg.gamma.vertices(alg);
    let edges: Vec<(GammaVertex, GammaVertex)> = vs
        .iter()
        .flat_map(|&v| irreducible_targets(alg, v).into_iter().map(move |u| (v, u)))
        .filter(|(_, u)| cfg.gamma.contains(u))
        .collect();
    match cli.format {
        Format::Dot => {
            println!("digraph gamma {{");
            for v in &vs {
                let shape = if is_shifted_projective(alg, *v).is_some() { "box" } else { "ellipse" };
                println!("  \"{v}\" [shape={shape}];");
            }
            for (v, u) in &edges {
                println!("  \"{v}\" -> \"{u}\";");
            }
            println!("}}");
        }
        Format::Json => {
            let vertices: Vec<Value> = vs
                .iter()
                .map(|v| {
                    let proj = is_shifted_projective(alg, *v).map(|(j, t)| json!({"vertex": j, "shift": t}));
                    json!({"id": v.to_string(), "i": v.i, "a": v.a, "b": v.b, "shifted_projective": proj})
                })
                .collect();
            let edges: Vec<Value> =
                edges.iter().map(|(v, u)| json!({"source": v.to_string(), "target": u.to_string()})).collect();
            print_json(&json!({
                "schema_version": REPORT_SCHEMA_VERSION,
                "kind": "ar_export",
                "n": alg.n(),
                "m": alg.m(),
                "vertices": vertices,
                "edges": edges,
            }));
        }
        Format::Text => {
            println!("{} vertices, {} irreducible maps", vs.len(), edges.len());
            for (v, u) in &edges {
                println!("{v} -> {u}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_complex(cli: &Cli, cfg: &Config, object: &str) -> Result<ExitCode> {
    let alg = &cfg.alg;
    let q = Object::parse(alg, object)?.quadruple(alg)?;
    let c = build_complex(alg, q)?;
    match cli.format {
        Format::Json => {
            let doc: Value = serde_json::from_str(&complex_to_json(alg, &c))?;
            print_json(&json!({"schema_version": REPORT_SCHEMA_VERSION, "kind": "complex", "quadruple": q.to_string(), "complex": doc}));
        }
        _ => {
            println!("C{q}");
            print!("{}", c.display(alg));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rigidity(cli: &Cli, cfg: &Config, instances: u64, identity: bool) -> Result<ExitCode> {
    cfg.require_nonempty()?;
    let alg = &cfg.alg;
    let mut results = Vec::new();
    let mut passed = true;
    for s in cli.seed..cli.seed + instances.max(1) {
        let data =
            if identity { PseudoIdentityData::identity(alg, cfg.gamma) } else { PseudoIdentityData::random(alg, cfg.gamma, s) };
        let valid = validate_pseudo_identity(alg, &data).err().map(|v| v.to_string());
        let phi = construct_conjugation(alg, &data).map_err(|e| match e {
            Error::InvalidWindow(_) => usage(e.to_string()),
            e => e.into(),
        })?;
        let natural = verify_naturality(alg, &phi, &data).err().map(|c| c.generator.to_string());
        let ok = valid.is_none() && natural.is_none() && (!identity || phi.is_identity());
        passed &= ok;
        results.push(json!({
            "seed": if identity { Value::Null } else { json!(s) },
            "vertices": phi.automorphisms.len(),
            "generators": data.images.len(),
            "pseudo_identity_violation": valid,
            "naturality_counterexample": natural,
            "identity_family": phi.is_identity(),
            "passed": ok,
        }));
        if identity {
            break;
        }
    }
    let coniso = coniso_normal_form(alg, &ConnectingIsoData::random(alg, cfg.gamma, cli.seed))
        .context("connecting isomorphism")?;
    match cli.format {
        Format::Json => print_json(&json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "rigidity_check",
            "n": alg.n(),
            "m": alg.m(),
            "window": cfg.gamma,
            "results": results,
            "connecting_iso": coniso,
            "passed": passed,
        })),
        _ => {
            for r in &results {
                println!(
                    "seed {}: {} ({} vertices, {} generators)",
                    r["seed"],
                    if r["passed"].as_bool() == Some(true) { "ok" } else { "FAILED" },
                    r["vertices"],
                    r["generators"]
                );
            }
            println!("connecting iso: {}", serde_json::to_string(&coniso)?.chars().take(120).collect::<String>());
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_theta(cli: &Cli, cfg: &Config, object: &str) -> Result<ExitCode> {
    let alg = &cfg.alg;
    let obj = Object::parse(alg, object)?;
    let (v, q) = (obj.vertex(alg)?, obj.quadruple(alg)?);
    match cli.format {
        Format::Json => print_json(&json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "theta",
            "vertex": v.to_string(),
            "quadruple": q.to_string(),
        })),
        _ => println!("{v} -> {q}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = Config::from_cli(cli)?;
    match &cli.command {
        Command::Hom { from, to } => cmd_hom(cli, &cfg, from, to),
        Command::Verify { instances, suite } => cmd_verify(cli, &cfg, *instances, suite),
        Command::ArExport => cmd_ar_export(cli, &cfg),
        Command::Complex { object } => cmd_complex(cli, &cfg, object),
        Command::RigidityCheck { instances, identity } => cmd_rigidity(cli, &cfg, *instances, *identity),
        Command::Theta { object } => cmd_theta(cli, &cfg, object),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
