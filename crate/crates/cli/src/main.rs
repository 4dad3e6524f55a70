//! `klfock`: batch front end for Fock space, Hecke module and wedge computations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use klfock_core::fock::{format_combination, ket, FockElement, FockSpace};
use klfock_core::heckefock::{HeckeFock, Report};
use klfock_core::strategy::StrategyRegistry;
use klfock_core::suites::{SuiteParams, SuiteRegistry};
use klfock_core::wedge::{Partition, WedgeSpace};
use klfock_core::{Error, RootDatum, Weight};

#[derive(Parser)]
#[command(name = "klfock", version, about = "Straightening, canonical bases and KL polynomials in level-ℓ Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of |λ⟩.
    Straighten(WeightArgs),
    /// Bar involution of |λ⟩.
    Bar(WeightArgs),
    /// Canonical basis element of a dominant weight.
    Canonical(WeightArgs),
    /// Decomposition numbers d_{λμ} over the block of λ.
    Decomp(WeightArgs),
    /// Signed parabolic-singular KL polynomials through the Hecke module.
    Klpoly(WeightArgs),
    /// Dominant weights linked to λ and below it.
    Block(WeightArgs),
    /// Partition, wedge and Maya conversions, or straightening of an index sequence.
    Wedge(WedgeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Cartan type label such as A2, B3, G2.
    #[arg(long = "type", value_name = "LABEL")]
    type_label: Option<String>,
    /// JSON file holding a Cartan matrix (bare array or {"cartan": [...]}).
    #[arg(long, value_name = "PATH")]
    cartan: Option<PathBuf>,
    /// Level ℓ ≥ 1.
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    ell: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rewrite order: leftmost, rightmost or randomized.
    #[arg(long, default_value = "leftmost")]
    strategy: String,
}

#[derive(Args)]
struct WeightArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated ω-coordinates, e.g. "-12" or "1,0".
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

#[derive(Args)]
struct WedgeArgs {
    #[command(flatten)]
    common: Common,
    /// Partition parts, e.g. "4,4,3".
    #[arg(long, conflicts_with = "indices")]
    partition: Option<String>,
    /// Raw wedge indices to straighten, e.g. "0,11".
    #[arg(long, allow_hyphen_values = true)]
    indices: Option<String>,
    /// Window size; defaults to the number of parts or indices.
    #[arg(long)]
    slots: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    suite: String,
    /// Coordinate bound of the sweep.
    #[arg(long, default_value_t = 4)]
    height: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Rendered output plus whether the run found problems.
struct Rendered {
    body: String,
    ok: bool,
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for {flag}: {msg}"))
}

fn load_root(c: &Common) -> Outcome<(Arc<RootDatum>, Value)> {
    match (&c.type_label, &c.cartan) {
        (Some(_), Some(_)) => Err(Failure::Usage("--type and --cartan cannot be used together".into())),
        (Some(label), None) => {
            let root = RootDatum::build(label).map_err(|e| usage("--type", e))?;
            Ok((Arc::new(root), json!(label)))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| usage("--cartan", format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| usage("--cartan", e))?;
            let rows = v.get("cartan").cloned().unwrap_or(v);
            let matrix: Vec<Vec<i64>> = serde_json::from_value(rows.clone())
                .map_err(|_| usage("--cartan", "expected an array of integer rows"))?;
            let root = RootDatum::from_cartan("custom", matrix.clone()).map_err(|e| usage("--cartan", e))?;
            Ok((Arc::new(root), json!(matrix)))
        }
        (None, None) => Err(Failure::Usage("one of --type or --cartan is required".into())),
    }
}

fn check_common(c: &Common) -> Outcome<()> {
    if c.ell < 1 {
        return Err(usage("--ell", "the level must be at least 1"));
    }
    let names = StrategyRegistry::default();
    if !names.names().contains(&c.strategy.as_str()) {
        return Err(usage("--strategy", format!("unknown strategy {:?}; known: {}", c.strategy, names.names().join(", "))));
    }
    Ok(())
}

fn parse_weight(s: &str, rank: usize) -> Outcome<Weight> {
    let w: Weight = s.parse().map_err(|e| usage("--weight", e))?;
    if w.len() != rank {
        return Err(usage("--weight", format!("expected {rank} coordinates, got {}", w.len())));
    }
    Ok(w)
}

fn parse_list(flag: &str, s: &str) -> Outcome<Vec<i64>> {
    let w: Weight = s.parse().map_err(|e| usage(flag, e))?;
    Ok(w.0)
}

fn fock_space(root: &Arc<RootDatum>, c: &Common) -> Outcome<FockSpace> {
    let strategy = StrategyRegistry::default().build(&c.strategy, c.seed).map_err(|e| usage("--strategy", e))?;
    Ok(FockSpace::with_strategy(root.clone(), c.ell, strategy))
}

fn require_dominant(root: &RootDatum, w: &Weight) -> Outcome<()> {
    if root.is_dominant(w) {
        Ok(())
    } else {
        Err(usage("--weight", format!("{w} is not dominant (every coordinate must be ≥ 0)")))
    }
}

fn coeff_table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(a, _)| a.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(a, b)| format!("{a:<width$}  {b}")).collect::<Vec<_>>().join("\n")
}

fn element_output(fock: &FockSpace, v: &FockElement, format: Format) -> String {
    match format {
        Format::Json => pretty(&fock.to_json(v)),
        Format::Text => fock.format(v),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

/// Job description hashed for the cache.
fn job_key(name: &str, root: &Value, c: &Common, extra: Value) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "root": root,
        "ell": c.ell,
        "format": matches!(c.format, Format::Text),
        "seed": c.seed,
        "strategy": c.strategy,
        "extra": extra,
    })
}

fn cache_path(key: &Value) -> Option<PathBuf> {
    let dir = std::env::var_os("KLFOCK_CACHE_DIR")?;
    let digest = Sha256::digest(serde_json::to_string(key).expect("json serializes").as_bytes());
    Some(Path::new(&dir).join(format!("{}.out", hex::encode(digest))))
}

fn cached(key: &Value, compute: impl FnOnce() -> Outcome<Rendered>) -> Outcome<Rendered> {
    let path = cache_path(key);
    if let Some(p) = &path {
        if let Ok(body) = fs::read_to_string(p) {
            return Ok(Rendered { body, ok: true });
        }
    }
    let out = compute()?;
    if let (Some(p), true) = (&path, out.ok) {
        // A failed write only loses the cache entry.
        if fs::create_dir_all(p.parent().expect("cache file has a parent")).is_ok() {
            let tmp = p.with_extension("tmp");
            if fs::write(&tmp, &out.body).is_ok() {
                let _ = fs::rename(&tmp, p);
            }
        }
    }
    Ok(out)
}

fn weight_command(name: &str, a: &WeightArgs) -> Outcome<Rendered> {
    check_common(&a.common)?;
    let (root, root_key) = load_root(&a.common)?;
    let lambda = parse_weight(&a.weight, root.rank())?;
    if matches!(name, "canonical" | "decomp" | "klpoly" | "block") {
        require_dominant(&root, &lambda)?;
    }
    let c = &a.common;
    let key = job_key(name, &root_key, c, json!(lambda.0));
    cached(&key, || {
        let fock = fock_space(&root, c)?;
        let body = match name {
            "straighten" => element_output(&fock, &fock.straighten(&lambda), c.format),
            "bar" => element_output(&fock, &fock.bar_generator(&lambda), c.format),
            "canonical" => element_output(&fock, &fock.canonical(&lambda)?, c.format),
            "klpoly" => {
                let model = HeckeFock::new(root.clone(), c.ell)?;
                element_output(&fock, &model.kl_column(&lambda)?, c.format)
            }
            "decomp" => {
                let row = fock.decomposition(&lambda)?;
                match c.format {
                    Format::Json => {
                        let entries: Vec<Value> = row
                            .iter()
                            .rev()
                            .map(|(mu, d)| json!({"weight": mu.0, "coeff": serde_json::to_value(d).expect("poly serializes")}))
                            .collect();
                        pretty(&json!({"weight": lambda.0, "row": entries, "ell": c.ell, "type": root.label()}))
                    }
                    Format::Text => {
                        let rows: Vec<(String, String)> = row.iter().rev().map(|(mu, d)| (ket(mu), d.to_string())).collect();
                        coeff_table(&rows)
                    }
                }
            }
            "block" => {
                let block = fock.block_of(&lambda);
                match c.format {
                    Format::Json => {
                        let ws: Vec<&Vec<i64>> = block.iter().map(|w| &w.0).collect();
                        pretty(&json!({"weight": lambda.0, "block": ws, "ell": c.ell, "type": root.label()}))
                    }
                    Format::Text => block.iter().map(ket).collect::<Vec<_>>().join("\n"),
                }
            }
            _ => unreachable!("dispatch covers every weight command"),
        };
        Ok(Rendered { body, ok: true })
    })
}

fn wedge_command(a: &WedgeArgs) -> Outcome<Rendered> {
    check_common(&a.common)?;
    let c = &a.common;
    match (&a.partition, &a.indices) {
        (Some(p), None) => {
            let part = Partition::new(parse_list("--partition", p)?).map_err(|e| usage("--partition", e))?;
            let slots = a.slots.unwrap_or(part.parts().len());
            let word = part.to_word(slots).map_err(|e| usage("--slots", e))?;
            let maya = part.to_maya();
            let body = match c.format {
                Format::Json => pretty(&json!({"partition": part, "word": word, "maya": maya})),
                Format::Text => format!("partition {:?}\nwedge     {word}\nmaya      {:?}", part.parts(), maya.black),
            };
            Ok(Rendered { body, ok: true })
        }
        (None, Some(ix)) => {
            let raw = parse_list("--indices", ix)?;
            let slots = a.slots.unwrap_or(raw.len());
            if slots != raw.len() {
                return Err(usage("--slots", format!("{} indices given for {slots} slots", raw.len())));
            }
            let strategy = StrategyRegistry::default().build(&c.strategy, c.seed).map_err(|e| usage("--strategy", e))?;
            let space = WedgeSpace::with_strategy(slots, c.ell, strategy);
            let v = space.straighten(&raw)?;
            let body = match c.format {
                Format::Json => {
                    let terms: Vec<Value> = v
                        .iter()
                        .rev()
                        .map(|(w, k)| json!({"word": w, "coeff": serde_json::to_value(k).expect("poly serializes")}))
                        .collect();
                    pretty(&json!({"terms": terms, "ell": c.ell}))
                }
                Format::Text => format_combination(v.iter().rev().map(|(w, k)| (w.to_string(), k))),
            };
            Ok(Rendered { body, ok: true })
        }
        _ => Err(Failure::Usage("wedge needs exactly one of --partition or --indices".into())),
    }
}

fn report_text(r: &Report) -> String {
    let mut lines = vec![format!("checked     {}", r.checked), format!("mismatches  {}", r.mismatches.len())];
    for m in &r.mismatches {
        lines.push(format!("  {} {}", m.kind, Weight(m.weight.clone())));
    }
    lines.join("\n")
}

fn verify_command(a: &VerifyArgs) -> Outcome<Rendered> {
    check_common(&a.common)?;
    let suites = SuiteRegistry::default();
    if suites.get(&a.suite).is_err() {
        return Err(usage("--suite", format!("unknown suite {:?}; known: {}", a.suite, suites.names().join(", "))));
    }
    if a.height < 0 {
        return Err(usage("--height", "must be nonnegative"));
    }
    let c = &a.common;
    let (root, root_key) = if a.suite == "dihedral" && c.type_label.is_none() && c.cartan.is_none() {
        (Arc::new(RootDatum::build("A1")?), json!("A1"))
    } else {
        load_root(c)?
    };
    let key = job_key("verify", &root_key, c, json!({"suite": a.suite, "height": a.height}));
    cached(&key, || {
        let params = SuiteParams { root: root.clone(), ell: c.ell, height: a.height, seed: c.seed };
        let report = suites.run(&a.suite, &params)?;
        let body = match c.format {
            Format::Json => pretty(&report.to_json()),
            Format::Text => report_text(&report),
        };
        Ok(Rendered { body, ok: report.ok() })
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Straighten(a) => weight_command("straighten", a),
        Command::Bar(a) => weight_command("bar", a),
        Command::Canonical(a) => weight_command("canonical", a),
        Command::Decomp(a) => weight_command("decomp", a),
        Command::Klpoly(a) => weight_command("klpoly", a),
        Command::Block(a) => weight_command("block", a),
        Command::Wedge(a) => wedge_command(a),
        Command::Verify(a) => verify_command(a),
    };
    match result {
        Ok(out) => {
            println!("{}", out.body);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
