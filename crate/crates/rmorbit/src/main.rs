//! Command-line front end: batch commands for building constraints, running
//! the verification suites, testing functions, and sweeping parameter grids.
//! JSON is the canonical output; the table renderer reads the same document.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use rmorbit::builder::{arity_required, build_with_provenance, Provenance};
use rmorbit::constraint::{Constraint, FunctionTable};
use rmorbit::derivative::{verify_core, DEFAULT_POINT_BUDGET};
use rmorbit::error::Error;
use rmorbit::gf::{Elem, Field};
use rmorbit::oracle::{
    distance_to_rm, orbit_span_rank, verify_deg_border, DistanceReport, RankStatus,
    DEFAULT_CODEWORD_BUDGET, RANK_DOMAIN_LIMIT,
};
use rmorbit::poly::degree_set;
use rmorbit::tester::{estimate_rejection, exact_rejection, TestReport, DEFAULT_TRANSFORM_BUDGET};

#[derive(Parser)]
#[command(
    name = "rmorbit",
    version,
    about = "Sparse single-orbit constraints and local testers for generalized Reed-Muller codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output format (csv applies to grid only).
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also write the JSON document to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Border,
    Rank,
    Both,
}

#[derive(Args)]
struct FieldArgs {
    /// Field order q = p^s.
    #[arg(long)]
    q: Option<u32>,
    /// Characteristic (give together with --s as an alternative to --q).
    #[arg(long)]
    p: Option<u32>,
    /// Extension degree over the prime field.
    #[arg(long)]
    s: Option<u32>,
}

impl FieldArgs {
    fn field(&self) -> Result<Field, String> {
        match (self.q, self.p, self.s) {
            (Some(q), None, None) => Field::of_order(q).map_err(|e| e.to_string()),
            (None, Some(p), Some(s)) => Field::new(p, s).map_err(|e| e.to_string()),
            (Some(q), Some(p), Some(s)) => {
                let f = Field::new(p, s).map_err(|e| e.to_string())?;
                if f.order() != q {
                    return Err(format!("--q {q} conflicts with p^s = {}", f.order()));
                }
                Ok(f)
            }
            _ => Err("specify --q, or --p together with --s".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the p-variate core constraint and verify its guarantees.
    Core {
        #[command(flatten)]
        field: FieldArgs,
        /// Cap on the q^p point enumeration.
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        budget: u64,
    },
    /// Assemble the constraint for RM[n, d, q] and write it with provenance.
    Build {
        #[command(flatten)]
        field: FieldArgs,
        /// Number of variables (default: the smallest workable arity).
        #[arg(long)]
        n: Option<usize>,
        /// Degree bound of the code.
        #[arg(long)]
        d: u64,
    },
    /// Check a constraint file: monomial sweeps and the orbit-span rank.
    Verify {
        /// Constraint JSON (a build document or a bare constraint).
        #[arg(long)]
        constraint: PathBuf,
        /// Degree bound the constraint is claimed to test.
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = VerifyMode::Both)]
        mode: VerifyMode,
        /// Cap on transform enumeration.
        #[arg(long, default_value_t = DEFAULT_TRANSFORM_BUDGET)]
        budget: u64,
        /// Seed for sampled transform search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the randomized local tester against a function.
    Test {
        /// Constraint JSON (a build document or a bare constraint).
        #[arg(long)]
        constraint: PathBuf,
        /// random-codeword | codeword-plus-noise:RATE | random-function |
        /// monomial:E1,E2,... | table:V1,V2,... | file:PATH
        #[arg(long)]
        function: String,
        /// Degree bound (needed by the codeword generators).
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate all transforms instead of sampling.
        #[arg(long)]
        exact: bool,
        /// Cap on exact transform enumeration.
        #[arg(long, default_value_t = DEFAULT_TRANSFORM_BUDGET)]
        budget: u64,
    },
    /// Sweep (q, d) pairs: query counts against the bound, plus small-case
    /// rank verification where cheap.
    Grid {
        /// Comma-separated field orders, e.g. 2,4,9.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u32>,
        /// Largest degree bound per field.
        #[arg(long, default_value_t = 7)]
        d_max: u64,
    },
}

#[derive(Serialize)]
struct BuildDoc {
    provenance: Provenance,
    constraint: Constraint,
}

#[derive(Serialize)]
struct VerifyDoc {
    rank: Option<rmorbit::oracle::RankCertificate>,
    border: Option<rmorbit::oracle::BorderReport>,
    pass: bool,
}

#[derive(Serialize)]
struct TestDoc {
    report: TestReport,
    distance: Option<DistanceReport>,
}

#[derive(Serialize)]
struct GridRow {
    q: u32,
    d: u64,
    n: usize,
    k: u64,
    block_ks: Vec<u64>,
    bound: f64,
    bound_satisfied: bool,
    /// Known exact query complexity 2^(d+1), present for q = 2 rows.
    reference: Option<u64>,
    /// pass | fail | inconclusive | skipped
    rank_status: String,
    /// Set when this cell could not be computed; the sweep continues.
    error: Option<String>,
}

#[derive(Serialize)]
struct GridDoc {
    rows: Vec<GridRow>,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Core { field, budget } => {
            let field = field.field()?;
            let report = verify_core(&field, *budget).map_err(|e| e.to_string())?;
            let pass = report.pass;
            emit(cli, &report, render_core)?;
            Ok(exit_pass(pass))
        }
        Command::Build { field, n, d } => {
            let field = field.field()?;
            let n = n.unwrap_or_else(|| {
                arity_required(*d, field.order(), field.p(), field.s()) as usize
            });
            let (constraint, provenance) =
                build_with_provenance(&field, n, *d).map_err(|e| e.to_string())?;
            let pass = provenance.bound_satisfied;
            emit(cli, &BuildDoc { provenance, constraint }, render_build)?;
            Ok(exit_pass(pass))
        }
        Command::Verify { constraint, d, mode, budget, seed } => {
            let c = read_constraint(constraint)?;
            let rank = match mode {
                VerifyMode::Rank | VerifyMode::Both => {
                    Some(orbit_span_rank(&c, *d, *budget, *seed).map_err(|e| e.to_string())?)
                }
                VerifyMode::Border => None,
            };
            let border = match mode {
                VerifyMode::Border | VerifyMode::Both => {
                    Some(verify_deg_border(&c, *d, *budget, *seed).map_err(|e| e.to_string())?)
                }
                VerifyMode::Rank => None,
            };
            let pass = rank.as_ref().map_or(true, |r| r.pass)
                && border.as_ref().map_or(true, |b| b.pass);
            emit(cli, &VerifyDoc { rank, border, pass }, render_verify)?;
            Ok(exit_pass(pass))
        }
        Command::Test { constraint, function, d, trials, seed, exact, budget } => {
            let c = read_constraint(constraint)?;
            let (f, kind) = parse_function(function, &c, *d, *seed)?;
            let report = if *exact {
                exact_rejection(&c, &f, *budget).map_err(|e| e.to_string())?
            } else {
                estimate_rejection(&c, &f, *trials, *seed).map_err(|e| e.to_string())?
            };
            let distance = match (&kind, d) {
                (FunctionKind::Noise, Some(d)) => distance_to_rm(&f, *d, DEFAULT_CODEWORD_BUDGET).ok(),
                _ => None,
            };
            let pass = match kind {
                FunctionKind::Codeword => report.rejections == 0,
                _ => true,
            };
            emit(cli, &TestDoc { report, distance }, render_test)?;
            Ok(exit_pass(pass))
        }
        Command::Grid { q, d_max } => {
            let mut rows = Vec::new();
            for &order in q {
                let field = Field::of_order(order).map_err(|e| e.to_string())?;
                for d in 0..=*d_max {
                    rows.push(grid_row(&field, d));
                }
            }
            let pass = rows
                .iter()
                .all(|r| r.bound_satisfied && r.rank_status != "fail" && r.error.is_none());
            emit(cli, &GridDoc { rows, pass }, render_grid)?;
            Ok(exit_pass(pass))
        }
    }
}

fn exit_pass(pass: bool) -> ExitCode {
    ExitCode::from(u8::from(!pass))
}

fn grid_row(field: &Field, d: u64) -> GridRow {
    let q = field.order();
    let n = arity_required(d, q, field.p(), field.s()) as usize;
    let reference = (q == 2).then(|| 1u64 << (d + 1));
    let (constraint, provenance) = match build_with_provenance(field, n, d) {
        Ok(built) => built,
        Err(e) => {
            return GridRow {
                q,
                d,
                n,
                k: 0,
                block_ks: Vec::new(),
                bound: f64::NAN,
                bound_satisfied: false,
                reference,
                rank_status: "skipped".into(),
                error: Some(e.to_string()),
            }
        }
    };
    let transforms = rmorbit::constraint::AffineTransform::count(field, n).unwrap_or(u128::MAX);
    let cheap = transforms <= 4096 && (q as u128).pow(n as u32) <= RANK_DOMAIN_LIMIT as u128;
    let (rank_status, error) = if cheap {
        match orbit_span_rank(&constraint, d, 4096, 0) {
            Ok(cert) => (
                match cert.status {
                    RankStatus::Pass => "pass",
                    RankStatus::Fail => "fail",
                    RankStatus::Inconclusive => "inconclusive",
                }
                .to_string(),
                None,
            ),
            Err(e) => ("skipped".to_string(), Some(e.to_string())),
        }
    } else {
        ("skipped".to_string(), None)
    };
    GridRow {
        q,
        d,
        n,
        k: provenance.k,
        block_ks: provenance.decompositions.iter().map(|b| b.k).collect(),
        bound: provenance.bound,
        bound_satisfied: provenance.bound_satisfied,
        reference,
        rank_status,
        error,
    }
}

fn read_constraint(path: &PathBuf) -> Result<Constraint, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let body = value.get("constraint").cloned().unwrap_or(value);
    serde_json::from_value(body).map_err(|e| format!("{}: {e}", path.display()))
}

enum FunctionKind {
    Codeword,
    Noise,
    Other,
}

fn parse_function(
    spec: &str,
    c: &Constraint,
    d: Option<u64>,
    seed: u64,
) -> Result<(FunctionTable, FunctionKind), String> {
    let field = c.field().clone();
    let n = c.n();
    // generator draws live on a stream no trial index can collide with
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let need_d = || d.ok_or_else(|| "this generator needs --d".to_string());

    if spec == "random-codeword" {
        let f = random_codeword(&mut rng, &field, n, need_d()?);
        return Ok((f, FunctionKind::Codeword));
    }
    if let Some(rate) = spec.strip_prefix("codeword-plus-noise:") {
        let rate: f64 = rate.parse().map_err(|_| format!("bad noise rate {rate:?}"))?;
        if !(0.0..=1.0).contains(&rate) {
            return Err("noise rate must be in [0, 1]".into());
        }
        let mut f = random_codeword(&mut rng, &field, n, need_d()?);
        let q = field.order() as u16;
        for idx in 0..f.len() {
            if rng.gen_bool(rate) {
                let offset = Elem(rng.gen_range(1..q));
                f.set(idx, field.add(f.get(idx), offset));
            }
        }
        return Ok((f, FunctionKind::Noise));
    }
    if spec == "random-function" {
        let mut f = FunctionTable::zero(field.clone(), n).map_err(|e| e.to_string())?;
        let q = field.order() as u16;
        for idx in 0..f.len() {
            f.set(idx, Elem(rng.gen_range(0..q)));
        }
        return Ok((f, FunctionKind::Other));
    }
    if let Some(exps) = spec.strip_prefix("monomial:") {
        let degrees: Vec<u32> = exps
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad exponent {t:?}")))
            .collect::<Result<_, _>>()?;
        let f = FunctionTable::monomial(field, n, &degrees).map_err(|e| e.to_string())?;
        return Ok((f, FunctionKind::Other));
    }
    if let Some(values) = spec.strip_prefix("table:") {
        let codes: Vec<Elem> = values
            .split(',')
            .map(|t| t.trim().parse::<u16>().map(Elem).map_err(|_| format!("bad value {t:?}")))
            .collect::<Result<_, _>>()?;
        let f = FunctionTable::new(field, n, codes).map_err(|e| e.to_string())?;
        return Ok((f, FunctionKind::Other));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let f: FunctionTable = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if f.field() != c.field() || f.n() != c.n() {
            return Err(Error::DomainMismatch.to_string());
        }
        return Ok((f, FunctionKind::Other));
    }
    Err(format!("unknown function spec {spec:?}"))
}

fn random_codeword<R: Rng>(rng: &mut R, field: &Field, n: usize, d: u64) -> FunctionTable {
    let mut table = FunctionTable::zero(field.clone(), n).expect("domain within range");
    let q = field.order() as u16;
    for e in degree_set(n, d, field.order()) {
        let coeff = Elem(rng.gen_range(0..q));
        if coeff.is_zero() {
            continue;
        }
        let mono = FunctionTable::monomial(field.clone(), n, &e).expect("exponents fit arity");
        table = table.add(&mono.scale(coeff)).expect("same domain");
    }
    table
}

fn emit<T: Serialize>(cli: &Cli, doc: &T, render: fn(&Value) -> String) -> Result<(), String> {
    let value = serde_json::to_value(doc).map_err(|e| e.to_string())?;
    let json = format!(
        "{}\n",
        serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?
    );
    if let Some(path) = &cli.out {
        fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Table => println!("{}", render(&value)),
        Format::Csv => {
            if value.get("rows").is_none() {
                return Err("csv format is only available for the grid command".into());
            }
            print!("{}", render_grid_csv(&value));
        }
    }
    Ok(())
}

fn kv_table(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "  {k:<width$}  {v}");
    }
    out.pop();
    out
}

fn pass_line(pass: bool) -> String {
    if pass { "PASS".into() } else { "FAIL".into() }
}

fn render_core(v: &Value) -> String {
    let mut pairs = vec![
        ("field", format!("GF({}) = GF({}^{})", v["q"], v["p"], v["s"])),
        ("k", v["k"].to_string()),
        ("count bounds", format!("[{}, {}]", v["lower_bound"], v["upper_bound"])),
        ("low monomials", format!("{} accepted", v["accept_checks"])),
        (
            "canonical",
            if v["reject_check"].as_bool() == Some(true) { "rejected".into() } else { "NOT rejected".into() },
        ),
        ("result", pass_line(v["pass"].as_bool() == Some(true))),
    ];
    if let Some(w) = v["failure"].as_str() {
        pairs.push(("failure", w.to_string()));
    }
    kv_table(&pairs)
}

fn render_build(v: &Value) -> String {
    let p = &v["provenance"];
    let mut pairs = vec![
        ("q", p["q"].to_string()),
        ("d", p["d"].to_string()),
        ("n", p["n"].to_string()),
        ("border degrees", v_list(&p["b_values"])),
        ("k", p["k"].to_string()),
        ("bound", format!("{:.3}", p["bound"].as_f64().unwrap_or(f64::NAN))),
        ("bound satisfied", p["bound_satisfied"].to_string()),
    ];
    if let Some(blocks) = p["decompositions"].as_array() {
        for b in blocks {
            pairs.push((
                "block",
                format!(
                    "target {} = {} + {}·span, vars {}, k {}",
                    b["target"], b["residue"], b["blocks"], b["variables_needed"], b["k"]
                ),
            ));
        }
    }
    if p["degenerate"].as_bool() == Some(true) {
        pairs.push(("degenerate", "code contains every function; empty constraint".into()));
    }
    kv_table(&pairs)
}

fn render_verify(v: &Value) -> String {
    let mut pairs = Vec::new();
    if let Some(r) = v["rank"].as_object() {
        pairs.push(("dual dimension", r["dual_dim"].to_string()));
        pairs.push(("achieved rank", r["achieved_rank"].to_string()));
        pairs.push(("max row weight", r["max_row_weight"].to_string()));
        pairs.push(("transforms", format!("{} ({})", r["transforms"], if r["exhaustive"].as_bool() == Some(true) { "exhaustive" } else { "sampled" })));
        pairs.push(("rank status", r["status"].as_str().unwrap_or("?").to_string()));
    }
    if let Some(b) = v["border"].as_object() {
        pairs.push(("in-code monomials", format!("{} checked, {} failures", b["deg_checked"], b["deg_failures"].as_array().map_or(0, Vec::len))));
        pairs.push(("border monomials", format!("{} checked, {} uncovered", b["border_checked"], b["uncovered"].as_array().map_or(0, Vec::len))));
    }
    pairs.push(("result", pass_line(v["pass"].as_bool() == Some(true))));
    kv_table(&pairs)
}

fn render_test(v: &Value) -> String {
    let r = &v["report"];
    let mut pairs = vec![
        ("mode", r["mode"].as_str().unwrap_or("?").to_string()),
        ("trials", r["trials"].to_string()),
        ("rejections", r["rejections"].to_string()),
        ("estimate", format!("{:.6}", r["estimate"].as_f64().unwrap_or(f64::NAN))),
        ("seed", r["seed"].to_string()),
    ];
    if let Some(dist) = v["distance"].as_object() {
        pairs.push((
            "distance",
            format!("{}/{} = {:.6}", dist["mismatches"], dist["domain"], dist["distance"].as_f64().unwrap_or(f64::NAN)),
        ));
    }
    kv_table(&pairs)
}

fn v_list(v: &Value) -> String {
    v.as_array()
        .map(|a| a.iter().map(Value::to_string).collect::<Vec<_>>().join(", "))
        .unwrap_or_default()
}

fn render_grid(v: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "  {:>3} {:>4} {:>3} {:>8} {:>14} {:>12} {:>6} {:>9} {:>12}",
        "q", "d", "n", "k", "blocks", "bound", "ok", "exact", "rank"
    );
    for r in v["rows"].as_array().into_iter().flatten() {
        let blocks = r["block_ks"]
            .as_array()
            .map(|a| a.iter().map(Value::to_string).collect::<Vec<_>>().join("+"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "  {:>3} {:>4} {:>3} {:>8} {:>14} {:>12} {:>6} {:>9} {:>12}{}",
            r["q"].to_string(),
            r["d"].to_string(),
            r["n"].to_string(),
            r["k"].to_string(),
            blocks,
            format!("{:.1}", r["bound"].as_f64().unwrap_or(f64::NAN)),
            r["bound_satisfied"].to_string(),
            r["reference"].as_u64().map(|x| x.to_string()).unwrap_or_default(),
            r["rank_status"].as_str().unwrap_or("?"),
            r["error"].as_str().map(|e| format!("  ! {e}")).unwrap_or_default(),
        );
    }
    let _ = write!(out, "  overall: {}", pass_line(v["pass"].as_bool() == Some(true)));
    out
}

fn render_grid_csv(v: &Value) -> String {
    let mut out = String::from("q,d,n,k,blocks,bound,bound_satisfied,reference,rank_status,error\n");
    for r in v["rows"].as_array().into_iter().flatten() {
        let blocks = r["block_ks"]
            .as_array()
            .map(|a| a.iter().map(Value::to_string).collect::<Vec<_>>().join("+"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r["q"],
            r["d"],
            r["n"],
            r["k"],
            blocks,
            r["bound"].as_f64().unwrap_or(f64::NAN),
            r["bound_satisfied"],
            r["reference"].as_u64().map(|x| x.to_string()).unwrap_or_default(),
            r["rank_status"].as_str().unwrap_or("?"),
            r["error"].as_str().unwrap_or(""),
        );
    }
    out
}
