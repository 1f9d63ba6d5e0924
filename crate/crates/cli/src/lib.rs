//! The `senslab` command line.
//!
//! Every command writes one JSON document `{"schema_version", "command",
//! "result"}` to standard output (field reference in `docs/schema.md`).
//! Exit codes: 0 success, 1 a checked inequality or verification failed,
//! 2 malformed input, capacity limit or unmet hypothesis.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use senslab::certgraph::{
    build_graph, build_instance_at_max, classify_components, pigeonhole_bound,
    verify_adjacency_lemma, verify_weight_lemma, MainTheoremReport, SubgraphMode,
    MAX_EXHAUSTIVE_ORDER,
};
use senslab::constructions::{build, claimed_profile, ConstructionSpec};
use senslab::measures::{self, input_measures};
use senslab::search::{self, Constraints, FunctionRecord, SweepMode};
use senslab::witness::{reduce_overlaps, verify_lemma3, witness_sensitive_input};
use senslab::{BooleanFunction, Certificate, Error};

pub const SCHEMA_VERSION: u32 = 1;

/// Subset samples used by `graph` when the instance is too large to check
/// every induced subgraph.
const GRAPH_SAMPLES: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "senslab", version, about = "Boolean function sensitivity and certificate laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    G0,
    OrG0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact s, bs and C for each output value.
    Measure {
        #[arg(long)]
        tt: String,
        #[arg(long)]
        n: usize,
        /// Also list every input with its measures and minimum certificate.
        #[arg(long)]
        per_input: bool,
    },
    /// Generate g0(k) or the OR of m copies of g0(r).
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Measure the generated table and compare with the claimed profile.
        #[arg(long)]
        verify: bool,
    },
    /// Contradiction graph at the first bs0-maximizing 0-input, with the
    /// weight, adjacency and pigeonhole checks.
    Graph {
        #[arg(long)]
        tt: String,
        #[arg(long)]
        n: usize,
    },
    /// Explicit sensitive 0-input from a certificate family.
    Witness {
        #[arg(long)]
        tt: String,
        #[arg(long)]
        n: usize,
        /// One {0,1,*} certificate per line; blank lines and `#` comments are skipped.
        #[arg(long)]
        certs: PathBuf,
    },
    /// Check the lower bounds and the sandwich band over function space.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of standard output; per-function CSV when the
        /// name ends in `.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; never changes the output.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Minimum C1 among functions with the given measures.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s0: Option<u32>,
        #[arg(long)]
        bs0: Option<u32>,
        #[arg(long)]
        s1: Option<u32>,
        #[arg(long = "c1")]
        c1: Option<u32>,
    },
    /// Exact maximum of bs0/(s0 s1).
    Conjecture {
        #[arg(long)]
        n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Measure { .. } => "measure",
            Command::Construct { .. } => "construct",
            Command::Graph { .. } => "graph",
            Command::Witness { .. } => "witness",
            Command::Sweep { .. } => "sweep",
            Command::Search { .. } => "search",
            Command::Conjecture { .. } => "conjecture",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(Error::Internal(_)) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

/// What a command produced: a JSON result or raw bytes for `--out`, and
/// whether every check passed.
struct Outcome {
    result: Value,
    passed: bool,
    file: Option<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    fn of(result: impl Serialize, passed: bool) -> Outcome {
        Outcome {
            result: serde_json::to_value(result).expect("reports serialize"),
            passed,
            file: None,
        }
    }
}

fn parse_function(tt: &str, n: usize) -> Result<BooleanFunction, Failure> {
    let tt = tt.trim();
    let tt = tt.strip_prefix("0x").unwrap_or(tt);
    Ok(BooleanFunction::from_hex(&tt.to_ascii_lowercase(), n)?)
}

/// Reads one certificate per line, skipping blank lines and `#` comments.
pub fn read_certificates(path: &Path, n: usize) -> Result<Vec<Certificate>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let c: Certificate = line
            .parse()
            .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        if c.n() != n {
            return Err(format!(
                "{}:{}: certificate has {} positions, expected {n}",
                path.display(),
                lineno + 1,
                c.n()
            ));
        }
        out.push(c);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    tt_hex: &'a str,
    n: usize,
    s0: Option<u32>,
    s1: Option<u32>,
    bs0: Option<u32>,
    bs1: Option<u32>,
    #[serde(rename = "C0")]
    c0: Option<u32>,
    #[serde(rename = "C1")]
    c1: Option<u32>,
    thm3_slack: Option<String>,
    kk_slack: Option<String>,
}

fn csv_bytes(records: &[FunctionRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        let p = r.profile;
        w.serialize(CsvRow {
            tt_hex: &r.tt_hex,
            n: r.n,
            s0: p.s0,
            s1: p.s1,
            bs0: p.bs0,
            bs1: p.bs1,
            c0: p.c0,
            c1: p.c1,
            thm3_slack: r.thm3_slack.map(|q| q.to_string()),
            kk_slack: r.kk_slack.map(|q| q.to_string()),
        })
        .expect("in-memory CSV");
    }
    w.into_inner().expect("in-memory CSV")
}

fn measure(tt: &str, n: usize, per_input: bool) -> Result<Outcome, Failure> {
    let f = parse_function(tt, n)?;
    let profile = measures::profile(&f)?;
    let check = MainTheoremReport::from_profile(&profile);
    let passed = check.as_ref().is_none_or(|c| c.passed);
    let mut result = json!({
        "n": n,
        "tt_hex": f.to_hex(),
        "profile": profile,
        "main_theorem": check,
    });
    if per_input {
        result["inputs"] = serde_json::to_value(input_measures(&f)?).expect("rows serialize");
    }
    Ok(Outcome::of(result, passed))
}

fn construct(
    family: Family,
    k: Option<usize>,
    m: Option<usize>,
    r: Option<usize>,
    verify: bool,
) -> Result<Outcome, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this family")))
    };
    let spec = match family {
        Family::G0 => ConstructionSpec::G0 { k: need(k, "k")? },
        Family::OrG0 => ConstructionSpec::OrComposedG0 {
            m: need(m, "m")?,
            r: need(r.or(k), "r")?,
        },
    };
    let c = build(&spec)?;
    let claimed = claimed_profile(&spec)?;
    let mut result = json!({
        "spec": spec,
        "n": c.function.n(),
        "tt_hex": c.function.to_hex(),
        "certificates": c.certificates,
        "claimed_profile": claimed,
    });
    let mut passed = true;
    if verify {
        let measured = measures::profile(&c.function)?;
        let mismatches = claimed.mismatches(&measured);
        passed = mismatches.is_empty();
        result["verification"] = json!({
            "measured_profile": measured,
            "mismatches": mismatches,
            "passed": passed,
        });
    }
    Ok(Outcome::of(result, passed))
}

fn graph(tt: &str, n: usize) -> Result<Outcome, Failure> {
    let f = parse_function(tt, n)?;
    let inst = build_instance_at_max(&f)?;
    let s0 = measures::profile(&inst.function)?
        .s0
        .ok_or_else(|| Failure::Lib(Error::Internal("instance has no 0-input".into())))?;
    let g = build_graph(&inst);
    let mode = if g.order() <= MAX_EXHAUSTIVE_ORDER {
        SubgraphMode::AllSubgraphs
    } else {
        SubgraphMode::Sampled {
            samples: GRAPH_SAMPLES,
            seed: 0,
        }
    };
    let weight = verify_weight_lemma(&g, s0, mode)?;
    let adjacency = verify_adjacency_lemma(&g, s0)?;
    let pigeonhole = pigeonhole_bound(&inst);
    let theorem = MainTheoremReport::from_profile(&measures::profile(&f)?);
    let passed = weight.passed && adjacency.passed && theorem.as_ref().is_none_or(|t| t.passed);
    let result = json!({
        "n": n,
        "tt_hex": f.to_hex(),
        "shift": inst.shift,
        "positions": inst.positions,
        "instance_tt_hex": inst.function.to_hex(),
        "instance_s0": s0,
        "k": inst.k(),
        "blocks": inst.blocks,
        "certificates": inst.certificates,
        "weights": g.matrix(),
        "total_weight": g.total_weight(),
        "components": classify_components(&g),
        "weight_lemma": weight,
        "adjacency_lemma": adjacency,
        "pigeonhole": pigeonhole,
        "main_theorem": theorem,
        "passed": passed,
    });
    Ok(Outcome::of(result, passed))
}

fn witness(tt: &str, n: usize, path: &Path) -> Result<Outcome, Failure> {
    let f = parse_function(tt, n)?;
    let certs = read_certificates(path, n).map_err(Failure::Usage)?;
    let has_overlaps = certs
        .iter()
        .enumerate()
        .any(|(i, c)| certs[i + 1..].iter().any(|d| senslab::certgraph::overlaps(c, d) > 0));
    let result = if has_overlaps {
        let reduction = reduce_overlaps(&f, &certs)?;
        let report = verify_lemma3(&f, &certs)?;
        json!({
            "k": certs.len(),
            "t": reduction.t,
            "overlap_positions": reduction.overlap_positions,
            "d": reduction.d,
            "witness": report.witness,
            "sensitive_count": report.sensitive_count,
            "measured_s0": report.measured_s0,
            "passed": report.passed,
        })
    } else {
        let w = witness_sensitive_input(&f, &certs)?;
        let measured_s0 = if n <= measures::MAX_PROFILE_VARS {
            measures::profile(&f)?.s0
        } else {
            None
        };
        let count = w.sensitive_bits.len();
        let passed = count >= certs.len() && measured_s0.is_none_or(|s| s as usize >= certs.len());
        json!({
            "k": certs.len(),
            "t": 0,
            "witness": w,
            "sensitive_count": count,
            "measured_s0": measured_s0,
            "passed": passed,
        })
    };
    let passed = result["passed"].as_bool().unwrap_or(false);
    Ok(Outcome::of(result, passed))
}

fn sweep(n: usize, mode: Mode, samples: u64, seed: u64, out: Option<PathBuf>) -> Result<Outcome, Failure> {
    let mode = match mode {
        Mode::Exhaustive => SweepMode::Exhaustive,
        Mode::Random => SweepMode::Random { samples, seed },
    };
    let records = search::sweep_records(n, mode)?;
    let report = search::summarize(n, mode, &records);
    let passed = report.passed();
    let mut outcome = Outcome::of(&report, passed);
    if let Some(path) = out {
        let bytes = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            csv_bytes(&records)
        } else {
            envelope("sweep", &outcome.result)
        };
        outcome.file = Some((path, bytes));
    }
    Ok(outcome)
}

fn envelope(command: &str, result: &Value) -> Vec<u8> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": result,
    });
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("JSON values serialize");
    bytes.push(b'\n');
    bytes
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Measure { tt, n, per_input } => measure(&tt, n, per_input),
        Command::Construct {
            family,
            k,
            m,
            r,
            verify,
        } => construct(family, k, m, r, verify),
        Command::Graph { tt, n } => graph(&tt, n),
        Command::Witness { tt, n, certs } => witness(&tt, n, &certs),
        Command::Sweep {
            n,
            mode,
            samples,
            seed,
            out,
            jobs,
        } => {
            let work = move || sweep(n, mode, samples, seed, out);
            match jobs {
                None => work(),
                Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()
                    .map_err(|e| Failure::Usage(format!("cannot start {j} workers: {e}")))?
                    .install(work),
            }
        }
        Command::Search { n, s0, bs0, s1, c1 } => {
            let r = search::extremal_search(n, Constraints { s0, bs0, s1, c1 })?;
            Ok(Outcome::of(r, true))
        }
        Command::Conjecture { n } => Ok(Outcome::of(search::conjecture_report(n)?, true)),
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let name = cli.command.name();
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match outcome.file {
                Some((path, bytes)) => fs::write(&path, bytes)
                    .map(|_| {
                        let _ = writeln!(err, "wrote {}", path.display());
                    })
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out
                    .write_all(&envelope(name, &outcome.result))
                    .map_err(|e| format!("cannot write output: {e}")),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: {msg}");
                return 2;
            }
            if outcome.passed {
                0
            } else {
                let _ = writeln!(err, "verification failed; see the report");
                1
            }
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}
