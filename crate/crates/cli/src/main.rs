use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use taut_core::cayley::build_ball;
use taut_core::complexes::{is_acyclic, normally_generates, pi1_presentation, reduced_homology, FlagComplex, OmegaSet};
use taut_core::davis::{semiker_experiment, Instance};
use taut_core::oracle::{BbOracle, PresentationOracle, WordOracle};
use taut_core::presentation::{build_p, build_raag, build_racg, Homomorphism};
use taut_core::schedule::{
    beta_of, choose_c, kernel_length_lower_bound, obstruction_json, predicted_intervals, qi_obstruction, surd_json,
    Constants, Surd,
};
use taut_core::spectrum::{cayley_spectrum, graph_spectrum, k_related, threshold, KRelation, LengthSet, Spectrum};
use taut_core::word_engine::{kernel_shortest_element, verify_claim, Budget, CertCache, Claim, KernelSearch, Status};
use taut_core::{GroupPresentation, SimpleGraph};

const REPORT_VERSION: u32 = 1;
const MAX_INDEX: u32 = 20;

#[derive(Parser)]
#[command(name = "taut", version, about = "Presentations, word problems and taut loop spectra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Enumeration budget, e.g. `cosets:100000,depth:4`
    #[arg(long, global = true, env = "TAUT_BUDGET")]
    budget: Option<Budget>,
    /// Recorded in every report
    #[arg(long, global = true, env = "TAUT_SEED", default_value_t = 0)]
    seed: u64,
    /// Directory for cached coset tables
    #[arg(long, global = true, env = "TAUT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Write output here instead of stdout
    #[arg(long, global = true, env = "TAUT_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a flag complex
    Complex {
        #[command(subcommand)]
        command: ComplexCommand,
    },
    /// Emit a presentation
    Present {
        #[command(subcommand)]
        kind: PresentKind,
        #[arg(long, global = true, value_enum, default_value_t = PresentFormat::Json)]
        format: PresentFormat,
    },
    /// Cayley ball about the identity
    Ball {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = BallFormat::Json)]
        format: BallFormat,
    },
    /// Taut loop length spectrum up to a horizon
    Spectrum {
        /// A finite graph, analysed directly
        #[arg(long, conflicts_with_all = ["group", "bb"])]
        graph: Option<PathBuf>,
        #[command(flatten)]
        source: OptionalGroupSource,
        #[arg(long, env = "TAUT_HORIZON")]
        horizon: usize,
        #[arg(long, value_enum, default_value_t = SpectrumFormat::Json)]
        format: SpectrumFormat,
    },
    /// Decide k-relatedness of two length sets
    Krelated {
        /// Spectrum JSON file or comma-separated list
        first: String,
        /// Spectrum JSON file or comma-separated list
        second: String,
        #[arg(long)]
        k: u64,
        /// Horizon of a list given as the first set
        #[arg(long)]
        horizon_first: Option<u64>,
        /// Horizon of a list given as the second set
        #[arg(long)]
        horizon_second: Option<u64>,
    },
    /// Constants and predicted intervals
    Schedule {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        nmax: u32,
        /// Override the least admissible C
        #[arg(long)]
        c: Option<BigUint>,
        /// Indices F for the obstruction report
        #[arg(long, value_delimiter = ',')]
        f: Option<Vec<u32>>,
        /// Indices F' for the obstruction report
        #[arg(long, value_delimiter = ',')]
        f_prime: Option<Vec<u32>>,
    },
    /// Shortest element of the kernel of P(S) -> P(T)
    KernelSearch {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<i64>,
        #[arg(long)]
        radius: usize,
    },
    /// Kernel transfer experiment between two Davis instances
    Semiker {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Replay every certificate in a report
    VerifyCert { report: PathBuf },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Dimension, homology and simple connectivity
    Analyze {
        complex: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PresentKind {
    /// P(L, Omega, S)
    P {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        s: Vec<i64>,
    },
    /// Right-angled Artin group of a complex
    Raag {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Right-angled Coxeter group of a graph
    Racg {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Semidirect product of a Davis instance
    J {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Args)]
struct GroupSource {
    /// Presentation JSON
    #[arg(long, conflicts_with = "bb", required_unless_present = "bb")]
    group: Option<PathBuf>,
    /// Flag complex whose Bestvina-Brady group is used
    #[arg(long)]
    bb: Option<PathBuf>,
}

#[derive(Args)]
struct OptionalGroupSource {
    /// Presentation JSON
    #[arg(long, conflicts_with = "bb")]
    group: Option<PathBuf>,
    /// Flag complex whose Bestvina-Brady group is used
    #[arg(long)]
    bb: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresentFormat {
    Json,
    Gap,
}

#[derive(Clone, Copy, ValueEnum)]
enum BallFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumFormat {
    Json,
    Csv,
    Chart,
}

/// How a run ended, mapped onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Ok,
    Refuted,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 3,
        }
    }
}

struct Ctx {
    budget: Budget,
    seed: u64,
    cache: Option<CertCache>,
}

impl Ctx {
    /// Wraps a result in the common report envelope.
    fn report(&self, command: &str, result: Value, claims: Vec<Claim>) -> String {
        let doc = json!({
            "version": REPORT_VERSION,
            "command": command,
            "config": { "budget": self.budget.to_string(), "seed": self.seed },
            "result": result,
            "claims": claims,
        });
        pretty(&doc)
    }

    fn presentation_oracle(&self, p: GroupPresentation) -> PresentationOracle {
        let oracle = PresentationOracle::new(p, self.budget);
        match &self.cache {
            Some(c) => oracle.with_cache(c.clone()),
            None => oracle,
        }
    }

    fn oracle(&self, group: Option<&Path>, bb: Option<&Path>) -> Result<Box<dyn WordOracle>> {
        match (group, bb) {
            (Some(g), None) => Ok(Box::new(self.presentation_oracle(GroupPresentation::from_json(&read(g)?)?))),
            (None, Some(c)) => Ok(Box::new(BbOracle::new(load_complex(c)?, &self.budget)?)),
            _ => bail!(Usage("give exactly one of --group and --bb".into())),
        }
    }
}

/// Marks errors that should exit with the usage code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_complex(path: &Path) -> Result<FlagComplex> {
    FlagComplex::from_json(&read(path)?).with_context(|| format!("parsing complex {}", path.display()))
}

fn load_omega(complex: &FlagComplex, path: Option<&Path>) -> Result<OmegaSet> {
    match path {
        Some(p) => OmegaSet::from_json(complex, &read(p)?).with_context(|| format!("parsing loops {}", p.display())),
        None => Ok(OmegaSet::new(Vec::new())),
    }
}

fn status_outcome(s: Status) -> Outcome {
    if s == Status::Unknown {
        Outcome::Inconclusive
    } else {
        Outcome::Ok
    }
}

fn run(cli: Cli) -> Result<(String, Outcome)> {
    let ctx = Ctx {
        budget: cli.global.budget.unwrap_or_default(),
        seed: cli.global.seed,
        cache: cli.global.cache_dir.as_deref().map(CertCache::new).transpose()?,
    };
    match cli.command {
        Command::Complex { command: ComplexCommand::Analyze { complex, omega } } => {
            analyze(&ctx, &complex, omega.as_deref())
        }
        Command::Present { kind, format } => present(&ctx, kind, format),
        Command::Ball { source, radius, format } => {
            let oracle = ctx.oracle(source.group.as_deref(), source.bb.as_deref())?;
            let ball = build_ball(oracle.as_ref(), radius)?;
            let text = match format {
                BallFormat::Json => pretty(&ball.to_json()),
                BallFormat::Dot => ball.to_dot(),
            };
            Ok((text, Outcome::Ok))
        }
        Command::Spectrum { graph, source, horizon, format } => {
            let spectrum = match graph {
                Some(g) => graph_spectrum(&SimpleGraph::from_json(&read(&g)?)?, horizon, &ctx.budget)?,
                None => {
                    let oracle = ctx.oracle(source.group.as_deref(), source.bb.as_deref())?;
                    cayley_spectrum(oracle.as_ref(), horizon, &ctx.budget)?
                }
            };
            let outcome = match spectrum.verify() {
                Err(_) => Outcome::Refuted,
                Ok(()) if spectrum.unknown_lengths().is_empty() => Outcome::Ok,
                Ok(()) => Outcome::Inconclusive,
            };
            let text = match format {
                SpectrumFormat::Json => pretty(&serde_json::to_value(&spectrum)?),
                SpectrumFormat::Csv => spectrum.to_csv(),
                SpectrumFormat::Chart => spectrum.chart(),
            };
            Ok((text, outcome))
        }
        Command::Krelated { first, second, k, horizon_first, horizon_second } => {
            if k == 0 {
                bail!(Usage("k must be positive".into()));
            }
            let a = length_set(&first, horizon_first)?;
            let b = length_set(&second, horizon_second)?;
            let relation = k_related(&a, &b, k);
            let (verdict, outcome) = match &relation {
                KRelation::Related => (json!({ "related": true }), Outcome::Ok),
                KRelation::NotRelated { witness, side } => {
                    (json!({ "related": false, "witness": witness.to_string(), "side": side }), Outcome::Refuted)
                }
                KRelation::UnknownBeyondHorizon { first } => {
                    (json!({ "related": null, "first_unknown": first.to_string() }), Outcome::Inconclusive)
                }
            };
            let result = json!({
                "k": k,
                "threshold": threshold(&BigUint::from(k)).to_string(),
                "first": length_set_json(&a),
                "second": length_set_json(&b),
                "relation": verdict,
            });
            Ok((ctx.report("krelated", result, Vec::new()), outcome))
        }
        Command::Schedule { complex, omega, nmax, c, f, f_prime } => {
            schedule(&ctx, &complex, &omega, nmax, c, f, f_prime)
        }
        Command::KernelSearch { complex, omega, s, t, radius } => {
            kernel_search(&ctx, &complex, omega.as_deref(), s, t, radius)
        }
        Command::Semiker { source, target, max_len } => {
            let s = Instance::from_json(&read(&source)?, &ctx.budget)?;
            let t = Instance::from_json(&read(&target)?, &ctx.budget)?;
            let report = semiker_experiment(&s, &t, max_len)?;
            let outcome = if report.counterexamples > 0 { Outcome::Refuted } else { Outcome::Ok };
            Ok((ctx.report("semiker", serde_json::to_value(&report)?, Vec::new()), outcome))
        }
        Command::VerifyCert { report } => verify(&ctx, &report),
    }
}

fn analyze(ctx: &Ctx, path: &Path, omega: Option<&Path>) -> Result<(String, Outcome)> {
    let complex = load_complex(path)?;
    let graph = complex.graph();
    let omega = load_omega(&complex, omega)?;
    let dimension = complex.dimension();
    let homology = match dimension {
        Some(d) => (0..=d)
            .map(|k| {
                let h = reduced_homology(&complex, k)?;
                Ok(json!({
                    "degree": k,
                    "rank": h.rank,
                    "torsion": h.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                }))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let mut claims = Vec::new();
    let mut outcome = Outcome::Ok;
    let (pi1, generation) = if graph.vertex_count() > 0 && graph.is_connected() {
        let pi1 = pi1_presentation(&complex, 0)?;
        let claim = normally_generates(&complex, &omega, &ctx.budget)?;
        outcome = status_outcome(claim.verdict.status);
        let status = claim.verdict.status;
        claims.push(claim);
        (pi1.to_doc_value(), json!(status))
    } else {
        (Value::Null, Value::Null)
    };
    let result = json!({
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "dimension": dimension,
        "census": complex.census(),
        "euler_characteristic": complex.euler_characteristic(),
        "connected": graph.vertex_count() > 0 && graph.is_connected(),
        "acyclic": is_acyclic(&complex),
        "homology": homology,
        "pi1": pi1,
        "omega_loops": omega.loops.len(),
        "normally_generates": generation,
    });
    Ok((ctx.report("complex analyze", result, claims), outcome))
}

fn present(ctx: &Ctx, kind: PresentKind, format: PresentFormat) -> Result<(String, Outcome)> {
    let p = match kind {
        PresentKind::P { complex, omega, s } => {
            let complex = load_complex(&complex)?;
            let omega = load_omega(&complex, omega.as_deref())?;
            build_p(&complex, &omega, &s.into_iter().collect())?
        }
        PresentKind::Raag { complex } => build_raag(&load_complex(&complex)?),
        PresentKind::Racg { graph } => build_racg(&SimpleGraph::from_json(&read(&graph)?)?),
        PresentKind::J { instance } => Instance::from_json(&read(&instance)?, &ctx.budget)?.j_presentation()?,
    };
    let text = match format {
        PresentFormat::Json => {
            let mut s = p.to_json_pretty();
            s.push('\n');
            s
        }
        PresentFormat::Gap => p.to_gap(),
    };
    Ok((text, Outcome::Ok))
}

fn length_set(arg: &str, horizon: Option<u64>) -> Result<LengthSet> {
    let path = Path::new(arg);
    if path.exists() {
        if horizon.is_some() {
            bail!(Usage("a spectrum file carries its own horizon".into()));
        }
        let spectrum: Spectrum = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {arg}"))?;
        return Ok(spectrum.length_set());
    }
    let elements = arg
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| anyhow!(Usage(format!("not a length: {s}")))))
        .collect::<Result<Vec<_>>>()?;
    Ok(match horizon {
        Some(h) => LengthSet::bounded(elements, h),
        None => LengthSet::unbounded(elements),
    })
}

fn length_set_json(set: &LengthSet) -> Value {
    json!({
        "elements": set.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "horizon": set.horizon.as_ref().map(|h| h.to_string()),
    })
}

fn schedule(
    ctx: &Ctx,
    complex: &Path,
    omega: &Path,
    nmax: u32,
    c: Option<BigUint>,
    f: Option<Vec<u32>>,
    f_prime: Option<Vec<u32>>,
) -> Result<(String, Outcome)> {
    let indices = f.iter().chain(&f_prime).flatten();
    if nmax > MAX_INDEX || indices.clone().any(|&n| n > MAX_INDEX) {
        bail!(Usage(format!("interval indices above {MAX_INDEX} are not supported")));
    }
    let complex = load_complex(complex)?;
    let omega = load_omega(&complex, Some(omega))?;
    let d = complex.dimension().ok_or_else(|| anyhow!(Usage("the complex is empty".into())))? as u32;
    let beta = BigUint::from(beta_of(&omega)?);
    let c = c.unwrap_or_else(|| choose_c(d, &beta));
    let constants = Constants::new(d, beta, c.clone())?;
    let schedule = predicted_intervals(&constants, nmax)?;
    let outcome = if schedule.is_disjoint() { Outcome::Ok } else { Outcome::Refuted };
    let mut result = json!({
        "constants": constants.to_json(),
        "schedule": schedule.to_json(),
        "rendered": schedule.render(),
    });
    if f.is_some() || f_prime.is_some() {
        let f: BTreeSet<u32> = f.unwrap_or_default().into_iter().collect();
        let fp: BTreeSet<u32> = f_prime.unwrap_or_default().into_iter().collect();
        result["obstruction"] = obstruction_json(&qi_obstruction(&f, &fp, &c));
    }
    Ok((ctx.report("schedule", result, Vec::new()), outcome))
}

fn kernel_search(
    ctx: &Ctx,
    complex: &Path,
    omega: Option<&Path>,
    s: Vec<i64>,
    t: Vec<i64>,
    radius: usize,
) -> Result<(String, Outcome)> {
    let complex = load_complex(complex)?;
    let omega = load_omega(&complex, omega)?;
    let s: BTreeSet<i64> = s.into_iter().collect();
    let t: BTreeSet<i64> = t.into_iter().collect();
    let d = complex.dimension().ok_or_else(|| anyhow!(Usage("the complex is empty".into())))? as u32;
    let big = |x: &BTreeSet<i64>| x.iter().map(|&v| BigInt::from(v)).collect::<BTreeSet<_>>();
    let bound = kernel_length_lower_bound(d, &big(&s), &big(&t))?;
    let p_s = build_p(&complex, &omega, &s)?;
    let p_t = build_p(&complex, &omega, &t)?;
    let h = Homomorphism::generator_identity(p_s.clone(), p_t.clone())?;
    let search = kernel_shortest_element(&p_s, &p_t, &h, radius, &ctx.budget)?;
    let (found, claims, outcome) = match search {
        KernelSearch::Found { length, word, in_target, in_source, certified_minimal, checked, unknown } => {
            let below = Surd::integer(length as i64) < bound;
            let found = json!({
                "word": p_s.format_word(&word),
                "length": length,
                "certified_minimal": certified_minimal,
                "checked": checked,
                "unknown": unknown,
                "respects_bound": !below,
            });
            let outcome = if below { Outcome::Refuted } else { Outcome::Ok };
            (found, vec![in_target, in_source], outcome)
        }
        KernelSearch::NotFoundWithinRadius { radius, checked, unknown } => {
            let outcome = if unknown > 0 { Outcome::Inconclusive } else { Outcome::Ok };
            (json!({ "none_within_radius": radius, "checked": checked, "unknown": unknown }), Vec::new(), outcome)
        }
    };
    let result = json!({
        "dimension": d,
        "s": s,
        "t": t,
        "lower_bound": surd_json(&bound),
        "search": found,
    });
    Ok((ctx.report("kernel-search", result, claims), outcome))
}

/// Collects every object shaped like a claim, wherever it sits in the document.
fn collect_claims(v: &Value, out: &mut Vec<Claim>) {
    match v {
        Value::Object(map) => {
            if map.contains_key("presentation") && map.contains_key("subject") && map.contains_key("verdict") {
                if let Ok(c) = serde_json::from_value::<Claim>(v.clone()) {
                    out.push(c);
                    return;
                }
            }
            map.values().for_each(|x| collect_claims(x, out));
        }
        Value::Array(items) => items.iter().for_each(|x| collect_claims(x, out)),
        _ => {}
    }
}

fn verify(ctx: &Ctx, path: &Path) -> Result<(String, Outcome)> {
    let doc: Value = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let mut claims = Vec::new();
    collect_claims(&doc, &mut claims);
    let mut failures = Vec::new();
    let (mut replayed, mut undecided) = (0, 0);
    for (i, c) in claims.iter().enumerate() {
        if c.verdict.status == Status::Unknown {
            undecided += 1;
            continue;
        }
        match verify_claim(c) {
            Ok(()) => replayed += 1,
            Err(e) => failures.push(json!({ "index": i, "error": e.to_string() })),
        }
    }
    let outcome = if failures.is_empty() { Outcome::Ok } else { Outcome::Refuted };
    let result = json!({
        "claims": claims.len(),
        "replayed": replayed,
        "unknown": undecided,
        "failures": failures,
    });
    Ok((ctx.report("verify-cert", result, Vec::new()), outcome))
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<taut_core::Error>() {
        Some(taut_core::Error::OracleInsufficient(_)) => 3,
        Some(taut_core::Error::Certificate(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    match run(cli) {
        Ok((text, outcome)) => {
            let written = match &out {
                Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
