use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use degmix::chain::{sample, Factorize, SampleConfig};
use degmix::decomposition::{
    canonical_decompose, compose, compose_bipartite, compose_directed, factorize_bipartite, psi, BipartiteFactor,
    CanonicalDecomposition, RestrictedSequence, SplittedBipartiteSequence,
};
use degmix::enumeration::{
    count_almost_half_regular, count_almost_half_regular_exhaustive, count_bipartite_graphical, count_composed_class,
    CountReport, Method, DEFAULT_MAX_CENSUS,
};
use degmix::io::{self, Input, SCHEMA_VERSION};
use degmix::space::{
    check_bipartite_composition, check_split_composition, exact_tv, max_chords_from_env, product_eigen_check,
    spectral_report, Problem, RealizationGraph,
};
use degmix::spectra::{component_sequences, dsm_graphical, dsm_sample};
use degmix::{graphicality, Error, ForbiddenSet, Realization, Sequence};

#[derive(Parser)]
#[command(name = "degmix", version, about = "Uniform sampling of graphs with a prescribed degree sequence")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 1 on a negative answer (e.g. not graphical).
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Graphicality test.
    Test {
        /// Sequence file (JSON).
        #[arg(long)]
        seq: PathBuf,
        /// Extra forbidden `[u, w]` pairs (JSON, 1-based).
        #[arg(long)]
        forbidden: Option<PathBuf>,
    },
    /// Canonical decomposition.
    Decompose {
        /// Sequence file (JSON).
        #[arg(long)]
        seq: PathBuf,
        /// Extra forbidden `[u, w]` pairs (JSON, 1-based).
        #[arg(long)]
        forbidden: Option<PathBuf>,
        /// Include the good-pair arithmetic of every peeling step.
        #[arg(long)]
        certificate: bool,
    },
    /// Compose two sequences: split with simple/split, or splitted with
    /// splitted.
    Compose {
        /// Left operand: split or splitted sequence file.
        #[arg(long)]
        left: PathBuf,
        /// Right operand.
        #[arg(long)]
        right: PathBuf,
    },
    /// Draw realizations with the swap chain.
    Sample {
        /// Sequence file (JSON).
        #[arg(long)]
        seq: PathBuf,
        /// Extra forbidden `[u, w]` pairs (JSON, 1-based).
        #[arg(long)]
        forbidden: Option<PathBuf>,
        /// Number of samples.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Steps before the first sample.
        #[arg(long, default_value_t = 1000)]
        burn_in: u64,
        /// Steps between samples.
        #[arg(long, default_value_t = 100)]
        thin: u64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run one chain per canonical component (`auto`) or a single chain (`off`).
        #[arg(long, value_enum, default_value_t = FactorizeArg::Auto)]
        factorize: FactorizeArg,
        /// Independent chains sharing the requested count.
        #[arg(long, default_value_t = 1)]
        chains: usize,
    },
    /// Exhaustive checks on the realization space.
    Verify {
        /// Sequence file (JSON).
        #[arg(long)]
        seq: PathBuf,
        /// Extra forbidden `[u, w]` pairs (JSON, 1-based).
        #[arg(long)]
        forbidden: Option<PathBuf>,
        /// Which check to run.
        #[arg(long, value_enum, default_value_t = Mode::Spectral)]
        mode: Mode,
        /// Chord cap for enumeration (default: DEGMIX_MAX_CHORDS or 24).
        #[arg(long)]
        max_chords: Option<usize>,
        /// Disable C6 moves even when a forbidden 1-factor is present.
        #[arg(long)]
        c4_only: bool,
        /// Steps for `--mode tv`.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Start realization index for `--mode tv`.
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Degree spectra matrices: check graphicality or sample.
    Dsm {
        /// Degree spectra matrix file (JSON).
        #[arg(long)]
        dsm: PathBuf,
        /// Report graphicality (the default action).
        #[arg(long, conflicts_with = "sample")]
        check: bool,
        /// Draw graphs with the given spectra matrix.
        #[arg(long)]
        sample: bool,
        /// Number of samples.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Steps before the first sample.
        #[arg(long, default_value_t = 1000)]
        burn_in: u64,
        /// Steps between samples.
        #[arg(long, default_value_t = 100)]
        thin: u64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Counting of bipartite degree sequences.
    Count {
        /// What to count.
        #[arg(long, value_enum)]
        kind: CountKind,
        /// `m` for `ahr`, `n` for the `n+n` census and composed classes.
        #[arg(long)]
        n: usize,
        /// Block size for `composed` (must divide `n`).
        #[arg(long)]
        block: Option<usize>,
        /// For `ahr`: also run the exhaustive count.
        #[arg(long)]
        exhaustive: bool,
        /// Largest `n` for the bipartite census.
        #[arg(long, default_value_t = DEFAULT_MAX_CENSUS)]
        max_n: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorizeArg {
    Auto,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Product,
    Spectral,
    Connectivity,
    Tv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountKind {
    Ahr,
    Bipartite,
    Composed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Outcome of a subcommand: text or JSON body plus whether the answer was
/// negative.
struct Report {
    text: String,
    json: Value,
    negative: bool,
}

impl Report {
    fn new(command: &str, text: String, mut body: Value) -> Self {
        body["schema"] = json!(SCHEMA_VERSION);
        body["command"] = json!(command);
        Self { text, json: body, negative: false }
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("degmix: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = run(&cli);
    match outcome {
        Ok(report) => {
            let mut body = if cli.global.json { format!("{}\n", report.json) } else { report.text };
            if cli.global.json && matches!(cli.command, Command::Sample { .. } | Command::Dsm { sample: true, .. }) {
                body = report.json["samples"]
                    .as_array()
                    .map(|s| s.iter().map(|v| format!("{v}\n")).collect())
                    .unwrap_or(body);
            }
            if let Err(e) = emit(cli.global.output.as_deref(), &body) {
                eprintln!("degmix: {e}");
                return ExitCode::from(2);
            }
            if report.negative && cli.global.strict {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("degmix: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("degmix: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Test { seq, forbidden } => cmd_test(seq, forbidden.as_deref()),
        Command::Decompose { seq, forbidden, certificate } => cmd_decompose(seq, forbidden.as_deref(), *certificate),
        Command::Compose { left, right } => cmd_compose(left, right),
        Command::Sample { seq, forbidden, count, burn_in, thin, seed, factorize, chains } => {
            let cfg = SampleConfig {
                burn_in: *burn_in,
                thin: *thin,
                count: *count,
                seed: *seed,
                factorize: match factorize {
                    FactorizeArg::Auto => Factorize::Auto,
                    FactorizeArg::Off => Factorize::Off,
                },
                chains: *chains,
            };
            cmd_sample(seq, forbidden.as_deref(), &cfg)
        }
        Command::Verify { seq, forbidden, mode, max_chords, c4_only, steps, start } => {
            let cap = max_chords.unwrap_or_else(max_chords_from_env);
            cmd_verify(seq, forbidden.as_deref(), *mode, cap, *c4_only, *steps, *start)
        }
        Command::Dsm { dsm, check, sample, count, burn_in, thin, seed } => {
            if *check == *sample {
                return Err(Failure::Usage("dsm needs exactly one of --check or --sample".into()));
            }
            let cfg = SampleConfig { burn_in: *burn_in, thin: *thin, count: *count, seed: *seed, ..Default::default() };
            cmd_dsm(dsm, *sample, &cfg)
        }
        Command::Count { kind, n, block, exhaustive, max_n, format } => {
            cmd_count(*kind, *n, *block, *exhaustive, *max_n, *format)
        }
    }
}

fn load_forbidden(path: Option<&Path>) -> Result<Option<ForbiddenSet>, Failure> {
    Ok(path.map(io::read_forbidden).transpose()?)
}

/// Reads any input and views it as a sequence plus extra forbidden pairs.
fn load_sequence(path: &Path, forbidden: Option<&Path>) -> Result<(Sequence, Option<ForbiddenSet>), Failure> {
    let extra = load_forbidden(forbidden)?;
    match io::read_input(path)? {
        Input::Sequence(s) => Ok((s, extra)),
        Input::Split(s) => Ok((Sequence::Simple(degmix::DegreeSequence::new(s.degrees())?), extra)),
        Input::Splitted(r) => {
            let mut f = r.forbidden.clone();
            for (u, w) in extra.iter().flat_map(|e| e.iter()) {
                f.insert(u, w);
            }
            let seq = Sequence::Bipartite(degmix::BipartiteDegreeSequence::new(r.sequence.primary, r.sequence.secondary));
            Ok((seq, Some(f)))
        }
    }
}

fn list(v: &[usize]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn labels(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn cmd_test(seq: &Path, forbidden: Option<&Path>) -> Outcome {
    let (seq, extra) = load_sequence(seq, forbidden)?;
    let empty = ForbiddenSet::new();
    let f = extra.as_ref().unwrap_or(&empty);
    let graphical = match &seq {
        Sequence::Simple(d) => graphicality::erdos_gallai(d.degrees()),
        Sequence::Bipartite(bd) => graphicality::restricted_bipartite_graphical(&bd.u, &bd.w, f),
        Sequence::Directed(dd) => {
            let (bd, diag) = dd.gale_representation();
            let all: ForbiddenSet = diag.iter().chain(f.iter()).collect();
            graphicality::restricted_bipartite_graphical(&bd.u, &bd.w, &all)
        }
    };
    let text = if graphical { "graphical\n" } else { "not graphical\n" }.to_string();
    let mut report = Report::new("test", text, json!({"kind": seq.kind(), "graphical": graphical}));
    report.negative = !graphical;
    Ok(report)
}

fn simple_decomposition_report(d: &degmix::DegreeSequence, dec: &CanonicalDecomposition, certificate: bool) -> (String, Value) {
    let label = |p: &usize| d.order()[*p] + 1;
    let mut text = String::new();
    let mut comps = Vec::new();
    for (i, c) in dec.components.iter().enumerate() {
        let pair = c.good_pair.map(|g| format!(" pair=({},{})", g.p, g.q)).unwrap_or_default();
        text += &format!(
            "component {}: U={} W={}{pair} vertices U{:?} W{:?}\n",
            i + 1,
            list(c.split.u()),
            list(c.split.w()),
            c.u_positions.iter().map(label).collect::<Vec<_>>(),
            c.w_positions.iter().map(label).collect::<Vec<_>>(),
        );
        let mut entry = json!({
            "u": c.split.u(),
            "w": c.split.w(),
            "u_vertices": c.u_positions.iter().map(label).collect::<Vec<_>>(),
            "w_vertices": c.w_positions.iter().map(label).collect::<Vec<_>>(),
            "shift": c.rest_size,
            "good_pair": c.good_pair.map(|g| [g.p, g.q]),
        });
        if certificate {
            if let Some(cert) = &c.certificate {
                text += &format!(
                    "  {} = {}*({}-{}-1) + {}  [{} = {} + {}]\n",
                    cert.head_sum, cert.p, cert.n, cert.q, cert.tail_sum, cert.head_sum, cert.clique_term, cert.tail_sum
                );
                entry["certificate"] = serde_json::to_value(cert).expect("serializable");
            }
        }
        comps.push(entry);
    }
    if let Some(tail) = &dec.tail {
        text += &format!("tail: {} vertices {:?}\n", list(tail), dec.tail_positions.iter().map(label).collect::<Vec<_>>());
    }
    let body = json!({
        "kind": "simple",
        "components": comps,
        "tail": dec.tail.as_ref().map(|t| json!({
            "degrees": t,
            "vertices": dec.tail_positions.iter().map(label).collect::<Vec<_>>(),
        })),
    });
    (text, body)
}

fn bipartite_decomposition_report(kind: &str, factors: &[BipartiteFactor]) -> (String, Value) {
    let mut text = String::new();
    let mut out = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let pair = f.good_pair.map(|g| format!(" pair=({},{})", g.p, g.q)).unwrap_or_default();
        text += &format!(
            "factor {}: primary={} secondary={}{pair} vertices U{:?} W{:?}\n",
            i + 1,
            list(&f.sequence.primary),
            list(&f.sequence.secondary),
            labels(&f.primary_labels),
            labels(&f.secondary_labels),
        );
        out.push(json!({
            "primary": f.sequence.primary,
            "secondary": f.sequence.secondary,
            "primary_vertices": labels(&f.primary_labels),
            "secondary_vertices": labels(&f.secondary_labels),
            "good_pair": f.good_pair.map(|g| [g.p, g.q]),
            "forbidden": io::forbidden_to_pairs(&f.forbidden),
        }));
    }
    (text, json!({"kind": kind, "factors": out}))
}

fn cmd_decompose(seq: &Path, forbidden: Option<&Path>, certificate: bool) -> Outcome {
    let (seq, extra) = load_sequence(seq, forbidden)?;
    let empty = ForbiddenSet::new();
    let f = extra.as_ref().unwrap_or(&empty);
    let (text, body) = match &seq {
        Sequence::Simple(d) => simple_decomposition_report(d, &canonical_decompose(d)?, certificate),
        Sequence::Bipartite(bd) => {
            let sb = SplittedBipartiteSequence::new(bd.u.clone(), bd.w.clone());
            bipartite_decomposition_report("bipartite", &factorize_bipartite(&sb, f)?)
        }
        Sequence::Directed(dd) => {
            let (bd, diag) = dd.gale_representation();
            let all: ForbiddenSet = diag.iter().chain(f.iter()).collect();
            let sb = SplittedBipartiteSequence::new(bd.u, bd.w);
            bipartite_decomposition_report("directed", &factorize_bipartite(&sb, &all)?)
        }
    };
    Ok(Report::new("decompose", text, body))
}

fn cmd_compose(left: &Path, right: &Path) -> Outcome {
    let l = io::read_input(left)?;
    let r = io::read_input(right)?;
    let simple_of = |input: &Input| -> Option<Vec<usize>> {
        match input {
            Input::Sequence(Sequence::Simple(d)) => Some(d.degrees().to_vec()),
            Input::Split(s) => Some(s.degrees()),
            _ => None,
        }
    };
    let (text, body) = match (&l, &r) {
        (Input::Split(s), other) if simple_of(other).is_some() => {
            let d = compose(s, &simple_of(other).expect("checked"));
            (format!("{}\n", list(&d)), json!({"kind": "simple", "degrees": d}))
        }
        (Input::Splitted(a), Input::Splitted(b)) => {
            let c = if a.forbidden.is_empty() && b.forbidden.is_empty() {
                RestrictedSequence::new(compose_bipartite(&a.sequence, &b.sequence), ForbiddenSet::new())?
            } else {
                compose_directed(a, b)?
            };
            let mut text = format!("primary={} secondary={}\n", list(&c.sequence.primary), list(&c.sequence.secondary));
            if !c.forbidden.is_empty() {
                text += &format!("forbidden={:?}\n", io::forbidden_to_pairs(&c.forbidden));
            }
            let body = json!({
                "kind": "splitted",
                "primary": c.sequence.primary,
                "secondary": c.sequence.secondary,
                "forbidden": io::forbidden_to_pairs(&c.forbidden),
            });
            (text, body)
        }
        _ => {
            return Err(Failure::Usage(
                "compose takes a split left operand with a simple or split right operand, or two splitted operands".into(),
            ))
        }
    };
    Ok(Report::new("compose", text, body))
}

fn realization_json(r: &Realization) -> Value {
    json!({"layout": io::layout_name(r.layout()), "edges": io::edge_pairs(r)})
}

fn samples_report(command: &str, samples: &[Realization]) -> Report {
    let text = samples.iter().map(io::edges_text).collect::<Vec<_>>().join("\n");
    let lines: Vec<Value> = samples
        .iter()
        .map(|r| {
            let mut v = realization_json(r);
            v["schema"] = json!(SCHEMA_VERSION);
            v
        })
        .collect();
    Report::new(command, text, json!({"samples": lines}))
}

fn cmd_sample(seq: &Path, forbidden: Option<&Path>, cfg: &SampleConfig) -> Outcome {
    let (seq, extra) = load_sequence(seq, forbidden)?;
    let samples = sample(&seq, extra.as_ref(), cfg)?;
    Ok(samples_report("sample", &samples))
}

/// Largest product state space for which the dense eigenvalue check runs.
const PRODUCT_EIGEN_LIMIT: usize = 1500;

fn cmd_verify(seq: &Path, forbidden: Option<&Path>, mode: Mode, cap: usize, c4_only: bool, steps: usize, start: usize) -> Outcome {
    let (seq, extra) = load_sequence(seq, forbidden)?;
    let c6 = c4_only.then_some(false);
    match mode {
        Mode::Connectivity => {
            let rg = RealizationGraph::for_sequence(&seq, extra.as_ref(), c6, cap)?;
            let components = rg.components();
            let text = format!(
                "realizations: {}\nswap edges: {}\ncomponents: {}\n{}\n",
                rg.len(),
                rg.edge_count(),
                components,
                if components <= 1 { "connected" } else { "disconnected" }
            );
            let mut report = Report::new(
                "verify",
                text,
                json!({"mode": "connectivity", "realizations": rg.len(), "swap_edges": rg.edge_count(),
                       "components": components, "c6": rg.kernel.c6}),
            );
            report.negative = components > 1;
            Ok(report)
        }
        Mode::Spectral => {
            let rg = RealizationGraph::for_sequence(&seq, extra.as_ref(), c6, cap)?;
            let s = spectral_report(&rg)?;
            let text = format!(
                "realizations: {}\nlambda2: {:.12}\nrelaxation time: {:.6}\nconductance: {}\ncheeger: {}\n",
                s.realization_count,
                s.lambda2,
                s.relaxation_time,
                s.conductance.map(|c| format!("{c:.12}")).unwrap_or_else(|| "not computed (too many states)".into()),
                if s.cheeger_holds() { "holds" } else { "VIOLATED" },
            );
            let mut body = serde_json::to_value(&s).expect("serializable");
            body["mode"] = json!("spectral");
            body["cheeger_holds"] = json!(s.cheeger_holds());
            Ok(Report::new("verify", text, body))
        }
        Mode::Tv => {
            let rg = RealizationGraph::for_sequence(&seq, extra.as_ref(), c6, cap)?;
            if start >= rg.len() {
                return Err(Failure::Usage(format!("--start {start} but only {} realizations", rg.len())));
            }
            let tv = exact_tv(&rg, start, steps);
            let text = format!("realizations: {}\nsteps: {steps}\ntv: {tv:.3e}\n", rg.len());
            Ok(Report::new("verify", text, json!({"mode": "tv", "realizations": rg.len(), "steps": steps, "tv": tv})))
        }
        Mode::Product => verify_product(&seq, extra.as_ref(), cap),
    }
}

/// Splits the sequence into its first canonical factor and the rest, checks
/// the Cartesian product structure, and compares `λ₂` of the product of
/// all factor chains with the product formula.
fn verify_product(seq: &Sequence, extra: Option<&ForbiddenSet>, cap: usize) -> Outcome {
    let mut factor_problems: Vec<Problem> = Vec::new();
    let witness = match seq {
        Sequence::Simple(d) => {
            let dec = canonical_decompose(d)?;
            for c in &dec.components {
                let sb = psi(&c.split);
                factor_problems.push(Problem::bipartite(&sb.primary, &sb.secondary, ForbiddenSet::new()));
            }
            if let Some(t) = &dec.tail {
                factor_problems.push(Problem::simple(t));
            }
            let Some(first) = dec.components.first() else {
                return Err(Failure::Domain(Error::ProductMismatch("sequence is indecomposable".into())));
            };
            let rest = compose_rest(&dec);
            check_split_composition(&first.split, &rest, cap)?
        }
        Sequence::Bipartite(_) | Sequence::Directed(_) => {
            let problem = Problem::from_sequence(seq, extra);
            let Problem { layout: degmix::Layout::Bipartite { nu, .. }, degrees, forbidden } = problem else {
                unreachable!("bipartite problem")
            };
            let sb = SplittedBipartiteSequence::new(degrees[..nu].to_vec(), degrees[nu..].to_vec());
            let factors = factorize_bipartite(&sb, &forbidden)?;
            for f in &factors {
                factor_problems.push(Problem::bipartite(&f.sequence.primary, &f.sequence.secondary, f.forbidden.clone()));
            }
            if factors.len() < 2 {
                return Err(Failure::Domain(Error::ProductMismatch("sequence is indecomposable".into())));
            }
            let restricted: Vec<RestrictedSequence> = factors
                .iter()
                .map(|f| RestrictedSequence::new(f.sequence.clone(), f.forbidden.clone()))
                .collect::<Result<_, _>>()?;
            let mut rest = restricted[restricted.len() - 1].clone();
            for r in restricted[1..restricted.len() - 1].iter().rev() {
                rest = compose_directed(r, &rest)?;
            }
            check_bipartite_composition(&restricted[0], &rest, cap)?
        }
    };
    let mut matrices = Vec::new();
    for p in &factor_problems {
        matrices.push(RealizationGraph::build(p, p.default_kernel(), cap)?.transition_matrix());
    }
    let states: usize = matrices.iter().map(|m| m.nrows()).product();
    let eigen = (states <= PRODUCT_EIGEN_LIMIT && matrices.iter().any(|m| m.nrows() > 1)).then(|| product_eigen_check(&matrices));
    let mut text = format!(
        "composed realizations: {} = {:?}\ncomposed swap edges: {}\nfactor swap edges: {:?}\ncartesian product: ok\n",
        witness.composed_vertices, witness.factor_vertices, witness.composed_edges, witness.factor_edges
    );
    match &eigen {
        Some(e) => {
            text += &format!(
                "product lambda2: {:.12}\npredicted: {:.12}\nerror: {:.3e}\n",
                e.product_lambda2,
                e.predicted,
                e.error()
            )
        }
        None => text += "product lambda2: skipped\n",
    }
    let body = json!({"mode": "product", "witness": witness, "eigen": eigen, "factor_count": factor_problems.len()});
    Ok(Report::new("verify", text, body))
}

fn compose_rest(dec: &CanonicalDecomposition) -> Vec<usize> {
    let rest = CanonicalDecomposition {
        n: dec.n - dec.components[0].split.len(),
        components: dec.components[1..].to_vec(),
        tail: dec.tail.clone(),
        tail_positions: Vec::new(),
    };
    rest.recompose()
}

fn cmd_dsm(path: &Path, do_sample: bool, cfg: &SampleConfig) -> Outcome {
    let m = io::read_dsm(path)?;
    if do_sample {
        let samples = dsm_sample(&m, cfg)?;
        return Ok(samples_report("dsm", &samples));
    }
    let graphical = dsm_graphical(&m);
    let components = component_sequences(&m).ok();
    let text = format!(
        "{}\ncomponents: {}\n",
        if graphical { "graphical" } else { "not graphical" },
        components.as_ref().map(|c| c.len().to_string()).unwrap_or_else(|| "inconsistent matrix".into())
    );
    let mut report = Report::new(
        "dsm",
        text,
        json!({"graphical": graphical, "components": components, "joint_degree_matrix": components.as_ref().map(|_| {
            m.joint_degree_matrix().into_iter().map(|((i, j), c)| json!([i, j, c])).collect::<Vec<_>>()
        })}),
    );
    report.negative = !graphical;
    Ok(report)
}

fn cmd_count(kind: CountKind, n: usize, block: Option<usize>, exhaustive: bool, max_n: usize, format: Format) -> Outcome {
    let mut reports = Vec::new();
    match kind {
        CountKind::Ahr => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            reports.push(CountReport { kind: "ahr".into(), parameter: n, count: count_almost_half_regular(n), method: Method::Formula });
            if exhaustive {
                if n > max_n {
                    return Err(Failure::Domain(Error::TooLarge { chords: n * n, cap: max_n * max_n }));
                }
                reports.push(CountReport {
                    kind: "ahr".into(),
                    parameter: n,
                    count: count_almost_half_regular_exhaustive(n),
                    method: Method::Exhaustive,
                });
            }
        }
        CountKind::Bipartite => reports.push(CountReport {
            kind: "bipartite".into(),
            parameter: n,
            count: count_bipartite_graphical(n, max_n)?,
            method: Method::Exhaustive,
        }),
        CountKind::Composed => {
            let block = block.ok_or_else(|| Failure::Usage("--kind composed needs --block".into()))?;
            reports.push(CountReport {
                kind: "composed".into(),
                parameter: n,
                count: count_composed_class(n, block, max_n)?,
                method: Method::Formula,
            });
        }
    }
    let method = |m: Method| match m {
        Method::Formula => "formula",
        Method::Exhaustive => "exhaustive",
    };
    let text = match format {
        Format::Text => reports.iter().map(|r| format!("{} ({})\n", r.count, method(r.method))).collect(),
        Format::Csv => std::iter::once("kind,n,count,method\n".to_string())
            .chain(reports.iter().map(|r| format!("{},{},{},{}\n", r.kind, r.parameter, r.count, method(r.method))))
            .collect(),
        Format::Json => format!("{}\n", serde_json::to_string(&reports).expect("serializable")),
    };
    Ok(Report::new("count", text, json!({"counts": reports})))
}
