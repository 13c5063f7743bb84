//! Command-line front end: the hypergraph text format, the report document
//! and the `propb` subcommands.
//!
//! Exit codes: 0 success, 1 failed check or I/O error, 2 parse or usage
//! error, 3 budget exceeded.

pub mod format;
pub mod report;

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::{self, Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use propb_core::coloring::{minimal_noncolorable_core, DEFAULT_VERTEX_BUDGET};
use propb_core::search::{
    graph_enumeration_cost, verify_bound_sampled, verify_fixture_suite, verify_graph_level, DEFAULT_GRAPH_BUDGET,
    MAX_GRAPH_VERTICES,
};
use propb_core::separation::{separation_histogram_exhaustive, ORDERING_ENUMERATION_LIMIT};
use propb_core::{
    analyze, bollobas_family, bollobas_verdict, bound, build_m, complete_hypergraph, fano_plane, m2,
    monte_carlo_separation, pad, pluhar_color, random_hypergraph, random_restart_color, seymour_check,
    BigRational, Error as CoreError, Hypergraph, Verdict, VertexOrdering,
};
use thiserror::Error;

use crate::format::ParseError;
use crate::report::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("cannot read {path}: {source}")]
    Input { path: String, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Output { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::BudgetExceeded(_) => 3,
                CoreError::NonUniformEdge { .. }
                | CoreError::VertexOutOfRange { .. }
                | CoreError::InvalidParameter(_)
                | CoreError::InsufficientVertices { .. }
                | CoreError::TooManyEdges { .. }
                | CoreError::InvalidOrdering(_) => 2,
                _ => 1,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "propb", version, about = "Property B analysis of n-uniform hypergraphs")]
pub struct Cli {
    /// Worker threads for parallel library code (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave the timestamp out so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// m2, bound, Seymour check, colorability, clique and set-pair analysis.
    Analyze(AnalyzeArgs),
    /// Greedy coloring along a given ordering, or random restarts.
    Color(ColorArgs),
    /// Monte Carlo separation statistics.
    Mc(McArgs),
    /// Exact separation statistics over every vertex ordering.
    Enum(EnumArgs),
    /// Search small hypergraphs for counterexamples to the m2 bound.
    Verify(VerifyArgs),
    /// Write a generated hypergraph file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Hypergraph file, or `-` for stdin.
    pub input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub io: Input,
    /// Most covered vertices the exhaustive colorability search will take on.
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
    /// Exit 3 when colorability is left undetermined.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    #[command(flatten)]
    pub io: Input,
    /// Comma-separated vertex ids, first processed first.
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub io: Input,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    #[command(flatten)]
    pub io: Input,
    /// Largest vertex count whose p! orderings will be listed.
    #[arg(long, default_value_t = ORDERING_ENUMERATION_LIMIT)]
    pub max_p: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Uniformity. n = 2 is enumerated exhaustively, larger n is sampled.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 6)]
    pub max_p: usize,
    /// Append records and per-level summaries here as JSON lines. Completed
    /// levels already in the file are skipped.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Most labeled graphs an exhaustive run may visit.
    #[arg(long, default_value_t = DEFAULT_GRAPH_BUDGET)]
    pub budget: u64,
    /// Random instances drawn when sampling.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run the named fixture suite for this n instead.
    #[arg(long)]
    pub fixtures: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Complete n-graph on 2n-1 vertices.
    Clique,
    /// The clique plus isolated vertices and disjoint edges.
    Padded,
    /// The seven lines of the Fano plane.
    Fano,
    /// m edges drawn uniformly without replacement.
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub extra_vertices: usize,
    #[arg(long, default_value_t = 0)]
    pub extra_edges: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a successful command prints and the code it exits with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(cli, a),
        Command::Color(a) => cmd_color(cli, a),
        Command::Mc(a) => cmd_mc(cli, a),
        Command::Enum(a) => cmd_enum(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Gen(a) => cmd_gen(a),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}

fn read_input(path: &Path) -> Result<(Hypergraph, String), CliError> {
    let name = path.display().to_string();
    let bytes = if name == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|source| CliError::Input { path: name.clone(), source })?;
        buf
    } else {
        fs::read(path).map_err(|source| CliError::Input { path: name.clone(), source })?
    };
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Parse {
        path: name.clone(),
        source: ParseError {
            line: 1,
            message: "input is not UTF-8".into(),
        },
    })?;
    let h = format::parse(&text).map_err(|source| CliError::Parse { path: name, source })?;
    Ok((h, digest(&bytes)))
}

fn new_document(cli: &Cli, command: &str) -> ReportDocument {
    let mut doc = ReportDocument::new(command);
    if !cli.deterministic {
        doc.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }
    doc
}

fn emit(cli: &Cli, doc: &ReportDocument, out: Option<&Path>, exit_code: i32) -> Result<Outcome, CliError> {
    let body = if cli.json { doc.to_json() } else { doc.to_text() };
    match out {
        Some(path) => {
            fs::write(path, &body).map_err(|source| CliError::Output {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Outcome { stdout: String::new(), exit_code })
        }
        None => Ok(Outcome { stdout: body, exit_code }),
    }
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let (h, input_digest) = read_input(&args.io.input)?;
    let report = analyze(&h, args.budget);
    let seymour_core_ok = (report.colorable == Verdict::No)
        .then(|| minimal_noncolorable_core(&h, args.budget))
        .flatten()
        .map(|core| seymour_check(&core));

    let selection = build_m(&h);
    let family = bollobas_family(&h, &selection);
    let bollobas = bollobas_verdict(&family).ok().map(|v| BollobasDoc::new(family.len(), &v));

    let mut doc = new_document(cli, "analyze");
    doc.input_digest = Some(input_digest);
    doc.hypergraph = Some((&h).into());
    doc.analysis = Some(AnalysisDoc {
        m2: report.m2,
        bound: report.bound.to_string(),
        meets_bound_exactly: report.meets_bound_exactly,
        seymour_ok: report.seymour_ok,
        seymour_core_ok,
        colorable: report.colorable.to_string(),
        vertex_budget: args.budget,
        clique_witness: report.clique_witness,
    });
    doc.bollobas = bollobas;
    let code = if args.strict && report.colorable == Verdict::Undetermined { 3 } else { 0 };
    emit(cli, &doc, args.io.out.as_deref(), code)
}

fn parse_order(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("--order: `{t}` is not a vertex id")))
        })
        .collect()
}

fn cmd_color(cli: &Cli, args: &ColorArgs) -> Result<Outcome, CliError> {
    let (h, input_digest) = read_input(&args.io.input)?;
    let coloring = match &args.order {
        Some(text) => {
            let pi = VertexOrdering::from_sequence(parse_order(text)?)?;
            let outcome = pluhar_color(&h, &pi)?;
            let c = &outcome.coloring;
            ColoringDoc {
                mode: "order".into(),
                ordering: Some(pi.sequence().to_vec()),
                colors: Some(color_names(&c.colors)),
                proper: Some(c.proper),
                violating_edge: c.violating_edge.map(|e| h.edge(e).to_vec()),
                witness: outcome.separated_witness.map(|w| PairDoc {
                    first: h.edge(w.first).to_vec(),
                    second: h.edge(w.second).to_vec(),
                    meet: w.meet,
                }),
                trials: None,
                seed: None,
                exhausted: None,
            }
        }
        None => {
            let found = random_restart_color(&h, args.trials, args.seed);
            ColoringDoc {
                mode: "random_restart".into(),
                ordering: found.as_ref().map(|(pi, _)| pi.sequence().to_vec()),
                colors: found.as_ref().map(|(_, c)| color_names(&c.colors)),
                proper: found.as_ref().map(|(_, c)| c.proper),
                violating_edge: None,
                witness: None,
                trials: Some(args.trials),
                seed: Some(args.seed),
                exhausted: Some(found.is_none()),
            }
        }
    };
    let mut doc = new_document(cli, "color");
    doc.input_digest = Some(input_digest);
    doc.hypergraph = Some((&h).into());
    doc.coloring = Some(coloring);
    emit(cli, &doc, args.io.out.as_deref(), 0)
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(num.into(), den.max(1).into())
}

fn separation_doc(
    h: &Hypergraph,
    method: &str,
    orderings: u64,
    seed: Option<u64>,
    histogram: &std::collections::BTreeMap<usize, u64>,
) -> SeparationDoc {
    let m2 = m2(h);
    let b = bound(h.n());
    let expected = BigRational::new(m2.into(), b.clone().into());
    let sum: u64 = histogram.iter().map(|(&k, &f)| k as u64 * f).sum();
    let mean = ratio(sum, orderings);
    SeparationDoc {
        method: method.into(),
        orderings,
        seed,
        m2,
        bound: b.to_string(),
        expected_mean: (&expected).into(),
        mean: (&mean).into(),
        mean_equals_expected: mean == expected,
        success_fraction: (&ratio(histogram.get(&0).copied().unwrap_or(0), orderings)).into(),
        histogram: histogram
            .iter()
            .map(|(&separated, &orderings)| HistogramBin { separated, orderings })
            .collect(),
        estimates: None,
    }
}

fn cmd_mc(cli: &Cli, args: &McArgs) -> Result<Outcome, CliError> {
    let (h, input_digest) = read_input(&args.io.input)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let stats = monte_carlo_separation(&h, args.trials, args.seed);
    let mut sep = separation_doc(&h, "monte_carlo", stats.trials, Some(args.seed), &stats.histogram);
    sep.estimates = Some(EstimatesDoc {
        mean_separated: stats.mean_separated,
        success_rate: stats.success_rate,
        sigma_mean: stats.sigma_mean,
        deviation_sigmas: stats.deviation_sigmas(),
    });
    let mut doc = new_document(cli, "mc");
    doc.input_digest = Some(input_digest);
    doc.hypergraph = Some((&h).into());
    doc.separation = Some(sep);
    emit(cli, &doc, args.io.out.as_deref(), 0)
}

fn cmd_enum(cli: &Cli, args: &EnumArgs) -> Result<Outcome, CliError> {
    let (h, input_digest) = read_input(&args.io.input)?;
    if h.p() > args.max_p {
        return Err(CoreError::BudgetExceeded(format!(
            "{}! orderings requested, limit is {}!",
            h.p(),
            args.max_p
        ))
        .into());
    }
    let (total, histogram) = separation_histogram_exhaustive(&h);
    let mut doc = new_document(cli, "enum");
    doc.input_digest = Some(input_digest);
    doc.hypergraph = Some((&h).into());
    doc.separation = Some(separation_doc(&h, "enumeration", total, None, &histogram));
    emit(cli, &doc, args.io.out.as_deref(), 0)
}

fn cmd_gen(args: &GenArgs) -> Result<Outcome, CliError> {
    let n = args.n;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let h = match args.kind {
        GenKind::Clique => complete_hypergraph(n),
        GenKind::Padded => pad(&complete_hypergraph(n), args.extra_vertices, args.extra_edges)?,
        GenKind::Fano => fano_plane(),
        GenKind::Random => {
            let p = args.p.ok_or_else(|| CliError::Usage("--kind random needs --p".into()))?;
            let m = args.m.ok_or_else(|| CliError::Usage("--kind random needs --m".into()))?;
            random_hypergraph(n, p, m, args.seed)?
        }
    };
    let text = format::render(&h);
    match &args.out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Output {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Outcome { stdout: String::new(), exit_code: 0 })
        }
        None => Ok(Outcome { stdout: text, exit_code: 0 }),
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let mut doc = new_document(cli, "verify");
    let search = if args.fixtures {
        verify_fixtures(args)?
    } else if args.n == 2 {
        verify_exhaustive(args)?
    } else {
        verify_sampled(args)?
    };
    let failed = search.counterexample_count > 0;
    doc.search = Some(search);
    emit(cli, &doc, None, if failed { 1 } else { 0 })
}

fn verify_fixtures(args: &VerifyArgs) -> Result<SearchDoc, CliError> {
    let report = verify_fixture_suite(args.n)?;
    Ok(SearchDoc {
        n: args.n,
        method: "fixtures".into(),
        max_p: None,
        samples: None,
        seed: None,
        levels: vec![],
        totals: StatsDoc::default(),
        counterexample_count: 0,
        resumed_levels: vec![],
        records_file: None,
        records: None,
        fixtures: Some(report.results.iter().map(Into::into).collect()),
    })
}

/// Completed levels in an existing record file. Anything after the last
/// level marker is the tail of an interrupted run and is cut off.
fn load_stream(path: &Path, n: usize, method: &str) -> Result<Vec<LevelDoc>, CliError> {
    let name = path.display().to_string();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(vec![]),
        Err(source) => return Err(CliError::Input { path: name, source }),
    };
    let mut levels = Vec::new();
    let mut complete_len = 0;
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        offset += line.len();
        if !line.ends_with('\n') {
            break;
        }
        let parsed: StreamLine = serde_json::from_str(line).map_err(|e| CliError::Parse {
            path: name.clone(),
            source: ParseError {
                line: i + 1,
                message: e.to_string(),
            },
        })?;
        if let StreamLine::PDone { n: ln, method: lm, level } = parsed {
            if ln != n || lm != method {
                return Err(CliError::Usage(format!(
                    "{name} holds a {lm} run for n = {ln}; use a fresh --out"
                )));
            }
            levels.push(level);
            complete_len = offset;
        }
    }
    if complete_len < text.len() {
        let file = OpenOptions::new()
            .write(true)
            .open(path)
            .map_err(|source| CliError::Output { path: name.clone(), source })?;
        file.set_len(complete_len as u64)
            .map_err(|source| CliError::Output { path: name, source })?;
    }
    Ok(levels)
}

fn append_level(path: &Path, n: usize, method: &str, records: &[RecordDoc], level: &LevelDoc) -> Result<(), CliError> {
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(&StreamLine::Record(r.clone())).expect("record serializes"));
        buf.push('\n');
    }
    let done = StreamLine::PDone {
        n,
        method: method.into(),
        level: level.clone(),
    };
    buf.push_str(&serde_json::to_string(&done).expect("level serializes"));
    buf.push('\n');
    let name = path.display().to_string();
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| CliError::Output { path: name.clone(), source })?;
    file.write_all(buf.as_bytes())
        .and_then(|_| file.sync_data())
        .map_err(|source| CliError::Output { path: name, source })
}

fn summarize(
    args: &VerifyArgs,
    method: &str,
    levels: Vec<LevelDoc>,
    resumed_levels: Vec<usize>,
    records: Option<Vec<RecordDoc>>,
) -> SearchDoc {
    let mut totals = StatsDoc::default();
    for l in &levels {
        totals.add(&l.stats);
    }
    SearchDoc {
        n: args.n,
        method: method.into(),
        max_p: Some(args.max_p),
        samples: (method == "sampled").then_some(args.samples),
        seed: (method == "sampled").then_some(args.seed),
        counterexample_count: levels.iter().map(|l| l.counterexamples.len()).sum(),
        levels,
        totals,
        resumed_levels,
        records_file: args.out.as_ref().map(|p| p.display().to_string()),
        records,
        fixtures: None,
    }
}

fn verify_exhaustive(args: &VerifyArgs) -> Result<SearchDoc, CliError> {
    const METHOD: &str = "exhaustive";
    if args.max_p == 0 {
        return Err(CliError::Usage("--max-p must be at least 1".into()));
    }
    if args.max_p > MAX_GRAPH_VERTICES {
        return Err(CoreError::BudgetExceeded(format!(
            "graph enumeration supports at most {MAX_GRAPH_VERTICES} vertices"
        ))
        .into());
    }
    let previous = match &args.out {
        Some(path) => load_stream(path, args.n, METHOD)?,
        None => vec![],
    };
    let done: BTreeSet<usize> = previous.iter().map(|l| l.p).collect();
    let pending: Vec<usize> = (1..=args.max_p).filter(|p| !done.contains(p)).collect();
    let cost: u64 = pending
        .iter()
        .map(|&p| graph_enumeration_cost(p) - graph_enumeration_cost(p - 1))
        .sum();
    if cost > args.budget {
        return Err(CoreError::BudgetExceeded(format!(
            "{cost} labeled graphs still to test exceed the budget of {}",
            args.budget
        ))
        .into());
    }

    let mut levels: Vec<LevelDoc> = previous.into_iter().filter(|l| l.p <= args.max_p).collect();
    let resumed: Vec<usize> = levels.iter().map(|l| l.p).collect();
    let mut inline = args.out.is_none().then(Vec::new);
    for p in pending {
        let result = verify_graph_level(p)?;
        let level = LevelDoc::from(&result);
        let records: Vec<RecordDoc> = result.records.iter().map(Into::into).collect();
        match &args.out {
            Some(path) => append_level(path, args.n, METHOD, &records, &level)?,
            None => inline.as_mut().expect("inline records").extend(records),
        }
        levels.push(level);
    }
    levels.sort_by_key(|l| l.p);
    Ok(summarize(args, METHOD, levels, resumed, inline))
}

fn verify_sampled(args: &VerifyArgs) -> Result<SearchDoc, CliError> {
    const METHOD: &str = "sampled";
    if let Some(path) = &args.out {
        if fs::metadata(path).map(|m| m.len() > 0).unwrap_or(false) {
            return Err(CliError::Usage(format!(
                "{} already has content; sampled runs are not resumable, use a fresh --out",
                path.display()
            )));
        }
    }
    let outcome = verify_bound_sampled(args.n, args.max_p, args.samples, args.seed)?;
    let mut levels = Vec::new();
    let mut inline = args.out.is_none().then(Vec::new);
    for result in &outcome.levels {
        let level = LevelDoc::from(result);
        let records: Vec<RecordDoc> = result.records.iter().map(Into::into).collect();
        match &args.out {
            Some(path) => append_level(path, args.n, METHOD, &records, &level)?,
            None => inline.as_mut().expect("inline records").extend(records),
        }
        levels.push(level);
    }
    Ok(summarize(args, METHOD, levels, vec![], inline))
}

/// Sizes the global rayon pool. Call at most once, before any parallel work.
pub fn init_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    Ok(())
}
