use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use edsimp::config::{resolve, ConfigLayer, Profile, Settings};
use edsimp::metrics::{evaluate_with, load_records, records_from_lines, EvalRecord, MetricReport};
use edsimp::resources::{build_bundle, load_bundle, validate_bundle};
use edsimp::{load_corpus, simplify_corpus, AnnotatedSentence, NGramBackend, OpSet, ResourceBundle};

#[derive(Parser)]
#[command(name = "edsimp", version, about = "Unsupervised edit-based sentence simplification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the language model and tables and write a resource bundle.
    Build(BuildArgs),
    /// Train only the n-gram language model.
    TrainLm(TrainLmArgs),
    /// Check a bundle's integrity and report suspicious combinations.
    Validate {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Simplify an annotated corpus.
    Simplify(SimplifyArgs),
    /// Score outputs against references.
    Evaluate(EvaluateArgs),
    /// Simplify and evaluate once per value of one hyperparameter.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    simple_corpus: PathBuf,
    /// Word vector file; repeat for several tables.
    #[arg(long, required = true)]
    embeddings: Vec<PathBuf>,
    #[arg(long)]
    synonyms: PathBuf,
    #[arg(long, default_value_t = edsimp::lm::DEFAULT_ORDER)]
    lm_order: usize,
    #[arg(long)]
    out: PathBuf,
    /// Overwrite an existing bundle directory.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct TrainLmArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = edsimp::lm::DEFAULT_ORDER)]
    order: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_ops(s: &str) -> Result<OpSet, String> {
    s.parse().map_err(|e: edsimp::Error| e.to_string())
}

#[derive(Args, Clone)]
struct SettingsArgs {
    /// TOML config file, applied over the profile.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    /// Enabled operators, e.g. rm+ex+ls+ro.
    #[arg(long, value_parser = parse_ops)]
    ops: Option<OpSet>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Same threshold for every operator.
    #[arg(long)]
    r_all: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    no_revisit_guard: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Newsela,
    Wikilarge,
}

impl SettingsArgs {
    fn layer(&self) -> ConfigLayer {
        let mut layer = ConfigLayer {
            profile: self.profile.map(|p| match p {
                ProfileArg::Newsela => Profile::Newsela,
                ProfileArg::Wikilarge => Profile::Wikilarge,
            }),
            ..ConfigLayer::default()
        };
        layer.scoring.alpha = self.alpha;
        layer.scoring.beta = self.beta;
        layer.scoring.gamma = self.gamma;
        layer.scoring.delta = self.delta;
        layer.scoring.tau = self.tau;
        layer.search.r_all = self.r_all;
        layer.search.max_iterations = self.max_iterations;
        layer.search.ops = self.ops.as_ref().map(OpSet::to_string);
        if self.no_revisit_guard {
            layer.search.revisit_guard = Some(false);
        }
        layer
    }

    fn file(&self) -> Result<Option<ConfigLayer>> {
        self.config
            .as_ref()
            .map(|p| ConfigLayer::load(p).with_context(|| format!("reading config {}", p.display())))
            .transpose()
    }

    fn resolve(&self) -> Result<Settings> {
        Ok(resolve(self.file()?.as_ref(), &self.layer())?)
    }
}

#[derive(Args)]
struct SimplifyArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Annotated corpus (one JSON record per line).
    #[arg(long)]
    input: PathBuf,
    /// Final sentences, one per line; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-sentence traces as JSON lines.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[command(flatten)]
    settings: SettingsArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Args)]
struct EvaluateArgs {
    /// JSON lines of {"src","out","refs"}.
    #[arg(long, conflicts_with_all = ["src", "out", "refs"])]
    records: Option<PathBuf>,
    /// Source sentences, one per line.
    #[arg(long, requires_all = ["out", "refs"])]
    src: Option<PathBuf>,
    /// System outputs, one per line.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reference file, one per line; repeat for several references.
    #[arg(long)]
    refs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long, value_parser = ["f1", "precision"], default_value = "f1")]
    sari_delete: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SweepParam {
    RAll,
    Alpha,
    Beta,
    Gamma,
    Delta,
    Tau,
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::RAll => "r_all",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::Gamma => "gamma",
            SweepParam::Delta => "delta",
            SweepParam::Tau => "tau",
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    input: PathBuf,
    /// Reference file aligned with the input; repeat for several.
    #[arg(long, required = true)]
    refs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[command(flatten)]
    settings: SettingsArgs,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_stdout(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn cmd_build(args: BuildArgs) -> Result<()> {
    if args.out.exists() && fs::read_dir(&args.out)?.next().is_some() {
        if !args.force {
            bail!("{} already exists; pass --force to overwrite", args.out.display());
        }
        fs::remove_dir_all(&args.out).with_context(|| format!("clearing {}", args.out.display()))?;
    }
    let corpus = load_corpus(&args.simple_corpus)?;
    let bundle = build_bundle(&corpus, &args.embeddings, &args.synonyms, args.lm_order)?;
    let manifest = bundle.save(&args.out)?;
    eprintln!("wrote {} members to {}", manifest.members.len(), args.out.display());
    report_validation(&bundle);
    Ok(())
}

fn report_validation(bundle: &ResourceBundle) -> bool {
    let report = validate_bundle(bundle);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    report.is_ok()
}

fn cmd_train_lm(args: TrainLmArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let lm = NGramBackend::train(&corpus, args.order)?;
    lm.save(&args.out)?;
    eprintln!("wrote {}-gram model ({} composites) to {}", args.order, lm.vocabulary_size(), args.out.display());
    Ok(())
}

fn cmd_validate(bundle: &Path) -> Result<()> {
    let bundle = load_bundle(bundle)?;
    if !report_validation(&bundle) {
        bail!("bundle failed validation");
    }
    eprintln!("ok");
    Ok(())
}

/// Runs the search over `corpus`. Sentences whose search fails keep their
/// original text and are reported on stderr.
fn run_simplify(corpus: &[AnnotatedSentence], bundle: &ResourceBundle, settings: &Settings) -> (Vec<String>, Vec<String>) {
    let mut outputs = Vec::with_capacity(corpus.len());
    let mut traces = Vec::with_capacity(corpus.len());
    for (result, sentence) in simplify_corpus(corpus, bundle, &settings.scoring, &settings.search).into_iter().zip(corpus) {
        match result {
            Ok(trace) => {
                outputs.push(trace.final_sentence.text());
                traces.push(trace.to_json_line());
            }
            Err(e) => {
                eprintln!("warning: sentence {}: {}", e.index + 1, e.error);
                outputs.push(sentence.text());
                traces.push(serde_json::json!({ "index": e.index, "error": e.error.to_string() }).to_string());
            }
        }
    }
    (outputs, traces)
}

fn lines(items: &[String]) -> String {
    items.iter().map(|l| format!("{l}\n")).collect()
}

fn cmd_simplify(args: SimplifyArgs) -> Result<()> {
    let settings = args.settings.resolve()?;
    let bundle = load_bundle(&args.bundle)?;
    let corpus = load_corpus(&args.input)?;
    let (outputs, traces) = run_simplify(&corpus, &bundle, &settings);
    if let Some(path) = &args.trace_out {
        fs::write(path, lines(&traces)).with_context(|| format!("writing {}", path.display()))?;
    }
    write_or_stdout(args.out.as_deref(), &lines(&outputs))
}

fn print_report(report: &MetricReport, format: Format) -> Result<()> {
    let text = match format {
        Format::Table => format!("{report}\n"),
        Format::Records => format!("{}\n", serde_json::to_string(report)?),
    };
    write_or_stdout(None, &text)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let records: Vec<EvalRecord> = match (&args.records, &args.src, &args.out) {
        (Some(path), _, _) => load_records(path)?,
        (None, Some(src), Some(out)) => {
            if args.refs.is_empty() {
                bail!("--refs is required with --src");
            }
            let refs = args.refs.iter().map(|p| read(p)).collect::<Result<Vec<_>>>()?;
            records_from_lines(&read(src)?, &read(out)?, &refs)?
        }
        _ => bail!("pass either --records or --src, --out and --refs"),
    };
    let report = evaluate_with(&records, args.sari_delete.parse()?)?;
    print_report(&report, args.format)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let bundle = load_bundle(&args.bundle)?;
    let corpus = load_corpus(&args.input)?;
    let refs = args.refs.iter().map(|p| read(p)).collect::<Result<Vec<_>>>()?;
    let sources = lines(&corpus.iter().map(AnnotatedSentence::text).collect::<Vec<_>>());
    let file = args.settings.file()?;
    let name = args.param.name();
    let mut out = String::new();
    if matches!(args.format, Format::Table) {
        out.push_str(&format!("{name:>8} {}\n", MetricReport::table_header()));
    }
    for &value in &args.values {
        let mut layer = args.settings.layer();
        match args.param {
            SweepParam::RAll => layer.search.r_all = Some(value),
            SweepParam::Alpha => layer.scoring.alpha = Some(value),
            SweepParam::Beta => layer.scoring.beta = Some(value),
            SweepParam::Gamma => layer.scoring.gamma = Some(value),
            SweepParam::Delta => layer.scoring.delta = Some(value),
            SweepParam::Tau => layer.scoring.tau = Some(value),
        }
        let settings = resolve(file.as_ref(), &layer)?;
        let (outputs, _) = run_simplify(&corpus, &bundle, &settings);
        let records = records_from_lines(&sources, &lines(&outputs), &refs)?;
        let report = evaluate_with(&records, settings.sari_delete)?;
        match args.format {
            Format::Table => out.push_str(&format!("{value:>8} {}\n", report.table_row())),
            Format::Records => {
                let mut row = serde_json::to_value(report)?;
                row["param"] = name.into();
                row["value"] = value.into();
                out.push_str(&format!("{row}\n"));
            }
        }
    }
    write_or_stdout(None, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::TrainLm(a) => cmd_train_lm(a),
        Command::Validate { bundle } => cmd_validate(&bundle),
        Command::Simplify(a) => cmd_simplify(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
