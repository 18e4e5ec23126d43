use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gccl_cli::bench::{
    emit_comparison, emit_report, run_formation, run_incremental, BenchReport, Format,
};
use gccl_cli::dataset::{
    default_data_dir, Dataset, DatasetSpec, Preset, PRESETS, PUBLISHED_BATCH_SIZES,
};
use gccl_cli::verify::verify_state;
use gccl_cli::CliError;
use gccl_core::approx::{learn, ApproximationResult, ConceptClue};
use gccl_core::persist::{load_state_from, save_state_to};
use gccl_core::scaling::MissingPolicy;
use gccl_core::{Concept, FormalContext, LearningState, UpdateMode};
use log::info;

#[derive(Parser)]
#[command(
    name = "gccl",
    version,
    about = "Concept formation, incremental learning and concept queries"
)]
struct Cli {
    /// Worker threads for concept enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the initial concept space of a dataset or context file.
    Form(FormArgs),
    /// Add the next rows of a dataset to a saved state, batch by batch.
    Extend(ExtendArgs),
    /// Learn a concept, or its approximations, from object and attribute names.
    Query(QueryArgs),
    /// Formation and incremental timings for the bundled datasets.
    Bench(BenchArgs),
    /// Cross-check a state against independent computations.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    NoAttribute,
    OwnAttribute,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Tsv => Format::Tsv,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

#[derive(Args)]
struct DataArgs {
    /// Comma-separated data file.
    #[arg(long, requires = "schema")]
    csv: Option<PathBuf>,
    /// Schema file, one `name : v1,...,vk : missing` line per column.
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Bundled dataset (voting, mushroom) instead of --csv/--schema.
    #[arg(long, conflicts_with_all = ["csv", "schema"])]
    preset: Option<String>,
    /// Directory holding the bundled datasets.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// The data file starts with a header row.
    #[arg(long)]
    header: bool,
    /// Columns left out of scaling (comma-separated).
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<String>,
    #[arg(long, value_enum, default_value = "no-attribute")]
    policy: Policy,
    /// Shuffle rows with this seed instead of using file order.
    #[arg(long)]
    seed: Option<u64>,
}

impl DataArgs {
    fn spec(&self) -> Result<DatasetSpec, CliError> {
        let policy = match self.policy {
            Policy::NoAttribute => MissingPolicy::NoAttribute,
            Policy::OwnAttribute => MissingPolicy::OwnAttribute,
        };
        if let Some(name) = &self.preset {
            let preset = Preset::find(name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`")))?;
            let dir = self.data_dir.clone().unwrap_or_else(default_data_dir);
            let mut spec = preset.spec(&dir, self.seed);
            spec.policy = policy;
            return Ok(spec);
        }
        let (Some(csv), Some(schema)) = (&self.csv, &self.schema) else {
            return Err(CliError::Usage(
                "give --preset or both --csv and --schema".into(),
            ));
        };
        Ok(DatasetSpec {
            label: csv
                .file_stem()
                .map_or("data".into(), |s| s.to_string_lossy().into_owned()),
            csv: csv.clone(),
            schema: schema.clone(),
            has_header: self.header,
            exclude: self.exclude.clone(),
            policy,
            seed: self.seed,
        })
    }

    fn given(&self) -> bool {
        self.preset.is_some() || self.csv.is_some()
    }
}

#[derive(Args)]
struct FormArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Burmeister context file instead of a dataset.
    #[arg(long, conflicts_with_all = ["csv", "preset"])]
    context: Option<PathBuf>,
    /// Number of leading rows to use (default: all).
    #[arg(long)]
    instances: Option<usize>,
    /// Where to save the state.
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    #[command(flatten)]
    data: DataArgs,
    /// State file to read and update.
    #[arg(long)]
    state: PathBuf,
    /// Rows per batch, applied in order (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    batches: Vec<usize>,
    /// First dataset row to add (default: the state's object count).
    #[arg(long)]
    from: Option<usize>,
    /// Re-enumerate after each batch instead of updating incrementally.
    #[arg(long)]
    reenumerate: bool,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    state: PathBuf,
    /// Object names (comma-separated).
    #[arg(long, value_delimiter = ',')]
    objects: Option<Vec<String>>,
    /// Attribute names (comma-separated).
    #[arg(long, value_delimiter = ',')]
    attributes: Option<Vec<String>>,
}

#[derive(Args)]
struct BenchArgs {
    /// Bundled datasets to run (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "voting,mushroom")]
    datasets: Vec<String>,
    /// Initial sizes; default: the published sizes of each dataset.
    #[arg(long, value_delimiter = ',')]
    instances: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    batches: Vec<usize>,
    /// Timing repetitions; the median is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, value_enum, default_value = "tsv")]
    format: FormatArg,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Leave out the comparison with published figures.
    #[arg(long)]
    no_compare: bool,
    /// Directory to save each initial state in.
    #[arg(long)]
    save_states: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Saved state to check.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long)]
    instances: Option<usize>,
}

fn load_dataset(args: &DataArgs) -> Result<Dataset, CliError> {
    Dataset::load(&args.spec()?)
}

fn load_state(path: &Path) -> Result<LearningState, CliError> {
    load_state_from(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn save_state(state: &LearningState, path: &Path) -> Result<(), CliError> {
    save_state_to(state, path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn initial_state(
    data: &DataArgs,
    context: Option<&Path>,
    instances: Option<usize>,
) -> Result<LearningState, CliError> {
    let ctx = match context {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            FormalContext::parse(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        }
        None => {
            let dataset = load_dataset(data)?;
            dataset.context(instances.unwrap_or(dataset.len()))?
        }
    };
    Ok(LearningState::new(ctx))
}

fn form(args: FormArgs) -> Result<(), CliError> {
    if args.context.is_none() && !args.data.given() {
        return Err(CliError::Usage(
            "give --context, --preset or --csv/--schema".into(),
        ));
    }
    let start = Instant::now();
    let state = initial_state(&args.data, args.context.as_deref(), args.instances)?;
    let seconds = start.elapsed().as_secs_f64();
    let ctx = state.context();
    println!("objects\t{}", ctx.n_objects());
    println!("attributes\t{}", ctx.n_attributes());
    println!("concepts\t{}", state.space().len());
    println!("seconds\t{seconds:.5}");
    if let Some(path) = &args.state {
        save_state(&state, path)?;
    }
    Ok(())
}

fn extend(args: ExtendArgs) -> Result<(), CliError> {
    let mut state = load_state(&args.state)?;
    if args.reenumerate {
        state.set_mode(UpdateMode::Reenumerate);
    }
    let dataset = load_dataset(&args.data)?;
    if dataset.scale.attributes() != state.context().attributes() {
        return Err(CliError::Data(
            "dataset attributes differ from the state's attributes".into(),
        ));
    }
    let mut next = args.from.unwrap_or(state.context().n_objects());
    println!("batch\trows\tconcepts\tseconds");
    for (i, &size) in args.batches.iter().enumerate() {
        let rows = dataset.rows(next, size).ok_or_else(|| {
            CliError::Data(format!(
                "batch {} needs rows {next}..{}, dataset has {}",
                i + 1,
                next + size,
                dataset.len()
            ))
        })?;
        let start = Instant::now();
        state.extend_with_objects(rows.to_vec())?;
        let seconds = start.elapsed().as_secs_f64();
        println!("{}\t{size}\t{}\t{seconds:.5}", i + 1, state.space().len());
        next += size;
    }
    save_state(&state, &args.state)
}

fn names(names: impl Iterator<Item = usize>, all: &[String]) -> String {
    names.map(|i| all[i].as_str()).collect::<Vec<_>>().join(",")
}

fn print_concept(tag: &str, concept: Option<&Concept>, ctx: &FormalContext) {
    match concept {
        Some(c) => println!(
            "{tag}\t{{{}}}\t{{{}}}",
            names(c.extent().iter(), ctx.objects()),
            names(c.intent().iter(), ctx.attributes())
        ),
        None => println!("{tag}\t-"),
    }
}

fn query(args: QueryArgs) -> Result<(), CliError> {
    let state = load_state(&args.state)?;
    let ctx = state.context();
    let clue = match (&args.objects, &args.attributes) {
        (Some(o), None) => ConceptClue::Objects(ctx.objects_named(o)?),
        (None, Some(a)) => ConceptClue::Attributes(ctx.attributes_named(a)?),
        (Some(o), Some(a)) => ConceptClue::Pair(ctx.objects_named(o)?, ctx.attributes_named(a)?),
        (None, None) => {
            return Err(CliError::Usage(
                "give --objects, --attributes or both".into(),
            ))
        }
    };
    match learn(&state.operators(), &clue)? {
        ApproximationResult::Exact(c) => print_concept("exact", Some(&c), ctx),
        ApproximationResult::Approximate { lower, upper } => {
            print_concept("upper", Some(&upper), ctx);
            print_concept("lower", lower.as_ref(), ctx);
        }
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let dir = args.data_dir.clone().unwrap_or_else(default_data_dir);
    let mut report = BenchReport {
        batch_sizes: args.batches.clone(),
        rows: Vec::new(),
    };
    if let Some(out) = &args.save_states {
        fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    }
    for name in &args.datasets {
        let preset = Preset::find(name).ok_or_else(|| {
            let known: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
            CliError::Usage(format!(
                "unknown dataset `{name}` (known: {})",
                known.join(", ")
            ))
        })?;
        let dataset = Dataset::load(&preset.spec(&dir, args.seed))?;
        let sizes = args
            .instances
            .clone()
            .unwrap_or_else(|| preset.published.iter().map(|r| r.instances).collect());
        for n in sizes {
            let (state, mut row) = run_formation(&dataset, n, args.reps)?;
            row.batch_seconds = run_incremental(&state, &dataset, &args.batches, args.reps)?;
            row.published = preset.published_row(n);
            if let Some(out) = &args.save_states {
                save_state(&state, &out.join(format!("{}-{n}.state", preset.name)))?;
            }
            report.rows.push(row);
        }
    }
    let format = Format::from(args.format);
    print!("{}", emit_report(&report, format));
    if !args.no_compare && report.rows.iter().any(|r| r.published.is_some()) {
        if report.batch_sizes != PUBLISHED_BATCH_SIZES {
            info!("comparison uses published timings only for batch sizes 10, 100, 1000");
        }
        println!();
        print!("{}", emit_comparison(&report, format));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let state = match &args.state {
        Some(path) => load_state(path)?,
        None if args.data.given() => initial_state(&args.data, None, args.instances)?,
        None => {
            return Err(CliError::Usage(
                "give --state, --preset or --csv/--schema".into(),
            ))
        }
    };
    if args.data.given() {
        let dataset = load_dataset(&args.data)?;
        let overfull = dataset.overfull_columns();
        if !overfull.is_empty() {
            return Err(CliError::Invariant(format!(
                "columns with several scaled bits in one row: {overfull:?}"
            )));
        }
        println!("ok\tat most one scaled attribute per source column in every row");
    }
    for line in verify_state(&state)? {
        println!("{line}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Form(a) => form(a),
        Command::Extend(a) => extend(a),
        Command::Query(a) => query(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GCCL_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gccl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
