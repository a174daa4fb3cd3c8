//! `dissim`: command-line front end for the dissimilarity-adjusted
//! neighborhood recommender.
//!
//! Subcommands mirror the pipeline stages so intermediate artifacts can be
//! inspected: `stats`, `split`, `simmat`, `recommend`, `evaluate`, `sweep`.
//! Exit codes: 0 on success, 1 on data or I/O failures, 2 on configuration
//! mistakes.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::io::{BufReader, BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use dissim_core::{
    build_dataset, dataset_stats, holdout_split, lambda_sweep, parse_interactions,
    parse_scheme, recommend_all, render_table, scheme_name, scored_candidates, Axis,
    Dataset, InputFormat, LineError, NeighborModel, Preset, SplitMode, SweepConfig,
    TableMode,
};

/// Failures carry the exit code split demanded of the binary: bad flags or
/// config values exit 2, bad data or filesystem trouble exits 1.
#[derive(Debug)]
enum Failure {
    Config(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Data(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Data(m) => m,
        }
    }
}

impl From<dissim_core::Error> for Failure {
    fn from(e: dissim_core::Error) -> Failure {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn data_err(context: impl Display, e: impl Display) -> Failure {
    Failure::Data(format!("{context}: {e}"))
}

#[derive(Parser)]
#[command(
    name = "dissim",
    version,
    about = "Neighborhood top-N recommender built on dissimilarity-adjusted set measures"
)]
struct Cli {
    /// Bound the number of worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Key=value defaults file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dataset statistics
    Stats(StatsArgs),
    /// Split interactions into train and test files
    Split(SplitArgs),
    /// Dump pairwise similarity values for every co-engaged pair
    Simmat(SimmatArgs),
    /// Write top-N recommendations for every user
    Recommend(RecommendArgs),
    /// Evaluate chosen presets over the lambda grid
    Evaluate(EvaluateArgs),
    /// Evaluate every preset over the lambda grid
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Interactions file (delimited text)
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Column layout, e.g. tab:user,item,rating or comma:user,item,rating,time
    #[arg(long, value_name = "DESC")]
    format: Option<String>,
    /// Skip the first input line
    #[arg(long)]
    header: bool,
    /// Drop users with fewer than this many interactions
    #[arg(long, value_name = "N")]
    min_interactions: Option<usize>,
}

#[derive(Args)]
struct ProtocolArgs {
    /// Holdout mode: temporal or random
    #[arg(long, value_name = "MODE")]
    split: Option<String>,
    /// Fraction of each profile held out for testing
    #[arg(long, value_name = "F")]
    fraction: Option<f64>,
    /// Seed driving the random split mode
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Emit the statistics as JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SplitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimmatArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Neighborhood scheme: user-knn or item-knn
    #[arg(long, value_name = "SCHEME")]
    scheme: Option<String>,
    /// Measure preset, e.g. JS, AAJ, MAJ
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Dissimilarity weight for additive presets
    #[arg(long, value_name = "VALUE")]
    lambda: Option<f64>,
    /// Compose the table-defined measures literally
    #[arg(long)]
    literal_tables: bool,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecommendArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Neighborhood scheme: user-knn or item-knn
    #[arg(long, value_name = "SCHEME")]
    scheme: Option<String>,
    /// Measure preset, e.g. JS, AAJ, MAJ
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Dissimilarity weight for additive presets
    #[arg(long, value_name = "VALUE")]
    lambda: Option<f64>,
    /// Neighborhood size
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Recommendation list length
    #[arg(long, value_name = "N")]
    top_n: Option<usize>,
    /// Compose the table-defined measures literally
    #[arg(long)]
    literal_tables: bool,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Neighborhood scheme: user-knn or item-knn
    #[arg(long, value_name = "SCHEME")]
    scheme: Option<String>,
    /// Comma-separated preset names, e.g. JS,AAJ,MAJ
    #[arg(long, value_name = "NAMES")]
    preset: Option<String>,
    /// Comma-separated lambda grid for additive presets
    #[arg(long, value_name = "GRID")]
    lambda: Option<String>,
    /// Neighborhood size
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Recommendation list length
    #[arg(long, value_name = "N")]
    top_n: Option<usize>,
    /// Relevance threshold on test ratings
    #[arg(long, value_name = "T")]
    threshold: Option<f64>,
    /// Preset whose best cell anchors the significance tests
    #[arg(long, value_name = "NAME")]
    baseline: Option<String>,
    /// Compose the table-defined measures literally
    #[arg(long)]
    literal_tables: bool,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Neighborhood scheme: user-knn or item-knn
    #[arg(long, value_name = "SCHEME")]
    scheme: Option<String>,
    /// Comma-separated lambda grid for additive presets
    #[arg(long, value_name = "GRID")]
    lambda: Option<String>,
    /// Neighborhood size
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Recommendation list length
    #[arg(long, value_name = "N")]
    top_n: Option<usize>,
    /// Relevance threshold on test ratings
    #[arg(long, value_name = "T")]
    threshold: Option<f64>,
    /// Preset whose best cell anchors the significance tests
    #[arg(long, value_name = "NAME")]
    baseline: Option<String>,
    /// Compose the table-defined measures literally
    #[arg(long)]
    literal_tables: bool,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Flat `key = value` defaults file. `#` starts a comment, keys reuse the
/// long flag names, and any flag given on the command line wins.
#[derive(Default)]
struct FileConfig {
    values: HashMap<String, String>,
}

const KNOWN_KEYS: [&str; 18] = [
    "input",
    "format",
    "header",
    "min-interactions",
    "scheme",
    "preset",
    "k",
    "top-n",
    "lambda",
    "threshold",
    "split",
    "fraction",
    "seed",
    "out",
    "baseline",
    "literal-tables",
    "workers",
    "json",
];

impl FileConfig {
    fn load(path: &Path) -> CliResult<FileConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::Config(format!(
                    "config {} line {}: expected key = value",
                    path.display(),
                    idx + 1
                )));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Failure::Config(format!(
                    "config {} line {}: unknown key `{key}`",
                    path.display(),
                    idx + 1
                )));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn get<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                Failure::Config(format!("config key `{key}` = `{raw}`: {e}"))
            }),
        }
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}

fn main() -> ExitCode {
    // die quietly like any unix filter when the downstream reader goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(workers) = cli.workers.or(file.get("workers")?) {
        if workers == 0 {
            return Err(Failure::Config("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .ok();
    }
    match cli.command {
        Command::Stats(args) => cmd_stats(args, &file),
        Command::Split(args) => cmd_split(args, &file),
        Command::Simmat(args) => cmd_simmat(args, &file),
        Command::Recommend(args) => cmd_recommend(args, &file),
        Command::Evaluate(args) => cmd_evaluate(args, &file),
        Command::Sweep(args) => cmd_sweep(args, &file),
    }
}

fn load_input(args: &InputArgs, file: &FileConfig) -> CliResult<Dataset> {
    let path: PathBuf = match &args.input {
        Some(p) => p.clone(),
        None => file
            .get("input")?
            .ok_or_else(|| Failure::Config("--input is required".into()))?,
    };
    let descriptor = args
        .format
        .clone()
        .or_else(|| file.raw("format").map(str::to_string))
        .unwrap_or_else(|| "tab:user,item,rating".to_string());
    let header = args.header || file.flag("header")?;
    let min_interactions = args
        .min_interactions
        .or(file.get("min-interactions")?)
        .unwrap_or(0);
    let format = InputFormat::parse(&descriptor)?.with_header(header);
    let reader = fs::File::open(&path).map_err(|e| data_err(path.display(), e))?;
    let outcome = parse_interactions(BufReader::new(reader), &format)?;
    report_line_errors(&path, &outcome.line_errors);
    Ok(build_dataset(&outcome.records, min_interactions)?)
}

fn report_line_errors(path: &Path, errors: &[LineError]) {
    const SHOWN: usize = 10;
    for e in errors.iter().take(SHOWN) {
        eprintln!("{}:{}: skipped: {}", path.display(), e.line, e.message);
    }
    if errors.len() > SHOWN {
        eprintln!(
            "{}: {} more malformed lines not shown",
            path.display(),
            errors.len() - SHOWN
        );
    }
}

fn resolve_scheme(flag: &Option<String>, file: &FileConfig) -> CliResult<Axis> {
    let name = flag
        .clone()
        .or_else(|| file.raw("scheme").map(str::to_string))
        .unwrap_or_else(|| "user-knn".to_string());
    Ok(parse_scheme(&name)?)
}

fn resolve_k(flag: Option<usize>, file: &FileConfig) -> CliResult<usize> {
    let k = flag.or(file.get("k")?).unwrap_or(80);
    if k == 0 {
        return Err(Failure::Config("--k must be positive".into()));
    }
    Ok(k)
}

fn resolve_top_n(flag: Option<usize>, file: &FileConfig) -> CliResult<usize> {
    let n = flag.or(file.get("top-n")?).unwrap_or(10);
    if n == 0 {
        return Err(Failure::Config("--top-n must be positive".into()));
    }
    Ok(n)
}

fn resolve_tables(flag: bool, file: &FileConfig) -> CliResult<TableMode> {
    Ok(if flag || file.flag("literal-tables")? {
        TableMode::Literal
    } else {
        TableMode::Canonical
    })
}

fn resolve_out(flag: &Option<PathBuf>, file: &FileConfig) -> CliResult<PathBuf> {
    Ok(match flag {
        Some(p) => p.clone(),
        None => file.get("out")?.unwrap_or_else(|| PathBuf::from("out")),
    })
}

fn resolve_protocol(args: &ProtocolArgs, file: &FileConfig) -> CliResult<(f64, SplitMode)> {
    let mode_name = args
        .split
        .clone()
        .or_else(|| file.raw("split").map(str::to_string))
        .unwrap_or_else(|| "temporal".to_string());
    let seed = args.seed.or(file.get("seed")?).unwrap_or(42);
    let mode = match mode_name.as_str() {
        "temporal" => SplitMode::Temporal,
        "random" => SplitMode::Random { seed },
        other => {
            return Err(Failure::Config(format!(
                "--split: unknown mode `{other}` (expected temporal or random)"
            )))
        }
    };
    let fraction = args.fraction.or(file.get("fraction")?).unwrap_or(0.2);
    Ok((fraction, mode))
}

fn parse_lambda_list(raw: &str) -> CliResult<Vec<f64>> {
    let mut grid = Vec::new();
    for token in raw.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let value: f64 = token
            .parse()
            .map_err(|_| Failure::Config(format!("--lambda: `{token}` is not a number")))?;
        grid.push(value);
    }
    if grid.is_empty() {
        return Err(Failure::Config("--lambda: empty grid".into()));
    }
    Ok(grid)
}

fn resolve_grid(flag: &Option<String>, file: &FileConfig) -> CliResult<Vec<f64>> {
    match flag.clone().or_else(|| file.raw("lambda").map(str::to_string)) {
        Some(raw) => parse_lambda_list(&raw),
        None => Ok(vec![0.2, 0.4, 0.6, 0.8]),
    }
}

fn resolve_single_lambda(flag: Option<f64>, file: &FileConfig) -> CliResult<f64> {
    if let Some(value) = flag {
        return Ok(value);
    }
    match file.raw("lambda") {
        None => Ok(0.5),
        Some(raw) => {
            let grid = parse_lambda_list(raw)?;
            if grid.len() == 1 {
                Ok(grid[0])
            } else {
                Err(Failure::Config(
                    "config key `lambda` holds a grid; this command needs a single --lambda"
                        .into(),
                ))
            }
        }
    }
}

fn resolve_presets(flag: &Option<String>, file: &FileConfig) -> CliResult<Vec<Preset>> {
    let raw = flag
        .clone()
        .or_else(|| file.raw("preset").map(str::to_string))
        .unwrap_or_else(|| "JS".to_string());
    let mut presets = Vec::new();
    for token in raw.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        presets.push(Preset::parse(token)?);
    }
    if presets.is_empty() {
        return Err(Failure::Config("--preset: empty list".into()));
    }
    Ok(presets)
}

fn resolve_single_preset(flag: &Option<String>, file: &FileConfig) -> CliResult<Preset> {
    let presets = resolve_presets(flag, file)?;
    if presets.len() != 1 {
        return Err(Failure::Config(
            "--preset: this command needs exactly one preset".into(),
        ));
    }
    Ok(presets[0])
}

fn resolve_baseline(flag: &Option<String>, file: &FileConfig) -> CliResult<Option<Preset>> {
    match flag.clone().or_else(|| file.raw("baseline").map(str::to_string)) {
        None => Ok(None),
        Some(name) => Ok(Some(Preset::parse(&name)?)),
    }
}

fn resolve_threshold(flag: Option<f64>, file: &FileConfig) -> CliResult<f64> {
    Ok(flag.or(file.get("threshold")?).unwrap_or(0.0))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| data_err(dir.display(), e))
}

fn entity_token(d: &Dataset, axis: Axis, index: u32) -> &str {
    match axis {
        Axis::User => d.user_map().token(index),
        Axis::Item => d.item_map().token(index),
    }
}

fn cmd_stats(args: StatsArgs, file: &FileConfig) -> CliResult<()> {
    let json = args.json || file.flag("json")?;
    let d = load_input(&args.input, file)?;
    let stats = dataset_stats(&d);
    if json {
        let body = serde_json::to_string_pretty(&stats)
            .map_err(|e| data_err("stats json", e))?;
        println!("{body}");
    } else {
        print!("{}", stats.render_table());
    }
    Ok(())
}

fn cmd_split(args: SplitArgs, file: &FileConfig) -> CliResult<()> {
    let d = load_input(&args.input, file)?;
    let (fraction, mode) = resolve_protocol(&args.protocol, file)?;
    let out = resolve_out(&args.out, file)?;
    let pair = holdout_split(&d, fraction, mode)?;
    ensure_dir(&out)?;

    // dump timestamps only when every training row carries one, so the
    // file stays rectangular and re-ingestable
    let full_timestamps = (0..pair.train.n_users())
        .flat_map(|u| pair.train.items_of(u))
        .all(|&(_, _, ts)| ts.is_some());
    let train_path = out.join("train.tsv");
    let mut w = BufWriter::new(
        fs::File::create(&train_path).map_err(|e| data_err(train_path.display(), e))?,
    );
    let mut n_train = 0usize;
    for u in 0..pair.train.n_users() {
        let user = pair.train.user_map().token(u as u32);
        for &(i, rating, ts) in pair.train.items_of(u) {
            let item = pair.train.item_map().token(i);
            if full_timestamps {
                writeln!(w, "{user}\t{item}\t{rating}\t{}", ts.unwrap())
            } else {
                writeln!(w, "{user}\t{item}\t{rating}")
            }
            .map_err(|e| data_err(train_path.display(), e))?;
            n_train += 1;
        }
    }
    w.flush().map_err(|e| data_err(train_path.display(), e))?;

    let test_path = out.join("test.tsv");
    let mut w = BufWriter::new(
        fs::File::create(&test_path).map_err(|e| data_err(test_path.display(), e))?,
    );
    let mut n_test = 0usize;
    for (u, row) in pair.test.iter().enumerate() {
        let user = pair.train.user_map().token(u as u32);
        for &(i, rating) in row {
            let item = pair.train.item_map().token(i);
            writeln!(w, "{user}\t{item}\t{rating}")
                .map_err(|e| data_err(test_path.display(), e))?;
            n_test += 1;
        }
    }
    w.flush().map_err(|e| data_err(test_path.display(), e))?;

    println!("wrote {} ({n_train} interactions)", train_path.display());
    println!("wrote {} ({n_test} interactions)", test_path.display());
    Ok(())
}

fn cmd_simmat(args: SimmatArgs, file: &FileConfig) -> CliResult<()> {
    let d = load_input(&args.input, file)?;
    let axis = resolve_scheme(&args.scheme, file)?;
    let preset = resolve_single_preset(&args.preset, file)?;
    let lambda = resolve_single_lambda(args.lambda, file)?;
    let tables = resolve_tables(args.literal_tables, file)?;
    let out = resolve_out(&args.out, file)?;
    let spec = preset.spec(lambda, tables)?;
    ensure_dir(&out)?;

    let path = out.join("simmat.tsv");
    let mut w =
        BufWriter::new(fs::File::create(&path).map_err(|e| data_err(path.display(), e))?);
    let mut n_pairs = 0usize;
    for a in 0..d.n_entities(axis) {
        let token_a = entity_token(&d, axis, a as u32);
        for (b, value) in scored_candidates(&d, axis, a, &spec)? {
            let token_b = entity_token(&d, axis, b);
            writeln!(w, "{token_a}\t{token_b}\t{value}")
                .map_err(|e| data_err(path.display(), e))?;
            n_pairs += 1;
        }
    }
    w.flush().map_err(|e| data_err(path.display(), e))?;
    println!("wrote {} ({n_pairs} pairs)", path.display());
    Ok(())
}

fn cmd_recommend(args: RecommendArgs, file: &FileConfig) -> CliResult<()> {
    let d = load_input(&args.input, file)?;
    let axis = resolve_scheme(&args.scheme, file)?;
    let preset = resolve_single_preset(&args.preset, file)?;
    let lambda = resolve_single_lambda(args.lambda, file)?;
    let tables = resolve_tables(args.literal_tables, file)?;
    let k = resolve_k(args.k, file)?;
    let top_n = resolve_top_n(args.top_n, file)?;
    let out = resolve_out(&args.out, file)?;
    let spec = preset.spec(lambda, tables)?;
    ensure_dir(&out)?;

    let model = NeighborModel::build(&d, axis, k, spec);
    let lists = recommend_all(&model, &d, top_n);
    let path = out.join("recommendations.tsv");
    let mut w =
        BufWriter::new(fs::File::create(&path).map_err(|e| data_err(path.display(), e))?);
    let mut n_rows = 0usize;
    for list in &lists {
        let user = d.user_map().token(list.user);
        for (rank, &(item, score)) in list.items.iter().enumerate() {
            let item = d.item_map().token(item);
            writeln!(w, "{user}\t{item}\t{}\t{score}", rank + 1)
                .map_err(|e| data_err(path.display(), e))?;
            n_rows += 1;
        }
    }
    w.flush().map_err(|e| data_err(path.display(), e))?;
    println!(
        "wrote {} ({} users, {n_rows} rows)",
        path.display(),
        lists.len()
    );
    Ok(())
}

/// Everything a report consumer needs to rerun the experiment.
#[derive(serde::Serialize)]
struct ReportDocument<'a> {
    scheme: &'a str,
    split: &'a str,
    seed: Option<u64>,
    fraction: f64,
    k: usize,
    top_n: usize,
    threshold: f64,
    lambda_grid: &'a [f64],
    table_mode: &'a str,
    baseline: Option<&'a str>,
    reports: &'a [dissim_core::EvalReport],
}

#[allow(clippy::too_many_arguments)]
fn run_evaluation(
    input: &InputArgs,
    protocol: &ProtocolArgs,
    file: &FileConfig,
    presets: Vec<Preset>,
    scheme: &Option<String>,
    lambda: &Option<String>,
    k: Option<usize>,
    top_n: Option<usize>,
    threshold: Option<f64>,
    baseline: &Option<String>,
    literal_tables: bool,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let d = load_input(input, file)?;
    let (fraction, mode) = resolve_protocol(protocol, file)?;
    let config = SweepConfig {
        scheme: resolve_scheme(scheme, file)?,
        presets,
        lambda_grid: resolve_grid(lambda, file)?,
        k: resolve_k(k, file)?,
        top_n: resolve_top_n(top_n, file)?,
        threshold: resolve_threshold(threshold, file)?,
        table_mode: resolve_tables(literal_tables, file)?,
        baseline: resolve_baseline(baseline, file)?,
    };
    let out = resolve_out(out, file)?;
    let pair = holdout_split(&d, fraction, mode)?;
    let reports = lambda_sweep(&pair, &config)?;
    let table = render_table(&reports);
    print!("{table}");
    ensure_dir(&out)?;

    let text_path = out.join("report.txt");
    fs::write(&text_path, &table).map_err(|e| data_err(text_path.display(), e))?;

    let document = ReportDocument {
        scheme: scheme_name(config.scheme),
        split: match mode {
            SplitMode::Temporal => "temporal",
            SplitMode::Random { .. } => "random",
        },
        seed: match mode {
            SplitMode::Temporal => None,
            SplitMode::Random { seed } => Some(seed),
        },
        fraction,
        k: config.k,
        top_n: config.top_n,
        threshold: config.threshold,
        lambda_grid: &config.lambda_grid,
        table_mode: match config.table_mode {
            TableMode::Canonical => "canonical",
            TableMode::Literal => "literal",
        },
        baseline: config.baseline.map(|p| p.name()),
        reports: &reports,
    };
    let json_path = out.join("report.json");
    let body = serde_json::to_string_pretty(&document)
        .map_err(|e| data_err(json_path.display(), e))?;
    fs::write(&json_path, body).map_err(|e| data_err(json_path.display(), e))?;
    println!("wrote {}", text_path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs, file: &FileConfig) -> CliResult<()> {
    let presets = resolve_presets(&args.preset, file)?;
    run_evaluation(
        &args.input,
        &args.protocol,
        file,
        presets,
        &args.scheme,
        &args.lambda,
        args.k,
        args.top_n,
        args.threshold,
        &args.baseline,
        args.literal_tables,
        &args.out,
    )
}

fn cmd_sweep(args: SweepArgs, file: &FileConfig) -> CliResult<()> {
    run_evaluation(
        &args.input,
        &args.protocol,
        file,
        Preset::ALL.to_vec(),
        &args.scheme,
        &args.lambda,
        args.k,
        args.top_n,
        args.threshold,
        &args.baseline,
        args.literal_tables,
        &args.out,
    )
}
