use clap::{Args, Parser, Subcommand, ValueEnum};
use greedy_sensors::data::{write_snapshots, SnapshotFormat};
use greedy_sensors::{
    fisher_info, build_measurement, select, CandidateMatrixF64, Criterion, ErrorClass, Method,
    SelectOptions,
};
use greedy_sensors_cli::config::{parse_format, parse_methods, ConfigError, ExperimentConfig, Mode};
use greedy_sensors_cli::output::write_experiment;
use greedy_sensors_cli::synthetic::{synthetic_snapshots, SyntheticSpec};
use greedy_sensors_cli::{run_cv, run_random, run_submod_report, summarize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "greedy-sensors", version, about = "Greedy sensor selection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep p over random Gaussian systems.
    Random(ExpArgs),
    /// K-fold cross-validation on a snapshot file.
    Cv(ExpArgs),
    /// Counterexample, exhaustive set-function checks and the greedy bound.
    Submod(ExpArgs),
    /// Select sensors once and print the indices.
    Select(SelectArgs),
    /// Write the synthetic gridded snapshot set used for cross-validation.
    Synth(SynthArgs),
}

#[derive(Args, Default)]
struct ExpArgs {
    /// key=value file; flags given here override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p_min: Option<usize>,
    #[arg(long)]
    p_max: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// comma-separated subset of dg,ag,eg,random
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    data: Option<PathBuf>,
    /// csv or raw
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// remove the training mean before POD
    #[arg(long)]
    subtract_mean: bool,
    /// raw or reduced
    #[arg(long)]
    observation: Option<String>,
    /// evaluate each fold on its training snapshots
    #[arg(long)]
    test_on_train: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    D,
    A,
    E,
}

#[derive(Args)]
struct SelectArgs {
    /// headerless CSV, one candidate row per line; random system if absent
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    p: usize,
    /// dg, ag, eg, random or brute
    #[arg(long, default_value = "dg")]
    method: String,
    /// criterion for brute
    #[arg(long, value_enum, default_value = "d")]
    criterion: CriterionArg,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Core(greedy_sensors::Error),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<greedy_sensors::Error> for Failure {
    fn from(e: greedy_sensors::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
            Failure::Core(e) => match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Data => 3,
                ErrorClass::Numerical => 4,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn build_config(mode: Mode, a: &ExpArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::defaults(mode);
    if let Some(path) = &a.config {
        cfg.apply_file(path)?;
    }
    macro_rules! over {
        ($field:ident) => {
            if let Some(v) = a.$field {
                cfg.$field = v;
            }
        };
    }
    over!(n);
    over!(r);
    over!(p_min);
    over!(p_max);
    over!(trials);
    over!(seed);
    over!(k);
    over!(sigma);
    let bad = |key: &str, msg: String| ConfigError::BadValue { key: key.into(), msg };
    if let Some(m) = &a.methods {
        cfg.methods = parse_methods(m).map_err(|e| bad("methods", e))?;
    }
    if let Some(f) = &a.format {
        cfg.format = parse_format(f).map_err(|e| bad("format", e))?;
    }
    if let Some(o) = &a.observation {
        cfg.observation = o.parse().map_err(|e| bad("observation", e))?;
    }
    if a.epsilon.is_some() {
        cfg.epsilon = a.epsilon;
    }
    if a.data.is_some() {
        cfg.data_path = a.data.clone();
    }
    if let Some(out) = &a.out {
        cfg.out_dir = out.clone();
    }
    cfg.subtract_mean |= a.subtract_mean;
    cfg.test_on_train |= a.test_on_train;
    cfg.validate()?;
    Ok(cfg)
}

fn experiment(mode: Mode, a: &ExpArgs) -> Result<(), Failure> {
    let cfg = build_config(mode, a)?;
    match mode {
        Mode::Random | Mode::Cv => {
            let records = if mode == Mode::Random { run_random(&cfg)? } else { run_cv(&cfg)? };
            let summary = summarize(&records, &cfg.methods);
            let (main, side) = write_experiment(&cfg.out_dir, &mode.to_string(), &records, &summary)?;
            println!("wrote {} and {}", main.display(), side.display());
        }
        Mode::SubmodReport => {
            let rep = run_submod_report(&cfg)?;
            std::fs::create_dir_all(&cfg.out_dir)?;
            std::fs::write(cfg.out_dir.join("submod_report.txt"), &rep.text)?;
            std::fs::write(cfg.out_dir.join("submod_witnesses.csv"), &rep.witnesses_csv)?;
            std::fs::write(cfg.out_dir.join("submod_nemhauser.csv"), &rep.nemhauser_csv)?;
            print!("{}", rep.text);
        }
    }
    Ok(())
}

fn read_candidates(path: &Path) -> Result<CandidateMatrixF64, Failure> {
    let data_err = |m: String| Failure::Core(greedy_sensors::Error::Data(m));
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| data_err(e.to_string()))?;
    let mut values = Vec::new();
    let mut rows = 0;
    let mut width = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| data_err(e.to_string()))?;
        if *width.get_or_insert(rec.len()) != rec.len() {
            return Err(data_err(format!("row {} has {} columns", rows + 1, rec.len())));
        }
        for field in rec.iter() {
            values.push(field.parse::<f64>().map_err(|e| data_err(format!("`{field}`: {e}")))?);
        }
        rows += 1;
    }
    Ok(CandidateMatrixF64::from_row_slice(rows, width.unwrap_or(0), &values)?)
}

fn select_once(a: &SelectArgs) -> Result<(), Failure> {
    let cand = match &a.data {
        Some(path) => read_candidates(path)?,
        None => greedy_sensors::data::gen_random_system(a.n, a.r, a.seed),
    };
    let method: Method = a.method.parse()?;
    let criterion = match a.criterion {
        CriterionArg::D => Criterion::D,
        CriterionArg::A => Criterion::A,
        CriterionArg::E => Criterion::E,
    };
    let res = select(&cand, method, a.p, SelectOptions { seed: a.seed, criterion })?;
    let idx: Vec<String> = res.indices.iter().map(|i| i.to_string()).collect();
    println!("indices: {}", idx.join(" "));
    let f = fisher_info(&build_measurement(&cand, &res.indices)?)?;
    println!("det: {:e}", f.det_index());
    match f.trace_inv_index() {
        Ok(t) => println!("trace_inv: {t:e}"),
        Err(e) => println!("trace_inv: {e}"),
    }
    println!("min_eig: {:e}", f.min_eig_index()?);
    println!("seconds: {:.6}", res.wall_time);
    Ok(())
}

fn synth(a: &SynthArgs) -> Result<(), Failure> {
    let format = parse_format(&a.format)
        .map_err(|e| ConfigError::BadValue { key: "format".into(), msg: e })?;
    let data = synthetic_snapshots(&SyntheticSpec {
        seed: a.seed,
        ..SyntheticSpec::default()
    })?;
    write_snapshots(&data, &a.out, format)?;
    let kind = if format == SnapshotFormat::Csv { "csv" } else { "raw" };
    println!("wrote {} ({kind}, n={}, m={})", a.out.display(), data.n(), data.m());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Random(a) => experiment(Mode::Random, a),
        Command::Cv(a) => experiment(Mode::Cv, a),
        Command::Submod(a) => experiment(Mode::SubmodReport, a),
        Command::Select(a) => select_once(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
