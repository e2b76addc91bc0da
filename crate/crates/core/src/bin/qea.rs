use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qea::doe::{OrthogonalArray, ResponseStat};
use qea::engine::{StopCriteria, TraceMode};
use qea::harness::{self, SummaryRow};
use qea::params::{ParamPreset, ParamSpace, ParamVector, SpacePreset};
use qea::problems::Problem;
use qea::tuner::{self, QeaEvaluator, TunerConfig};
use qea::{Error, Result};

#[derive(Parser)]
#[command(name = "qea", version, about = "Quantum-inspired evolutionary algorithm and parameter tuner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one parameter set on a problem and summarize.
    Run(RunArgs),
    /// Tune parameters on a problem instance.
    Tune(TuneArgs),
    /// Run several parameter sets on several problems.
    Compare(CompareArgs),
    /// Write a generated instance file.
    Gen(GenArgs),
    /// Check strength-2 balance of an orthogonal array.
    ValidateOa(ValidateArgs),
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long)]
    max_evals: Option<u64>,
    #[arg(long)]
    max_gens: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl Common {
    fn stop(&self) -> Result<StopCriteria> {
        if self.max_evals.is_none() && self.max_gens.is_none() {
            return Err(Error::InvalidArgument("give --max-evals and/or --max-gens".into()));
        }
        Ok(StopCriteria {
            max_evaluations: self.max_evals,
            max_generations: self.max_gens,
            stop_at_optimum: None,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Problem selector, e.g. `mmdp:20`, `countsat:150`, `ppeaks:1:64`,
    /// `knapsack:strongly-correlated:1000:0.5`, `file:PATH`.
    #[arg(long)]
    problem: String,
    /// Named parameter set or a parameter file path.
    #[arg(long, default_value = "untuned")]
    params: String,
    #[arg(long, default_value = "qea")]
    label: String,
    /// Write trace-<run>.csv per run.
    #[arg(long)]
    traces: bool,
    /// Keep every generation in traces.
    #[arg(long)]
    full_trace: bool,
    /// Do not stop early at the known optimum.
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Best,
    Mean,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    problem: String,
    /// Parameter bounds: mmdp, countsat, knapsack or ppeaks.
    #[arg(long)]
    space: String,
    #[arg(long, default_value_t = 3)]
    n1: usize,
    #[arg(long, default_value_t = 3)]
    n2: usize,
    #[arg(long, default_value_t = 2)]
    nwi1: usize,
    #[arg(long, default_value_t = 2)]
    nwi2: usize,
    /// Per-experiment response statistic.
    #[arg(long, value_enum, default_value = "best")]
    stat: Stat,
    /// Let the two-level array column choose equal or random initialization.
    #[arg(long)]
    tune_init_mode: bool,
    /// Restart exploration around this parameter set (name or file).
    #[arg(long)]
    resume: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// Problem selector; repeatable.
    #[arg(long = "problem", required = true)]
    problems: Vec<String>,
    /// `LABEL=PARAMS` where PARAMS is a preset name or file; repeatable.
    #[arg(long = "set", required = true)]
    sets: Vec<String>,
}

#[derive(Args)]
struct GenArgs {
    /// Instance selector (`knapsack:...` or `ppeaks:...`).
    #[arg(long)]
    problem: String,
    #[arg(long)]
    seed: u64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// `l27`, `l50` or a path to an array text file.
    array: String,
    /// Also write the array in text form here.
    #[arg(long)]
    export: Option<PathBuf>,
}

fn load_params(spec: &str) -> Result<ParamVector> {
    match spec.parse::<ParamPreset>() {
        Ok(p) => Ok(p.vector()),
        Err(_) => ParamVector::from_toml(&fs::read_to_string(spec)?),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let problem = harness::parse_problem(&a.problem, a.common.seed)?;
    let params = load_params(&a.params)?;
    let mut stop = a.common.stop()?;
    if !a.no_early_stop {
        stop = stop.with_optimum(problem.known_optimum());
    }
    let mut config = params.engine_config(problem.sense(), stop)?;
    config.trace = match (a.traces, a.full_trace) {
        (_, true) => TraceMode::Full,
        (true, false) => TraceMode::Subsampled,
        _ => TraceMode::Off,
    };
    let records = harness::run_matrix(&problem, &config, a.common.runs, a.common.seed)?;
    let stats = harness::aggregate(&records, problem.known_optimum(), problem.sense())?;
    let csv = harness::summary_csv(&[SummaryRow { problem: problem.name(), label: a.label, stats }]);
    write(&a.common.out, "summary.csv", &csv)?;
    if a.traces || a.full_trace {
        for (k, r) in records.iter().enumerate() {
            write(&a.common.out, &format!("trace-{k}.csv"), &harness::trace_csv(r))?;
        }
    }
    print!("{csv}");
    Ok(())
}

fn cmd_tune(a: TuneArgs) -> Result<()> {
    let problem = harness::parse_problem(&a.problem, a.common.seed)?;
    let space = ParamSpace::preset(a.space.parse::<SpacePreset>()?);
    let stop = a.common.stop()?.with_optimum(problem.known_optimum());
    let evaluator = QeaEvaluator::new(&problem, stop);
    let config = TunerConfig {
        n1: a.n1,
        n2: a.n2,
        nwi1: a.nwi1,
        nwi2: a.nwi2,
        runs: a.common.runs,
        stat: match a.stat {
            Stat::Best => ResponseStat::Best,
            Stat::Mean => ResponseStat::Mean,
        },
        assign_init_mode: a.tune_init_mode,
        ..Default::default()
    };
    let start = a.resume.as_deref().map(load_params).transpose()?;
    let out = tuner::tune_from(&evaluator, &space, &config, a.common.seed, start)?;
    let history = tuner::history_csv(&out.history);
    write(&a.common.out, "history.csv", &history)?;
    write(&a.common.out, "history.jsonl", &tuner::history_jsonl(&out.history))?;
    write(&a.common.out, "params.toml", &out.pivot.to_toml())?;
    print!("{history}");
    if let Some(reference) = problem.known_optimum() {
        let (large, small) = tuner::robustness_metrics(&out.exploration_first, &out.exploitation_first, reference);
        println!("rms deviation from optimum: large variation {large}, small variation {small}");
    }
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    let problems = a
        .problems
        .iter()
        .map(|p| harness::parse_problem(p, a.common.seed))
        .collect::<Result<Vec<_>>>()?;
    let sets = a
        .sets
        .iter()
        .map(|s| {
            let (label, params) = s
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("--set `{s}` is not LABEL=PARAMS")))?;
            Ok((label.to_string(), load_params(params)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = harness::compare(&problems, &sets, a.common.stop()?, a.common.runs, a.common.seed)?;
    let csv = harness::summary_csv(&rows);
    write(&a.common.out, "summary.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let problem = harness::parse_problem(&a.problem, a.seed)?;
    let text = harness::instance_text(&problem)
        .ok_or_else(|| Error::InvalidArgument(format!("`{}` has no instance file", a.problem)))?;
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&a.out, text)?;
    Ok(())
}

fn cmd_validate(a: ValidateArgs) -> Result<bool> {
    let oa = match a.array.as_str() {
        "l27" | "L27" => OrthogonalArray::l27(),
        "l50" | "L50" => OrthogonalArray::l50(),
        path => OrthogonalArray::from_text(&fs::read_to_string(path)?)?,
    };
    if let Some(path) = a.export {
        fs::write(path, oa.to_text())?;
    }
    let report = oa.validate_strength2();
    print!("{}", report.render());
    Ok(report.is_valid())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let result = match Cli::parse().command {
        Command::Run(a) => cmd_run(a).map(|_| true),
        Command::Tune(a) => cmd_tune(a).map(|_| true),
        Command::Compare(a) => cmd_compare(a).map(|_| true),
        Command::Gen(a) => cmd_gen(a).map(|_| true),
        Command::ValidateOa(a) => cmd_validate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("qea: {e}");
            ExitCode::from(2)
        }
    }
}
