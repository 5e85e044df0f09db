use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mcpsd::experiment::{
    consistency_csv, consistency_curve, estimates_csv, metrics_csv, preset, run_experiment_with_jobs, tradeoff_table,
    with_jobs, write_outputs, ExperimentConfig, ExperimentResult,
};
use mcpsd::patterns::{diagnose, golomb_ruler, random_pattern};
use mcpsd::synth::generate;
use mcpsd::{Error, Result, SamplingPattern};

#[derive(Parser)]
#[command(name = "mcpsd", version, about = "Power spectrum estimation from multi-coset samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline once on a single realization.
    Estimate(RunArgs),
    /// Monte Carlo run over all configured trials.
    Experiment(RunArgs),
    /// Mean squared error against sample count.
    Consistency {
        #[command(flatten)]
        run: RunArgs,
        /// Strictly increasing samples-per-channel values.
        #[arg(long, value_delimiter = ',', default_values_t = [50usize, 500, 5000, 50000])]
        ns: Vec<usize>,
    },
    /// Minimum channel counts over a range of resolutions.
    Tradeoff {
        #[arg(long, default_value_t = 2)]
        l_min: usize,
        #[arg(long, default_value_t = 512)]
        l_max: usize,
        #[arg(long, default_value_t = 2)]
        l_step: usize,
        #[arg(long, default_value_t = 2e9)]
        nyquist_hz: f64,
        /// Sparsity for the compressive columns.
        #[arg(long)]
        sparsity: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampling-pattern utilities.
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Write one realization of the configured process as CSV.
    Synth {
        #[command(flatten)]
        source: ConfigSource,
        /// Nyquist samples to generate.
        #[arg(long, default_value_t = 65536)]
        length: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PatternCommand {
    /// Draw a uniformly random pattern.
    Generate {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank and condition number of a pattern's measurement matrix.
    Diagnose {
        #[arg(long)]
        l: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        offsets: Vec<usize>,
    },
    /// Print a tabulated Golomb ruler.
    Ruler {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ConfigSource {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: ConfigSource,
    /// Overrides the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads for trials.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory (consistency: CSV file); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(source: &ConfigSource) -> Result<ExperimentConfig> {
    match (&source.config, &source.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)
        }
        (None, Some(name)) => preset(name),
        (None, None) => Err(Error::config("config", "pass --config or --preset")),
    }
}

fn load_run(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut config = load(&args.source)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if args.out.is_some() {
        config.output = args.out.clone();
    }
    config.validate()?;
    Ok(config)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn summarize(result: &ExperimentResult) {
    let d = &result.diagnostics;
    eprintln!(
        "pattern {:?} (L = {}, rank {}, condition {:.4}); {} trial(s), mean NSE {:.6} (std {:.6}), mean squared error {:.6e}, {:.2} s",
        result.pattern.offsets(),
        result.pattern.l(),
        d.rank,
        d.condition_number,
        result.trials.len(),
        result.mean_nse,
        result.std_nse,
        result.mean_squared_error,
        result.wall_clock_seconds
    );
}

fn run_and_write(config: &ExperimentConfig, jobs: Option<usize>) -> Result<()> {
    let result = run_experiment_with_jobs(config, jobs)?;
    summarize(&result);
    match &config.output {
        Some(dir) => write_outputs(&result, dir),
        None => {
            print!("{}", estimates_csv(&result));
            if result.trials.len() > 1 {
                print!("\n{}", metrics_csv(&result));
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => {
            let config = ExperimentConfig { trials: 1, ..load_run(&args)? };
            run_and_write(&config, args.jobs)
        }
        Command::Experiment(args) => run_and_write(&load_run(&args)?, args.jobs),
        Command::Consistency { run, ns } => {
            let config = load_run(&run)?;
            let points = with_jobs(run.jobs, || consistency_curve(&config, &ns))?;
            emit(&consistency_csv(&points), run.out.as_deref())
        }
        Command::Tradeoff { l_min, l_max, l_step, nyquist_hz, sparsity, out } => {
            if l_min < 2 || l_min % 2 != 0 || l_step == 0 || l_step % 2 != 0 || l_max < l_min {
                return Err(Error::config("l", "need even l-min >= 2, even l-step >= 2, and l-max >= l-min"));
            }
            if !(nyquist_hz.is_finite() && nyquist_hz > 0.0) {
                return Err(Error::config("nyquist-hz", "must be positive"));
            }
            emit(&tradeoff_table((l_min..=l_max).step_by(l_step), nyquist_hz, sparsity), out.as_deref())
        }
        Command::Pattern(cmd) => {
            let pattern = match cmd {
                PatternCommand::Generate { l, q, seed } => random_pattern(l, q, seed)?,
                PatternCommand::Diagnose { l, offsets } => SamplingPattern::new(l, offsets)?,
                PatternCommand::Ruler { order } => {
                    let r = golomb_ruler(order)?;
                    println!("{}", serde_json::to_string(&r).expect("ruler serializes"));
                    return Ok(());
                }
            };
            let report = serde_json::json!({
                "l": pattern.l(),
                "offsets": pattern.offsets(),
                "diagnostics": diagnose(&pattern),
            });
            println!("{report}");
            Ok(())
        }
        Command::Synth { source, length, seed, out } => {
            let config = load(&source)?;
            let signal = generate(&config.process, length, seed.unwrap_or(config.seed))?;
            let mut text = String::from("n,x\n");
            for (n, x) in signal.samples.iter().enumerate() {
                writeln!(text, "{n},{x}").unwrap();
            }
            emit(&text, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
