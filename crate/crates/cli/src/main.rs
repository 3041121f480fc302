use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use simon32_cli::stages;
use simon32_cli::{with_workers, CliError, Format, RunConfig};
use simon32_core::{DiffState, HwMode, PromisingMetric, ThresholdMode, WordSize};

#[derive(Parser)]
#[command(
    name = "simon32",
    version,
    about = "Differential cryptanalysis workbench for SIMON32"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Word size n in bits (block is 2n).
    #[arg(long, global = true, default_value_t = 16)]
    word_size: u32,
    #[arg(long, global = true, default_value_t = 0.1)]
    pddt_threshold: f64,
    /// How the pDDT threshold is compared: at-least (>=) or greater (>).
    #[arg(long, global = true, default_value = "at-least")]
    threshold_mode: ThresholdMode,
    #[arg(long, global = true, default_value_t = 0.5)]
    sig_threshold: f64,
    /// Percent of each non-significant stratum to sample.
    #[arg(long, global = true, default_value_t = 10.0)]
    sample_percent: f64,
    /// Trail length in rounds.
    #[arg(long, global = true, default_value_t = 20)]
    rounds: usize,
    /// Rounds per HW experiment.
    #[arg(long, global = true, default_value_t = 10)]
    experiment_rounds: usize,
    /// Trials per differential in HW experiments.
    #[arg(long, global = true, default_value_t = 10)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// paper-model, empirical or unkeyed.
    #[arg(long, global = true, default_value = "empirical")]
    hw_mode: HwMode,
    /// Largest HW a significant differential may show to be promising.
    #[arg(long, global = true, default_value_t = 0)]
    extract_hw: u32,
    /// transition or experiment.
    #[arg(long, global = true, default_value = "transition")]
    extract_metric: PromisingMetric,
    /// Keep the all-zero differential when extracting.
    #[arg(long, global = true)]
    include_trivial: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(
        long,
        global = true,
        env = "SIMON32_OUT",
        default_value = "simon32-out"
    )]
    out: PathBuf,
    /// csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the pDDT.
    Pddt {
        /// Also export the table as CSV/JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Split the pDDT into significant and non-significant files.
    Sort {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Compare HW distributions of significant and sampled differentials.
    Experiment,
    /// Extract promising differentials from the significant set.
    Extract,
    /// Generate and rank trails for the promising differentials.
    Trails {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Print one trail from an explicit start difference.
    Trail {
        #[arg(long, value_parser = parse_word)]
        dl: u32,
        #[arg(long, value_parser = parse_word)]
        dr: u32,
    },
    /// Monte-Carlo rate at which real rounds follow the trail model.
    ModelGap {
        #[arg(long, value_parser = parse_word)]
        dl: u32,
        #[arg(long, value_parser = parse_word)]
        dr: u32,
        #[arg(long, default_value_t = 3)]
        max_rounds: usize,
        #[arg(long, default_value_t = 1 << 16)]
        mc_trials: u64,
    },
    /// Run pddt, sort, experiment, extract and trails in order.
    RunAll,
}

fn parse_word(s: &str) -> Result<u32, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("{s:?}: {e}"))
}

impl Opts {
    fn config(self) -> Result<RunConfig, CliError> {
        let word_size =
            WordSize::new(self.word_size).map_err(|e| CliError::Config(e.to_string()))?;
        let config = RunConfig {
            word_size,
            pddt_threshold: self.pddt_threshold,
            threshold_mode: self.threshold_mode,
            sig_threshold: self.sig_threshold,
            sample_percent: self.sample_percent,
            rounds_experiment: self.experiment_rounds,
            rounds_trail: self.rounds,
            trials: self.trials,
            seed: self.seed,
            hw_mode: self.hw_mode,
            extract_hw: self.extract_hw,
            extract_metric: self.extract_metric,
            include_trivial: self.include_trivial,
            format: self.format,
            workers: self.workers,
            output_dir: self.out,
        };
        config.validate()?;
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.opts.config()?;
    let cmd = cli.cmd;
    with_workers(config.workers, || -> Result<(), CliError> {
        match cmd {
            Cmd::Pddt { csv } => stages::cmd_pddt_build(&config, csv).map(drop),
            Cmd::Sort { input } => stages::cmd_sort(&config, input.as_deref()).map(drop),
            Cmd::Experiment => stages::cmd_experiment(&config).map(drop),
            Cmd::Extract => stages::cmd_extract(&config).map(drop),
            Cmd::Trails { input } => stages::cmd_trails(&config, input.as_deref()).map(drop),
            Cmd::Trail { dl, dr } => stages::cmd_trail(&config, DiffState::new(dl, dr)).map(drop),
            Cmd::ModelGap {
                dl,
                dr,
                max_rounds,
                mc_trials,
            } => stages::cmd_model_gap(&config, DiffState::new(dl, dr), max_rounds, mc_trials)
                .map(drop),
            Cmd::RunAll => {
                let start = std::time::Instant::now();
                stages::run_all(&config)?;
                println!("run-all: done in {:.2} s", start.elapsed().as_secs_f64());
                Ok(())
            }
        }
    })?
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simon32: {e}");
            e.into()
        }
    }
}
