use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twrn_cli::error::{CliError, Result};
use twrn_cli::reports::{run_design, run_recommend, run_simulate};
use twrn_cli::scenario::{load_scenario, ScenarioOverrides};
use twrn_cli::sweep::{run_bler_sweep, MethodKind, PowerTie, Scale, SweepRequest, SweepSpec, SweepVariable};
use twrn_core::exec::Execution;
use twrn_core::{McSettings, Scheme};

/// Sum-BLER analysis of short-packet two-way amplify-and-forward relaying.
#[derive(Debug, Parser)]
#[command(name = "twrn", version)]
struct Cli {
    /// Scenario JSON (ScenarioConfig fields); defaults to the 40/55/45 dBm reference geometry.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo trials per endpoint.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    trials: u64,
    /// Output path, or `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    /// Evaluate everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(flatten)]
    overrides: OverrideArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OverrideArgs {
    #[arg(long, global = true, allow_negative_numbers = true)]
    p_a_dbm: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    p_b_dbm: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    p_r_dbm: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    n_a_dbm: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    n_b_dbm: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    n_r_dbm: Option<f64>,
    #[arg(long, global = true)]
    d_ar: Option<f64>,
    #[arg(long, global = true)]
    d_br: Option<f64>,
    #[arg(long, global = true)]
    omega: Option<f64>,
}

impl From<&OverrideArgs> for ScenarioOverrides {
    fn from(o: &OverrideArgs) -> Self {
        ScenarioOverrides {
            p_a_dbm: o.p_a_dbm,
            p_b_dbm: o.p_b_dbm,
            p_r_dbm: o.p_r_dbm,
            n_a_dbm: o.n_a_dbm,
            n_b_dbm: o.n_b_dbm,
            n_r_dbm: o.n_r_dbm,
            d_ar: o.d_ar,
            d_br: o.d_br,
            omega: o.omega,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep one variable and write sum-BLER of both schemes as CSV.
    Sweep {
        /// p_a_dbm, p_b_dbm, p_r_dbm, m or sigma.
        #[arg(long)]
        var: SweepVariable,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        points: usize,
        /// linear or log.
        #[arg(long, default_value = "linear")]
        scale: Scale,
        /// Comma-separated: quadrature, series, asymptotic, monte_carlo.
        #[arg(long, default_value = "quadrature")]
        methods: String,
        #[arg(long, default_value_t = 256)]
        sigma: u32,
        #[arg(long, default_value_t = 1200)]
        m: u32,
        /// Series truncation index.
        #[arg(long, default_value_t = 1)]
        k_max: u32,
        /// Tie another power to the swept one, e.g. `p_b_dbm=10` (repeatable).
        #[arg(long = "tie", allow_hyphen_values = true)]
        ties: Vec<PowerTie>,
        /// Simulate with the high-SNR SNR form instead of the exact one.
        #[arg(long)]
        approx_snr: bool,
    },
    /// Choose 2TS or 3TS for a delay budget.
    Recommend {
        #[arg(long)]
        sigma: f64,
        /// Delay budget in channel uses.
        #[arg(long)]
        m_d: f64,
    },
    /// Minimum blocklength for a target sum-BLER and the optimal payload.
    Design {
        #[arg(long)]
        sigma: f64,
        /// 2TS or 3TS.
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        eps_target: f64,
        /// Blocklength at which to report the throughput-optimal payload.
        #[arg(long)]
        m: Option<f64>,
    },
    /// Monte Carlo sum-BLER at a single operating point.
    Simulate {
        #[arg(long)]
        sigma: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        approx_snr: bool,
    },
}

fn open_output(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let file = File::create(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let scenario = load_scenario(cli.config.as_deref(), &(&cli.overrides).into())?;
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let mc = |approx_snr: bool| McSettings {
        trials: cli.trials,
        seed: cli.seed,
        use_exact_snr: !approx_snr,
    };
    let mut out = open_output(&cli.out)?;
    match cli.command {
        Command::Sweep {
            var,
            start,
            stop,
            points,
            scale,
            methods,
            sigma,
            m,
            k_max,
            ties,
            approx_snr,
        } => {
            let request = SweepRequest {
                scenario,
                sigma,
                m,
                sweep: SweepSpec {
                    variable: var,
                    start,
                    stop,
                    points,
                    scale,
                    ties,
                },
                methods: MethodKind::parse_list(&methods)?,
                mc: mc(approx_snr),
                series_k_max: k_max,
                execution,
            };
            let outcome = run_bler_sweep(&request, &mut out)?;
            if outcome.nan_cells > 0 {
                log::warn!("{} cell(s) written as nan", outcome.nan_cells);
            }
        }
        Command::Recommend { sigma, m_d } => write_json(&mut out, &run_recommend(&scenario, sigma, m_d)?)?,
        Command::Design {
            sigma,
            scheme,
            eps_target,
            m,
        } => write_json(&mut out, &run_design(&scenario, sigma, scheme, eps_target, m)?)?,
        Command::Simulate {
            sigma,
            m,
            scheme,
            approx_snr,
        } => write_json(&mut out, &run_simulate(&scenario, sigma, m, scheme, mc(approx_snr))?)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twrn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
