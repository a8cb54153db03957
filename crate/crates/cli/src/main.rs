//! Command-line front end: parse specs, run analyses and sweeps, emit
//! deterministic CSV/JSON artifacts.

mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use darkmode_lab::atoms::{atom_dark_states, AtomSystem};
use darkmode_lab::chains::{build_chain_network, chain_dark_prediction, ChainSpec};
use darkmode_lab::darkmode::count_dark_modes;
use darkmode_lab::dfs::{dfs_single_excitation, DfsSystem};
use darkmode_lab::dynamics::final_phonon_numbers;
use darkmode_lab::enumeration::{config_verdict, ordered_configs, VerdictParams};
use darkmode_lab::schema::{ArrowheadFile, DarkModeReportFile};
use darkmode_lab::spectral::to_normal_form_with;
use darkmode_lab::{load_spec, validate_spec, Error, Tolerances};

use output::{write_output, Csv};
use sweep::{run_sweep, SweepPlanFile};

/// Exit codes: 2 parse, 3 validation, 4 numerical failure, 5 census failure.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Parse { .. } | Error::DimensionMismatch { .. } => 2,
            Error::InvalidSpec(_) => 3,
            Error::TooLarge { .. } => 2,
            Error::Io(_) => 1,
            _ => 4,
        };
        CliError::new(code, err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::new(1, err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "darkmode-lab",
    about = "Dark-mode analysis and sideband-cooling simulation of two-component bosonic networks",
    version
)]
struct Cli {
    #[command(flatten)]
    tols: TolArgs,

    /// Worker threads for sweeps and the census (output order is unaffected).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Degeneracy grouping tolerance (relative to max |Ω|).
    #[arg(long, global = true, env = "DARKMODE_LAB_TOL_DEG", default_value_t = 1e-8)]
    tol_deg: f64,

    /// Rank cutoff (relative to the group's largest singular value).
    #[arg(long, global = true, env = "DARKMODE_LAB_TOL_RANK", default_value_t = 1e-10)]
    tol_rank: f64,

    /// Zero-coupling cutoff (relative to ‖C_AB‖_F).
    #[arg(long, global = true, env = "DARKMODE_LAB_TOL_CPL", default_value_t = 1e-10)]
    tol_cpl: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances<f64> {
        Tolerances::default()
            .with_tol_deg(self.tol_deg)
            .with_tol_rank(self.tol_rank)
            .with_tol_cpl(self.tol_cpl)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dark/bright-mode census of a network spec (JSON report).
    Analyze { spec: PathBuf },
    /// Steady-state cooling of a network spec (one CSV row).
    Cool { spec: PathBuf },
    /// Grid sweep over one or two numeric spec fields (CSV).
    Sweep {
        spec: PathBuf,
        /// Sweep plan JSON (axes, counts, overrides).
        plan: PathBuf,
    },
    /// Topology census of [1,N] networks (CSV).
    Enumerate {
        #[arg(short = 'n', long)]
        n: usize,
    },
    /// Two-chain network: dark-mode prediction (JSON) or cooling (CSV).
    Chain {
        spec: PathBuf,
        /// Also simulate steady-state cooling and emit CSV instead of JSON.
        #[arg(long)]
        cool: bool,
    },
    /// Driven multi-level atom: bright/dark state census (JSON).
    Atoms { spec: PathBuf },
    /// Two atoms in a common bath: decoherence-free-subspace census (JSON).
    Dfs { spec: PathBuf },
    /// Normal-mode (arrowhead) form of a network spec (JSON).
    DumpNormalForm { spec: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn load_valid_spec(path: &PathBuf) -> Result<darkmode_lab::NetworkSpec<f64>, CliError> {
    let spec = load_spec(path)?;
    let report = validate_spec(&spec);
    if !report.is_valid() {
        return Err(CliError::new(3, format!("invalid network spec:\n{report}")));
    }
    Ok(spec)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tols = cli.tols.tolerances();
    match &cli.command {
        Command::Analyze { spec } => {
            let spec = load_valid_spec(spec)?;
            let form = to_normal_form_with(&spec, &tols)?;
            let report = count_dark_modes(&form, &tols);
            let json = serde_json::to_string_pretty(&DarkModeReportFile::from_report(&report))
                .expect("report serialization");
            write_output(cli.out.as_deref(), &(json + "\n"))?;
        }
        Command::DumpNormalForm { spec } => {
            let spec = load_valid_spec(spec)?;
            let form = to_normal_form_with(&spec, &tols)?;
            let json = serde_json::to_string_pretty(&ArrowheadFile::from_form(&form))
                .expect("form serialization");
            write_output(cli.out.as_deref(), &(json + "\n"))?;
        }
        Command::Cool { spec } => {
            let spec = load_valid_spec(spec)?;
            let mut csv = Csv::cooling_header(spec.n);
            let form = to_normal_form_with(&spec, &tols)?;
            let dark = count_dark_modes(&form, &tols).dark_count;
            let out = final_phonon_numbers(&spec, &tols)?;
            csv.cooling_row(None, None, &out, dark, spec.n);
            write_output(cli.out.as_deref(), &csv.finish())?;
        }
        Command::Sweep { spec, plan } => {
            let spec = load_valid_spec(spec)?;
            let plan_text = std::fs::read_to_string(plan)?;
            let plan: SweepPlanFile = serde_json::from_str(&plan_text)
                .map_err(|e| CliError::new(2, format!("sweep plan: {e}")))?;
            let csv = run_sweep(&spec, &plan, &tols, cli.jobs)?;
            write_output(cli.out.as_deref(), &csv)?;
        }
        Command::Enumerate { n } => {
            let configs = ordered_configs(*n)?;
            let params = VerdictParams::default();
            let rows: Vec<_> = maybe_parallel(cli.jobs, &configs, |config| {
                config_verdict(config, &params, &tols)
            });
            let mut csv = Csv::new("id,encoding,dark_count,cooling_predicted,cooling_observed,best_max_nf");
            for (idx, row) in rows.into_iter().enumerate() {
                let v = row.map_err(|e| CliError::new(5, format!("census dynamics failed: {e}")))?;
                csv.push_fields(&[
                    (idx + 1).to_string(),
                    v.config.encoding_string(),
                    v.dark_count.to_string(),
                    v.cooling_predicted.to_string(),
                    v.cooling_observed.to_string(),
                    output::sig12(v.best_max_nf),
                ]);
            }
            write_output(cli.out.as_deref(), &csv.finish())?;
        }
        Command::Chain { spec, cool } => {
            let text = std::fs::read_to_string(spec)?;
            let chain: ChainSpec<f64> = serde_json::from_str(&text)
                .map_err(|e| CliError::new(2, format!("chain spec: {e}")))?;
            if *cool {
                let (net, _) = build_chain_network(&chain);
                let form = to_normal_form_with(&net, &tols)?;
                let dark = count_dark_modes(&form, &tols).dark_count;
                let out = final_phonon_numbers(&net, &tols)?;
                let mut csv = Csv::cooling_header(net.n);
                csv.cooling_row(None, None, &out, dark, net.n);
                write_output(cli.out.as_deref(), &csv.finish())?;
            } else {
                let report = chain_dark_prediction(&chain, &tols)?;
                let json = serde_json::json!({
                    "computed_dark": report.computed_dark,
                    "predicted_dark": report.predicted_dark,
                    "parity": format!("{:?}", report.parity),
                    "frequencies_left": report.frequencies.left,
                    "frequencies_right": report.frequencies.right,
                });
                write_output(cli.out.as_deref(), &(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
            }
        }
        Command::Atoms { spec } => {
            let text = std::fs::read_to_string(spec)?;
            let atoms: AtomSystem<f64> = serde_json::from_str(&text)
                .map_err(|e| CliError::new(2, format!("atom spec: {e}")))?;
            let report = atom_dark_states(&atoms, &tols)?;
            let json = serde_json::json!({
                "dark_count": report.dark_count,
                "bright_states": output::cvecs(&report.bright_states),
                "dark_states": output::cvecs(&report.dark_states),
            });
            write_output(cli.out.as_deref(), &(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
        }
        Command::Dfs { spec } => {
            let text = std::fs::read_to_string(spec)?;
            let dfs: DfsSystem<f64> = serde_json::from_str(&text)
                .map_err(|e| CliError::new(2, format!("dfs spec: {e}")))?;
            let report = dfs_single_excitation(&dfs, &tols)?;
            let json = serde_json::json!({
                "dark_count": report.dark_count,
                "dark_states": output::cvecs(&report.dark_states),
                "bright_states": output::cvecs(&report.bright_states),
                "decoupling_norms": report.decoupling_norms,
            });
            write_output(cli.out.as_deref(), &(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
        }
    }
    Ok(())
}

/// Map in parallel when `jobs > 1`, preserving input order either way.
fn maybe_parallel<T: Sync, U: Send>(
    jobs: usize,
    items: &[T],
    f: impl Fn(&T) -> U + Sync,
) -> Vec<U> {
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            items.par_iter().map(&f).collect()
        })
    } else {
        items.iter().map(&f).collect()
    }
}
