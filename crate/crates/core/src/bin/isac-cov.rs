//! Command-line front end. Exit codes: 0 success, 1 validation failure,
//! 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isac_coverage::experiments::{
    analytic_value, disagreements, load_config, parse_grid, preset, run_sweep, write_csv, write_csv_to, Axis,
    Config, ConfigError, Methods, ResultRow, SweepSpec, TaskSel, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(name = "isac-cov", version, about = "Coverage of ISAC networks under blockage")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// `key = value` config file; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// comm, sens or both.
    #[arg(long, default_value = "both")]
    task: TaskSel,
    /// Override both SINR thresholds (dB).
    #[arg(long)]
    threshold_db: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the coverage integrals at one operating point.
    Analytic {
        #[command(flatten)]
        common: Common,
    },
    /// Estimate coverage by simulation at one operating point.
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        snapshots: Option<usize>,
        #[arg(long, env = "ISAC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Sweep one axis and write CSV.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// threshold_db, lambda_bs, rcs_dbsm or blockage.
        #[arg(long)]
        vary: Axis,
        /// `v1,v2,...`, `lin:a:b:n` or `log:a:b:n`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "both")]
        task: TaskSel,
        /// analytic, mc or both.
        #[arg(long, default_value = "both")]
        methods: Methods,
        #[arg(long)]
        snapshots: Option<usize>,
        #[arg(long, env = "ISAC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run a named figure sweep (fig2..fig7, validate) and write CSV.
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "ISAC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        snapshots: Option<usize>,
    },
    /// Compare both methods on a coarse grid; exits 1 on disagreement.
    Validate {
        #[arg(long, env = "ISAC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        snapshots: Option<usize>,
    },
}

enum Failure {
    Input(String),
    Validation(usize),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn config(path: &Option<PathBuf>, threshold_db: Option<f64>) -> Result<Config, Failure> {
    let mut cfg = match path {
        Some(p) => load_config(p)?,
        None => Config::default(),
    };
    if let Some(t) = threshold_db {
        cfg.threshold_comm_db = t;
        cfg.threshold_sens_db = t;
    }
    Ok(cfg)
}

fn print_rows(rows: &[ResultRow]) {
    for r in rows {
        let a = r.analytic_value.map_or("-".into(), |v| format!("{v:.6}"));
        let m = match (r.mc_mean, r.mc_ci_low, r.mc_ci_high) {
            (Some(m), Some(lo), Some(hi)) => format!("{m:.4} [{lo:.4}, {hi:.4}]"),
            _ => "-".into(),
        };
        let task = format!("{:?}", r.task).to_lowercase();
        match &r.error {
            Some(e) => println!("{task:<5} T={:>6.1} dB  error: {e}", r.threshold_db),
            None => println!("{task:<5} T={:>6.1} dB  analytic {a}  mc {m}", r.threshold_db),
        }
    }
}

fn check(rows: &[ResultRow]) -> Result<(), Failure> {
    let bad = disagreements(rows);
    for r in &bad {
        log::error!(
            "{:?} at T={} dB: analytic {:?} vs mc {:?}",
            r.task,
            r.threshold_db,
            r.analytic_value,
            r.mc_mean
        );
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(bad.len()))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Analytic { common } => {
            let cfg = config(&common.config, common.threshold_db)?;
            cfg.validate()?;
            for &task in common.task.tasks() {
                match analytic_value(task, &cfg) {
                    Ok(v) => println!("{} {v:.8}", format!("{task:?}").to_lowercase()),
                    Err(e) => return Err(Failure::Input(e.to_string())),
                }
            }
        }
        Cmd::Mc { common, snapshots, seed } => {
            let mut cfg = config(&common.config, common.threshold_db)?;
            if let Some(n) = snapshots {
                cfg.n_snapshots = n;
            }
            let t = cfg.threshold_comm_db;
            let mut spec = SweepSpec::new(common.task, Axis::ThresholdDb, vec![t], cfg, Methods::Mc, seed);
            spec.name = "mc".into();
            print_rows(&run_sweep(&spec)?);
        }
        Cmd::Sweep { config: path, vary, grid, out, task, methods, snapshots, seed } => {
            let mut cfg = config(&path, None)?;
            if let Some(n) = snapshots {
                cfg.n_snapshots = n;
            }
            let grid = parse_grid(&grid).map_err(Failure::Input)?;
            let spec = SweepSpec::new(task, vary, grid, cfg, methods, seed);
            let rows = run_sweep(&spec)?;
            write_csv(&rows, &out)?;
            log::info!("wrote {} rows to {}", rows.len(), out.display());
        }
        Cmd::Preset { name, out, seed, snapshots } => {
            let mut spec = preset(&name, seed)?;
            if let Some(n) = snapshots {
                spec.n_snapshots = n;
            }
            let rows = run_sweep(&spec)?;
            write_csv(&rows, &out)?;
            log::info!("wrote {} rows to {}", rows.len(), out.display());
            if name == "validate" {
                check(&rows)?;
            }
        }
        Cmd::Validate { seed, out, snapshots } => {
            let mut spec = preset("validate", seed)?;
            if let Some(n) = snapshots {
                spec.n_snapshots = n;
            }
            let rows = run_sweep(&spec)?;
            match out {
                Some(p) => write_csv(&rows, p)?,
                None => write_csv_to(&rows, std::io::stdout())?,
            }
            check(&rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(n)) => {
            eprintln!("validation failed: {n} row(s) disagree");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
