//! Configuration, parameter sweeps, figure presets and CSV output.
//!
//! A [`Config`] is a flat record of every model parameter with the default
//! network pre-filled. Text configs are `key = value` lines with `#`
//! comments. A [`SweepSpec`] varies one axis over a grid, optionally across
//! several curves that each override a few keys, and [`run_sweep`] turns it
//! into [`ResultRow`]s.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{comm_coverage, corollary1, corollary2, sens_coverage, AnalyticError, NetworkParams};
use crate::channel::{
    db_to_linear, dbm_to_watts, noise_power_watts, BlockageParams, BooleanBlockage, FadingParams, PathLossParams,
};
use crate::montecarlo::{simulate_sinr, Estimate, GeometryMode, RcsMode, Scenario, Task};
use crate::specfun::QuadratureSpec;

pub const DEFAULT_SEED: u64 = 1;

/// Stand-in for "no blockage" wherever the blockage integrals need β > 0.
pub const BLOCKAGE_OFF: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("unknown preset '{0}' (expected fig2..fig7 or validate)")]
    UnknownPreset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockageKind {
    Bernoulli,
    Boolean,
}

/// Every parameter of one evaluation, in user-facing units.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub lambda_bs: f64,
    pub beta: f64,
    pub p: f64,
    pub rician_k: f64,
    pub mu_n_comm: f64,
    pub mu_n_sens: f64,
    pub rcs_dbsm: f64,
    pub k_l_db: f64,
    pub k_n_db: f64,
    pub k_r_db: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    pub alpha_r: f64,
    pub radar_consistent: bool,
    pub tx_power_dbm: f64,
    pub noise_psd_dbm_hz: f64,
    pub bandwidth_hz: f64,
    pub threshold_comm_db: f64,
    pub threshold_sens_db: f64,
    pub n_snapshots: usize,
    pub area_radius: f64,
    pub extend_radius: bool,
    pub geometry_mode: GeometryMode,
    pub rcs_mode: RcsMode,
    pub blockage_mode: BlockageKind,
    pub size_jitter: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            lambda_bs: 1e-5,
            beta: 0.008,
            p: 0.1,
            rician_k: 10.0,
            mu_n_comm: 1.0,
            mu_n_sens: 1.0,
            rcs_dbsm: 20.0,
            k_l_db: -75.0,
            k_n_db: -90.0,
            k_r_db: -86.0,
            alpha_l: 2.0,
            alpha_n: 3.2,
            alpha_r: 4.0,
            radar_consistent: false,
            tx_power_dbm: 43.0,
            noise_psd_dbm_hz: -174.0,
            bandwidth_hz: 100e6,
            threshold_comm_db: 0.0,
            threshold_sens_db: 0.0,
            n_snapshots: 10_000,
            area_radius: 1000.0,
            extend_radius: true,
            geometry_mode: GeometryMode::Matched,
            rcs_mode: RcsMode::IndependentPerPath,
            blockage_mode: BlockageKind::Bernoulli,
            size_jitter: 0.0,
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2048,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("cannot parse '{value}' as a number for key '{key}'"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true/false for key '{key}', got '{value}'")),
    }
}

impl Config {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "lambda_bs" => self.lambda_bs = parse_num(key, v)?,
            "beta" => self.beta = parse_num(key, v)?,
            "p" => self.p = parse_num(key, v)?,
            "rician_k" => self.rician_k = parse_num(key, v)?,
            "mu_n" => {
                self.mu_n_comm = parse_num(key, v)?;
                self.mu_n_sens = self.mu_n_comm;
            }
            "mu_n_comm" => self.mu_n_comm = parse_num(key, v)?,
            "mu_n_sens" => self.mu_n_sens = parse_num(key, v)?,
            "rcs_dbsm" => self.rcs_dbsm = parse_num(key, v)?,
            "k_l_db" => self.k_l_db = parse_num(key, v)?,
            "k_n_db" => self.k_n_db = parse_num(key, v)?,
            "k_r_db" => self.k_r_db = parse_num(key, v)?,
            "alpha_l" => self.alpha_l = parse_num(key, v)?,
            "alpha_n" => self.alpha_n = parse_num(key, v)?,
            "alpha_r" => self.alpha_r = parse_num(key, v)?,
            "radar_consistent" => self.radar_consistent = parse_bool(key, v)?,
            "tx_power_dbm" => self.tx_power_dbm = parse_num(key, v)?,
            "noise_psd_dbm_hz" => self.noise_psd_dbm_hz = parse_num(key, v)?,
            "bandwidth_hz" => self.bandwidth_hz = parse_num(key, v)?,
            "threshold_db" => {
                self.threshold_comm_db = parse_num(key, v)?;
                self.threshold_sens_db = self.threshold_comm_db;
            }
            "threshold_comm_db" => self.threshold_comm_db = parse_num(key, v)?,
            "threshold_sens_db" => self.threshold_sens_db = parse_num(key, v)?,
            "n_snapshots" => self.n_snapshots = parse_num(key, v)?,
            "area_radius" => self.area_radius = parse_num(key, v)?,
            "extend_radius" => self.extend_radius = parse_bool(key, v)?,
            "geometry_mode" => {
                self.geometry_mode = match v {
                    "matched" => GeometryMode::Matched,
                    "exact" => GeometryMode::Exact,
                    _ => return Err(format!("geometry_mode must be matched or exact, got '{v}'")),
                }
            }
            "rcs_mode" => {
                self.rcs_mode = match v {
                    "independent" => RcsMode::IndependentPerPath,
                    "shared" => RcsMode::Shared,
                    _ => return Err(format!("rcs_mode must be independent or shared, got '{v}'")),
                }
            }
            "blockage_mode" => {
                self.blockage_mode = match v {
                    "bernoulli" => BlockageKind::Bernoulli,
                    "boolean" => BlockageKind::Boolean,
                    _ => return Err(format!("blockage_mode must be bernoulli or boolean, got '{v}'")),
                }
            }
            "size_jitter" => self.size_jitter = parse_num(key, v)?,
            "rel_tol" => self.rel_tol = parse_num(key, v)?,
            "abs_tol" => self.abs_tol = parse_num(key, v)?,
            "max_subdivisions" => self.max_subdivisions = parse_num(key, v)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Parses `key = value` lines over the defaults, then validates.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: i + 1,
                msg: format!("expected 'key = value', got '{line}'"),
            })?;
            cfg.set(key.trim(), value)
                .map_err(|msg| ConfigError::Parse { line: i + 1, msg })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: String| ConfigError::Invalid(e);
        self.network().validate().map_err(|e| invalid(e.to_string()))?;
        self.path_loss().validate().map_err(|e| invalid(e.to_string()))?;
        BlockageParams::new(self.beta, self.p)
            .validate()
            .map_err(|e| invalid(e.to_string()))?;
        self.fading().validate().map_err(|e| invalid(e.to_string()))?;
        self.quadrature().validate().map_err(|e| invalid(e.to_string()))?;
        if self.n_snapshots < 100 {
            return Err(invalid(format!("n_snapshots must be >= 100, got {}", self.n_snapshots)));
        }
        if !(self.area_radius > 0.0) {
            return Err(invalid(format!("area_radius must be positive, got {}", self.area_radius)));
        }
        if !(0.0..1.0).contains(&self.size_jitter) {
            return Err(invalid(format!("size_jitter must be in [0, 1), got {}", self.size_jitter)));
        }
        if self.blockage_mode == BlockageKind::Boolean && !(self.beta > 0.0 && self.p > 0.0) {
            return Err(invalid("boolean blockage needs beta > 0 and p > 0".into()));
        }
        Ok(())
    }

    pub fn network(&self) -> NetworkParams {
        let noise = noise_power_watts(self.noise_psd_dbm_hz, self.bandwidth_hz);
        NetworkParams {
            lambda_bs: self.lambda_bs,
            noise_comm: noise,
            noise_sens: noise,
            tx_power: dbm_to_watts(self.tx_power_dbm),
            threshold_comm: db_to_linear(self.threshold_comm_db),
            threshold_sens: db_to_linear(self.threshold_sens_db),
        }
    }

    pub fn path_loss(&self) -> PathLossParams {
        if self.radar_consistent {
            let mut pl = PathLossParams::radar_consistent(
                db_to_linear(self.k_l_db),
                db_to_linear(self.k_n_db),
                self.alpha_l,
                self.alpha_n,
            );
            // keep user-supplied echo values so validation can reject a mismatch
            if self.k_r_db != Config::default().k_r_db || self.alpha_r != Config::default().alpha_r {
                pl.k_r = db_to_linear(self.k_r_db);
                pl.alpha_r = self.alpha_r;
            }
            pl
        } else {
            PathLossParams::from_db(self.k_l_db, self.k_n_db, self.k_r_db, self.alpha_l, self.alpha_n, self.alpha_r)
        }
    }

    pub fn blockage(&self) -> BlockageParams {
        match self.blockage_mode {
            BlockageKind::Bernoulli => BlockageParams::new(self.beta, self.p),
            BlockageKind::Boolean => BooleanBlockage::square_from_beta_p(self.beta, self.p)
                .map(BlockageParams::from_boolean)
                .unwrap_or_else(|_| BlockageParams::new(self.beta, self.p)),
        }
    }

    pub fn fading(&self) -> FadingParams {
        let mut f = FadingParams::new(self.rician_k, self.mu_n_comm, db_to_linear(self.rcs_dbsm));
        f.mu_n_sens = self.mu_n_sens;
        f
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            ..QuadratureSpec::default()
        }
    }

    pub fn scenario(&self, seed: u64) -> Scenario {
        let mut s = Scenario::new(&self.network(), BlockageParams::new(self.beta, self.p), seed);
        s.area_radius = self.area_radius;
        s.extend_radius = self.extend_radius;
        s.geometry_mode = self.geometry_mode;
        s.rcs_mode = self.rcs_mode;
        if let Some(model) = self.blockage().boolean_model {
            s = s.with_boolean(model, self.size_jitter);
        }
        s
    }

    /// True when both blockage parameters are zero.
    pub fn blockage_off(&self) -> bool {
        self.beta == 0.0 && self.p == 0.0
    }
}

/// Reads and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<Config, ConfigError> {
    Config::parse(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskSel {
    Comm,
    Sens,
    Both,
}

impl TaskSel {
    pub fn tasks(self) -> &'static [Task] {
        match self {
            TaskSel::Comm => &[Task::Comm],
            TaskSel::Sens => &[Task::Sens],
            TaskSel::Both => &[Task::Comm, Task::Sens],
        }
    }
}

impl std::str::FromStr for TaskSel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "comm" => Ok(TaskSel::Comm),
            "sens" => Ok(TaskSel::Sens),
            "both" => Ok(TaskSel::Both),
            _ => Err(format!("task must be comm, sens or both, got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    ThresholdDb,
    LambdaBs,
    RcsDbsm,
    /// Multiplier on the fixed (β, p); 0 turns blockage off.
    Blockage,
}

impl std::str::FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "threshold_db" => Ok(Axis::ThresholdDb),
            "lambda_bs" => Ok(Axis::LambdaBs),
            "rcs_dbsm" => Ok(Axis::RcsDbsm),
            "blockage" => Ok(Axis::Blockage),
            _ => Err(format!(
                "axis must be threshold_db, lambda_bs, rcs_dbsm or blockage, got '{s}'"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Methods {
    Analytic,
    Mc,
    Both,
}

impl Methods {
    fn analytic(self) -> bool {
        self != Methods::Mc
    }
    fn mc(self) -> bool {
        self != Methods::Analytic
    }
}

impl std::str::FromStr for Methods {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "analytic" => Ok(Methods::Analytic),
            "mc" => Ok(Methods::Mc),
            "both" => Ok(Methods::Both),
            _ => Err(format!("methods must be analytic, mc or both, got '{s}'")),
        }
    }
}

/// One curve of a sweep: a task selection plus config overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub task: TaskSel,
    pub overrides: Vec<(String, String)>,
}

impl Curve {
    pub fn plain(task: TaskSel) -> Self {
        Self {
            task,
            overrides: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.overrides.push((key.to_string(), value.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Label written to the `preset` column.
    pub name: String,
    pub vary: Axis,
    pub grid: Vec<f64>,
    pub fixed: Config,
    pub curves: Vec<Curve>,
    pub methods: Methods,
    pub n_snapshots: usize,
    pub seed: u64,
}

impl SweepSpec {
    /// A single-curve sweep over `fixed`.
    pub fn new(task: TaskSel, vary: Axis, grid: Vec<f64>, fixed: Config, methods: Methods, seed: u64) -> Self {
        Self {
            name: "sweep".into(),
            vary,
            grid,
            n_snapshots: fixed.n_snapshots,
            fixed,
            curves: vec![Curve::plain(task)],
            methods,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid.is_empty() {
            return Err(ConfigError::Invalid("sweep grid is empty".into()));
        }
        let up = self.grid.windows(2).all(|w| w[1] > w[0]);
        let down = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(ConfigError::Invalid("sweep grid must be strictly monotone".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::Invalid("sweep grid has non-finite values".into()));
        }
        if self.n_snapshots < 100 {
            return Err(ConfigError::Invalid("n_snapshots must be >= 100".into()));
        }
        for c in &self.curves {
            for v in &self.grid {
                self.point_config(c, *v)?.validate()?;
            }
        }
        Ok(())
    }

    fn point_config(&self, curve: &Curve, value: f64) -> Result<Config, ConfigError> {
        let mut cfg = self.fixed.clone();
        for (k, v) in &curve.overrides {
            cfg.set(k, v).map_err(ConfigError::Invalid)?;
        }
        match self.vary {
            Axis::ThresholdDb => {
                cfg.threshold_comm_db = value;
                cfg.threshold_sens_db = value;
            }
            Axis::LambdaBs => cfg.lambda_bs = value,
            Axis::RcsDbsm => cfg.rcs_dbsm = value,
            Axis::Blockage => {
                cfg.beta *= value;
                cfg.p *= value;
            }
        }
        cfg.n_snapshots = self.n_snapshots;
        Ok(cfg)
    }
}

/// One output line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub preset: String,
    pub task: Task,
    pub threshold_db: f64,
    pub lambda_bs: f64,
    pub beta: f64,
    pub p: f64,
    pub rcs_dbsm: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    pub alpha_r: f64,
    pub analytic_value: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_ci_low: Option<f64>,
    pub mc_ci_high: Option<f64>,
    pub n_snapshots: Option<usize>,
    pub seed: u64,
    pub error: Option<String>,
}

impl ResultRow {
    /// Whether analytic and simulated values agree within
    /// `max(CI half-width, 0.02)`. Rows lacking either value pass.
    pub fn agrees(&self) -> bool {
        match (self.analytic_value, self.mc_mean, self.mc_ci_low, self.mc_ci_high) {
            (Some(a), Some(m), Some(lo), Some(hi)) => (a - m).abs() <= (0.5 * (hi - lo)).max(0.02),
            _ => true,
        }
    }
}

/// Analytic coverage for one config: the blockage integrals when blockage
/// is on; without blockage the exact no-blockage integrals when α_L > 2,
/// otherwise the blockage integrals at a vanishing (β, p).
pub fn analytic_value(task: Task, cfg: &Config) -> Result<f64, AnalyticError> {
    let net = cfg.network();
    let ch = cfg.path_loss();
    let f = cfg.fading();
    let spec = cfg.quadrature();
    let mut b = BlockageParams::new(cfg.beta, cfg.p);
    if cfg.blockage_off() {
        if cfg.alpha_l > 2.0 {
            return Ok(match task {
                Task::Comm => corollary1(&net, &ch, &f, &spec)?,
                Task::Sens => corollary2(&net, &ch, &f, &spec)?,
            }
            .value);
        }
        b = BlockageParams::new(BLOCKAGE_OFF, BLOCKAGE_OFF);
    } else if b.beta == 0.0 {
        b.beta = BLOCKAGE_OFF;
    }
    Ok(match task {
        Task::Comm => comm_coverage(&net, &ch, &b, &f, &spec)?,
        Task::Sens => sens_coverage(&net, &ch, &b, &f, &spec)?,
    }
    .value)
}

fn base_row(name: &str, task: Task, cfg: &Config, seed: u64) -> ResultRow {
    ResultRow {
        preset: name.to_string(),
        task,
        threshold_db: match task {
            Task::Comm => cfg.threshold_comm_db,
            Task::Sens => cfg.threshold_sens_db,
        },
        lambda_bs: cfg.lambda_bs,
        beta: cfg.beta,
        p: cfg.p,
        rcs_dbsm: cfg.rcs_dbsm,
        alpha_l: cfg.alpha_l,
        alpha_n: cfg.alpha_n,
        alpha_r: cfg.alpha_r,
        analytic_value: None,
        mc_mean: None,
        mc_ci_low: None,
        mc_ci_high: None,
        n_snapshots: None,
        seed,
        error: None,
    }
}

/// Everything that determines a simulated SINR sample (thresholds excluded).
fn mc_key(task: Task, cfg: &Config) -> String {
    let mut c = cfg.clone();
    c.threshold_comm_db = 0.0;
    c.threshold_sens_db = 0.0;
    format!("{task:?}|{c:?}")
}

/// Runs a sweep; rows come out curve by curve, task by task, in grid order.
/// Per-row failures land in the `error` column.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>, ConfigError> {
    spec.validate()?;
    let mut points = Vec::new();
    for curve in &spec.curves {
        for &task in curve.task.tasks() {
            for &v in &spec.grid {
                points.push((task, spec.point_config(curve, v)?));
            }
        }
    }

    let analytic: Vec<Option<Result<f64, String>>> = points
        .par_iter()
        .map(|(task, cfg)| {
            spec.methods
                .analytic()
                .then(|| analytic_value(*task, cfg).map_err(|e| e.to_string()))
        })
        .collect();

    // one simulation per distinct (task, config-without-threshold)
    let mut samples: HashMap<String, Vec<Option<f64>>> = HashMap::new();
    if spec.methods.mc() {
        for (task, cfg) in &points {
            samples.entry(mc_key(*task, cfg)).or_insert_with(|| {
                simulate_sinr(*task, &cfg.scenario(spec.seed), &cfg.path_loss(), &cfg.fading(), spec.n_snapshots)
            });
        }
    }

    let rows = points
        .iter()
        .zip(analytic)
        .map(|((task, cfg), a)| {
            let mut row = base_row(&spec.name, *task, cfg, spec.seed);
            match a {
                Some(Ok(v)) => row.analytic_value = Some(v),
                Some(Err(e)) => row.error = Some(e),
                None => {}
            }
            if let Some(s) = samples.get(&mc_key(*task, cfg)) {
                let t = db_to_linear(row.threshold_db);
                let k = s.iter().filter(|v| v.is_some_and(|x| x > t)).count();
                let e = Estimate::from_counts(k, s.len());
                row.mc_mean = Some(e.mean);
                row.mc_ci_low = Some(e.ci_low);
                row.mc_ci_high = Some(e.ci_high);
                row.n_snapshots = Some(e.n);
            }
            row
        })
        .collect();
    Ok(rows)
}

pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<(), ConfigError> {
    let file = std::fs::File::create(path)?;
    write_csv_to(rows, file)
}

pub fn write_csv_to<W: std::io::Write>(rows: &[ResultRow], out: W) -> Result<(), ConfigError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>, ConfigError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<Vec<ResultRow>, _>>()?)
}

/// Evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `n` log-spaced values from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.log10(), b.log10(), n).into_iter().map(|e| 10f64.powf(e)).collect()
}

/// Grid from text: `v1,v2,...`, `lin:a:b:n` or `log:a:b:n`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("bad number '{s}' in grid"));
    if let Some(rest) = text.strip_prefix("lin:").or_else(|| text.strip_prefix("log:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range grid needs a:b:n, got '{rest}'"));
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| format!("bad count '{}'", parts[2]))?;
        if n == 0 {
            return Err("grid count must be positive".into());
        }
        return Ok(if text.starts_with("log:") {
            if !(a > 0.0 && b > 0.0) {
                return Err("log grid needs positive endpoints".into());
            }
            logspace(a, b, n)
        } else {
            linspace(a, b, n)
        });
    }
    text.split(',').map(num).collect()
}

/// The 26-point threshold grid −20..30 dB.
pub fn threshold_grid() -> Vec<f64> {
    linspace(-20.0, 30.0, 26)
}

pub const PRESETS: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "validate"];

/// Sweep behind each figure, plus a coarse `validate` run.
pub fn preset(name: &str, seed: u64) -> Result<SweepSpec, ConfigError> {
    let d = Config::default();
    let densities = [1e-6, 10f64.powf(-5.5), 1e-5, 10f64.powf(-4.5), 1e-4];
    let base = |vary, grid, curves| SweepSpec {
        name: name.to_string(),
        vary,
        grid,
        fixed: d.clone(),
        curves,
        methods: Methods::Both,
        n_snapshots: d.n_snapshots,
        seed,
    };
    let fig67 = |task| {
        let mut s = base(
            Axis::LambdaBs,
            logspace(1e-6, 1e-3, 16),
            vec![
                Curve::plain(task).with("beta", d.beta).with("p", d.p),
                Curve::plain(task).with("beta", 0).with("p", 0),
            ],
        );
        s.fixed.alpha_l = 2.4;
        s.fixed.alpha_n = 4.8;
        s.fixed.alpha_r = 4.8;
        s
    };
    Ok(match name {
        "fig2" => {
            let mut curves: Vec<Curve> = [0.0, 10.0, 20.0, 30.0]
                .iter()
                .map(|r| Curve::plain(TaskSel::Sens).with("rcs_dbsm", r))
                .collect();
            curves.push(Curve::plain(TaskSel::Comm));
            base(Axis::ThresholdDb, threshold_grid(), curves)
        }
        "fig3" | "fig4" => {
            let task = if name == "fig3" { TaskSel::Comm } else { TaskSel::Sens };
            let curves = densities
                .iter()
                .map(|l| Curve::plain(task).with("lambda_bs", format!("{l:e}")))
                .collect();
            base(Axis::ThresholdDb, threshold_grid(), curves)
        }
        "fig5" => {
            let curves = [-10.0, 0.0, 10.0]
                .iter()
                .map(|t| Curve::plain(TaskSel::Both).with("threshold_db", t))
                .collect();
            base(Axis::LambdaBs, logspace(1e-7, 1e-3, 40), curves)
        }
        "fig6" => fig67(TaskSel::Comm),
        "fig7" => fig67(TaskSel::Sens),
        "validate" => base(Axis::ThresholdDb, vec![-10.0, 0.0, 10.0, 20.0], vec![Curve::plain(TaskSel::Both)]),
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    })
}

/// Rows whose analytic and simulated values disagree.
pub fn disagreements(rows: &[ResultRow]) -> Vec<&ResultRow> {
    rows.iter().filter(|r| !r.agrees()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default_network() {
        let c = Config::parse("").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!((c.lambda_bs, c.beta, c.p, c.rician_k), (1e-5, 0.008, 0.1, 10.0));
        assert_eq!(db_to_linear(c.rcs_dbsm), 100.0);
        assert_eq!((c.alpha_l, c.alpha_n, c.alpha_r), (2.0, 3.2, 4.0));
        assert_eq!((c.n_snapshots, c.area_radius), (10_000, 1000.0));
        let net = c.network();
        assert!((net.noise_comm / dbm_to_watts(-94.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overrides_comments_and_errors() {
        let c = Config::parse("# regime\nalpha_l = 2.4  # LoS\nalpha_n=4.8\n\n").unwrap();
        assert_eq!((c.alpha_l, c.alpha_n), (2.4, 4.8));
        match Config::parse("alpha_l = 2\nlambda_bs = -1\n") {
            Err(ConfigError::Invalid(m)) => assert!(m.contains("lambda_bs")),
            other => panic!("{other:?}"),
        }
        match Config::parse("beta = 0.01\nbogus = 3\n") {
            Err(ConfigError::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(Config::parse("alpha_l 2.4"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(matches!(Config::parse("alpha_l = two"), Err(ConfigError::Parse { line: 1, .. })));
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        let g = parse_grid("lin:-20:30:26").unwrap();
        assert_eq!(g.len(), 26);
        assert_eq!(g[0], -20.0);
        assert_eq!(g[25], 30.0);
        let g = parse_grid("log:1e-7:1e-3:5").unwrap();
        assert!((g[2] - 1e-5).abs() < 1e-18);
        assert!(parse_grid("log:0:1:3").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn presets_shape() {
        let f2 = preset("fig2", 1).unwrap();
        assert!(f2
            .curves
            .iter()
            .any(|c| c.overrides.contains(&("rcs_dbsm".into(), "20".into()))));
        assert_eq!(f2.grid.len(), 26);
        let f6 = preset("fig6", 1).unwrap();
        assert_eq!(f6.fixed.alpha_l, 2.4);
        assert_eq!(f6.fixed.alpha_r, 4.8);
        assert_eq!(preset("fig5", 1).unwrap().grid.len(), 40);
        assert!(matches!(preset("fig9", 1), Err(ConfigError::UnknownPreset(_))));
        for p in PRESETS {
            preset(p, 3).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn sweep_validation() {
        let mut s = SweepSpec::new(TaskSel::Comm, Axis::ThresholdDb, vec![0.0, 0.0], Config::default(), Methods::Analytic, 1);
        assert!(s.validate().is_err());
        s.grid = vec![];
        assert!(s.validate().is_err());
        s.grid = vec![3.0, 1.0];
        assert!(s.validate().is_ok());
    }

    #[test]
    fn analytic_sweep_rows_and_csv_round_trip() {
        let spec = SweepSpec::new(
            TaskSel::Both,
            Axis::ThresholdDb,
            linspace(-20.0, 30.0, 11),
            Config::default(),
            Methods::Analytic,
            9,
        );
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 22);
        assert!(rows.iter().all(|r| r.mc_mean.is_none() && r.analytic_value.is_some()));
        let mut buf = Vec::new();
        write_csv_to(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "preset,task,threshold_db,lambda_bs,beta,p,rcs_dbsm,alpha_l,alpha_n,alpha_r,\
             analytic_value,mc_mean,mc_ci_low,mc_ci_high,n_snapshots,seed,error\n"
        ));
        let back: Vec<ResultRow> = csv::Reader::from_reader(buf.as_slice())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn per_row_errors_do_not_abort() {
        let mut cfg = Config::default();
        cfg.rician_k = 3.0;
        let spec = SweepSpec::new(TaskSel::Comm, Axis::ThresholdDb, vec![0.0, 5.0], cfg, Methods::Analytic, 1);
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.error.as_deref().is_some_and(|e| e.contains("K = 3"))));
    }

    #[test]
    fn blockage_off_paths_agree() {
        let mut cfg = Config::default();
        cfg.alpha_l = 2.4;
        cfg.alpha_n = 4.8;
        cfg.alpha_r = 4.8;
        cfg.beta = 0.0;
        cfg.p = 0.0;
        for lambda in [1e-5, 1e-4] {
            cfg.lambda_bs = lambda;
            let mut reg = cfg.clone();
            reg.beta = BLOCKAGE_OFF;
            reg.p = BLOCKAGE_OFF;
            for task in [Task::Comm, Task::Sens] {
                let exact = analytic_value(task, &cfg).unwrap();
                let theorem = analytic_value(task, &reg).unwrap();
                assert!((exact - theorem).abs() < 1e-3, "{task:?} at {lambda}: {exact} vs {theorem}");
            }
        }
    }
}
