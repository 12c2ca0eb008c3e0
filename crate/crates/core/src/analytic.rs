//! Coverage probabilities by numerical integration.
//!
//! The communication and sensing coverage integrals share one structure: an
//! outer integral over the serving distance `r` against the association
//! density, and an integrand built from a noise factor and interference
//! Laplace transforms. Each Laplace transform reduces to the kernel
//!
//! ```text
//! F(ε, α, w, h) = ∫_h^∞ x·w(x)/(ε·x^α + 1) dx
//! ```
//!
//! with `w` the LoS or NLoS probability, or 1 without blockage.
//!
//! Transmit power is folded into the noise: every formula sees
//! `noise / tx_power`.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::channel::{
    db_to_linear, dbm_to_watts, nearest_pdf, nearest_visible_pdf, noise_power_watts, BlockageParams,
    ChannelError, FadingParams, PathLossParams, RicianSeries,
};
use crate::specfun::{
    erfcx, gauss_2f1, integrate_breaks, integrate_semi_infinite_scaled, QuadError, QuadratureSpec,
    SpecFunError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("kernel with unit weight diverges for alpha = {0} (needs alpha > 2)")]
    Divergent(f64),
    #[error("invalid network parameters: {0}")]
    Invalid(String),
    #[error("assumption violated: {0}")]
    Constraint(String),
}

/// Density, noise and detection thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// BS density in m⁻².
    pub lambda_bs: f64,
    /// Receiver noise power for communication, watts.
    pub noise_comm: f64,
    /// Receiver noise power for sensing, watts.
    pub noise_sens: f64,
    /// BS transmit power, watts.
    pub tx_power: f64,
    /// Linear SINR threshold.
    pub threshold_comm: f64,
    /// Linear SINR threshold.
    pub threshold_sens: f64,
}

impl Default for NetworkParams {
    /// λ = 1e-5 m⁻², −174 dBm/Hz over 100 MHz, 43 dBm, thresholds 0 dB.
    fn default() -> Self {
        let noise = noise_power_watts(-174.0, 100e6);
        Self {
            lambda_bs: 1e-5,
            noise_comm: noise,
            noise_sens: noise,
            tx_power: dbm_to_watts(43.0),
            threshold_comm: 1.0,
            threshold_sens: 1.0,
        }
    }
}

impl NetworkParams {
    pub fn with_lambda(mut self, lambda_bs: f64) -> Self {
        self.lambda_bs = lambda_bs;
        self
    }

    /// Sets both thresholds from a value in dB.
    pub fn with_threshold_db(mut self, db: f64) -> Self {
        self.threshold_comm = db_to_linear(db);
        self.threshold_sens = db_to_linear(db);
        self
    }

    pub fn with_thresholds_db(mut self, comm_db: f64, sens_db: f64) -> Self {
        self.threshold_comm = db_to_linear(comm_db);
        self.threshold_sens = db_to_linear(sens_db);
        self
    }

    /// Sets both noise powers, watts.
    pub fn with_noise(mut self, watts: f64) -> Self {
        self.noise_comm = watts;
        self.noise_sens = watts;
        self
    }

    /// Noise relative to transmit power, as the formulas use it.
    pub fn scaled_noise_comm(&self) -> f64 {
        self.noise_comm / self.tx_power
    }

    pub fn scaled_noise_sens(&self) -> f64 {
        self.noise_sens / self.tx_power
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        let bad = |m: String| Err(AnalyticError::Invalid(m));
        if !(self.lambda_bs > 0.0 && self.lambda_bs.is_finite()) {
            return bad(format!("lambda_bs must be positive, got {}", self.lambda_bs));
        }
        if !(self.noise_comm >= 0.0 && self.noise_sens >= 0.0) {
            return bad("noise powers must be >= 0".into());
        }
        if !(self.tx_power > 0.0) {
            return bad(format!("tx_power must be positive, got {}", self.tx_power));
        }
        if !(self.threshold_comm > 0.0 && self.threshold_sens > 0.0) {
            return bad("thresholds must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    ClosedForm,
    MonteCarlo,
}

/// A coverage probability with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub value: f64,
    pub method: Method,
    pub quadrature_error: Option<f64>,
    /// 95% interval, only for simulation results.
    pub ci: Option<(f64, f64)>,
}

impl CoverageResult {
    pub fn analytic(value: f64, abs_error: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method: Method::Analytic,
            quadrature_error: Some(abs_error),
            ci: None,
        }
    }

    pub fn closed_form(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method: Method::ClosedForm,
            quadrature_error: None,
            ci: None,
        }
    }

    pub fn monte_carlo(mean: f64, ci_low: f64, ci_high: f64) -> Self {
        Self {
            value: mean.clamp(0.0, 1.0),
            method: Method::MonteCarlo,
            quadrature_error: None,
            ci: Some((ci_low, ci_high)),
        }
    }
}

/// Weight `w(x)` inside the kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelWeight {
    Los(BlockageParams),
    Nlos(BlockageParams),
    Unit,
    Zero,
}

impl KernelWeight {
    fn tag(&self) -> u8 {
        match self {
            KernelWeight::Los(_) => 0,
            KernelWeight::Nlos(_) => 1,
            KernelWeight::Unit => 2,
            KernelWeight::Zero => 3,
        }
    }
}

/// Whether the target-reflection cascading term enters the sensing SINR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Trc {
    #[default]
    Included,
    Dropped,
}

/// `F(ε, α, Unit, 0) = ε^{−2/α}·(π/α)/sin(2π/α)`.
fn unit_kernel_from_zero(epsilon: f64, alpha: f64) -> f64 {
    epsilon.powf(-2.0 / alpha) * (PI / alpha) / (2.0 * PI / alpha).sin()
}

/// The α = 4 unit kernel, `(π − 2·atan(h²√ε))/(4√ε)`.
pub fn f_kernel_alpha4(epsilon: f64, h: f64) -> f64 {
    let s = epsilon.sqrt();
    (PI - 2.0 * (h * h * s).atan()) / (4.0 * s)
}

/// Unit kernel through the hypergeometric function:
/// `h^{−(α−2)}·₂F₁(1, (α−2)/α; 2 − 2/α; −h^{−α}/ε)/(ε(α−2))`.
pub fn f_kernel_closed(epsilon: f64, alpha: f64, h: f64) -> Result<f64, AnalyticError> {
    if !(alpha > 2.0) {
        return Err(AnalyticError::Divergent(alpha));
    }
    if !(h > 0.0) || !(epsilon > 0.0) {
        return Err(AnalyticError::Constraint(format!(
            "closed-form kernel needs h > 0 and epsilon > 0 (h = {h}, epsilon = {epsilon})"
        )));
    }
    let z = -h.powf(-alpha) / epsilon;
    let hyp = gauss_2f1(1.0, (alpha - 2.0) / alpha, 2.0 - 2.0 / alpha, z)?;
    Ok(h.powf(2.0 - alpha) * hyp / (epsilon * (alpha - 2.0)))
}

/// Length scale for the kernel's semi-infinite map.
fn kernel_scale(epsilon: f64, alpha: f64, weight: &KernelWeight, h: f64) -> f64 {
    let knee = epsilon.powf(-1.0 / alpha);
    let mut s = h.max(knee);
    if let KernelWeight::Los(b) = weight {
        if b.beta > 0.0 {
            s = s.min(1.0 / b.beta);
        }
    }
    if s.is_finite() && s > 0.0 {
        s
    } else {
        1.0
    }
}

/// The kernel by quadrature, for any weight.
pub fn f_kernel_quadrature(
    epsilon: f64,
    alpha: f64,
    weight: KernelWeight,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    check_kernel_args(epsilon, alpha, &weight, h)?;
    let scale = kernel_scale(epsilon, alpha, &weight, h);
    let body = |x: f64| x / (epsilon * x.powf(alpha) + 1.0);
    let v = match weight {
        KernelWeight::Zero => return Ok(0.0),
        KernelWeight::Unit => integrate_semi_infinite_scaled(body, h, scale, spec)?,
        KernelWeight::Los(b) => integrate_semi_infinite_scaled(
            |x| {
                let w = (-(b.beta * x + b.p)).exp();
                if w == 0.0 {
                    0.0
                } else {
                    body(x) * w
                }
            },
            h,
            scale,
            spec,
        )?,
        KernelWeight::Nlos(b) => integrate_semi_infinite_scaled(
            |x| -(-(b.beta * x + b.p)).exp_m1() * body(x),
            h,
            scale,
            spec,
        )?,
    };
    Ok(v.value)
}

fn check_kernel_args(epsilon: f64, alpha: f64, weight: &KernelWeight, h: f64) -> Result<(), AnalyticError> {
    if !(epsilon > 0.0) || !(h >= 0.0) {
        return Err(AnalyticError::Constraint(format!(
            "kernel needs epsilon > 0 and h >= 0 (epsilon = {epsilon}, h = {h})"
        )));
    }
    let decays = matches!(weight, KernelWeight::Los(b) if b.beta > 0.0);
    if !matches!(weight, KernelWeight::Zero) && !decays && !(alpha > 2.0) {
        return Err(AnalyticError::Divergent(alpha));
    }
    Ok(())
}

/// `F(ε, α, w, h) = ∫_h^∞ x·w(x)/(εx^α + 1) dx`.
///
/// Unit weights use the exact forms (arctan at α = 4, the hypergeometric
/// form otherwise); blockage weights are integrated numerically.
pub fn f_kernel(
    epsilon: f64,
    alpha: f64,
    weight: KernelWeight,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    check_kernel_args(epsilon, alpha, &weight, h)?;
    match weight {
        KernelWeight::Zero => Ok(0.0),
        KernelWeight::Unit if alpha == 4.0 => Ok(f_kernel_alpha4(epsilon, h)),
        KernelWeight::Unit if h == 0.0 => Ok(unit_kernel_from_zero(epsilon, alpha)),
        KernelWeight::Unit => f_kernel_closed(epsilon, alpha, h),
        KernelWeight::Los(b) if b.beta == 0.0 => {
            Ok((-b.p).exp() * f_kernel(epsilon, alpha, KernelWeight::Unit, h, spec)?)
        }
        _ => f_kernel_quadrature(epsilon, alpha, weight, h, spec),
    }
}

/// Kernel values memoized for the lifetime of one coverage evaluation.
struct KernelCache<'a> {
    spec: QuadratureSpec,
    memo: RefCell<HashMap<(u64, u64, u8, u64), f64>>,
    first_error: &'a Cell<Option<AnalyticError>>,
}

impl<'a> KernelCache<'a> {
    fn new(spec: QuadratureSpec, first_error: &'a Cell<Option<AnalyticError>>) -> Self {
        Self {
            spec,
            memo: RefCell::new(HashMap::new()),
            first_error,
        }
    }

    /// NaN on failure, with the error parked for the caller.
    fn get(&self, epsilon: f64, alpha: f64, weight: KernelWeight, h: f64) -> f64 {
        let key = (epsilon.to_bits(), alpha.to_bits(), weight.tag(), h.to_bits());
        if let Some(v) = self.memo.borrow().get(&key) {
            return *v;
        }
        match f_kernel(epsilon, alpha, weight, h, &self.spec) {
            Ok(v) => {
                self.memo.borrow_mut().insert(key, v);
                v
            }
            Err(e) => {
                self.park(e);
                f64::NAN
            }
        }
    }

    fn park(&self, e: AnalyticError) {
        let prev = self.first_error.take();
        self.first_error.set(Some(prev.unwrap_or(e)));
    }
}

fn series_of(f: &FadingParams) -> Result<&RicianSeries, AnalyticError> {
    let s = f.require_series()?;
    s.validate()?;
    Ok(s)
}

fn validate_all(net: &NetworkParams, ch: &PathLossParams, b: Option<&BlockageParams>, f: &FadingParams) -> Result<(), AnalyticError> {
    net.validate()?;
    ch.validate()?;
    if let Some(b) = b {
        b.validate()?;
    }
    f.validate()?;
    Ok(())
}

/// Runs the outer integral; the integrand may park an error in `err` and
/// return NaN, which takes precedence over the quadrature's complaint.
fn outer_integral<F>(
    integrand: F,
    scale: f64,
    spec: &QuadratureSpec,
    err: &Cell<Option<AnalyticError>>,
) -> Result<CoverageResult, AnalyticError>
where
    F: FnMut(f64) -> f64,
{
    let res = integrate_semi_infinite_scaled(integrand, 0.0, scale, spec);
    if let Some(e) = err.take() {
        return Err(e);
    }
    let v = res?;
    Ok(CoverageResult::analytic(v.value, v.abs_error))
}

fn outer_scale(lambda: f64, beta: Option<f64>) -> f64 {
    let s = 1.0 / (PI * lambda).sqrt();
    match beta {
        Some(beta) if beta > 0.0 => s.min(1.0 / beta),
        _ => s,
    }
}

/// Communication coverage of the typical user under blockage.
pub fn comm_coverage(
    net: &NetworkParams,
    ch: &PathLossParams,
    b: &BlockageParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
) -> Result<CoverageResult, AnalyticError> {
    validate_all(net, ch, Some(b), f)?;
    spec.validate()?;
    let series = series_of(f)?;
    if !(b.beta > 0.0) {
        return Err(ChannelError::Domain("comm_coverage needs beta > 0; use corollary1".into()).into());
    }
    let lambda = net.lambda_bs;
    let t = net.threshold_comm;
    let noise = net.scaled_noise_comm();
    let err = Cell::new(None);
    let cache = KernelCache::new(spec.tightened(0.1), &err);
    let integrand = |r: f64| {
        let pdf = match nearest_visible_pdf(r, lambda, b) {
            Ok(v) => v,
            Err(e) => {
                cache.park(e.into());
                return f64::NAN;
            }
        };
        if pdf == 0.0 {
            return 0.0;
        }
        let ra = r.powf(ch.alpha_l);
        let mut acc = 0.0;
        for tn in &series.terms {
            let s = tn.u * ra * t;
            let noise_exp = s * noise / ch.k_l;
            if noise_exp > 745.0 {
                continue;
            }
            let mut interf = 0.0;
            for tm in &series.terms {
                interf += tm.w * cache.get(tm.u / s, ch.alpha_l, KernelWeight::Los(*b), r);
            }
            interf += cache.get(f.mu_n_comm * ch.k_l / (s * ch.k_n), ch.alpha_n, KernelWeight::Nlos(*b), 0.0);
            acc += tn.w * (-noise_exp - 2.0 * PI * lambda * interf).exp();
        }
        acc * pdf
    };
    outer_integral(integrand, outer_scale(lambda, Some(b.beta)), spec, &err)
}

/// Exponent contributions of the sensing integrand at one serving distance.
///
/// `noise` and `direct` (LoS + NLoS interference) depend on the threshold
/// and mean RCS only through their ratio; `trc` depends on the threshold
/// alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensExponent {
    pub noise: f64,
    pub los: f64,
    pub nlos: f64,
    pub trc: f64,
}

impl SensExponent {
    pub fn total(&self) -> f64 {
        self.noise + self.los + self.nlos + self.trc
    }
}

/// Sensing weights: `Some(b)` for blockage, `None` for the unit weight.
#[allow(clippy::too_many_arguments)]
fn sens_exponent_cached(
    r: f64,
    net: &NetworkParams,
    ch: &PathLossParams,
    b: Option<&BlockageParams>,
    f: &FadingParams,
    series: &RicianSeries,
    trc: Trc,
    cache: &KernelCache,
) -> SensExponent {
    let lambda = net.lambda_bs;
    let t = net.threshold_sens;
    let rr = r.powf(ch.alpha_r);
    // everything except the TRC argument sees T and σ̄ only through σ̄/T
    let rcs_over_t = f.mean_rcs / t;
    let noise = rr * net.scaled_noise_sens() / (rcs_over_t * ch.k_r);
    if noise > 745.0 {
        return SensExponent {
            noise,
            los: 0.0,
            nlos: 0.0,
            trc: 0.0,
        };
    }
    let los_w = b.map_or(KernelWeight::Unit, |b| KernelWeight::Los(*b));
    let base = rcs_over_t * ch.k_r / rr;
    let mut los = 0.0;
    for tn in &series.terms {
        los += tn.w * cache.get(tn.u * base / ch.k_l, ch.alpha_l, los_w, r);
    }
    let nlos = match b {
        Some(b) => cache.get(f.mu_n_sens * base / ch.k_n, ch.alpha_n, KernelWeight::Nlos(*b), 0.0),
        None => 0.0,
    };
    let trc = match trc {
        Trc::Included => cache.get(r.powf(ch.alpha_l) / (rr * t), ch.alpha_l, los_w, r),
        Trc::Dropped => 0.0,
    };
    let k = 2.0 * PI * lambda;
    SensExponent {
        noise,
        los: k * los,
        nlos: k * nlos,
        trc: k * trc,
    }
}

/// The sensing integrand's exponent at serving distance `r`, split by
/// source.
pub fn sens_exponent_terms(
    r: f64,
    net: &NetworkParams,
    ch: &PathLossParams,
    b: &BlockageParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
) -> Result<SensExponent, AnalyticError> {
    let series = series_of(f)?;
    let err = Cell::new(None);
    let cache = KernelCache::new(*spec, &err);
    let out = sens_exponent_cached(r, net, ch, Some(b), f, series, Trc::Included, &cache);
    match err.take() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Sensing coverage of the typical target, including TRC interference.
pub fn sens_coverage(
    net: &NetworkParams,
    ch: &PathLossParams,
    b: &BlockageParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
) -> Result<CoverageResult, AnalyticError> {
    sens_coverage_with(net, ch, b, f, spec, Trc::Included)
}

pub fn sens_coverage_with(
    net: &NetworkParams,
    ch: &PathLossParams,
    b: &BlockageParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
    trc: Trc,
) -> Result<CoverageResult, AnalyticError> {
    validate_all(net, ch, Some(b), f)?;
    spec.validate()?;
    let series = series_of(f)?;
    if !(b.beta > 0.0) {
        return Err(ChannelError::Domain("sens_coverage needs beta > 0; use corollary2".into()).into());
    }
    let lambda = net.lambda_bs;
    let err = Cell::new(None);
    let cache = KernelCache::new(spec.tightened(0.1), &err);
    let integrand = |r: f64| {
        let pdf = match nearest_visible_pdf(r, lambda, b) {
            Ok(v) => v,
            Err(e) => {
                cache.park(e.into());
                return f64::NAN;
            }
        };
        if pdf == 0.0 {
            return 0.0;
        }
        let e = sens_exponent_cached(r, net, ch, Some(b), f, series, trc, &cache);
        (-e.total()).exp() * pdf
    };
    outer_integral(integrand, outer_scale(lambda, Some(b.beta)), spec, &err)
}

/// Communication coverage without blockage: every BS is LoS and the
/// nearest one serves.
pub fn corollary1(
    net: &NetworkParams,
    ch: &PathLossParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
) -> Result<CoverageResult, AnalyticError> {
    validate_all(net, ch, None, f)?;
    spec.validate()?;
    if !(ch.alpha_l > 2.0) {
        return Err(AnalyticError::Divergent(ch.alpha_l));
    }
    let series = series_of(f)?;
    let lambda = net.lambda_bs;
    let t = net.threshold_comm;
    let noise = net.scaled_noise_comm();
    let err = Cell::new(None);
    let cache = KernelCache::new(spec.tightened(0.1), &err);
    let integrand = |r: f64| {
        let pdf = nearest_pdf(r, lambda);
        if pdf == 0.0 {
            return 0.0;
        }
        let ra = r.powf(ch.alpha_l);
        let mut acc = 0.0;
        for tn in &series.terms {
            let s = tn.u * ra * t;
            let noise_exp = s * noise / ch.k_l;
            if noise_exp > 745.0 {
                continue;
            }
            let mut interf = 0.0;
            for tm in &series.terms {
                interf += tm.w * cache.get(tm.u / s, ch.alpha_l, KernelWeight::Unit, r);
            }
            acc += tn.w * (-noise_exp - 2.0 * PI * lambda * interf).exp();
        }
        acc * pdf
    };
    outer_integral(integrand, outer_scale(lambda, None), spec, &err)
}

/// Sensing coverage without blockage, TRC included.
pub fn corollary2(
    net: &NetworkParams,
    ch: &PathLossParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
) -> Result<CoverageResult, AnalyticError> {
    corollary2_with(net, ch, f, spec, Trc::Included)
}

pub fn corollary2_with(
    net: &NetworkParams,
    ch: &PathLossParams,
    f: &FadingParams,
    spec: &QuadratureSpec,
    trc: Trc,
) -> Result<CoverageResult, AnalyticError> {
    validate_all(net, ch, None, f)?;
    spec.validate()?;
    if !(ch.alpha_l > 2.0) {
        return Err(AnalyticError::Divergent(ch.alpha_l));
    }
    let series = series_of(f)?;
    let lambda = net.lambda_bs;
    let err = Cell::new(None);
    let cache = KernelCache::new(spec.tightened(0.1), &err);
    let integrand = |r: f64| {
        let pdf = nearest_pdf(r, lambda);
        if pdf == 0.0 {
            return 0.0;
        }
        let e = sens_exponent_cached(r, net, ch, None, f, series, trc, &cache);
        (-e.total()).exp() * pdf
    };
    outer_integral(integrand, outer_scale(lambda, None), spec, &err)
}

/// `Σ wₘ(π − 2·atan√q)/(4√q)` with `q = ratio(wₘ, uₘ)`.
fn arctan_theta(series: &RicianSeries, q: impl Fn(f64) -> f64) -> f64 {
    series
        .terms
        .iter()
        .map(|tm| {
            let q = q(tm.u);
            tm.w * (PI - 2.0 * q.sqrt().atan()) / (4.0 * q.sqrt())
        })
        .sum()
}

/// `₂F₁(1, (α−2)/α; 2 − 2/α; −1/q)/(q(α − 2))`.
fn hyp_xi(alpha: f64, q: f64) -> Result<f64, AnalyticError> {
    let hyp = gauss_2f1(1.0, (alpha - 2.0) / alpha, 2.0 - 2.0 / alpha, -1.0 / q)?;
    Ok(hyp / (q * (alpha - 2.0)))
}

/// `½πλ√(π/ϑ)·e^{(λΨ)²}·erfc(λΨ)` with `Ψ = π(1 + 2θ)/(2√ϑ)`.
fn noisy_closed_form(lambda: f64, theta: f64, vartheta: f64) -> f64 {
    if vartheta == 0.0 {
        return 1.0 / (1.0 + 2.0 * theta);
    }
    let psi = PI * (1.0 + 2.0 * theta) / (2.0 * vartheta.sqrt());
    0.5 * PI * lambda * (PI / vartheta).sqrt() * erfcx(lambda * psi)
}

fn require(cond: bool, msg: &str) -> Result<(), AnalyticError> {
    if cond {
        Ok(())
    } else {
        Err(AnalyticError::Constraint(msg.into()))
    }
}

/// No blockage, with noise, α_L = 4.
pub fn special_case_1(net: &NetworkParams, ch: &PathLossParams, f: &FadingParams) -> Result<CoverageResult, AnalyticError> {
    validate_all(net, ch, None, f)?;
    require(ch.alpha_l == 4.0, "special case 1 needs alpha_l = 4")?;
    let series = series_of(f)?;
    let t = net.threshold_comm;
    let lambda = net.lambda_bs;
    let v: f64 = series
        .terms
        .iter()
        .map(|tn| {
            let theta = arctan_theta(series, |um| um / (tn.u * t));
            let vartheta = tn.u * t * net.scaled_noise_comm() / ch.k_l;
            tn.w * noisy_closed_form(lambda, theta, vartheta)
        })
        .sum();
    Ok(CoverageResult::closed_form(v))
}

/// No blockage, no noise, α_L > 2. Independent of the BS density.
pub fn special_case_2(threshold_db: f64, alpha_l: f64, f: &FadingParams) -> Result<f64, AnalyticError> {
    require(alpha_l > 2.0, "special case 2 needs alpha_l > 2")?;
    let series = series_of(f)?;
    let t = db_to_linear(threshold_db);
    let mut v = 0.0;
    for tn in &series.terms {
        let mut xi = 0.0;
        for tm in &series.terms {
            xi += tm.w * hyp_xi(alpha_l, tm.u / (tn.u * t))?;
        }
        v += tn.w / (1.0 + 2.0 * xi);
    }
    Ok(v)
}

/// No blockage, no noise, α_L = 4.
pub fn special_case_3(threshold_db: f64, f: &FadingParams) -> Result<f64, AnalyticError> {
    let series = series_of(f)?;
    let t = db_to_linear(threshold_db);
    Ok(series
        .terms
        .iter()
        .map(|tn| tn.w / (1.0 + 2.0 * arctan_theta(series, |um| um / (tn.u * t))))
        .sum())
}

fn sens_theta(t: f64, ch: &PathLossParams, f: &FadingParams, series: &RicianSeries) -> f64 {
    arctan_theta(series, |un| un * f.mean_rcs * ch.k_r / (t * ch.k_l))
}

/// Sensing without blockage or TRC, with noise, α_L = α_R = 4.
pub fn special_case_4(net: &NetworkParams, ch: &PathLossParams, f: &FadingParams) -> Result<CoverageResult, AnalyticError> {
    validate_all(net, ch, None, f)?;
    require(ch.alpha_l == 4.0 && ch.alpha_r == 4.0, "special case 4 needs alpha_l = alpha_r = 4")?;
    let series = series_of(f)?;
    let t = net.threshold_sens;
    let theta = sens_theta(t, ch, f, series);
    let vartheta = t * net.scaled_noise_sens() / (f.mean_rcs * ch.k_r);
    Ok(CoverageResult::closed_form(noisy_closed_form(net.lambda_bs, theta, vartheta)))
}

/// Sensing without blockage, noise or TRC, α_L = α_R > 2.
pub fn special_case_5(
    threshold_db: f64,
    alpha_l: f64,
    ch: &PathLossParams,
    f: &FadingParams,
) -> Result<f64, AnalyticError> {
    require(alpha_l > 2.0, "special case 5 needs alpha_l > 2")?;
    let series = series_of(f)?;
    let t = db_to_linear(threshold_db);
    let mut xi = 0.0;
    for tn in &series.terms {
        xi += tn.w * hyp_xi(alpha_l, tn.u * f.mean_rcs * ch.k_r / (t * ch.k_l))?;
    }
    Ok(1.0 / (1.0 + 2.0 * xi))
}

/// Sensing without blockage, noise or TRC, α_L = α_R = 4.
pub fn special_case_6(threshold_db: f64, ch: &PathLossParams, f: &FadingParams) -> Result<f64, AnalyticError> {
    let series = series_of(f)?;
    let t = db_to_linear(threshold_db);
    Ok(1.0 / (1.0 + 2.0 * sens_theta(t, ch, f, series)))
}

/// Association mass by direct quadrature of the nearest-visible density.
pub fn association_mass_quadrature(lambda: f64, b: &BlockageParams, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
    let s = outer_scale(lambda, Some(b.beta));
    let pts: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 1e3].iter().map(|k| k * s).collect();
    let head = integrate_breaks(|r| nearest_visible_pdf(r, lambda, b).unwrap_or(f64::NAN), &pts, spec)?;
    let tail = integrate_semi_infinite_scaled(|r| nearest_visible_pdf(r, lambda, b).unwrap_or(f64::NAN), 1e3 * s, s, spec)?;
    Ok(head.value + tail.value)
}
