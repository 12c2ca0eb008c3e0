//! Propagation, blockage, fading and association-distance models.
//!
//! Shared by the analytic and simulation paths. Gains are linear; the
//! `*_db` constructors convert at the boundary.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use thiserror::Error;

use crate::specfun::bessel_i0e;

/// Distances below this are clamped in simulation (meters).
pub const R_MIN: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("no exponential-series coefficients tabulated for Rician K = {0}")]
    UnsupportedK(f64),
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Thermal noise power in watts for a PSD in dBm/Hz over `bandwidth_hz`.
pub fn noise_power_watts(psd_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    dbm_to_watts(psd_dbm_hz + 10.0 * bandwidth_hz.log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Los,
    Nlos,
    /// Round-trip radar echo.
    Echo,
}

/// Path-loss gains and exponents for the three link kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    pub k_l: f64,
    pub k_n: f64,
    pub k_r: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    pub alpha_r: f64,
    /// When set, `k_r = k_l/(4π)` and `alpha_r = 2·alpha_l` are enforced.
    pub radar_consistent: bool,
}

impl Default for PathLossParams {
    /// −75 / −90 / −86 dB gains, exponents 2 / 3.2 / 4.
    fn default() -> Self {
        Self::from_db(-75.0, -90.0, -86.0, 2.0, 3.2, 4.0)
    }
}

impl PathLossParams {
    pub fn from_db(k_l_db: f64, k_n_db: f64, k_r_db: f64, alpha_l: f64, alpha_n: f64, alpha_r: f64) -> Self {
        Self {
            k_l: db_to_linear(k_l_db),
            k_n: db_to_linear(k_n_db),
            k_r: db_to_linear(k_r_db),
            alpha_l,
            alpha_n,
            alpha_r,
            radar_consistent: false,
        }
    }

    /// Echo parameters derived from the LoS ones by the monostatic radar
    /// equation.
    pub fn radar_consistent(k_l: f64, k_n: f64, alpha_l: f64, alpha_n: f64) -> Self {
        Self {
            k_l,
            k_n,
            k_r: k_l / (4.0 * PI),
            alpha_l,
            alpha_n,
            alpha_r: 2.0 * alpha_l,
            radar_consistent: true,
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        for (name, v) in [("k_l", self.k_l), ("k_n", self.k_n), ("k_r", self.k_r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ChannelError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha_l >= 2.0) {
            return Err(ChannelError::Invalid(format!("alpha_l must be >= 2, got {}", self.alpha_l)));
        }
        if !(self.alpha_n > 2.0) {
            return Err(ChannelError::Invalid(format!("alpha_n must be > 2, got {}", self.alpha_n)));
        }
        if !(self.alpha_r > 2.0) {
            return Err(ChannelError::Invalid(format!("alpha_r must be > 2, got {}", self.alpha_r)));
        }
        if self.radar_consistent {
            let k_expect = self.k_l / (4.0 * PI);
            if (self.k_r - k_expect).abs() > 1e-12 * k_expect || self.alpha_r != 2.0 * self.alpha_l {
                return Err(ChannelError::Invalid(
                    "radar consistency requires k_r = k_l/(4π) and alpha_r = 2·alpha_l".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn gain(&self, kind: LinkKind) -> f64 {
        match kind {
            LinkKind::Los => self.k_l,
            LinkKind::Nlos => self.k_n,
            LinkKind::Echo => self.k_r,
        }
    }

    pub fn exponent(&self, kind: LinkKind) -> f64 {
        match kind {
            LinkKind::Los => self.alpha_l,
            LinkKind::Nlos => self.alpha_n,
            LinkKind::Echo => self.alpha_r,
        }
    }
}

/// `k·r^{−α}` for the selected link kind.
pub fn path_loss(kind: LinkKind, r: f64, pl: &PathLossParams) -> Result<f64, ChannelError> {
    if !(r > 0.0) {
        return Err(ChannelError::Domain(format!("path loss needs r > 0, got {r}")));
    }
    Ok(pl.gain(kind) * r.powf(-pl.exponent(kind)))
}

/// Rectangle blockage process: centers form a PPP of density `lambda_bk`,
/// sides have the given means and orientations are uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BooleanBlockage {
    pub lambda_bk: f64,
    pub mean_len: f64,
    pub mean_wid: f64,
}

impl BooleanBlockage {
    /// Square blockages reproducing a given `(beta, p)` pair.
    pub fn square_from_beta_p(beta: f64, p: f64) -> Result<Self, ChannelError> {
        if !(beta > 0.0 && p > 0.0) {
            return Err(ChannelError::Invalid("beta and p must be positive".into()));
        }
        // beta = 4λL/π, p = λL²  =>  L = 4p/(πβ)
        let side = 4.0 * p / (PI * beta);
        Ok(Self {
            lambda_bk: p / (side * side),
            mean_len: side,
            mean_wid: side,
        })
    }
}

/// `(β, p) = (2λ(L̄+W̄)/π, λL̄W̄)`.
pub fn derive_beta_p(lambda_bk: f64, mean_len: f64, mean_wid: f64) -> (f64, f64) {
    (
        2.0 * lambda_bk * (mean_len + mean_wid) / PI,
        lambda_bk * mean_len * mean_wid,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageParams {
    /// Per-meter blockage rate.
    pub beta: f64,
    /// Area-fraction term.
    pub p: f64,
    pub boolean_model: Option<BooleanBlockage>,
}

impl Default for BlockageParams {
    fn default() -> Self {
        Self::new(0.008, 0.1)
    }
}

impl BlockageParams {
    pub fn new(beta: f64, p: f64) -> Self {
        Self {
            beta,
            p,
            boolean_model: None,
        }
    }

    pub fn none() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn from_boolean(model: BooleanBlockage) -> Self {
        let (beta, p) = derive_beta_p(model.lambda_bk, model.mean_len, model.mean_wid);
        Self {
            beta,
            p,
            boolean_model: Some(model),
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.beta >= 0.0 && self.p >= 0.0) || !self.beta.is_finite() || !self.p.is_finite() {
            return Err(ChannelError::Invalid(format!(
                "blockage needs beta >= 0 and p >= 0, got ({}, {})",
                self.beta, self.p
            )));
        }
        if let Some(m) = self.boolean_model {
            let (beta, p) = derive_beta_p(m.lambda_bk, m.mean_len, m.mean_wid);
            let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(f64::MIN_POSITIVE);
            if !rel(self.beta, beta) || !rel(self.p, p) {
                return Err(ChannelError::Invalid(
                    "beta/p disagree with the Boolean model they claim to summarize".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn prob_los(&self, r: f64) -> f64 {
        prob_los(r, self)
    }

    pub fn prob_nlos(&self, r: f64) -> f64 {
        prob_nlos(r, self)
    }
}

/// `e^{−(βr + p)}`.
pub fn prob_los(r: f64, b: &BlockageParams) -> f64 {
    (-(b.beta * r + b.p)).exp()
}

pub fn prob_nlos(r: f64, b: &BlockageParams) -> f64 {
    1.0 - prob_los(r, b)
}

/// `U(r) = e^{−p}/β²·[1 − (βr + 1)e^{−βr}]`, i.e. `∫₀^r x·P_LoS(x) dx`.
///
/// Written as `r²·e^{−p}·g(βr)` with `g(y) = (1 − (1+y)e^{−y})/y²`, which is
/// evaluated by its Taylor series near 0 to avoid cancellation.
pub fn visible_u(r: f64, b: &BlockageParams) -> f64 {
    let y = b.beta * r;
    let g = if y < 1e-3 {
        0.5 - y / 3.0 + y * y / 8.0 - y * y * y / 30.0
    } else {
        -(-y).exp_m1() / (y * y) - (-y).exp() / y
    };
    (-b.p).exp() * r * r * g
}

/// Density of the distance to the nearest BS with a clear line of sight.
///
/// Integrates to [`association_mass`] rather than 1: with probability
/// `1 − mass` no BS is visible at all.
pub fn nearest_visible_pdf(r: f64, lambda_bs: f64, b: &BlockageParams) -> Result<f64, ChannelError> {
    if !(b.beta > 0.0) {
        return Err(ChannelError::Domain(
            "nearest_visible_pdf needs beta > 0; use nearest_pdf without blockage".into(),
        ));
    }
    if !(r >= 0.0) || !(lambda_bs > 0.0) {
        return Err(ChannelError::Domain(format!(
            "need r >= 0 and lambda_bs > 0, got r = {r}, lambda_bs = {lambda_bs}"
        )));
    }
    Ok(2.0 * PI * lambda_bs * r * (-(b.beta * r + b.p + 2.0 * PI * lambda_bs * visible_u(r, b))).exp())
}

/// Probability that at least one BS is visible: `1 − exp(−2πe^{−p}λ/β²)`.
pub fn association_mass(lambda_bs: f64, b: &BlockageParams) -> f64 {
    if b.beta == 0.0 {
        return if lambda_bs > 0.0 && b.p.is_finite() { 1.0 } else { 0.0 };
    }
    -(-2.0 * PI * (-b.p).exp() * lambda_bs / (b.beta * b.beta)).exp_m1()
}

/// Nearest-BS distance density without blockage, `2πλr·e^{−πλr²}`.
pub fn nearest_pdf(r: f64, lambda_bs: f64) -> f64 {
    2.0 * PI * lambda_bs * r * (-PI * lambda_bs * r * r).exp()
}

/// One term `w·e^{−u x}` of an exponential-series CCDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub w: f64,
    pub u: f64,
}

const fn term(w: f64, u: f64) -> SeriesTerm {
    SeriesTerm { w, u }
}

/// Four-term fits of the Rician power distribution, keyed by K.
pub const RICIAN_SERIES_TABLE: [(f64, [SeriesTerm; 4]); 3] = [
    (1.0, [term(-0.8993, 1.2475), term(5.9324, 1.4298), term(-5.4477, 1.7436), term(1.4145, 2.0326)]),
    (5.0, [term(42.243, 2.9576), term(-189.99, 3.7559), term(192.97, 4.1436), term(-44.229, 4.7715)]),
    (10.0, [term(177.75, 3.8741), term(-338.04, 4.3761), term(297.00, 5.3985), term(-135.71, 5.9937)]),
];

/// Exponential-series approximation of a unit-mean power distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct RicianSeries {
    pub terms: Vec<SeriesTerm>,
}

impl RicianSeries {
    /// Tabulated coefficients for K ∈ {1, 5, 10}.
    pub fn for_k(k: f64) -> Result<Self, ChannelError> {
        RICIAN_SERIES_TABLE
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, t)| Self { terms: t.to_vec() })
            .ok_or(ChannelError::UnsupportedK(k))
    }

    /// Single exponential term: the Rayleigh special case.
    pub fn exponential(rate: f64) -> Self {
        Self {
            terms: vec![term(1.0, rate)],
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.terms.is_empty() {
            return Err(ChannelError::Invalid("empty exponential series".into()));
        }
        if self.terms.iter().any(|t| !(t.u > 0.0)) {
            return Err(ChannelError::Invalid("series rates must be positive".into()));
        }
        let sum: f64 = self.terms.iter().map(|t| t.w).sum();
        if (sum - 1.0).abs() > 1e-2 {
            return Err(ChannelError::Invalid(format!("series weights sum to {sum}, not 1")));
        }
        Ok(())
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.w).sum()
    }
}

/// Fading and target statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingParams {
    pub rician_k: f64,
    /// Absent for K without tabulated coefficients (simulation only).
    pub series: Option<RicianSeries>,
    pub mu_n_comm: f64,
    pub mu_n_sens: f64,
    /// Mean radar cross-section in m².
    pub mean_rcs: f64,
}

impl Default for FadingParams {
    fn default() -> Self {
        Self::new(10.0, 1.0, 100.0)
    }
}

impl FadingParams {
    /// Rician K for LoS links, unit-mean Rayleigh rate `mu` for NLoS links
    /// (both tasks), mean RCS in m².
    pub fn new(rician_k: f64, mu: f64, mean_rcs: f64) -> Self {
        Self {
            rician_k,
            series: RicianSeries::for_k(rician_k).ok(),
            mu_n_comm: mu,
            mu_n_sens: mu,
            mean_rcs,
        }
    }

    pub fn with_series(mut self, series: RicianSeries) -> Self {
        self.series = Some(series);
        self
    }

    pub fn with_mean_rcs(mut self, mean_rcs: f64) -> Self {
        self.mean_rcs = mean_rcs;
        self
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.rician_k >= 0.0) {
            return Err(ChannelError::Invalid(format!("Rician K must be >= 0, got {}", self.rician_k)));
        }
        if !(self.mu_n_comm > 0.0 && self.mu_n_sens > 0.0) {
            return Err(ChannelError::Invalid("Rayleigh rates must be positive".into()));
        }
        if !(self.mean_rcs > 0.0) {
            return Err(ChannelError::Invalid(format!("mean RCS must be positive, got {}", self.mean_rcs)));
        }
        if let Some(s) = &self.series {
            s.validate()?;
        }
        Ok(())
    }

    /// The series, or an error naming K when none is tabulated.
    pub fn require_series(&self) -> Result<&RicianSeries, ChannelError> {
        self.series.as_ref().ok_or(ChannelError::UnsupportedK(self.rician_k))
    }
}

/// Exact density of unit-mean Rician power.
pub fn rician_power_pdf_exact(x: f64, k: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let z = 2.0 * (k * (1.0 + k) * x).sqrt();
    // I0(z) = e^z·i0e(z); fold e^z into the exponent
    (1.0 + k) * (-k - (1.0 + k) * x + z).exp() * bessel_i0e(z)
}

/// `Σ wₙuₙe^{−uₙx}`. Can be negative near 0 because some weights are.
pub fn rician_power_pdf_approx(x: f64, series: &RicianSeries) -> f64 {
    series.terms.iter().map(|t| t.w * t.u * (-t.u * x).exp()).sum()
}

/// `Σ wₙe^{−uₙx}`.
pub fn rician_power_ccdf_approx(x: f64, series: &RicianSeries) -> f64 {
    series.terms.iter().map(|t| t.w * (-t.u * x).exp()).sum()
}

/// Unit-mean Rician power `|√(K/(K+1)) + n|²` with `n ~ CN(0, 1/(K+1))`.
pub fn sample_rician_power<R: Rng + ?Sized>(k: f64, rng: &mut R) -> f64 {
    let los = (k / (k + 1.0)).sqrt();
    let sd = (0.5 / (k + 1.0)).sqrt();
    let re = los + sd * rng.sample::<f64, _>(StandardNormal);
    let im = sd * rng.sample::<f64, _>(StandardNormal);
    re * re + im * im
}

/// Exponential power with rate `mu`.
pub fn sample_rayleigh_power<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> f64 {
    rng.sample::<f64, _>(Exp1) / mu
}

/// Swerling I cross-section: exponential with mean `mean_rcs`.
pub fn sample_rcs<R: Rng + ?Sized>(mean_rcs: f64, rng: &mut R) -> f64 {
    rng.sample::<f64, _>(Exp1) * mean_rcs
}

/// Clamp a simulated distance to [`R_MIN`]; the flag reports whether it moved.
pub fn clamp_distance(r: f64) -> (f64, bool) {
    if r < R_MIN {
        (R_MIN, true)
    } else {
        (r, false)
    }
}
