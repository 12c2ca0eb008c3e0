//! Special functions and quadrature primitives.
//!
//! Everything here is a pure function of its inputs. The quadrature engine is
//! an adaptive 21-point Gauss–Kronrod scheme (global error control, worst
//! interval bisected first); semi-infinite ranges are mapped onto `[0, 1)`
//! with `x = h + s·t/(1 − t)`.
//!
//! The Gauss hypergeometric function is evaluated through its Euler integral
//! and is only defined on the region the coverage formulas need (`c > b > 0`,
//! nonpositive argument).

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use thiserror::Error;

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
    /// Tail-mass bound used when a semi-infinite integral is truncated.
    pub truncation_mass: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2048,
            truncation_mass: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadError> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_subdivisions >= 8
            && self.truncation_mass > 0.0
            && self.truncation_mass <= 1e-3;
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidSpec(*self))
        }
    }

    /// Same budget with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    NonConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid quadrature spec: {0:?}")]
    InvalidSpec(QuadratureSpec),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("result overflows f64 for argument {0}")]
    Overflow(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

// 21-point Kronrod extension of the 10-point Gauss rule. Odd entries of
// `XGK` are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One Gauss–Kronrod panel on `[a, b]`; returns (estimate, error estimate).
fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), QuadError>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64, QuadError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((result, err))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral, QuadError>
where
    F: FnMut(f64) -> f64,
{
    integrate_breaks(f, &[a, b], spec)
}

/// Adaptive integration over `[points[0], points[last]]`, starting from the
/// panels delimited by `points` (which must be sorted ascending).
pub fn integrate_breaks<F>(
    mut f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral, QuadError>
where
    F: FnMut(f64) -> f64,
{
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (value, error) = gk21(&mut f, a, b)?;
        total += value;
        total_err += error;
        heap.push(Panel { a, b, value, error });
    }
    let mut subdivisions = 0;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Integral {
                value: total,
                abs_error: total_err,
            });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Integral {
                value: total,
                abs_error: total_err,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        // panel too narrow to split further in f64
        if mid <= worst.a || mid >= worst.b || subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            let total: f64 = heap.iter().map(|p| p.value).sum();
            let total_err: f64 = heap.iter().map(|p| p.error).sum();
            if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
                return Ok(Integral {
                    value: total,
                    abs_error: total_err,
                });
            }
            return Err(QuadError::NonConvergence {
                estimate: total,
                error_bound: total_err,
                subdivisions,
            });
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
        // running sums drift; refresh them now and then
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// `∫_h^∞ f(x) dx` with unit length scale.
pub fn integrate_semi_infinite<F>(f: F, h: f64, spec: &QuadratureSpec) -> Result<Integral, QuadError>
where
    F: FnMut(f64) -> f64,
{
    integrate_semi_infinite_scaled(f, h, 1.0, spec)
}

/// `∫_h^∞ f(x) dx` under the map `x = h + scale·t/(1 − t)`.
///
/// `scale` should be the length over which `f` varies near `h`; half of the
/// mapped interval then covers `[h, h + scale]`.
pub fn integrate_semi_infinite_scaled<F>(
    mut f: F,
    h: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, QuadError>
where
    F: FnMut(f64) -> f64,
{
    let mapped = |t: f64| {
        let s = 1.0 - t;
        let x = h + scale * t / s;
        let jac = scale / (s * s);
        if !x.is_finite() || !jac.is_finite() {
            return 0.0;
        }
        let y = f(x);
        if y == 0.0 {
            0.0
        } else {
            y * jac
        }
    };
    // one panel per decade of x - h
    let breaks = [0.0, 0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, 1.0];
    integrate_breaks(mapped, &breaks, spec)
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Positive-term series `e^{x²}·erf(x)·√π/2 = Σ 2ⁿx^{2n+1}/(2n+1)!!`.
fn erf_series_scaled(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Continued fraction for `√π·e^{x²}·erfc(x)`, valid for x > 0.
fn erfc_cf_scaled(x: f64) -> f64 {
    // 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+ ...)))) by modified Lentz
    const TINY: f64 = 1e-300;
    let mut fval = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        fval *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / fval
}

const ERF_SERIES_LIMIT: f64 = 2.0;

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < ERF_SERIES_LIMIT {
        FRAC_2_SQRT_PI * (-ax * ax).exp() * erf_series_scaled(ax)
    } else {
        1.0 - erfc(ax)
    };
    v.copysign(x)
}

/// Complementary error function `2/√π ∫ₓ^∞ e^{−t²} dt`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < ERF_SERIES_LIMIT {
        1.0 - FRAC_2_SQRT_PI * (-x * x).exp() * erf_series_scaled(x)
    } else {
        (-x * x).exp() * erfc_cf_scaled(x) / SQRT_PI
    }
}

/// Scaled complementary error function `e^{x²}·erfc(x)`, finite for all
/// x ≥ 0 (≈ `1/(x√π)` for large x).
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < ERF_SERIES_LIMIT {
        (x * x).exp() * erfc(x)
    } else {
        erfc_cf_scaled(x) / SQRT_PI
    }
}

/// Exponentially scaled Bessel function `e^{−x}·I₀(x)` for x ≥ 0.
pub fn bessel_i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= 30.0 {
        bessel_i0_series(x) * (-x).exp()
    } else {
        // Hankel asymptotic expansion; terms shrink until k ≈ 2x
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

fn bessel_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64, SpecFunError> {
    if x.is_nan() || x < 0.0 {
        return Err(SpecFunError::Domain(format!("bessel_i0 requires x >= 0, got {x}")));
    }
    let v = if x <= 30.0 {
        bessel_i0_series(x)
    } else {
        // split e^x to delay overflow
        let half = (0.5 * x).exp();
        bessel_i0e(x) * half * half
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecFunError::Overflow(x))
    }
}

#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of `|Γ(x)|` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma function.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

fn hyp2f1_quadrature() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-300,
        max_subdivisions: 1000,
        truncation_mass: 1e-9,
    }
}

/// Gauss hypergeometric function `₂F₁(a, b; c; t)` through the Euler integral
///
/// ```text
/// Γ(c)/(Γ(b)Γ(c−b)) ∫₀¹ z^{b−1}(1−z)^{c−b−1}(1−tz)^{−a} dz
/// ```
///
/// Supported for `c > b > 0` and `t ≤ 0`. The endpoint powers are removed by
/// `z = u^{1/b}` on `[0, ½]` and `1 − z = v^{1/(c−b)}` on `[½, 1]`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, t: f64) -> Result<f64, SpecFunError> {
    if !(b > 0.0) || !(c > b) {
        return Err(SpecFunError::Domain(format!(
            "2F1 Euler integral needs c > b > 0 (b = {b}, c = {c})"
        )));
    }
    if !(t <= 0.0) {
        return Err(SpecFunError::Domain(format!("2F1 argument must be <= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let spec = hyp2f1_quadrature();
    let d = c - b;
    let kernel = |z: f64| (1.0 - t * z).powf(-a);

    // lower half, z in [0, 1/2]
    let lower = if b < 1.0 {
        let u_max = 0.5f64.powf(b);
        let g = |u: f64| {
            let z = u.powf(1.0 / b);
            (1.0 - z).powf(d - 1.0) * kernel(z) / b
        };
        // the (1 - tz)^-a knee sits near z ≈ 1/|t|, i.e. u ≈ |t|^-b
        let knee = (-t).powf(-b);
        let mut pts = vec![0.0];
        for s in [1e-4, 1e-2, 1.0, 1e2] {
            let p = knee * s;
            if p > 0.0 && p < u_max {
                pts.push(p);
            }
        }
        pts.push(u_max);
        integrate_breaks(g, &pts, &spec)?.value
    } else {
        let g = |z: f64| z.powf(b - 1.0) * (1.0 - z).powf(d - 1.0) * kernel(z);
        let knee = 1.0 / (-t);
        let mut pts = vec![0.0];
        for s in [1e-4, 1e-2, 1.0, 1e2] {
            let p = knee * s;
            if p > 0.0 && p < 0.5 {
                pts.push(p);
            }
        }
        pts.push(0.5);
        integrate_breaks(g, &pts, &spec)?.value
    };

    // upper half, z in [1/2, 1]
    let upper = if d < 1.0 {
        let v_max = 0.5f64.powf(d);
        let g = |v: f64| {
            let z = 1.0 - v.powf(1.0 / d);
            z.powf(b - 1.0) * kernel(z) / d
        };
        integrate(g, 0.0, v_max, &spec)?.value
    } else {
        let g = |z: f64| z.powf(b - 1.0) * (1.0 - z).powf(d - 1.0) * kernel(z);
        integrate(g, 0.5, 1.0, &spec)?.value
    };

    let norm = (ln_gamma(c) - ln_gamma(b) - ln_gamma(d)).exp();
    Ok(norm * (lower + upper))
}
