//! Snapshot simulation of the network.
//!
//! Each snapshot draws a Poisson field of BSs around the typical node,
//! decides line of sight per link, draws fading and cross-sections, and
//! returns one SINR. Coverage at every threshold is then read off the same
//! SINR sample.
//!
//! Randomness is counter-based. Snapshot `i` draws from ChaCha8 streams keyed by
//! `(seed, purpose)` at stream position `i`, so results do not depend on
//! thread count or scheduling.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::analytic::NetworkParams;
use crate::channel::{
    clamp_distance, prob_los, sample_rayleigh_power, sample_rcs, sample_rician_power, BlockageParams,
    BooleanBlockage, FadingParams, PathLossParams,
};

/// 97.5% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Expected BS count above which the generation disk stops growing.
const MAX_EXPECTED_POINTS: f64 = 5e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Comm,
    Sens,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockageMode {
    /// Independent per-link LoS draws with probability `e^{−(βr+p)}`.
    Bernoulli,
    /// Explicit rectangles; side lengths uniform on `mean·[1 − jitter, 1 + jitter]`.
    Boolean { model: BooleanBlockage, size_jitter: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryMode {
    /// Interferer distances measured from the target with an exclusion
    /// ball, and an independent LoS draw for each reflected path. Mirrors
    /// the sensing integral.
    Matched,
    /// Interferer distances measured to the serving BS.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcsMode {
    IndependentPerPath,
    /// One cross-section per snapshot for the echo and every reflected path.
    Shared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Nominal area radius, m.
    pub area_radius: f64,
    pub lambda_bs: f64,
    pub blockage: BlockageParams,
    pub blockage_mode: BlockageMode,
    pub geometry_mode: GeometryMode,
    pub rcs_mode: RcsMode,
    /// Grow the disk to cover the interference decay length.
    pub extend_radius: bool,
    /// Noise over transmit power.
    pub noise_comm: f64,
    pub noise_sens: f64,
    pub seed: u64,
}

impl Scenario {
    /// Matched geometry, Bernoulli blockage, independent cross-sections,
    /// 1 km nominal radius.
    pub fn new(net: &NetworkParams, blockage: BlockageParams, seed: u64) -> Self {
        Self {
            area_radius: 1000.0,
            lambda_bs: net.lambda_bs,
            blockage,
            blockage_mode: BlockageMode::Bernoulli,
            geometry_mode: GeometryMode::Matched,
            rcs_mode: RcsMode::IndependentPerPath,
            extend_radius: true,
            noise_comm: net.scaled_noise_comm(),
            noise_sens: net.scaled_noise_sens(),
            seed,
        }
    }

    pub fn with_boolean(mut self, model: BooleanBlockage, size_jitter: f64) -> Self {
        self.blockage = BlockageParams::from_boolean(model);
        self.blockage_mode = BlockageMode::Boolean { model, size_jitter };
        self
    }

    /// Radius of the disk BSs are drawn in:
    /// `max(area_radius, 5/β, 5/√(πλ))`, capped so the expected count stays
    /// below 5·10⁴ (never below `area_radius`).
    pub fn generation_radius(&self) -> f64 {
        if !self.extend_radius {
            return self.area_radius;
        }
        let mut r = 5.0 / (PI * self.lambda_bs).sqrt();
        if self.blockage.beta > 0.0 {
            r = r.max(5.0 / self.blockage.beta);
        }
        let cap = (MAX_EXPECTED_POINTS / (PI * self.lambda_bs)).sqrt();
        self.area_radius.max(r.min(cap))
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.area_radius > 0.0) {
            return Err(format!("area_radius must be positive, got {}", self.area_radius));
        }
        if !(self.lambda_bs >= 0.0) {
            return Err(format!("lambda_bs must be >= 0, got {}", self.lambda_bs));
        }
        if let BlockageMode::Boolean { size_jitter, .. } = self.blockage_mode {
            if !(0.0..1.0).contains(&size_jitter) {
                return Err(format!("size_jitter must be in [0, 1), got {size_jitter}"));
            }
        }
        self.blockage.validate().map_err(|e| e.to_string())
    }
}

/// Purpose tags for substreams.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
enum Purpose {
    Field = 1,
    Blockage = 2,
    Fading = 3,
    Rcs = 4,
    Reflection = 5,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic RNG for one (snapshot, purpose) pair.
pub fn substream(seed: u64, index: u64, tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut s = splitmix64(seed ^ splitmix64(tag));
    for chunk in key.chunks_mut(8) {
        s = splitmix64(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

fn stream(scenario: &Scenario, index: u64, purpose: Purpose) -> ChaCha8Rng {
    substream(scenario.seed, index, purpose as u64)
}

/// Poisson field of BSs, uniform in the generation disk around the origin.
pub fn sample_bs_field<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Vec<[f64; 2]> {
    let radius = scenario.generation_radius();
    sample_disk_ppp(scenario.lambda_bs, radius, [0.0, 0.0], rng)
}

fn sample_disk_ppp<R: Rng + ?Sized>(density: f64, radius: f64, center: [f64; 2], rng: &mut R) -> Vec<[f64; 2]> {
    let mean = density * PI * radius * radius;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let n = Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0);
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let th = 2.0 * PI * rng.random::<f64>();
            [center[0] + r * th.cos(), center[1] + r * th.sin()]
        })
        .collect()
}

/// Bernoulli line of sight for a link of the given length.
pub fn los_indicator<R: Rng + ?Sized>(link_length: f64, blockage: &BlockageParams, rng: &mut R) -> bool {
    rng.random::<f64>() < prob_los(link_length, blockage)
}

/// Oriented rectangle blockage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub center: [f64; 2],
    pub half_len: f64,
    pub half_wid: f64,
    /// Orientation of the long side, radians.
    pub angle: f64,
}

/// True iff the segment `a → b` misses every rectangle (separating axes:
/// the two box axes and the segment normal).
pub fn los_test(segment: ([f64; 2], [f64; 2]), rectangles: &[Rect]) -> bool {
    !rectangles.iter().any(|r| segment_hits_rect(segment.0, segment.1, r))
}

fn segment_hits_rect(a: [f64; 2], b: [f64; 2], rect: &Rect) -> bool {
    let (s, c) = rect.angle.sin_cos();
    let local = |p: [f64; 2]| {
        let dx = p[0] - rect.center[0];
        let dy = p[1] - rect.center[1];
        [c * dx + s * dy, -s * dx + c * dy]
    };
    let p = local(a);
    let q = local(b);
    let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    let half = [0.5 * (q[0] - p[0]), 0.5 * (q[1] - p[1])];
    if mid[0].abs() > rect.half_len + half[0].abs() {
        return false;
    }
    if mid[1].abs() > rect.half_wid + half[1].abs() {
        return false;
    }
    let n = [-half[1], half[0]];
    let dist = (mid[0] * n[0] + mid[1] * n[1]).abs();
    dist <= rect.half_len * n[0].abs() + rect.half_wid * n[1].abs()
}

fn sample_rectangles<R: Rng + ?Sized>(
    model: &BooleanBlockage,
    size_jitter: f64,
    center: [f64; 2],
    radius: f64,
    rng: &mut R,
) -> Vec<Rect> {
    let reach = 0.5 * (1.0 + size_jitter) * model.mean_len.hypot(model.mean_wid);
    let centers = sample_disk_ppp(model.lambda_bk, radius + reach, center, rng);
    centers
        .into_iter()
        .map(|c| {
            let mut side = |m: f64| m * (1.0 + size_jitter * (2.0 * rng.random::<f64>() - 1.0));
            let len = side(model.mean_len);
            let wid = side(model.mean_wid);
            Rect {
                center: c,
                half_len: 0.5 * len,
                half_wid: 0.5 * wid,
                angle: PI * rng.random::<f64>(),
            }
        })
        .collect()
}

/// Empirical LoS frequency of a link of length `r` over independent
/// rectangle fields; returns (frequency, standard error).
pub fn boolean_los_frequency(model: &BooleanBlockage, size_jitter: f64, r: f64, n_fields: usize, seed: u64) -> (f64, f64) {
    let hits: usize = (0..n_fields)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64, Purpose::Blockage as u64);
            let a = [-0.5 * r, 0.0];
            let b = [0.5 * r, 0.0];
            let rects = sample_rectangles(model, size_jitter, [0.0, 0.0], 0.5 * r, &mut rng);
            usize::from(los_test((a, b), &rects))
        })
        .sum();
    let p = hits as f64 / n_fields as f64;
    (p, (p * (1.0 - p) / n_fields as f64).sqrt())
}

/// One simulated network seen from the typical node.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub bs_positions: Vec<[f64; 2]>,
    pub serving_index: Option<usize>,
    /// Visibility from the typical node, per BS.
    pub los_flags: Vec<bool>,
    /// Fading power of each BS's link to the receiver (the serving BS's
    /// own entry is its desired-link draw).
    pub fading_draws: Vec<f64>,
    /// Cross-sections: the echo's first, then one per reflected path.
    pub rcs_draws: Vec<f64>,
    pub sinr: Option<f64>,
    /// Links whose length was clamped to the minimum distance.
    pub clamped: usize,
}

impl Snapshot {
    pub fn covered(&self, threshold: f64) -> bool {
        self.sinr.is_some_and(|s| s > threshold)
    }
}

/// Field, distances to the origin, and visibility from the origin.
struct Geometry {
    positions: Vec<[f64; 2]>,
    dist: Vec<f64>,
    los: Vec<bool>,
    rects: Vec<Rect>,
    clamped: usize,
}

fn geometry(scenario: &Scenario, index: u64) -> Geometry {
    let mut field_rng = stream(scenario, index, Purpose::Field);
    let positions = sample_bs_field(scenario, &mut field_rng);
    let mut clamped = 0;
    let dist: Vec<f64> = positions
        .iter()
        .map(|p| {
            let (d, c) = clamp_distance(p[0].hypot(p[1]));
            clamped += usize::from(c);
            d
        })
        .collect();
    let mut blk_rng = stream(scenario, index, Purpose::Blockage);
    let (los, rects) = match &scenario.blockage_mode {
        BlockageMode::Bernoulli => (
            dist.iter().map(|&d| los_indicator(d, &scenario.blockage, &mut blk_rng)).collect(),
            Vec::new(),
        ),
        BlockageMode::Boolean { model, size_jitter } => {
            let rects = sample_rectangles(model, *size_jitter, [0.0, 0.0], scenario.generation_radius(), &mut blk_rng);
            let los = positions.iter().map(|p| los_test(([0.0, 0.0], *p), &rects)).collect();
            (los, rects)
        }
    };
    Geometry {
        positions,
        dist,
        los,
        rects,
        clamped,
    }
}

fn nearest_visible(g: &Geometry) -> Option<usize> {
    (0..g.dist.len())
        .filter(|&i| g.los[i])
        .min_by(|&a, &b| g.dist[a].total_cmp(&g.dist[b]))
}

/// Downlink SINR of the typical user.
pub fn comm_snapshot(scenario: &Scenario, ch: &PathLossParams, f: &FadingParams, index: u64) -> Snapshot {
    let g = geometry(scenario, index);
    let serving = nearest_visible(&g);
    let mut fade_rng = stream(scenario, index, Purpose::Fading);
    let fading: Vec<f64> = g
        .los
        .iter()
        .map(|&los| {
            if los {
                sample_rician_power(f.rician_k, &mut fade_rng)
            } else {
                sample_rayleigh_power(f.mu_n_comm, &mut fade_rng)
            }
        })
        .collect();
    let sinr = serving.map(|s| {
        let signal = fading[s] * ch.k_l * g.dist[s].powf(-ch.alpha_l);
        let mut interference = 0.0;
        for i in 0..g.dist.len() {
            if i == s {
                continue;
            }
            interference += if g.los[i] {
                fading[i] * ch.k_l * g.dist[i].powf(-ch.alpha_l)
            } else {
                fading[i] * ch.k_n * g.dist[i].powf(-ch.alpha_n)
            };
        }
        signal / (interference + scenario.noise_comm)
    });
    Snapshot {
        bs_positions: g.positions,
        serving_index: serving,
        los_flags: g.los,
        fading_draws: fading,
        rcs_draws: Vec::new(),
        sinr,
        clamped: g.clamped,
    }
}

/// Echo SINR at the BS serving the typical target.
pub fn sens_snapshot(scenario: &Scenario, ch: &PathLossParams, f: &FadingParams, index: u64) -> Snapshot {
    let g = geometry(scenario, index);
    let serving = nearest_visible(&g);
    let n = g.dist.len();
    let mut fade_rng = stream(scenario, index, Purpose::Fading);
    let mut rcs_rng = stream(scenario, index, Purpose::Rcs);
    let mut refl_rng = stream(scenario, index, Purpose::Reflection);
    let mut fading = vec![0.0; n];
    let mut rcs_draws = Vec::new();
    let mut clamped = g.clamped;

    let sinr = serving.map(|s| {
        let r0 = g.dist[s];
        let sigma0 = sample_rcs(f.mean_rcs, &mut rcs_rng);
        rcs_draws.push(sigma0);
        let signal = sigma0 * ch.k_r * r0.powf(-ch.alpha_r);
        let b0 = g.positions[s];
        let mut direct = 0.0;
        let mut trc = 0.0;
        for i in 0..n {
            if i == s {
                continue;
            }
            // direct BS-to-BS interference
            let (d, los) = match scenario.geometry_mode {
                GeometryMode::Matched => (g.dist[i], g.los[i]),
                GeometryMode::Exact => {
                    let p = g.positions[i];
                    let (d, c) = clamp_distance((p[0] - b0[0]).hypot(p[1] - b0[1]));
                    clamped += usize::from(c);
                    let los = match scenario.blockage_mode {
                        BlockageMode::Bernoulli => los_indicator(d, &scenario.blockage, &mut refl_rng),
                        BlockageMode::Boolean { .. } => los_test((p, b0), &g.rects),
                    };
                    (d, los)
                }
            };
            fading[i] = if los {
                sample_rician_power(f.rician_k, &mut fade_rng)
            } else {
                sample_rayleigh_power(f.mu_n_sens, &mut fade_rng)
            };
            direct += if los {
                fading[i] * ch.k_l * d.powf(-ch.alpha_l)
            } else {
                fading[i] * ch.k_n * d.powf(-ch.alpha_n)
            };

            // reflection off the target: BS i -> target -> serving BS
            let ri = g.dist[i];
            let reflects = match scenario.geometry_mode {
                GeometryMode::Matched => ri > r0 && los_indicator(ri, &scenario.blockage, &mut refl_rng),
                GeometryMode::Exact => g.los[i],
            };
            if reflects {
                let sigma = match scenario.rcs_mode {
                    RcsMode::IndependentPerPath => sample_rcs(f.mean_rcs, &mut rcs_rng),
                    RcsMode::Shared => sigma0,
                };
                rcs_draws.push(sigma);
                trc += sigma * ch.k_r * ri.powf(-ch.alpha_l) * r0.powf(-ch.alpha_l);
            }
        }
        fading[s] = 1.0;
        signal / (direct + trc + scenario.noise_sens)
    });
    Snapshot {
        bs_positions: g.positions,
        serving_index: serving,
        los_flags: g.los,
        fading_draws: fading,
        rcs_draws,
        sinr,
        clamped,
    }
}

/// Coverage estimate at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

impl Estimate {
    /// Proportion with a Wilson 95% interval.
    pub fn from_counts(successes: usize, n: usize) -> Self {
        let nf = n as f64;
        let p = successes as f64 / nf;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / nf;
        let center = (p + z2 / (2.0 * nf)) / denom;
        let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
        Self {
            mean: p,
            ci_low: (center - half).max(0.0).min(p),
            ci_high: (center + half).min(1.0).max(p),
            n,
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Binomial standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.mean * (1.0 - self.mean) / self.n as f64).sqrt()
    }
}

/// SINR of every snapshot, in snapshot order (`None` when no BS is visible).
pub fn simulate_sinr(task: Task, scenario: &Scenario, ch: &PathLossParams, f: &FadingParams, n_snapshots: usize) -> Vec<Option<f64>> {
    let clamped = AtomicUsize::new(0);
    let out: Vec<Option<f64>> = (0..n_snapshots as u64)
        .into_par_iter()
        .map(|i| {
            let snap = match task {
                Task::Comm => comm_snapshot(scenario, ch, f, i),
                Task::Sens => sens_snapshot(scenario, ch, f, i),
            };
            if snap.clamped > 0 {
                clamped.fetch_add(snap.clamped, Ordering::Relaxed);
            }
            snap.sinr
        })
        .collect();
    let c = clamped.load(Ordering::Relaxed);
    if c > 0 {
        log::debug!("{c} link distances clamped to the minimum distance");
    }
    out
}

/// Coverage over a threshold grid (dB) from one shared set of snapshots.
pub fn estimate_coverage(
    task: Task,
    threshold_grid_db: &[f64],
    scenario: &Scenario,
    ch: &PathLossParams,
    f: &FadingParams,
    n_snapshots: usize,
) -> Result<Vec<Estimate>, String> {
    if n_snapshots < 100 {
        return Err(format!("need at least 100 snapshots, got {n_snapshots}"));
    }
    scenario.validate()?;
    let sinr = simulate_sinr(task, scenario, ch, f, n_snapshots);
    Ok(threshold_grid_db
        .iter()
        .map(|&db| {
            let t = crate::channel::db_to_linear(db);
            let k = sinr.iter().filter(|s| s.is_some_and(|v| v > t)).count();
            Estimate::from_counts(k, n_snapshots)
        })
        .collect())
}
