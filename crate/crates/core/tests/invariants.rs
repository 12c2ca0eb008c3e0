use isac_coverage::analytic::{comm_coverage, NetworkParams};
use isac_coverage::channel::{association_mass, BlockageParams, BooleanBlockage, FadingParams, PathLossParams, RicianSeries};
use isac_coverage::experiments::{
    linspace, logspace, read_csv, run_sweep, write_csv, write_csv_to, Axis, Config, Methods, SweepSpec, TaskSel,
};
use isac_coverage::montecarlo::{estimate_coverage, simulate_sinr, Scenario, Task};
use isac_coverage::specfun::QuadratureSpec;

fn defaults() -> (NetworkParams, PathLossParams, BlockageParams, FadingParams) {
    (
        NetworkParams::default(),
        PathLossParams::default(),
        BlockageParams::default(),
        FadingParams::default(),
    )
}

#[test]
fn simulation_is_independent_of_thread_count() {
    let (net, ch, b, f) = defaults();
    let sc = Scenario::new(&net, b, 11);
    let many = simulate_sinr(Task::Sens, &sc, &ch, &f, 2000);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| simulate_sinr(Task::Sens, &sc, &ch, &f, 2000));
    assert_eq!(many, one);
}

#[test]
fn coverage_is_pathwise_monotone_in_threshold() {
    let (net, ch, b, f) = defaults();
    let sc = Scenario::new(&net, b, 3);
    let grid = linspace(-20.0, 30.0, 51);
    for task in [Task::Comm, Task::Sens] {
        let est = estimate_coverage(task, &grid, &sc, &ch, &f, 5000).unwrap();
        assert!(est.windows(2).all(|w| w[1].mean <= w[0].mean));
    }
}

#[test]
fn uncovered_fraction_matches_hole_mass() {
    let (net, ch, b, f) = defaults();
    let sc = Scenario::new(&net, b, 17);
    let sinr = simulate_sinr(Task::Comm, &sc, &ch, &f, 10_000);
    let uncovered = sinr.iter().filter(|s| s.is_none()).count() as f64 / sinr.len() as f64;
    let expected = 1.0 - association_mass(net.lambda_bs, &b);
    let se = (expected * (1.0 - expected) / sinr.len() as f64).sqrt();
    assert!((uncovered - expected).abs() <= 3.0 * se, "{uncovered} vs {expected}");
}

fn blockage_mode_gaps(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let (net, ch, b, f) = defaults();
    let model = BooleanBlockage::square_from_beta_p(b.beta, b.p).unwrap();
    let bern = Scenario::new(&net, b, seed);
    let boolean = Scenario::new(&net, b, seed).with_boolean(model, 0.0);
    let grid = [-10.0, 0.0, 10.0, 20.0];
    let a = estimate_coverage(Task::Comm, &grid, &bern, &ch, &f, n).unwrap();
    let c = estimate_coverage(Task::Comm, &grid, &boolean, &ch, &f, n).unwrap();
    a.iter().zip(&c).map(|(x, y)| (x.mean, y.mean)).collect()
}

// Rectangles block every link of an indoor user at once (probability
// 1 − e^{−p} ≈ 0.095) and correlate links in nearby directions, so the
// Boolean field covers 0.04 to 0.06 less than independent links.
#[test]
#[ignore = "Boolean fields cover 0.04 to 0.06 less than Bernoulli links at defaults"]
fn bernoulli_and_boolean_blockage_agree_on_comm() {
    for (x, y) in blockage_mode_gaps(21, 4000) {
        assert!((x - y).abs() <= 0.03, "{x} vs {y}");
    }
}

#[test]
fn boolean_blockage_gap_regression_guard() {
    for (x, y) in blockage_mode_gaps(21, 4000) {
        assert!(y <= x + 0.01, "{y} vs {x}");
        assert!(x - y <= 0.08, "{x} vs {y}");
    }
}

#[test]
fn analytic_sensing_is_nonincreasing_in_threshold() {
    let spec = SweepSpec::new(
        TaskSel::Sens,
        Axis::ThresholdDb,
        linspace(-20.0, 30.0, 51),
        Config::default(),
        Methods::Analytic,
        1,
    );
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 51);
    let v: Vec<f64> = rows.iter().map(|r| r.analytic_value.unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn analytic_comm_monotonicity() {
    let (net, ch, b, f) = defaults();
    let s = QuadratureSpec::default();
    let grid = linspace(-20.0, 30.0, 51);
    let curve = |f: &FadingParams| -> Vec<f64> {
        grid.iter()
            .map(|t| comm_coverage(&net.with_threshold_db(*t), &ch, &b, f, &s).unwrap().value)
            .collect()
    };
    // an exact exponential law gives a strictly monotone curve
    let rayleigh = f.clone().with_series(RicianSeries::exponential(1.0));
    let v = curve(&rayleigh);
    assert!(v.windows(2).all(|w| w[1] <= w[0]));
    // the tabulated K = 10 series overshoots a CCDF of 1 near zero,
    // which shows up as a small rise at low thresholds only
    let v = curve(&f);
    for (i, w) in v.windows(2).enumerate() {
        if w[1] > w[0] {
            assert!(grid[i] < -9.0, "rise at {} dB", grid[i]);
            assert!(w[1] - w[0] < 5e-3);
        }
    }
}

#[test]
fn sensing_density_sweep_has_two_maxima() {
    let spec = SweepSpec::new(
        TaskSel::Sens,
        Axis::LambdaBs,
        logspace(1e-7, 1e-3, 40),
        Config::default(),
        Methods::Both,
        4,
    );
    let rows = run_sweep(&spec).unwrap();
    let count = |v: &[f64]| {
        (0..v.len())
            .filter(|&i| (i == 0 || v[i] > v[i - 1]) && (i == v.len() - 1 || v[i] > v[i + 1]))
            .count()
    };
    let mc: Vec<f64> = rows.iter().map(|r| r.mc_mean.unwrap()).collect();
    let an: Vec<f64> = rows.iter().map(|r| r.analytic_value.unwrap()).collect();
    assert!(count(&mc) >= 2);
    assert_eq!(count(&an), 2);
}

#[test]
fn sweep_csv_is_reproducible_and_round_trips() {
    let mut cfg = Config::default();
    cfg.n_snapshots = 500;
    let spec = SweepSpec::new(TaskSel::Both, Axis::RcsDbsm, vec![0.0, 10.0, 20.0], cfg, Methods::Both, 8);
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    write_csv_to(&a, &mut x).unwrap();
    write_csv_to(&b, &mut y).unwrap();
    assert_eq!(x, y);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    write_csv(&a, &path).unwrap();
    assert_eq!(read_csv(&path).unwrap(), a);
    for r in &a {
        for v in [r.analytic_value, r.mc_mean, r.mc_ci_low, r.mc_ci_high].into_iter().flatten() {
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn blockage_axis_zero_turns_blockage_off() {
    let mut cfg = Config::default();
    cfg.alpha_l = 2.4;
    cfg.alpha_n = 4.8;
    cfg.alpha_r = 4.8;
    let spec = SweepSpec::new(TaskSel::Comm, Axis::Blockage, vec![0.0, 1.0, 2.0], cfg, Methods::Analytic, 1);
    let rows = run_sweep(&spec).unwrap();
    assert_eq!((rows[0].beta, rows[0].p), (0.0, 0.0));
    assert_eq!(rows[2].beta, 0.016);
    assert!(rows.iter().all(|r| r.error.is_none()));
}
