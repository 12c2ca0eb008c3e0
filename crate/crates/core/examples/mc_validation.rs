//! Monte Carlo estimates with Wilson intervals against the coverage
//! integrals. Usage: `mc_validation [snapshots] [seed]`.

use isac_coverage::analytic::{comm_coverage, sens_coverage, NetworkParams};
use isac_coverage::channel::{BlockageParams, FadingParams, PathLossParams};
use isac_coverage::montecarlo::{estimate_coverage, Scenario, Task};
use isac_coverage::specfun::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(10_000), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(42), |s| s.parse())?;
    let net = NetworkParams::default();
    let ch = PathLossParams::default();
    let b = BlockageParams::default();
    let f = FadingParams::default();
    let spec = QuadratureSpec::default();
    let grid = [-20.0, -10.0, 0.0, 10.0, 20.0, 30.0];
    let scenario = Scenario::new(&net, b, seed);
    for task in [Task::Comm, Task::Sens] {
        println!("{task:?}, {n} snapshots");
        let est = estimate_coverage(task, &grid, &scenario, &ch, &f, n)?;
        for (t, e) in grid.iter().zip(est) {
            let net = net.with_threshold_db(*t);
            let a = match task {
                Task::Comm => comm_coverage(&net, &ch, &b, &f, &spec)?,
                Task::Sens => sens_coverage(&net, &ch, &b, &f, &spec)?,
            };
            let ok = (a.value - e.mean).abs() <= e.half_width().max(0.02);
            println!(
                "  T={t:>5.1} dB  analytic {:.4}  mc {:.4} [{:.4}, {:.4}]  {}",
                a.value,
                e.mean,
                e.ci_low,
                e.ci_high,
                if ok { "ok" } else { "MISMATCH" }
            );
        }
    }
    Ok(())
}
