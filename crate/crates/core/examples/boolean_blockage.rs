//! Explicit rectangle fields: LoS frequency against e^{−(βr+p)}, and
//! coverage under rectangles against independent per-link draws.

use isac_coverage::analytic::NetworkParams;
use isac_coverage::channel::{BlockageParams, BooleanBlockage, FadingParams, PathLossParams};
use isac_coverage::montecarlo::{boolean_los_frequency, estimate_coverage, Scenario, Task};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = BlockageParams::default();
    let model = BooleanBlockage::square_from_beta_p(b.beta, b.p)?;
    println!(
        "square blockers: density {:.3e} /m², side {:.2} m",
        model.lambda_bk, model.mean_len
    );
    for r in [50.0, 100.0, 200.0, 400.0] {
        let (freq, se) = boolean_los_frequency(&model, 0.0, r, 20_000, 1);
        println!("r={r:>5} m  LoS {freq:.4} ± {se:.4}  model {:.4}", b.prob_los(r));
    }

    let net = NetworkParams::default();
    let ch = PathLossParams::default();
    let f = FadingParams::default();
    let grid = [-10.0, 0.0, 10.0, 20.0];
    let bern = estimate_coverage(Task::Comm, &grid, &Scenario::new(&net, b, 7), &ch, &f, 4000)?;
    let rect = estimate_coverage(
        Task::Comm,
        &grid,
        &Scenario::new(&net, b, 7).with_boolean(model, 0.0),
        &ch,
        &f,
        4000,
    )?;
    for ((t, x), y) in grid.iter().zip(&bern).zip(&rect) {
        println!("T={t:>5.1} dB  independent {:.4}  rectangles {:.4}", x.mean, y.mean);
    }
    Ok(())
}
