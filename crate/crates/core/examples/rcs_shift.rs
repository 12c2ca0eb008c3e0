//! Raising the mean cross-section by 10 dB moves the sensing curve 10 dB
//! to the right, up to the reflected-interference term.

use isac_coverage::analytic::{sens_coverage, sens_coverage_with, NetworkParams, Trc};
use isac_coverage::channel::{db_to_linear, BlockageParams, FadingParams, PathLossParams};
use isac_coverage::specfun::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ch = PathLossParams::default();
    let b = BlockageParams::default();
    let spec = QuadratureSpec::default();
    let fading = |dbsm: f64| FadingParams::default().with_mean_rcs(db_to_linear(dbsm));
    println!("{:>7} {:>10} {:>18} {:>18}", "T (dB)", "20 dBsm", "30 dBsm at T+10", "same, no TRC");
    for t in [-20.0, -10.0, 0.0, 10.0, 20.0] {
        let base = sens_coverage(&NetworkParams::default().with_threshold_db(t), &ch, &b, &fading(20.0), &spec)?;
        let shifted_net = NetworkParams::default().with_threshold_db(t + 10.0);
        let shifted = sens_coverage(&shifted_net, &ch, &b, &fading(30.0), &spec)?;
        let no_trc = sens_coverage_with(&shifted_net, &ch, &b, &fading(30.0), &spec, Trc::Dropped)?;
        println!("{t:>7.1} {:>10.5} {:>18.5} {:>18.5}", base.value, shifted.value, no_trc.value);
    }
    for dbsm in [0.0, 10.0, 20.0, 30.0] {
        let v = sens_coverage(&NetworkParams::default(), &ch, &b, &fading(dbsm), &spec)?;
        println!("{dbsm:>4} dBsm at 0 dB: {:.5}", v.value);
    }
    Ok(())
}
