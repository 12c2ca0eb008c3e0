//! Communication and sensing coverage against the SINR threshold at the
//! default network.

use isac_coverage::analytic::{comm_coverage, sens_coverage, NetworkParams};
use isac_coverage::channel::{BlockageParams, FadingParams, PathLossParams};
use isac_coverage::experiments::threshold_grid;
use isac_coverage::specfun::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ch = PathLossParams::default();
    let b = BlockageParams::default();
    let f = FadingParams::default();
    let spec = QuadratureSpec::default();
    println!("{:>8} {:>10} {:>10}", "T (dB)", "comm", "sens");
    for t in threshold_grid() {
        let net = NetworkParams::default().with_threshold_db(t);
        let c = comm_coverage(&net, &ch, &b, &f, &spec)?;
        let s = sens_coverage(&net, &ch, &b, &f, &spec)?;
        println!("{t:>8.1} {:>10.6} {:>10.6}", c.value, s.value);
    }
    Ok(())
}
