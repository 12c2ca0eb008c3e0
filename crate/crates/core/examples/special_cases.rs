//! Closed-form special cases next to the quadrature they simplify.

use isac_coverage::analytic::{
    corollary1, corollary2_with, special_case_1, special_case_2, special_case_3, special_case_4, special_case_5,
    special_case_6, NetworkParams, Trc,
};
use isac_coverage::channel::{FadingParams, PathLossParams};
use isac_coverage::specfun::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    let f = FadingParams::default();
    let ch4 = PathLossParams::from_db(-75.0, -90.0, -86.0, 4.0, 3.2, 4.0);
    let ch3 = PathLossParams::from_db(-75.0, -90.0, -86.0, 3.0, 3.2, 3.0);
    let net = NetworkParams::default().with_threshold_db(5.0);
    let quiet = net.with_noise(0.0);

    let rows = [
        ("1: comm, noise, alpha 4", special_case_1(&net, &ch4, &f)?.value, corollary1(&net, &ch4, &f, &spec)?.value),
        ("2: comm, alpha 3", special_case_2(5.0, 3.0, &f)?, corollary1(&quiet, &ch3, &f, &spec)?.value),
        ("3: comm, alpha 4", special_case_3(5.0, &f)?, corollary1(&quiet, &ch4, &f, &spec)?.value),
        (
            "4: sens, noise, alpha 4",
            special_case_4(&net, &ch4, &f)?.value,
            corollary2_with(&net, &ch4, &f, &spec, Trc::Dropped)?.value,
        ),
        (
            "5: sens, alpha 3",
            special_case_5(5.0, 3.0, &ch3, &f)?,
            corollary2_with(&quiet, &ch3, &f, &spec, Trc::Dropped)?.value,
        ),
        (
            "6: sens, alpha 4",
            special_case_6(5.0, &ch4, &f)?,
            corollary2_with(&quiet, &ch4, &f, &spec, Trc::Dropped)?.value,
        ),
    ];
    println!("no blockage, T = 5 dB");
    for (name, closed, quad) in rows {
        println!("{name:<26} closed {closed:.10}  quadrature {quad:.10}  gap {:.1e}", (closed - quad).abs());
    }
    Ok(())
}
