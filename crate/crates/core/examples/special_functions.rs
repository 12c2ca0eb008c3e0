//! Numerical building blocks: error functions, Gauss hypergeometric
//! function, adaptive quadrature and the interference kernel.

use isac_coverage::analytic::{f_kernel, f_kernel_alpha4, f_kernel_closed, KernelWeight};
use isac_coverage::specfun::{erfc, erfcx, gauss_2f1, integrate_semi_infinite, QuadratureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec::default();
    for x in [0.5, 3.0, 10.0] {
        println!("erfc({x}) = {:.6e}   erfcx({x}) = {:.10}", erfc(x), erfcx(x));
    }
    // ₂F₁(1, 1/2; 3/2; −z²) = atan(z)/z
    let z: f64 = 2.0;
    println!("2F1(1,1/2;3/2;-4) = {:.15}  atan(2)/2 = {:.15}", gauss_2f1(1.0, 0.5, 1.5, -z * z)?, z.atan() / z);
    let g = integrate_semi_infinite(|x| (-x * x).exp(), 0.0, &spec)?;
    println!("∫₀^∞ e^(−x²) dx = {:.15} (±{:.1e}), √π/2 = {:.15}", g.value, g.abs_error, std::f64::consts::PI.sqrt() / 2.0);
    for (eps, h) in [(1e-3, 1.0), (0.5, 10.0)] {
        println!(
            "F(ε={eps}, α=4, h={h}): arctan {:.10}  hypergeometric {:.10}  quadrature {:.10}",
            f_kernel_alpha4(eps, h),
            f_kernel_closed(eps, 4.0, h)?,
            f_kernel(eps, 4.0, KernelWeight::Unit, h, &spec)?
        );
    }
    Ok(())
}
