//! Blockage on against blockage off when LoS decays slowly (α_L = 2.4)
//! and NLoS and echo paths decay fast (4.8). Blockage removes far LoS
//! interferers, which helps at moderate densities.

use isac_coverage::experiments::{analytic_value, logspace, Config};
use isac_coverage::montecarlo::Task;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut on = Config::default();
    on.alpha_l = 2.4;
    on.alpha_n = 4.8;
    on.alpha_r = 4.8;
    let mut off = on.clone();
    off.beta = 0.0;
    off.p = 0.0;
    println!("{:>12} {:>9} {:>9} {:>9} {:>9}", "lambda", "comm on", "comm off", "sens on", "sens off");
    for l in logspace(1e-6, 1e-3, 16) {
        on.lambda_bs = l;
        off.lambda_bs = l;
        println!(
            "{l:>12.3e} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            analytic_value(Task::Comm, &on)?,
            analytic_value(Task::Comm, &off)?,
            analytic_value(Task::Sens, &on)?,
            analytic_value(Task::Sens, &off)?
        );
    }
    Ok(())
}
