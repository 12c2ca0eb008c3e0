//! Coverage against BS density. Sensing shows two maxima: one where the
//! serving link becomes reliable and one at high density where the target
//! is almost always close to a BS.

use isac_coverage::experiments::{logspace, run_sweep, Axis, Config, Methods, SweepSpec, TaskSel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SweepSpec::new(
        TaskSel::Both,
        Axis::LambdaBs,
        logspace(1e-7, 1e-3, 40),
        Config::default(),
        Methods::Analytic,
        1,
    );
    let rows = run_sweep(&spec)?;
    let (comm, sens): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.task == isac_coverage::montecarlo::Task::Comm);
    println!("{:>12} {:>10} {:>10}", "lambda", "comm", "sens");
    for (c, s) in comm.iter().zip(&sens) {
        println!("{:>12.3e} {:>10.5} {:>10.5}", c.lambda_bs, c.analytic_value.unwrap_or(f64::NAN), s.analytic_value.unwrap_or(f64::NAN));
    }
    let peaks = |v: &[&isac_coverage::experiments::ResultRow]| -> Vec<f64> {
        let y: Vec<f64> = v.iter().map(|r| r.analytic_value.unwrap_or(f64::NAN)).collect();
        (0..y.len())
            .filter(|&i| (i == 0 || y[i] > y[i - 1]) && (i == y.len() - 1 || y[i] > y[i + 1]))
            .map(|i| v[i].lambda_bs)
            .collect()
    };
    println!("comm maxima at {:?}", peaks(&comm));
    println!("sens maxima at {:?}", peaks(&sens));
    Ok(())
}
