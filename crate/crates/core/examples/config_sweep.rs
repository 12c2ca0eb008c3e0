//! Config text in, CSV out: the same path the `sweep` subcommand takes.

use isac_coverage::experiments::{parse_grid, run_sweep, write_csv_to, Axis, Config, Methods, SweepSpec, TaskSel};

const CONFIG: &str = "\
# steep NLoS regime
alpha_l = 2.4
alpha_n = 4.8
alpha_r = 4.8
n_snapshots = 2000
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::parse(CONFIG)?;
    let grid = parse_grid("0,0.5,1,2")?;
    let spec = SweepSpec::new(TaskSel::Both, Axis::Blockage, grid, cfg, Methods::Both, 3);
    let rows = run_sweep(&spec)?;
    write_csv_to(&rows, std::io::stdout())?;
    if let Err(e) = Config::parse("alpha_l = 2.4\nlambda_bs = -1\n") {
        eprintln!("rejected: {e}");
    }
    Ok(())
}
