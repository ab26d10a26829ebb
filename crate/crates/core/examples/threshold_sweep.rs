//! Scan-based test 1(scan > level/2) across signal multipliers c, with the
//! signal level c * sqrt(log(d/s*)/s*).

use sosgap::lab::{run_threshold_sweep, signal_level, ExperimentConfig, ExperimentKind, GridPoint};
use sosgap::models::{ModelKind, Noise};

fn main() -> sosgap::Result<()> {
    let point = GridPoint {
        kind: ModelKind::Submatrix { noise: Noise::Gaussian { sigma: 1.0 } },
        d: 30,
        s_star: 4,
        beta_star: 0.0,
    };
    let mut cfg = ExperimentConfig::new(ExperimentKind::Threshold, vec![point]);
    cfg.multipliers = vec![1.0, 2.0, 4.0, 6.0, 8.0];
    cfg.replicates = 100;
    cfg.base_seed = 1;
    let out = run_threshold_sweep(&cfg)?;
    println!("{:>5} {:>8} {:>8} {:>8} {:>8}", "c", "level", "type I", "type II", "total");
    for s in out.summaries() {
        println!(
            "{:>5.2} {:>8.4} {:>8.3} {:>8.3} {:>8.3}",
            s.c,
            signal_level(s.c, s.d, s.s_star),
            s.type1_error,
            s.type2_error,
            s.total_error()
        );
    }
    Ok(())
}
