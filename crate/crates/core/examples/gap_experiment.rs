//! Run a gap experiment from a JSON config and print median errors per
//! estimator and support size.
//!
//! cargo run --release --example gap_experiment -- [config.json]

use std::collections::BTreeMap;

use sosgap::lab::{run_gap_experiment, ExperimentConfig};

fn main() -> sosgap::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/gap.json").to_string());
    let cfg = ExperimentConfig::read(path.as_ref())?;
    let rows = run_gap_experiment(&cfg)?;

    let mut errors: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
    for row in &rows {
        let key = (
            row.s_star,
            format!("{}{}", row.estimator.name(), row.estimator.level().map(|l| format!("({l})")).unwrap_or_default()),
        );
        match (row.abs_error, &row.error) {
            (Some(e), _) => errors.entry(key).or_default().push(e),
            (None, Some(msg)) => eprintln!("failed cell rep {}: {msg}", row.rep),
            _ => {}
        }
    }
    println!("{:>3}  {:<14} {:>12}", "s*", "estimator", "median |err|");
    for ((s, name), mut v) in errors {
        v.sort_by(f64::total_cmp);
        println!("{s:>3}  {name:<14} {:>12.4}", v[v.len() / 2]);
    }
    Ok(())
}
