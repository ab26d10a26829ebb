//! Empirical PSD rate of the certificate across support sizes, from a config.
//!
//! cargo run --release --example certificate_experiment -- [config.json]

use std::collections::BTreeMap;

use sosgap::lab::{run_certificate_experiment, ExperimentConfig};

fn main() -> sosgap::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/certificate.json").to_string());
    let cfg = ExperimentConfig::read(path.as_ref())?;
    let rows = run_certificate_experiment(&cfg)?;

    // (model, s*, ell) -> (psd count, total, sdp values)
    type Tally = BTreeMap<(String, usize, usize), (usize, usize, Vec<f64>)>;
    let mut tally = Tally::new();
    for row in &rows {
        let entry = tally.entry((row.model.clone(), row.s_star, row.ell)).or_default();
        entry.1 += 1;
        entry.0 += usize::from(row.psd == Some(true));
        entry.2.extend(row.sdp_value);
    }
    for ((model, s, ell), (psd, total, sdp)) in tally {
        let sdp = if sdp.is_empty() {
            String::new()
        } else {
            format!("  min sdp value {:.5}", sdp.iter().copied().fold(f64::INFINITY, f64::min))
        };
        println!("{model:<10} s*={s} l={ell}: psd {psd}/{total}{sdp}");
    }
    Ok(())
}
