//! Build the expansivity certificate on null instances and verify it exactly.
//!
//! For Rademacher noise the positivity graph is {X_ij > 0}; for the block model
//! it is the graph itself. The certificate always has objective exactly one,
//! while the true signal is zero or 1/2 off the block.

use sosgap::certificate::{certify, format_ratio, PositivityMode, ReportJson};
use sosgap::models::{gen_sbm, gen_submatrix, ModelParams, Noise};

fn main() -> sosgap::Result<()> {
    let x = gen_submatrix(&ModelParams::submatrix(40, 3, 0.0, Noise::Rademacher { nu: 1.0 }, 11))?.matrix;
    for s in [2, 3, 4, 5] {
        let c = certify(&x, PositivityMode::SignPositive, s, 1)?;
        println!(
            "rademacher d=40 s*={s} l=1: eta(empty)={} violation={} objective={} lambda_min={:+.3e} psd={}",
            c.table.clique_count(),
            format_ratio(&c.report.rowsum_max_violation),
            c.report.objective.as_ref().map(format_ratio).unwrap_or_default(),
            c.report.min_eigenvalue,
            c.report.psd
        );
    }

    let g = gen_sbm(&ModelParams::sbm(30, 2, 0.5, 0.5, 11))?.matrix;
    let c = certify(&g, PositivityMode::BinaryOne, 4, 2)?;
    println!("sbm d=30 s*=4 l=2 report:\n{}", serde_json::to_string_pretty(&ReportJson::from(&c.report))?);
    Ok(())
}
