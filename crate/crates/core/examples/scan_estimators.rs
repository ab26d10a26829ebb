//! Compare the scan, avg, max and lp estimators on a planted Gaussian instance,
//! and the two scan strategies on the same input.

use std::time::Instant;

use sosgap::estimators::{avg_estimate, lp_estimate, max_estimate, scan_estimate, ScanStrategy};
use sosgap::models::{gen_submatrix, ModelParams, Noise};

fn main() -> sosgap::Result<()> {
    let (d, s, beta) = (24, 5, 1.5);
    let inst = gen_submatrix(&ModelParams::submatrix(d, s, beta, Noise::Gaussian { sigma: 1.0 }, 42))?;
    let x = &inst.matrix;
    println!("planted support {:?}, beta* = {beta}", inst.support);

    for strategy in [ScanStrategy::Exhaustive, ScanStrategy::BranchAndBound] {
        let start = Instant::now();
        let r = scan_estimate(x, s, strategy)?;
        println!(
            "scan ({strategy:?}): {:.4} on {:?}, {} subsets examined, {:.1} ms",
            r.value,
            r.support,
            r.subsets_examined,
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    println!("avg: {:.4}", avg_estimate(x, s)?);
    println!("max: {:.4}", max_estimate(x));
    println!("lp:  {:.4}", lp_estimate(x, s)?);
    Ok(())
}
