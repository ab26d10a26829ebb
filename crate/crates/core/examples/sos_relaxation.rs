//! Assemble and solve the SoS relaxations of the scan problem on one instance
//! and show the ordering scan <= level 2 <= level 1 <= basic <= lp.

use sosgap::estimators::{lp_estimate, scan_estimate, ScanStrategy};
use sosgap::models::{gen_submatrix, ModelParams, Noise};
use sosgap::sdp::{extreme_eigenvalues, solve, SolverOptions};
use sosgap::sos_program::{assemble_basic, assemble_level, SosProgram};

fn report(name: &str, program: &SosProgram) -> sosgap::Result<f64> {
    let sol = solve(program, &SolverOptions::default())?;
    let (lo, _) = extreme_eigenvalues(&sol.matrix)?;
    println!(
        "{name:<8} dim {:>3}  vars {:>4}  rows {:>4}  value {:.6}  {:?} after {} iterations, lambda_min {lo:.1e}",
        program.dim,
        program.var_count,
        program.constraints.len(),
        sol.value,
        sol.status,
        sol.iterations
    );
    Ok(sol.value)
}

fn main() -> sosgap::Result<()> {
    let (d, s) = (8, 3);
    let x = gen_submatrix(&ModelParams::submatrix(d, s, 0.0, Noise::Gaussian { sigma: 1.0 }, 3))?.matrix;
    let scan = scan_estimate(&x, s, ScanStrategy::BranchAndBound)?.value;
    println!("scan     value {scan:.6}");
    report("level 2", &assemble_level(&x, s, 2)?)?;
    report("level 1", &assemble_level(&x, s, 1)?)?;
    report("basic", &assemble_basic(&x, s)?)?;
    println!("lp       value {:.6}", lp_estimate(&x, s)?);
    Ok(())
}
