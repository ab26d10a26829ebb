//! Cross-module checks between the estimators, the assembled programs, the
//! solver and the certificate.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use sosgap::certificate::{certify, verify_certificate, PositivityMode};
use sosgap::estimators::{lp_estimate, scan_estimate, ScanStrategy};
use sosgap::models::{gen_sbm, gen_submatrix, ModelParams, Noise, NoisyMatrix};
use sosgap::rng::{derive_seed, rng_from_seed};
use sosgap::sdp::{solve, SdpStatus, SolverOptions};
use sosgap::sos_program::{
    assemble_basic, assemble_level, assemble_level_truncated, objective_value, PseudoExpectation, SubsetIndexer,
};

fn gaussian(d: usize, s: usize, beta: f64, seed: u64) -> NoisyMatrix {
    gen_submatrix(&ModelParams::submatrix(d, s, beta, Noise::Gaussian { sigma: 1.0 }, seed)).unwrap().matrix
}

fn solved(program: &sosgap::sos_program::SosProgram) -> f64 {
    let sol = solve(program, &SolverOptions::default()).unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal);
    sol.value
}

#[test]
fn integral_points_are_feasible_with_scan_objective() {
    // Every s*-subset indicator is a feasible point of the level program whose
    // objective is that subset's average; the best one is the scan value.
    for k in 0..6u64 {
        let x = gaussian(7, 3, 0.5, derive_seed(1, k));
        for ell in [1usize, 2] {
            let program = assemble_level(&x, 3, ell).unwrap();
            let idx = SubsetIndexer::new(7, ell).unwrap();
            let scan = scan_estimate(&x, 3, ScanStrategy::Exhaustive).unwrap();
            let pe = PseudoExpectation::integral(&idx, &scan.support);
            let y = pe.to_f64(&idx).unwrap();
            assert!(program.max_violation(&y) < 1e-12);
            assert!((program.value_at(&y) - scan.value).abs() < 1e-12);
            let exact = objective_value(&x, &pe, 3).unwrap();
            assert!((exact - scan.value).abs() < 1e-12);
        }
    }
}

#[test]
fn truncated_level_one_matches_basic() {
    // Level 1 with only the |S| = 0 cardinality row is the basic program.
    for k in 0..5u64 {
        let mut rng = rng_from_seed(derive_seed(2, k));
        let d = rng.random_range(3..=6usize);
        let s = rng.random_range(2..=d.min(4));
        let x = gaussian(d, s, 1.0, rng.random());
        let basic = solved(&assemble_basic(&x, s).unwrap());
        let truncated = solved(&assemble_level_truncated(&x, s, 1, 0).unwrap());
        assert!((basic - truncated).abs() < 1e-5, "basic {basic} vs truncated {truncated}");
    }
}

#[test]
fn sandwich_on_small_instances() {
    for k in 0..6u64 {
        let x = gaussian(6, 3, 1.0, derive_seed(3, k));
        let scan = scan_estimate(&x, 3, ScanStrategy::BranchAndBound).unwrap().value;
        let l2 = solved(&assemble_level(&x, 3, 2).unwrap());
        let l1 = solved(&assemble_level(&x, 3, 1).unwrap());
        let basic = solved(&assemble_basic(&x, 3).unwrap());
        let lp = lp_estimate(&x, 3).unwrap();
        assert!(scan - 1e-5 <= l2 && l2 <= l1 + 1e-5 && l1 <= basic + 1e-5 && basic <= lp + 1e-5);
    }
}

#[test]
fn noiseless_relaxations_upper_bound_signal() {
    for beta in [0.5, 2.0] {
        let params = ModelParams::submatrix(6, 3, beta, Noise::Gaussian { sigma: 0.0 }, 9);
        let x = gen_submatrix(&params).unwrap().matrix;
        let basic = solved(&assemble_basic(&x, 3).unwrap());
        let l2 = solved(&assemble_level(&x, 3, 2).unwrap());
        assert!(basic >= beta - 1e-5);
        assert!((l2 - beta).abs() < 1e-4, "level 2 on a noiseless instance: {l2} vs {beta}");
    }
}

#[test]
fn certificate_is_feasible_for_the_assembled_program() {
    // The exact certificate, rounded to floats, satisfies the solver's
    // equality rows and reproduces its objective.
    let x = gen_sbm(&ModelParams::sbm(12, 2, 0.5, 0.5, 4)).unwrap().matrix;
    for (s, ell) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
        let cert = certify(&x, PositivityMode::BinaryOne, s, ell).unwrap();
        let program = assemble_level(&x, s, ell).unwrap();
        let y = cert.pe.to_f64(cert.table.indexer()).unwrap();
        assert!(program.max_violation(&y) < 1e-9);
        assert!((program.value_at(&y) - 1.0).abs() < 1e-12);
        assert_eq!(cert.report.objective, Some(BigRational::one()));
        assert!(cert.report.rowsum_max_violation.is_zero());
        let again = verify_certificate(&cert.pe, 12, s, ell).unwrap();
        assert_eq!(again.psd, cert.report.psd);
        if cert.report.psd {
            // A PSD certificate is a feasible point, so the optimum is at least 1.
            assert!(solved(&program) >= 1.0 - 1e-4);
        }
    }
}
