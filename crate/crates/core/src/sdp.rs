//! Dense ADMM solver for the moment-matrix programs of [`crate::sos_program`].
//!
//! The program `max c·y s.t. A y = b, M(y) ⪰ 0` is split as
//! `min -c·y + I_PSD(Z)` subject to `M(y) = Z`, with `A y = b` kept inside
//! the y-step. Each iteration (scaled dual `U`, penalty `ρ`):
//!
//! ```text
//! y  ← argmin_{Ay=b} -c·y + (ρ/2) ||M(y) - Z + U||²
//! Z' ← Π_PSD(M(y) + U)
//! U  ← U + M(y) - Z'
//! ```
//!
//! Because every variable owns a disjoint set of matrix cells, `MᵀM` is the
//! diagonal `D` of cell counts and the y-step is closed form:
//! `y = D⁻¹(q - Aᵀλ)/ρ` with `q = c + ρ Mᵀ(Z - U)` and
//! `(A D⁻¹ Aᵀ) λ = A D⁻¹ q - ρ b`. The normal matrix does not depend on `ρ`,
//! so its pseudo-inverse is computed once.
//!
//! Residuals, with `y` the current iterate and `Z'` the new PSD block:
//!
//! ```text
//! primal = max_i |(A y - b)_i| + ||M(y) - Z'||_F
//! dual   = ρ ||Z' - Z||_F
//! ```
//!
//! The solve stops when both are at most `tol · (1 + |value|)` and, in
//! addition, `||M(y) - Z'||_F <= tol · max(1, λ_max(Z'))`, which bounds the
//! most negative eigenvalue of the returned matrix. Every 100
//! iterations `ρ` is doubled (halved) when the primal residual exceeds the
//! dual one by more than 10x (or the reverse), clamped to `[1e-4, 1e4]`,
//! with `U` rescaled so the unscaled dual is unchanged.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::sos_program::SosProgram;

/// Largest number of equality rows the dense normal matrix is built for.
pub const MAX_CONSTRAINTS: usize = 8000;

const EIG_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Initial ADMM penalty `ρ`.
    pub step: f64,
    pub adaptive: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-7, max_iter: 100_000, step: 1.0, adaptive: true }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        // Written so that NaN is rejected too.
        let positive = |v: f64| v > 0.0;
        if !positive(self.tol) || self.max_iter == 0 || !positive(self.step) {
            return Err(Error::InvalidParams(format!("bad solver options {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIterReached,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Objective at `y`, already divided by the program scale.
    pub value: f64,
    /// Moment matrix `M(y)`.
    pub matrix: DMatrix<f64>,
    pub y: Vec<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

fn eigen(s: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let n = s.nrows();
    SymmetricEigen::try_new(s, f64::EPSILON, EIG_MAX_ITER).ok_or(Error::EigFailure(n))
}

/// Nearest positive semidefinite matrix in Frobenius norm: symmetrize, then
/// zero out the negative eigenvalues.
pub fn project_psd(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    project_psd_with_top(s).map(|(m, _)| m)
}

/// Projection plus the largest eigenvalue of the result.
fn project_psd_with_top(s: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let sym = (s + s.transpose()) * 0.5;
    let eig = eigen(sym)?;
    let clamped = eig.eigenvalues.map(|l| l.max(0.0));
    let top = clamped.iter().copied().fold(0.0, f64::max);
    let scaled = &eig.eigenvectors * DMatrix::from_diagonal(&clamped);
    let mut out = scaled * eig.eigenvectors.transpose();
    out.fill_upper_triangle_with_lower_triangle();
    Ok((out, top))
}

/// `(λ_min, λ_max)` of the symmetric part of `s`.
pub fn extreme_eigenvalues(s: &DMatrix<f64>) -> Result<(f64, f64)> {
    if s.nrows() == 0 {
        return Ok((0.0, 0.0));
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = eigen(sym)?;
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

struct Layout {
    /// Cells of each variable as flat column-major offsets.
    cells: Vec<Vec<usize>>,
    counts: Vec<f64>,
}

impl Layout {
    fn new(program: &SosProgram) -> Self {
        let n = program.dim;
        let mut cells = vec![Vec::new(); program.var_count];
        for c in 0..n {
            for r in 0..n {
                cells[program.cell_var(r, c)].push(c * n + r);
            }
        }
        let counts = cells.iter().map(|c| c.len() as f64).collect();
        Layout { cells, counts }
    }

    /// `Mᵀ(W)`: per-variable sum of the cells it owns.
    fn adjoint(&self, w: &DMatrix<f64>, out: &mut [f64]) {
        let data = w.as_slice();
        for (o, cells) in out.iter_mut().zip(&self.cells) {
            *o = cells.iter().map(|&k| data[k]).sum();
        }
    }

    fn apply(&self, y: &[f64], out: &mut DMatrix<f64>) {
        let data = out.as_mut_slice();
        for (v, cells) in self.cells.iter().enumerate() {
            for &k in cells {
                data[k] = y[v];
            }
        }
    }
}

struct Constraints {
    rows: Vec<Vec<(usize, f64)>>,
    rhs: DVector<f64>,
    /// Pseudo-inverse of `A D⁻¹ Aᵀ`.
    normal_pinv: DMatrix<f64>,
}

impl Constraints {
    fn new(program: &SosProgram, counts: &[f64]) -> Result<Self> {
        let m = program.constraints.len();
        if m > MAX_CONSTRAINTS {
            return Err(Error::TooLarge(format!("{m} equality rows exceeds {MAX_CONSTRAINTS}")));
        }
        let rows: Vec<Vec<(usize, f64)>> = program.constraints.iter().map(|c| c.terms.clone()).collect();
        let rhs = DVector::from_iterator(m, program.constraints.iter().map(|c| c.rhs));

        // Column-wise view so that (A D⁻¹ Aᵀ)_{pq} sums over shared variables.
        let mut by_var: Vec<Vec<(usize, f64)>> = vec![Vec::new(); program.var_count];
        for (r, row) in rows.iter().enumerate() {
            for &(v, a) in row {
                by_var[v].push((r, a));
            }
        }
        let mut normal = DMatrix::zeros(m, m);
        for (v, entries) in by_var.iter().enumerate() {
            let inv = 1.0 / counts[v];
            for &(p, ap) in entries {
                for &(q, aq) in entries {
                    normal[(p, q)] += ap * aq * inv;
                }
            }
        }
        let eig = eigen(normal)?;
        let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        let cutoff = top * 1e-12 * m.max(1) as f64;
        let inv = eig.eigenvalues.map(|l| if l > cutoff { 1.0 / l } else { 0.0 });
        let normal_pinv = (&eig.eigenvectors * DMatrix::from_diagonal(&inv)) * eig.eigenvectors.transpose();
        Ok(Constraints { rows, rhs, normal_pinv })
    }

    fn apply(&self, y: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|row| row.iter().map(|&(v, a)| a * y[v]).sum()))
    }

    fn max_violation(&self, y: &[f64]) -> f64 {
        (self.apply(y) - &self.rhs).amax()
    }
}

/// Solves `program` by ADMM; deterministic given the program and options.
pub fn solve(program: &SosProgram, options: &SolverOptions) -> Result<SdpSolution> {
    options.validate()?;
    program.validate()?;
    let n = program.dim;
    let nv = program.var_count;
    let layout = Layout::new(program);
    let cons = Constraints::new(program, &layout.counts)?;

    let mut c = vec![0.0; nv];
    for &(v, coeff) in &program.objective {
        c[v] += coeff / program.scale;
    }

    let mut rho = options.step;
    let mut z = DMatrix::<f64>::zeros(n, n);
    let mut u = DMatrix::<f64>::zeros(n, n);
    let mut my = DMatrix::<f64>::zeros(n, n);
    let mut y = vec![0.0; nv];
    let mut q = vec![0.0; nv];
    let mut scaled = vec![0.0; nv];
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut status = SdpStatus::MaxIterReached;
    let mut iterations = 0;

    for iter in 1..=options.max_iter {
        iterations = iter;
        // y-step
        layout.adjoint(&(&z - &u), &mut q);
        for v in 0..nv {
            q[v] = c[v] + rho * q[v];
            scaled[v] = q[v] / layout.counts[v];
        }
        let rhs = cons.apply(&scaled) - &cons.rhs * rho;
        let lambda = &cons.normal_pinv * rhs;
        y.copy_from_slice(&q);
        for (row, &l) in cons.rows.iter().zip(lambda.iter()) {
            for &(v, a) in row {
                y[v] -= a * l;
            }
        }
        for (yv, &count) in y.iter_mut().zip(&layout.counts) {
            *yv /= rho * count;
        }

        // Z-step and dual update
        layout.apply(&y, &mut my);
        let (z_next, top) = project_psd_with_top(&(&my + &u))?;
        let gap = &my - &z_next;
        u += &gap;
        let value: f64 = c.iter().zip(&y).map(|(a, b)| a * b).sum();
        let cone_gap = gap.norm();
        primal = cons.max_violation(&y) + cone_gap;
        dual = rho * (&z_next - &z).norm();
        z = z_next;

        let bound = options.tol * (1.0 + value.abs());
        if primal <= bound && dual <= bound && cone_gap <= options.tol * top.max(1.0) {
            status = SdpStatus::Optimal;
            break;
        }
        if options.adaptive && iter % 100 == 0 {
            if primal > 10.0 * dual && rho < 1e4 {
                rho = (rho * 2.0).min(1e4);
                u *= 0.5;
            } else if dual > 10.0 * primal && rho > 1e-4 {
                rho = (rho * 0.5).max(1e-4);
                u *= 2.0;
            }
        }
    }

    let value = c.iter().zip(&y).map(|(a, b)| a * b).sum();
    layout.apply(&y, &mut my);
    Ok(SdpSolution { status, value, matrix: my, y, primal_residual: primal, dual_residual: dual, iterations })
}
