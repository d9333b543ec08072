//! Ground state of the circuit Hamiltonian.
//!
//! Small problems are diagonalized densely; larger ones use a block Krylov
//! method with full reorthogonalization. Both report the two lowest
//! eigenvalues so degenerate operating points can be flagged.

mod dense;
mod lanczos;

use crate::error::{QcaError, Result};
use crate::hamiltonian::{basis_dimension, SparseSymmetricMatrix};

/// Normalized real amplitude vector over the `3^M` product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitState {
    cells: usize,
    amplitudes: Vec<f64>,
}

impl CircuitState {
    /// Normalizes `amplitudes`; `None` if the length is not `3^cells` or the
    /// vector is zero.
    pub fn new(cells: usize, mut amplitudes: Vec<f64>) -> Option<Self> {
        if basis_dimension(cells)? != amplitudes.len() {
            return None;
        }
        let n = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return None;
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Some(CircuitState { cells, amplitudes })
    }

    /// Basis state `index` with unit amplitude.
    pub fn basis(cells: usize, index: usize) -> Option<Self> {
        let dim = basis_dimension(cells)?;
        if index >= dim {
            return None;
        }
        let mut amplitudes = vec![0.0; dim];
        amplitudes[index] = 1.0;
        Some(CircuitState { cells, amplitudes })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Fix the sign so the largest-magnitude amplitude (first on ties) is positive.
fn canonical_sign(v: &mut [f64]) {
    let mut pivot = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[pivot].abs() {
            pivot = i;
        }
    }
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    /// Dense up to `dense_max_dim`, iterative above.
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverUsed {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    pub dense_max_dim: usize,
    /// Two lowest levels closer than this [meV] are reported as degenerate.
    pub gap_tol: f64,
    /// Relative residual bound `|H psi - E psi| / max(1, |E|)`.
    pub res_tol: f64,
    /// Krylov basis size before a restart.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Largest dimension for which a failed iterative solve falls back to
    /// dense diagonalization.
    pub fallback_max_dim: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: SolverMethod::Auto,
            dense_max_dim: 729,
            gap_tol: 1e-6,
            res_tol: 1e-10,
            krylov_dim: 120,
            max_restarts: 30,
            fallback_max_dim: 2187,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    /// Lowest eigenvalue `E_0` [meV].
    pub energy: f64,
    /// Second eigenvalue `E_1` [meV]; infinite for a one-dimensional problem.
    pub first_excited: f64,
    pub gap: f64,
    pub state: CircuitState,
    pub degenerate: bool,
    pub solver_used: SolverUsed,
    /// Matrix-vector products for the iterative path, 0 for dense.
    pub iterations: usize,
    /// Relative residual of the returned ground state.
    pub residual: f64,
}

fn relative_residual(h: &SparseSymmetricMatrix, energy: f64, v: &[f64]) -> f64 {
    let mut hv = vec![0.0; v.len()];
    h.matvec(v, &mut hv);
    let r: f64 = hv.iter().zip(v).map(|(a, b)| (a - energy * b).powi(2)).sum::<f64>().sqrt();
    r / energy.abs().max(1.0)
}

fn cells_for_dim(dim: usize) -> Option<usize> {
    (0..=40).find(|&m| basis_dimension(m) == Some(dim))
}

/// Two lowest eigenvalues `(E_0, E_1)` with `E_0 <= E_1`.
pub fn lowest_two(h: &SparseSymmetricMatrix, options: &SolverOptions) -> Result<(f64, f64)> {
    let r = solve(h, options)?;
    Ok((r.energy, r.first_excited))
}

/// Ground state of a symmetric matrix whose dimension is `3^M`.
pub fn ground_state(h: &SparseSymmetricMatrix, options: &SolverOptions) -> Result<GroundStateResult> {
    solve(h, options)
}

fn solve(h: &SparseSymmetricMatrix, options: &SolverOptions) -> Result<GroundStateResult> {
    let dim = h.dim();
    let cells = cells_for_dim(dim)
        .ok_or_else(|| QcaError::InvalidParams(format!("matrix dimension {dim} is not a power of 3")))?;
    let use_dense = match options.method {
        SolverMethod::Dense => true,
        SolverMethod::Iterative => false,
        SolverMethod::Auto => dim <= options.dense_max_dim,
    };

    let (pairs, used, iterations) = if use_dense {
        (dense::lowest_eigenpairs(h, 2), SolverUsed::Dense, 0)
    } else {
        let settings = lanczos::KrylovSettings {
            basis_limit: options.krylov_dim,
            max_restarts: options.max_restarts,
            res_tol: options.res_tol,
        };
        let out = lanczos::lowest_two(h, &settings);
        if out.converged {
            (out.pairs, SolverUsed::Iterative, out.matvecs)
        } else if dim <= options.fallback_max_dim && options.method == SolverMethod::Auto {
            (dense::lowest_eigenpairs(h, 2), SolverUsed::Dense, out.matvecs)
        } else {
            return Err(QcaError::NonConvergence { iterations: out.matvecs, residual: out.residual });
        }
    };

    let mut pairs = pairs.into_iter();
    let (energy, mut vector) = pairs.next().expect("at least one eigenpair");
    let first_excited = pairs.next().map_or(f64::INFINITY, |p| p.0);
    canonical_sign(&mut vector);
    let residual = relative_residual(h, energy, &vector);
    if !(residual < options.res_tol) {
        return Err(QcaError::NonConvergence { iterations, residual });
    }
    let gap = (first_excited - energy).max(0.0);
    let state = CircuitState::new(cells, vector).expect("eigenvector is non-zero");
    Ok(GroundStateResult {
        energy,
        first_excited,
        gap,
        degenerate: gap < options.gap_tol,
        state,
        solver_used: used,
        iterations,
        residual,
    })
}
