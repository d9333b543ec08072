//! Intercellular Hartree approximation: each cell sees the expectation-value
//! charge of all other cells and the circuit state is a product of
//! single-cell states, iterated to self-consistency.

use nalgebra::Matrix3;

use crate::circuit::Circuit;
use crate::error::{QcaError, Result};
use crate::hamiltonian::{driver_energies, local_diagonals};
use crate::model::{FieldSpec, Layout, PhysParams};
use crate::observables::{CircuitReport, SolverKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IchaOptions {
    /// Weight of the fresh single-cell solution in each update.
    pub damping: f64,
    /// Fixed-point tolerance on `max_k |dP_k| + |dA_k|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IchaOptions {
    fn default() -> Self {
        IchaOptions { damping: 0.5, tol: 1e-10, max_iter: 10_000 }
    }
}

/// Self-consistent product state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldState {
    /// `(rho_0, rho_N, rho_1)` per cell, in layout order.
    pub occupations: Vec<[f64; 3]>,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IchaOutcome {
    pub state: MeanFieldState,
    pub report: CircuitReport,
}

/// Cold start: every cell in the null state.
pub fn null_start(cells: usize) -> Vec<[f64; 3]> {
    vec![[0.0, 1.0, 0.0]; cells]
}

fn cell_ground(diag: [f64; 3], gamma: f64) -> [f64; 3] {
    let g = -gamma;
    let h = Matrix3::new(diag[0], g, 0.0, g, diag[1], g, 0.0, g, diag[2]);
    let eig = h.symmetric_eigen();
    let k = eig.eigenvalues.imin();
    let v = eig.eigenvectors.column(k);
    [v[0] * v[0], v[1] * v[1], v[2] * v[2]]
}

fn pa(rho: &[f64; 3]) -> (f64, f64) {
    (rho[2] - rho[0], 1.0 - rho[1])
}

struct MeanField<'a> {
    circuit: &'a Circuit,
    /// Free single-cell diagonal plus driver energies.
    base: Vec<[f64; 3]>,
}

impl MeanField<'_> {
    fn effective_diag(&self, k: usize, rho: &[[f64; 3]]) -> [f64; 3] {
        let table = self.circuit.table();
        let mut d = self.base[k];
        for (j, rj) in rho.iter().enumerate() {
            if j == k {
                continue;
            }
            for (x, dx) in d.iter_mut().enumerate() {
                for (y, ry) in rj.iter().enumerate() {
                    if *ry != 0.0 {
                        *dx += ry * table.get(k, x, j, y);
                    }
                }
            }
        }
        d
    }

    fn solve_cell(&self, k: usize, rho: &[[f64; 3]]) -> [f64; 3] {
        cell_ground(self.effective_diag(k, rho), self.circuit.params().gamma)
    }

    /// Undamped re-solve of every cell against `rho`, with the fixed-point residual.
    fn reevaluate(&self, rho: &[[f64; 3]]) -> (Vec<[f64; 3]>, f64) {
        let fresh: Vec<[f64; 3]> = (0..rho.len()).map(|k| self.solve_cell(k, rho)).collect();
        let residual = fresh
            .iter()
            .zip(rho)
            .map(|(f, r)| {
                let (pf, af) = pa(f);
                let (pr, ar) = pa(r);
                (pf - pr).abs() + (af - ar).abs()
            })
            .fold(0.0, f64::max);
        (fresh, residual)
    }

    /// Expectation value of the circuit Hamiltonian in the product state.
    fn energy(&self, rho: &[[f64; 3]]) -> f64 {
        let gamma = self.circuit.params().gamma;
        let table = self.circuit.table();
        let mut e = 0.0;
        for (k, r) in rho.iter().enumerate() {
            let b = self.base[k];
            e += r[0] * b[0] + r[1] * b[1] + r[2] * b[2];
            // <psi|-gamma(|0><N| + |N><1| + h.c.)|psi> with non-negative amplitudes
            e -= 2.0 * gamma * ((r[0] * r[1]).sqrt() + (r[1] * r[2]).sqrt());
        }
        for k in 0..rho.len() {
            for j in 0..k {
                for x in 0..3 {
                    for y in 0..3 {
                        e += rho[k][x] * rho[j][y] * table.get(k, x, j, y);
                    }
                }
            }
        }
        e
    }
}

/// Self-consistent mean-field solution of `circuit` under `field`.
///
/// `initial` seeds the occupations (defaults to all-null). Cells are updated
/// in layout order, each one immediately visible to the next.
pub fn icha_solve_circuit(
    circuit: &Circuit,
    field: &FieldSpec,
    options: &IchaOptions,
    initial: Option<&[[f64; 3]]>,
) -> Result<IchaOutcome> {
    if !(options.damping > 0.0 && options.damping <= 1.0) {
        return Err(QcaError::InvalidParams(format!("damping {} outside (0, 1]", options.damping)));
    }
    if !(options.tol > 0.0) {
        return Err(QcaError::InvalidParams(format!("tolerance {} must be positive", options.tol)));
    }
    let layout = circuit.layout();
    let params = circuit.params();
    let m = layout.len();
    let mut base = local_diagonals(layout, field, params);
    for (b, d) in base.iter_mut().zip(driver_energies(layout, params)?) {
        for s in 0..3 {
            b[s] += d[s];
        }
    }
    let mf = MeanField { circuit, base };

    let mut rho = match initial {
        Some(init) if init.len() == m => init.to_vec(),
        Some(init) => {
            return Err(QcaError::InvalidParams(format!(
                "initial occupations for {} cells, layout has {m}",
                init.len()
            )))
        }
        None => null_start(m),
    };
    let eta = options.damping;
    let mut trace = Vec::new();
    let mut residual = f64::INFINITY;
    for it in 1..=options.max_iter {
        for k in 0..m {
            let fresh = mf.solve_cell(k, &rho);
            for s in 0..3 {
                rho[k][s] = (1.0 - eta) * rho[k][s] + eta * fresh[s];
            }
        }
        trace.push(rho.iter().map(|r| pa(r).0).collect());
        let (fresh, r) = mf.reevaluate(&rho);
        residual = r;
        if residual < options.tol {
            let energy = mf.energy(&fresh);
            let report =
                CircuitReport::from_occupations(layout, &fresh, *field, energy, f64::NAN, false, SolverKind::Icha, it)?;
            return Ok(IchaOutcome {
                state: MeanFieldState { occupations: rho, iterations: it, residual },
                report,
            });
        }
    }
    Err(QcaError::IchaNonConvergence { iterations: options.max_iter, residual, trace })
}

pub fn icha_solve(
    layout: &Layout,
    field: &FieldSpec,
    params: &PhysParams,
    options: &IchaOptions,
) -> Result<IchaOutcome> {
    let circuit = Circuit::new(layout.clone(), *params)?;
    icha_solve_circuit(&circuit, field, options, None)
}

/// Forward and backward warm-started passes over the same field sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisReport {
    pub forward: Vec<Vec<f64>>,
    pub backward: Vec<Vec<f64>>,
    /// Points where the two passes differ by more than the threshold.
    pub discrepancies: Vec<usize>,
}

/// Run the field sequence forward and backward, each point seeded with the
/// previous point's converged occupations, and flag points whose cell
/// polarizations differ between the passes by more than `threshold`.
pub fn icha_hysteresis_check(
    circuit: &Circuit,
    fields: &[FieldSpec],
    options: &IchaOptions,
    threshold: f64,
) -> Result<HysteresisReport> {
    let pass = |order: &mut dyn Iterator<Item = usize>| -> Result<Vec<Vec<f64>>> {
        let mut out = vec![Vec::new(); fields.len()];
        let mut seed: Option<Vec<[f64; 3]>> = None;
        for i in order {
            let o = icha_solve_circuit(circuit, &fields[i], options, seed.as_deref())?;
            out[i] = o.report.cells.iter().map(|c| c.p).collect();
            seed = Some(o.state.occupations);
        }
        Ok(out)
    };
    let forward = pass(&mut (0..fields.len()))?;
    let backward = pass(&mut (0..fields.len()).rev())?;
    let discrepancies = forward
        .iter()
        .zip(&backward)
        .enumerate()
        .filter(|(_, (f, b))| f.iter().zip(b.iter()).any(|(x, y)| (x - y).abs() > threshold))
        .map(|(i, _)| i)
        .collect();
    Ok(HysteresisReport { forward, backward, discrepancies })
}
