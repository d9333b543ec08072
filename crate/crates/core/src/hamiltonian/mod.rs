//! Single-cell and circuit Hamiltonians.

mod basis;
mod interaction;
mod matrix;

pub use basis::{basis_dimension, TritIndex};
pub(crate) use basis::TritCounter;
pub use interaction::{driver_energies, driver_interaction, pair_interaction, InteractionTable};
pub use matrix::SparseSymmetricMatrix;

use nalgebra::Matrix3;

use crate::error::{QcaError, Result};
use crate::model::{clock_bias, detuning_from_field, FieldSpec, Layout, PhysParams};

/// Three-state Hamiltonian in the basis `|0>, |N>, |1>`: tunneling `-gamma`
/// between each active state and the null state only, detuning `delta`
/// split symmetrically between the active states, and the null state
/// offset by `v_c - E_a`.
pub fn single_cell_h(delta: f64, v_c: f64, params: &PhysParams) -> Matrix3<f64> {
    let g = -params.gamma;
    Matrix3::new(
        -0.5 * delta, g, 0.0,
        g, v_c - params.e_a, g,
        0.0, g, 0.5 * delta,
    )
}

/// Diagonal of every cell's free Hamiltonian under `field`, indexed by cell
/// position then trit code.
pub fn local_diagonals(layout: &Layout, field: &FieldSpec, params: &PhysParams) -> Vec<[f64; 3]> {
    layout
        .cells
        .iter()
        .map(|cell| {
            let e = field.at_cell(cell, layout);
            let delta = detuning_from_field(cell, &e, params);
            let v_c = clock_bias(cell, &e, params);
            [-0.5 * delta, v_c - params.e_a, 0.5 * delta]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Largest Hilbert-space dimension that will be assembled.
    pub max_dim: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { max_dim: 59_049 }
    }
}

/// Assemble the circuit Hamiltonian in the product basis.
pub fn assemble(layout: &Layout, field: &FieldSpec, params: &PhysParams) -> Result<SparseSymmetricMatrix> {
    let table = InteractionTable::new(layout, params)?;
    assemble_with_table(layout, &table, field, params, &AssemblyOptions::default())
}

/// Assemble with a precomputed interaction table for `layout`.
pub fn assemble_with_table(
    layout: &Layout,
    table: &InteractionTable,
    field: &FieldSpec,
    params: &PhysParams,
    options: &AssemblyOptions,
) -> Result<SparseSymmetricMatrix> {
    let m = layout.cells.len();
    assert_eq!(table.cells(), m, "interaction table built for a different layout");
    let dim = basis_dimension(m)
        .filter(|&d| d <= options.max_dim)
        .ok_or(QcaError::DimensionOverflow { cells: m, limit: options.max_dim })?;

    let mut local = local_diagonals(layout, field, params);
    for (l, d) in local.iter_mut().zip(driver_energies(layout, params)?) {
        for s in 0..3 {
            l[s] += d[s];
        }
    }

    let hop = -params.gamma;
    let strides: Vec<usize> = (0..m).map(|k| 3usize.pow(k as u32)).collect();
    let mut diagonal = Vec::with_capacity(dim);
    let mut upper = Vec::with_capacity(2 * m * dim / 3);
    let mut counter = TritCounter::new(m);
    for x in 0..dim {
        let codes = counter.codes();
        let mut e = table.energy(codes);
        for (k, &c) in codes.iter().enumerate() {
            e += local[k][c as usize];
        }
        diagonal.push(e);
        // 0 -> N and N -> 1 both raise the trit code by one.
        for (k, &c) in codes.iter().enumerate() {
            if c < 2 {
                upper.push((x, x + strides[k], hop));
            }
        }
        counter.advance();
    }
    Ok(SparseSymmetricMatrix { diagonal, upper })
}
