//! Point-charge electrostatics between cells.
//!
//! Each quantum cell is two point charges: the mobile charge on the dot
//! selected by its state and the neutralizing charge on the null dot.
//! Classical drivers smear the mobile charge over their three dots.

use nalgebra::Vector3;

use crate::error::{QcaError, Result};
use crate::model::{coulomb_constant, CellGeometry, CellState, ClassicalDriver, Layout, PhysParams};

const COINCIDENCE_TOL: f64 = 1e-9;

fn coulomb_sum(lhs: &[(f64, Vector3<f64>)], rhs: &[(f64, Vector3<f64>)]) -> Result<f64> {
    let kc = coulomb_constant();
    let mut energy = 0.0;
    for (q, r) in lhs {
        for (p, s) in rhs {
            if *q == 0.0 || *p == 0.0 {
                continue;
            }
            let dist = (r - s).norm();
            if dist < COINCIDENCE_TOL {
                return Err(QcaError::CoincidentCharges(dist));
            }
            energy += kc * q * p / dist;
        }
    }
    Ok(energy)
}

fn cell_charges(cell: &CellGeometry, state: CellState, params: &PhysParams) -> [(f64, Vector3<f64>); 2] {
    [
        (params.mobile_charge, cell.dot(state, params)),
        (params.neutralizing_charge, cell.dot(CellState::Null, params)),
    ]
}

fn driver_charges(driver: &ClassicalDriver, params: &PhysParams) -> [(f64, Vector3<f64>); 4] {
    let [r0, rn, r1] = driver.occupations();
    [
        (params.mobile_charge * r0, driver.dot(CellState::Zero, params)),
        (params.mobile_charge * rn, driver.dot(CellState::Null, params)),
        (params.mobile_charge * r1, driver.dot(CellState::One, params)),
        (params.neutralizing_charge, driver.dot(CellState::Null, params)),
    ]
}

/// Electrostatic energy [meV] of cell `j` in state `xj` with cell `k` in state `xk`.
pub fn pair_interaction(
    cell_j: &CellGeometry,
    xj: CellState,
    cell_k: &CellGeometry,
    xk: CellState,
    params: &PhysParams,
) -> Result<f64> {
    coulomb_sum(&cell_charges(cell_j, xj, params), &cell_charges(cell_k, xk, params))
}

/// Electrostatic energy [meV] of a cell in `state` with a classical driver.
pub fn driver_interaction(
    cell: &CellGeometry,
    state: CellState,
    driver: &ClassicalDriver,
    params: &PhysParams,
) -> Result<f64> {
    coulomb_sum(&cell_charges(cell, state, params), &driver_charges(driver, params))
}

/// Energy of each cell state due to every classical driver, indexed by
/// cell position then trit code.
pub fn driver_energies(layout: &Layout, params: &PhysParams) -> Result<Vec<[f64; 3]>> {
    layout
        .cells
        .iter()
        .map(|cell| {
            let mut e = [0.0; 3];
            for s in CellState::ALL {
                for d in &layout.drivers {
                    e[s.code()] += driver_interaction(cell, s, d, params)?;
                }
            }
            Ok(e)
        })
        .collect()
}

/// Pair energies for every unordered pair of cells and every state pair.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTable {
    cells: usize,
    /// Blocks in row-major order over `j < k`; block `[xj][xk]`.
    blocks: Vec<[[f64; 3]; 3]>,
}

impl InteractionTable {
    pub fn new(layout: &Layout, params: &PhysParams) -> Result<Self> {
        let m = layout.cells.len();
        let mut blocks = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for j in 0..m {
            for k in j + 1..m {
                let mut b = [[0.0; 3]; 3];
                for xj in CellState::ALL {
                    for xk in CellState::ALL {
                        b[xj.code()][xk.code()] =
                            pair_interaction(&layout.cells[j], xj, &layout.cells[k], xk, params)?;
                    }
                }
                blocks.push(b);
            }
        }
        Ok(InteractionTable { cells: m, blocks })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    fn block_index(&self, j: usize, k: usize) -> usize {
        debug_assert!(j < k && k < self.cells);
        // pairs before row j: sum_{i<j} (m - 1 - i)
        j * (2 * self.cells - j - 1) / 2 + (k - j - 1)
    }

    /// Energy of cell positions `j != k` in trit codes `xj`, `xk`.
    pub fn get(&self, j: usize, xj: usize, k: usize, xk: usize) -> f64 {
        if j < k {
            self.blocks[self.block_index(j, k)][xj][xk]
        } else {
            self.blocks[self.block_index(k, j)][xk][xj]
        }
    }

    /// Total interaction energy of a basis state given as trit codes.
    pub fn energy(&self, codes: &[u8]) -> f64 {
        let mut e = 0.0;
        let mut b = 0;
        for j in 0..self.cells {
            let xj = codes[j] as usize;
            for &xk in &codes[j + 1..self.cells] {
                e += self.blocks[b][xj][xk as usize];
                b += 1;
            }
        }
        e
    }
}
