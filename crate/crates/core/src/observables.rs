//! Per-cell polarization and activation of a circuit state.

use crate::error::{QcaError, Result};
use crate::hamiltonian::TritCounter;
use crate::model::{BuiltinLayout, ElectrodeMode, FieldSpec, Layout, PhysParams};
use crate::solver::{CircuitState, GroundStateResult, SolverOptions, SolverUsed};

/// Polarization `P = rho_1 - rho_0` and activation `A = 1 - rho_N` of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellObservables {
    pub p: f64,
    pub a: f64,
    /// `(rho_0, rho_N, rho_1)`.
    pub occupations: [f64; 3],
}

impl CellObservables {
    pub fn from_occupations(rho: [f64; 3]) -> Self {
        CellObservables { p: rho[2] - rho[0], a: 1.0 - rho[1], occupations: rho }
    }
}

/// Occupations of every cell, indexed by cell position.
pub fn all_occupations(state: &CircuitState) -> Vec<[f64; 3]> {
    let m = state.cells();
    let mut rho = vec![[0.0; 3]; m];
    let mut counter = TritCounter::new(m);
    for amp in state.amplitudes() {
        let w = amp * amp;
        for (r, &c) in rho.iter_mut().zip(counter.codes()) {
            r[c as usize] += w;
        }
        counter.advance();
    }
    rho
}

/// Observables of the cell at position `k`.
pub fn cell_observables_at(state: &CircuitState, k: usize) -> CellObservables {
    let mut rho = [0.0; 3];
    let stride = 3usize.pow(k as u32);
    for (x, amp) in state.amplitudes().iter().enumerate() {
        rho[(x / stride) % 3] += amp * amp;
    }
    CellObservables::from_occupations(rho)
}

/// Observables of cell `id` of `layout`.
pub fn cell_observables(state: &CircuitState, layout: &Layout, id: usize) -> Result<CellObservables> {
    let k = layout.index_of(id)?;
    Ok(cell_observables_at(state, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Dense,
    Iterative,
    Icha,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Dense => "dense",
            SolverKind::Iterative => "iterative",
            SolverKind::Icha => "icha",
        }
    }
}

impl From<SolverUsed> for SolverKind {
    fn from(s: SolverUsed) -> Self {
        match s {
            SolverUsed::Dense => SolverKind::Dense,
            SolverUsed::Iterative => SolverKind::Iterative,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitReport {
    pub cell_ids: Vec<usize>,
    pub cells: Vec<CellObservables>,
    /// `((k, k'), (P_k - P_k') / 2)` for every declared functional pair.
    pub functional: Vec<((usize, usize), f64)>,
    /// Ground energy, or the mean-field energy for the mean-field solver [meV].
    pub energy: f64,
    /// `E_1 - E_0` [meV]; NaN when the solver does not provide it.
    pub gap: f64,
    pub degenerate: bool,
    pub field: FieldSpec,
    pub solver: SolverKind,
    pub iterations: usize,
}

impl CircuitReport {
    /// Build a report from per-cell occupations (cell order of `layout`).
    pub fn from_occupations(
        layout: &Layout,
        occupations: &[[f64; 3]],
        field: FieldSpec,
        energy: f64,
        gap: f64,
        degenerate: bool,
        solver: SolverKind,
        iterations: usize,
    ) -> Result<Self> {
        let cells: Vec<CellObservables> =
            occupations.iter().map(|&r| CellObservables::from_occupations(r)).collect();
        let mut functional = Vec::with_capacity(layout.functional_pairs.len());
        for &(j, k) in &layout.functional_pairs {
            let pj = cells[layout.index_of(j)?].p;
            let pk = cells[layout.index_of(k)?].p;
            functional.push(((j, k), 0.5 * (pj - pk)));
        }
        Ok(CircuitReport {
            cell_ids: layout.ids(),
            cells,
            functional,
            energy,
            gap,
            degenerate,
            field,
            solver,
            iterations,
        })
    }

    pub fn from_ground_state(layout: &Layout, field: FieldSpec, gs: &GroundStateResult) -> Result<Self> {
        Self::from_occupations(
            layout,
            &all_occupations(&gs.state),
            field,
            gs.energy,
            gs.gap,
            gs.degenerate,
            gs.solver_used.into(),
            gs.iterations,
        )
    }

    pub fn cell(&self, id: usize) -> Result<&CellObservables> {
        self.cell_ids
            .iter()
            .position(|&c| c == id)
            .map(|k| &self.cells[k])
            .ok_or(QcaError::UnknownCell(id))
    }

    pub fn p(&self, id: usize) -> Result<f64> {
        Ok(self.cell(id)?.p)
    }
}

/// `(P_k - P_k') / 2` for a declared functional pair.
pub fn functional_polarization(report: &CircuitReport, pair: (usize, usize)) -> Result<f64> {
    report
        .functional
        .iter()
        .find(|(p, _)| *p == pair)
        .map(|(_, v)| *v)
        .ok_or(QcaError::UndeclaredPair(pair.0, pair.1))
}

/// Ground-state response of an isolated cell to `E_y`, `E_z` (multiples of `E_o`).
pub fn single_cell_response(ey: f64, ez: f64, params: &PhysParams) -> Result<CellObservables> {
    let circuit = crate::circuit::Circuit::new(BuiltinLayout::SingleCell.build(params), *params)?;
    let field = FieldSpec::from_eo(0.0, ey, ez, ElectrodeMode::NanoElectrode, params)?;
    let report = circuit.solve(&field, &SolverOptions::default())?;
    Ok(report.cells[0])
}

/// Ground-state response of a target cell next to a fully active classical
/// driver with polarization `p_drv`, under clock `E_z` (multiples of `E_o`).
pub fn driver_target_response(p_drv: f64, ez: f64, params: &PhysParams) -> Result<CellObservables> {
    if !(p_drv.abs() <= 1.0) {
        return Err(QcaError::InvalidParams(format!("driver polarization {p_drv} outside [-1, 1]")));
    }
    let circuit = crate::circuit::Circuit::new(BuiltinLayout::DriverTarget.build(params), *params)?
        .with_driver_polarization(p_drv)?;
    let field = FieldSpec::from_eo(0.0, 0.0, ez, ElectrodeMode::NanoElectrode, params)?;
    let report = circuit.solve(&field, &SolverOptions::default())?;
    Ok(report.cells[0])
}
