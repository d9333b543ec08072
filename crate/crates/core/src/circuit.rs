//! A validated layout bound to its molecule parameters and interaction table.

use crate::error::{QcaError, Result};
use crate::hamiltonian::{assemble_with_table, AssemblyOptions, InteractionTable, SparseSymmetricMatrix};
use crate::model::{FieldSpec, Layout, LayoutLimits, PhysParams};
use crate::observables::CircuitReport;
use crate::solver::{ground_state, GroundStateResult, SolverOptions};

/// Immutable after construction; share freely across sweep workers.
#[derive(Debug, Clone)]
pub struct Circuit {
    layout: Layout,
    params: PhysParams,
    table: InteractionTable,
    assembly: AssemblyOptions,
}

impl Circuit {
    pub fn new(layout: Layout, params: PhysParams) -> Result<Self> {
        Self::with_limits(layout, params, &LayoutLimits::default())
    }

    pub fn with_limits(layout: Layout, params: PhysParams, limits: &LayoutLimits) -> Result<Self> {
        layout.validate(&params, limits)?;
        let table = InteractionTable::new(&layout, &params)?;
        Ok(Circuit { layout, params, table, assembly: AssemblyOptions::default() })
    }

    pub fn with_assembly_options(mut self, assembly: AssemblyOptions) -> Self {
        self.assembly = assembly;
        self
    }

    /// Copy with every classical driver set to polarization `p`.
    pub fn with_driver_polarization(&self, p: f64) -> Result<Self> {
        if self.layout.drivers.is_empty() {
            return Err(QcaError::Validation("layout has no classical drivers".into()));
        }
        let mut out = self.clone();
        for d in &mut out.layout.drivers {
            d.polarization = p;
        }
        out.layout.validate(&out.params, &LayoutLimits { max_cells: usize::MAX, min_separation: 0.0 })?;
        Ok(out)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn table(&self) -> &InteractionTable {
        &self.table
    }

    pub fn hamiltonian(&self, field: &FieldSpec) -> Result<SparseSymmetricMatrix> {
        assemble_with_table(&self.layout, &self.table, field, &self.params, &self.assembly)
    }

    pub fn ground_state(&self, field: &FieldSpec, options: &SolverOptions) -> Result<GroundStateResult> {
        ground_state(&self.hamiltonian(field)?, options)
    }

    /// Exact ground state reduced to a report.
    pub fn solve(&self, field: &FieldSpec, options: &SolverOptions) -> Result<CircuitReport> {
        let gs = self.ground_state(field, options)?;
        CircuitReport::from_ground_state(&self.layout, *field, &gs)
    }
}
