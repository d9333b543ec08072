use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use super::geometry::{CellGeometry, Layout};
use super::params::{field_scale, PhysParams};
use crate::error::{QcaError, Result};

/// Where the in-plane input field reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElectrodeMode {
    /// In-plane components act only on the cells in the layout's input mask.
    #[default]
    NanoElectrode,
    /// The whole circuit is immersed in every field component.
    LargeElectrode,
}

impl FromStr for ElectrodeMode {
    type Err = QcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nano" | "nano_electrode" => Ok(ElectrodeMode::NanoElectrode),
            "large" | "large_electrode" => Ok(ElectrodeMode::LargeElectrode),
            other => Err(QcaError::InvalidParams(format!("unknown electrode mode `{other}`"))),
        }
    }
}

impl fmt::Display for ElectrodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElectrodeMode::NanoElectrode => "nano",
            ElectrodeMode::LargeElectrode => "large",
        })
    }
}

/// Applied field in V/nm. The clock `E_z` is uniform over the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSpec {
    pub ex: f64,
    pub ey: f64,
    pub ez: f64,
    pub mode: ElectrodeMode,
}

impl FieldSpec {
    /// Build from components given in multiples of `E_o`.
    pub fn from_eo(ex: f64, ey: f64, ez: f64, mode: ElectrodeMode, params: &PhysParams) -> Result<Self> {
        let eo = field_scale(params)?;
        Ok(FieldSpec { ex: ex * eo, ey: ey * eo, ez: ez * eo, mode })
    }

    /// Field seen by `cell` of `layout`.
    pub fn at_cell(&self, cell: &CellGeometry, layout: &Layout) -> Vector3<f64> {
        let in_plane = match self.mode {
            ElectrodeMode::LargeElectrode => true,
            ElectrodeMode::NanoElectrode => layout.input_mask.contains(&cell.id),
        };
        if in_plane {
            Vector3::new(self.ex, self.ey, self.ez)
        } else {
            Vector3::new(0.0, 0.0, self.ez)
        }
    }
}
