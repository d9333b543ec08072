//! Molecule constants and the unit system.
//!
//! Energies are in meV, lengths in nm and charges in multiples of the
//! elementary charge. Fields are in V/nm internally; the field scale
//! [`field_scale`] converts to and from multiples of `E_o`.

use crate::error::{QcaError, Result};

/// CODATA 2018 elementary charge [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// CODATA 2018 vacuum permittivity [F/m].
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Coulomb constant `q_e^2 / (4 pi eps0)` in meV nm.
pub fn coulomb_constant() -> f64 {
    // e / (4 pi eps0) is in V m; one electron in that potential gives eV m.
    let ev_m = ELEMENTARY_CHARGE / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY);
    ev_m * 1e9 * 1e3
}

/// Physical parameters of a three-dot molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    /// Distance between the two active dots [nm].
    pub a: f64,
    /// Height of the active dots above the null dot [nm].
    pub h: f64,
    /// Hopping energy between an active dot and the null dot [meV].
    pub gamma: f64,
    /// Affinity of the mobile charge for the null dot [meV].
    pub e_a: f64,
    /// Mobile charge in units of `q_e`.
    pub mobile_charge: f64,
    /// Fixed neutralizing charge on the null dot in units of `q_e`.
    pub neutralizing_charge: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            a: 1.0,
            h: 0.5,
            gamma: 50.0,
            e_a: 1000.0,
            mobile_charge: -1.0,
            neutralizing_charge: 1.0,
        }
    }
}

impl PhysParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.h, self.gamma, self.e_a, self.mobile_charge, self.neutralizing_charge]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(QcaError::InvalidParams("non-finite value".into()));
        }
        if self.a <= 0.0 {
            return Err(QcaError::InvalidParams(format!("a must be positive, got {}", self.a)));
        }
        if self.h <= 0.0 {
            return Err(QcaError::InvalidParams(format!("h must be positive, got {}", self.h)));
        }
        if self.gamma < 0.0 {
            return Err(QcaError::InvalidParams(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Kink energy `k_c (1 - 1/sqrt 2) / a` [meV]: the electrostatic cost of a
/// target cell aligning with a neighbor one `a` away instead of anti-aligning.
pub fn kink_energy(params: &PhysParams) -> Result<f64> {
    params.validate()?;
    Ok(coulomb_constant() * (1.0 - std::f64::consts::FRAC_1_SQRT_2) / params.a)
}

/// Field scale `E_o = E_k / (q_e a)` [V/nm].
pub fn field_scale(params: &PhysParams) -> Result<f64> {
    // meV / nm per unit charge -> mV/nm -> V/nm
    Ok(kink_energy(params)? / params.a * 1e-3)
}

/// Unit in which field values are expressed at the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldUnit {
    /// Multiples of the field scale `E_o`.
    #[default]
    Eo,
    VoltsPerNm,
}

impl FieldUnit {
    /// Convert a value in this unit to V/nm.
    pub fn to_v_per_nm(self, value: f64, params: &PhysParams) -> Result<f64> {
        match self {
            FieldUnit::Eo => Ok(value * field_scale(params)?),
            FieldUnit::VoltsPerNm => Ok(value),
        }
    }

    /// Convert a value in V/nm to this unit.
    pub fn from_v_per_nm(self, value: f64, params: &PhysParams) -> Result<f64> {
        match self {
            FieldUnit::Eo => Ok(value / field_scale(params)?),
            FieldUnit::VoltsPerNm => Ok(value),
        }
    }
}
