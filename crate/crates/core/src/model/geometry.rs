//! Cell geometry, circuit layouts and field couplings.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{Vector2, Vector3};

use super::params::PhysParams;
use crate::error::{QcaError, Result};

/// Localized state of the mobile charge on a three-dot cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellState {
    Zero,
    Null,
    One,
}

impl CellState {
    /// All states in basis order `|0>, |N>, |1>`.
    pub const ALL: [CellState; 3] = [CellState::Zero, CellState::Null, CellState::One];

    /// Trit code used by the product basis: 0 -> 0, N -> 1, 1 -> 2.
    pub fn code(self) -> usize {
        match self {
            CellState::Zero => 0,
            CellState::Null => 1,
            CellState::One => 2,
        }
    }

    pub fn from_code(code: usize) -> Option<CellState> {
        match code {
            0 => Some(CellState::Zero),
            1 => Some(CellState::Null),
            2 => Some(CellState::One),
            _ => None,
        }
    }

    /// The state with the two active dots exchanged.
    pub fn swapped(self) -> CellState {
        match self {
            CellState::Zero => CellState::One,
            CellState::Null => CellState::Null,
            CellState::One => CellState::Zero,
        }
    }
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CellState::Zero => "0",
            CellState::Null => "N",
            CellState::One => "1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    Register,
    Driver,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Register => "register",
            Role::Driver => "driver",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "input" => Some(Role::Input),
            "register" => Some(Role::Register),
            "driver" => Some(Role::Driver),
            _ => None,
        }
    }
}

/// A quantum cell of the circuit.
///
/// `center` is the position of the null dot on the `z = 0` surface and
/// `orientation` is the in-plane unit vector pointing from dot 1 to dot 0.
/// The active dots sit `a/2` either side of the center at height `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    pub id: usize,
    pub center: Vector2<f64>,
    pub orientation: Vector2<f64>,
    pub role: Role,
}

impl CellGeometry {
    pub fn new(id: usize, x: f64, y: f64, ux: f64, uy: f64, role: Role) -> Self {
        CellGeometry {
            id,
            center: Vector2::new(x, y),
            orientation: Vector2::new(ux, uy),
            role,
        }
    }

    /// Position of the dot holding the mobile charge in `state`.
    pub fn dot(&self, state: CellState, params: &PhysParams) -> Vector3<f64> {
        dot_position(&self.center, &self.orientation, state, params)
    }

    /// Field-driven detuning `Delta_E = q_m E . a_vec` [meV] for a field in V/nm.
    pub fn detuning(&self, field: &Vector3<f64>, params: &PhysParams) -> f64 {
        detuning_from_field(self, field, params)
    }
}

pub(crate) fn dot_position(
    center: &Vector2<f64>,
    orientation: &Vector2<f64>,
    state: CellState,
    params: &PhysParams,
) -> Vector3<f64> {
    let half = 0.5 * params.a;
    match state {
        CellState::Zero => Vector3::new(
            center.x + half * orientation.x,
            center.y + half * orientation.y,
            params.h,
        ),
        CellState::One => Vector3::new(
            center.x - half * orientation.x,
            center.y - half * orientation.y,
            params.h,
        ),
        CellState::Null => Vector3::new(center.x, center.y, 0.0),
    }
}

/// Detuning `Delta_E = <1|H|1> - <0|H|0>` produced by an applied field
/// (V/nm) at the cell. Only the in-plane components contribute.
pub fn detuning_from_field(cell: &CellGeometry, field: &Vector3<f64>, params: &PhysParams) -> f64 {
    let a_vec = cell.orientation * params.a;
    // q [e] * E [V/nm] * length [nm] = eV
    1e3 * params.mobile_charge * (field.x * a_vec.x + field.y * a_vec.y)
}

/// Clock bias `V_c` [meV] of the null state relative to the active states.
pub fn clock_bias(_cell: &CellGeometry, field: &Vector3<f64>, params: &PhysParams) -> f64 {
    1e3 * params.mobile_charge * field.z * params.h
}

/// A neighbor with a frozen charge distribution.
///
/// The mobile charge is spread over the three dots with weights
/// `rho_0 = (A - P)/2`, `rho_N = 1 - A`, `rho_1 = (A + P)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalDriver {
    pub center: Vector2<f64>,
    pub orientation: Vector2<f64>,
    pub polarization: f64,
    pub activation: f64,
}

impl ClassicalDriver {
    pub fn new(x: f64, y: f64, ux: f64, uy: f64, polarization: f64, activation: f64) -> Self {
        ClassicalDriver {
            center: Vector2::new(x, y),
            orientation: Vector2::new(ux, uy),
            polarization,
            activation,
        }
    }

    /// Occupations `(rho_0, rho_N, rho_1)`.
    pub fn occupations(&self) -> [f64; 3] {
        let (p, a) = (self.polarization, self.activation);
        [0.5 * (a - p), 1.0 - a, 0.5 * (a + p)]
    }

    pub fn dot(&self, state: CellState, params: &PhysParams) -> Vector3<f64> {
        dot_position(&self.center, &self.orientation, state, params)
    }
}

/// Limits applied when validating a layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutLimits {
    pub max_cells: usize,
    /// Minimum allowed dot separation between distinct cells, in units of `a`.
    pub min_separation: f64,
}

impl Default for LayoutLimits {
    fn default() -> Self {
        LayoutLimits { max_cells: 8, min_separation: 0.5 }
    }
}

/// A circuit: quantum cells, the cells touched by the input electrodes,
/// functional cell pairs and any classical drivers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layout {
    pub cells: Vec<CellGeometry>,
    pub input_mask: BTreeSet<usize>,
    pub functional_pairs: Vec<(usize, usize)>,
    pub drivers: Vec<ClassicalDriver>,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Position of cell `id` in the ordered cell list.
    pub fn index_of(&self, id: usize) -> Result<usize> {
        self.cells
            .iter()
            .position(|c| c.id == id)
            .ok_or(QcaError::UnknownCell(id))
    }

    pub fn ids(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.id).collect()
    }

    /// Check ids, orientations, references and dot separations.
    pub fn validate(&self, params: &PhysParams, limits: &LayoutLimits) -> Result<()> {
        params.validate()?;
        if self.cells.is_empty() {
            return Err(QcaError::Validation("layout has no cells".into()));
        }
        if self.cells.len() > limits.max_cells {
            return Err(QcaError::Validation(format!(
                "{} cells exceed the limit of {}",
                self.cells.len(),
                limits.max_cells
            )));
        }
        let mut seen = BTreeSet::new();
        for c in &self.cells {
            if !seen.insert(c.id) {
                return Err(QcaError::Validation(format!("duplicate cell id {}", c.id)));
            }
            if !(c.center.x.is_finite() && c.center.y.is_finite()) {
                return Err(QcaError::Validation(format!("cell {}: non-finite position", c.id)));
            }
            let norm = c.orientation.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
                return Err(QcaError::Validation(format!(
                    "cell {}: orientation ({}, {}) is not a unit vector (|u| = {norm})",
                    c.id, c.orientation.x, c.orientation.y
                )));
            }
        }
        for id in &self.input_mask {
            if !seen.contains(id) {
                return Err(QcaError::Validation(format!("input mask names unknown cell {id}")));
            }
        }
        for &(j, k) in &self.functional_pairs {
            for id in [j, k] {
                if !seen.contains(&id) {
                    return Err(QcaError::Validation(format!(
                        "functional pair ({j}, {k}) names unknown cell {id}"
                    )));
                }
            }
            if j == k {
                return Err(QcaError::Validation(format!("functional pair ({j}, {k}) repeats a cell")));
            }
        }
        for (i, d) in self.drivers.iter().enumerate() {
            let norm = d.orientation.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
                return Err(QcaError::Validation(format!(
                    "driver {i}: orientation is not a unit vector (|u| = {norm})"
                )));
            }
            let (p, a) = (d.polarization, d.activation);
            if !(0.0..=1.0).contains(&a) || p.abs() > a + 1e-12 || !p.is_finite() {
                return Err(QcaError::Validation(format!(
                    "driver {i}: need |P| <= A <= 1, got P = {p}, A = {a}"
                )));
            }
        }

        // Every dot of every cell/driver against every dot of every other one.
        let d_min = limits.min_separation * params.a;
        let mut sites: Vec<(String, [Vector3<f64>; 3])> = self
            .cells
            .iter()
            .map(|c| (format!("cell {}", c.id), CellState::ALL.map(|s| c.dot(s, params))))
            .collect();
        sites.extend(
            self.drivers
                .iter()
                .enumerate()
                .map(|(i, d)| (format!("driver {i}"), CellState::ALL.map(|s| d.dot(s, params)))),
        );
        for (i, (name_i, dots_i)) in sites.iter().enumerate() {
            for (name_j, dots_j) in &sites[i + 1..] {
                for p in dots_i {
                    for q in dots_j {
                        let dist = (p - q).norm();
                        if !(dist >= d_min) {
                            return Err(QcaError::Validation(format!(
                                "dots of {name_i} and {name_j} are {dist:.6} nm apart \
                                 (minimum {d_min} nm)"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Cell-index permutation and per-cell label flips induced by the
    /// mirror `y -> -y`, or `None` if the layout is not mirror symmetric.
    ///
    /// Entry `k` is `(sigma(k), swapped)`: the mirror image of cell `k` is cell
    /// `sigma(k)`, and `swapped` is true when dot 0 of `k` maps onto dot 1 of
    /// `sigma(k)`. Then `P_k(E_x, E_y) = s P_sigma(k)(E_x, -E_y)` with
    /// `s = -1` when swapped.
    pub fn y_mirror(&self) -> Option<Vec<(usize, bool)>> {
        const TOL: f64 = 1e-9;
        let reflect = |v: &Vector2<f64>| Vector2::new(v.x, -v.y);
        let mut map = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let rc = reflect(&c.center);
            let ru = reflect(&c.orientation);
            let (j, other) = self
                .cells
                .iter()
                .enumerate()
                .find(|(_, o)| (o.center - rc).norm() < TOL)?;
            if (other.orientation - ru).norm() < TOL {
                map.push((j, false));
            } else if (other.orientation + ru).norm() < TOL {
                map.push((j, true));
            } else {
                return None;
            }
        }
        // Drivers must map onto drivers with the mirrored charge distribution.
        for d in &self.drivers {
            let rc = reflect(&d.center);
            let ru = reflect(&d.orientation);
            let ok = self.drivers.iter().any(|o| {
                if (o.center - rc).norm() >= TOL || (o.activation - d.activation).abs() >= TOL {
                    return false;
                }
                ((o.orientation - ru).norm() < TOL && (o.polarization - d.polarization).abs() < TOL)
                    || ((o.orientation + ru).norm() < TOL
                        && (o.polarization + d.polarization).abs() < TOL)
            });
            if !ok {
                return None;
            }
        }
        Some(map)
    }
}
