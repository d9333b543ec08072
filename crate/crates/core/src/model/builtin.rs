//! Canonical circuits.
//!
//! Transverse neighbors (displaced perpendicular to their dot axis) sit `a`
//! apart, which reproduces the closed-form kink energy exactly. Longitudinal
//! neighbors sit `2a` apart so that facing dots are separated by `a`.

use std::fmt;
use std::str::FromStr;

use super::geometry::{CellGeometry, ClassicalDriver, Layout, Role};
use super::params::PhysParams;
use crate::error::QcaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinLayout {
    /// One isolated cell at the origin.
    SingleCell,
    /// A target cell next to a fully active classical driver.
    DriverTarget,
    /// Three-cell longitudinal input segment feeding a three-cell shift register.
    InputWire,
    /// Input segment feeding a shift register of rotated cells grouped in
    /// functional pairs.
    InputRotated,
}

impl BuiltinLayout {
    pub const ALL: [BuiltinLayout; 4] = [
        BuiltinLayout::SingleCell,
        BuiltinLayout::DriverTarget,
        BuiltinLayout::InputWire,
        BuiltinLayout::InputRotated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinLayout::SingleCell => "single_cell",
            BuiltinLayout::DriverTarget => "driver_target",
            BuiltinLayout::InputWire => "input_wire",
            BuiltinLayout::InputRotated => "input_rotated",
        }
    }

    pub fn build(self, params: &PhysParams) -> Layout {
        builtin_layout(self, params)
    }
}

impl FromStr for BuiltinLayout {
    type Err = QcaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinLayout::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| QcaError::UnknownLayout(s.to_string()))
    }
}

impl fmt::Display for BuiltinLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Input segment shared by both input circuits: cells 1-3 stacked along y,
/// symmetric about the x axis. Dot 0 points along -y so that the output
/// bit of the shift register carries the sign of `E_y`.
fn input_segment(a: f64) -> Vec<CellGeometry> {
    [2.0 * a, 0.0, -2.0 * a]
        .into_iter()
        .enumerate()
        .map(|(i, y)| CellGeometry::new(i + 1, 0.0, y, 0.0, -1.0, Role::Input))
        .collect()
}

pub fn builtin_layout(name: BuiltinLayout, params: &PhysParams) -> Layout {
    let a = params.a;
    match name {
        BuiltinLayout::SingleCell => Layout {
            cells: vec![CellGeometry::new(1, 0.0, 0.0, 0.0, 1.0, Role::Input)],
            input_mask: [1].into(),
            ..Default::default()
        },
        BuiltinLayout::DriverTarget => Layout {
            cells: vec![CellGeometry::new(1, 0.0, 0.0, 0.0, 1.0, Role::Register)],
            input_mask: [1].into(),
            drivers: vec![ClassicalDriver::new(-a, 0.0, 0.0, 1.0, 1.0, 1.0)],
            ..Default::default()
        },
        BuiltinLayout::InputWire => {
            let mut cells = input_segment(a);
            cells.extend(
                (1..=3).map(|i| CellGeometry::new(i + 3, i as f64 * a, 0.0, 0.0, -1.0, Role::Register)),
            );
            Layout { cells, input_mask: [1, 2, 3].into(), ..Default::default() }
        }
        BuiltinLayout::InputRotated => {
            let mut cells = input_segment(a);
            // Two functional cells, each a transverse pair of x-oriented
            // molecules; the pairs are longitudinal neighbors.
            for (pair, x) in [1.5 * a, 3.5 * a].into_iter().enumerate() {
                let id = 4 + 2 * pair;
                cells.push(CellGeometry::new(id, x, 0.5 * a, 1.0, 0.0, Role::Register));
                cells.push(CellGeometry::new(id + 1, x, -0.5 * a, 1.0, 0.0, Role::Register));
            }
            Layout {
                cells,
                input_mask: [1, 2, 3].into(),
                functional_pairs: vec![(4, 5), (6, 7)],
                ..Default::default()
            }
        }
    }
}
