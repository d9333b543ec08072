//! JSON layout documents.
//!
//! ```json
//! {
//!   "params": {"a_nm": 1.0, "h_nm": 0.5, "gamma_meV": 50.0, "Ea_meV": 1000.0},
//!   "cells": [{"id": 1, "x_nm": 0.0, "y_nm": 0.0, "ux": 0.0, "uy": 1.0, "role": "input"}],
//!   "input_mask": [1],
//!   "functional_pairs": [],
//!   "drivers": [{"x_nm": -1.0, "y_nm": 0.0, "ux": 0.0, "uy": 1.0, "P": 1.0, "A": 1.0}]
//! }
//! ```
//!
//! Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::{CellGeometry, ClassicalDriver, Layout, Role};
use super::params::PhysParams;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRecord {
    a_nm: f64,
    h_nm: f64,
    #[serde(rename = "gamma_meV")]
    gamma_mev: f64,
    #[serde(rename = "Ea_meV")]
    ea_mev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RoleRecord {
    Input,
    Register,
    Driver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellRecord {
    id: usize,
    x_nm: f64,
    y_nm: f64,
    ux: f64,
    uy: f64,
    role: RoleRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriverRecord {
    x_nm: f64,
    y_nm: f64,
    ux: f64,
    uy: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "A")]
    a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutRecord {
    params: ParamsRecord,
    cells: Vec<CellRecord>,
    #[serde(default)]
    input_mask: Vec<usize>,
    #[serde(default)]
    functional_pairs: Vec<[usize; 2]>,
    #[serde(default)]
    drivers: Vec<DriverRecord>,
}

/// A layout together with the molecule parameters it was written for.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutDocument {
    pub params: PhysParams,
    pub layout: Layout,
}

fn with_path(e: std::io::Error, path: &Path) -> std::io::Error {
    std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

impl LayoutDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let rec: LayoutRecord = serde_json::from_str(text)?;
        let params = PhysParams {
            a: rec.params.a_nm,
            h: rec.params.h_nm,
            gamma: rec.params.gamma_mev,
            e_a: rec.params.ea_mev,
            ..PhysParams::default()
        };
        let cells = rec
            .cells
            .iter()
            .map(|c| {
                let role = match c.role {
                    RoleRecord::Input => Role::Input,
                    RoleRecord::Register => Role::Register,
                    RoleRecord::Driver => Role::Driver,
                };
                CellGeometry::new(c.id, c.x_nm, c.y_nm, c.ux, c.uy, role)
            })
            .collect();
        let drivers = rec
            .drivers
            .iter()
            .map(|d| ClassicalDriver::new(d.x_nm, d.y_nm, d.ux, d.uy, d.p, d.a))
            .collect();
        let layout = Layout {
            cells,
            input_mask: rec.input_mask.into_iter().collect(),
            functional_pairs: rec.functional_pairs.into_iter().map(|[j, k]| (j, k)).collect(),
            drivers,
        };
        Ok(LayoutDocument { params, layout })
    }

    pub fn to_json(&self) -> String {
        let rec = LayoutRecord {
            params: ParamsRecord {
                a_nm: self.params.a,
                h_nm: self.params.h,
                gamma_mev: self.params.gamma,
                ea_mev: self.params.e_a,
            },
            cells: self
                .layout
                .cells
                .iter()
                .map(|c| CellRecord {
                    id: c.id,
                    x_nm: c.center.x,
                    y_nm: c.center.y,
                    ux: c.orientation.x,
                    uy: c.orientation.y,
                    role: match c.role {
                        Role::Input => RoleRecord::Input,
                        Role::Register => RoleRecord::Register,
                        Role::Driver => RoleRecord::Driver,
                    },
                })
                .collect(),
            input_mask: self.layout.input_mask.iter().copied().collect(),
            functional_pairs: self.layout.functional_pairs.iter().map(|&(j, k)| [j, k]).collect(),
            drivers: self
                .layout
                .drivers
                .iter()
                .map(|d| DriverRecord {
                    x_nm: d.center.x,
                    y_nm: d.center.y,
                    ux: d.orientation.x,
                    uy: d.orientation.y,
                    p: d.polarization,
                    a: d.activation,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&rec).expect("layout records always serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| with_path(e, path))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| with_path(e, path))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin::BuiltinLayout;

    #[test]
    fn builtins_round_trip() {
        let params = PhysParams::default();
        for b in BuiltinLayout::ALL {
            let doc = LayoutDocument { params, layout: b.build(&params) };
            let back = LayoutDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc, "{b}");
        }
    }

    #[test]
    fn unknown_key_is_named() {
        let text = r#"{"params":{"a_nm":1,"h_nm":0.5,"gamma_meV":50,"Ea_meV":1000},
            "cells":[{"id":1,"x_nm":0,"y_nm":0,"ux":0,"uy":1,"role":"input","colour":"red"}]}"#;
        let err = LayoutDocument::from_json(text).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");

        let text = r#"{"params":{"a_nm":1,"h_nm":0.5,"gamma_meV":50,"Ea_meV":1000},
            "cells":[], "extra": 1}"#;
        let err = LayoutDocument::from_json(text).unwrap_err().to_string();
        assert!(err.contains("extra"), "{err}");
    }

    #[test]
    fn optional_sections_default_to_empty() {
        let text = r#"{"params":{"a_nm":2,"h_nm":1,"gamma_meV":10,"Ea_meV":500},
            "cells":[{"id":3,"x_nm":0,"y_nm":0,"ux":1,"uy":0,"role":"register"}]}"#;
        let doc = LayoutDocument::from_json(text).unwrap();
        assert_eq!(doc.params.a, 2.0);
        assert_eq!(doc.params.e_a, 500.0);
        assert_eq!(doc.layout.cells[0].id, 3);
        assert!(doc.layout.input_mask.is_empty() && doc.layout.drivers.is_empty());
    }
}
