//! Physical constants, geometry, layouts and applied fields.

pub mod builtin;
pub mod field;
pub mod geometry;
pub mod layout_file;
pub mod params;

pub use builtin::{builtin_layout, BuiltinLayout};
pub use field::{ElectrodeMode, FieldSpec};
pub use geometry::{
    clock_bias, detuning_from_field, CellGeometry, CellState, ClassicalDriver, Layout, LayoutLimits,
    Role,
};
pub use layout_file::LayoutDocument;
pub use params::{coulomb_constant, field_scale, kink_energy, FieldUnit, PhysParams};
