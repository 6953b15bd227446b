//! Waist constants, the width recurrence, and the skeletal construction of
//! low-width maps from fiberwise foliations of product bundles.

mod constants;
mod skeletal;

pub use constants::{recurrence_closed_form, recurrence_width, waist_constant, Variant, WaistConstants};
pub use skeletal::{
    annulus_edge_bundle, contrapositive_report, disk_triangle_bundle, skeletal_construction, CellReport,
    ContrapositiveReport, ProductBundleData, SkeletalConstruction, SkeletalReport, StepReport,
};
