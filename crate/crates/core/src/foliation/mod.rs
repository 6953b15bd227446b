//! Simple foliations by graphs, filtrations of graphs and the interpolation
//! between two simple foliations.

pub mod demo;
mod filtration;
mod interpolate;
mod parametric;
mod refine;
mod simple;

pub use filtration::{filtration, Filtration, FiltrationJson, Sublevel};
pub use interpolate::{
    chain_audit_merges, interpolate, interpolate_with, interpolation_bound, ChainStats, EventJson, EventSlice,
    InterpolateOptions, LeafOrigin, ParametricFoliation, ParametricJson, Split,
};
pub use parametric::{
    cone_to_family, discontinuity_bound, interpolate_simplex, layer_piece_diameters, parametric_interpolate, simplex_width_bound,
    ConeFamily, FamilySlice, FoliationFamily, SimplexAudit, SimplexInterpolation,
};
pub use refine::{GraphPoint, RefinedGraph};
pub use simple::{common_refinement, exact_width, make_simple, Foliation, FoliationJson};
