//! Colored grid triangulations, local join decompositions and the maps built
//! from them.

mod gromov;
mod join;
mod theorem22;
mod triangulation;

pub use gromov::{gromov_witness_sweep, GromovCube, GromovReport, Side, SideReport};
pub use join::{JoinCoords, JoinDecomposition};
pub use theorem22::{theorem22_construct, witness_index, FiberWitness, Theorem22Map};
pub use triangulation::{ColoredTriangulation, LatticeSimplex};
