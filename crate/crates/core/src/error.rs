use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("map is not simplicial: image of {simplex:?} does not span a target simplex")]
    NonSimplicial { simplex: Vec<usize> },
    #[error("map is not connected: fiber over {cell:?} has {components} components")]
    NotConnected { cell: Vec<usize>, components: usize },
    #[error("empty fiber")]
    EmptyFiber,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cover multiplicity {count} exceeds bound {bound} at sample {point:?}")]
    MultiplicityViolation { point: Vec<f64>, count: usize, bound: usize },
    #[error("coverage gap at sample {point:?}")]
    CoverageGap { point: Vec<f64> },
    #[error("point in dual complex")]
    PointInDualComplex,
    #[error("non-smooth locus")]
    NonSmoothLocus,
    #[error("cannot simplify at this bound ({bound}) within subdivision depth {depth}")]
    CannotSimplify { bound: f64, depth: usize },
    #[error("width bound violated in {context}: measured {measured} > bound {bound}")]
    WidthBound { context: String, measured: f64, bound: f64 },
    #[error("merge chain with {z1_leaves} Z1-leaves exceeds bound {bound}")]
    ChainBound { z1_leaves: usize, bound: usize },
    #[error("missing merge provenance")]
    MissingProvenance,
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("integer overflow during Smith normal form")]
    Overflow,
    #[error("resolution too coarse: sample graph does not connect the endpoints")]
    ResolutionTooCoarse,
    #[error("{context}: {source}")]
    Cell { context: String, #[source] source: Box<Error> },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn in_cell(self, context: impl Into<String>) -> Self {
        Error::Cell { context: context.into(), source: Box::new(self) }
    }
}
