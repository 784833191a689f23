use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The neighborhood graph does not connect all points, so geodesic
    /// distances are not finite. Usually means the sample is too sparse
    /// for the chosen link radius.
    #[error("neighborhood graph is disconnected: point {unreached} unreachable from point {from} (link radius {link_radius})")]
    DisconnectedGraph {
        from: usize,
        unreached: usize,
        link_radius: f64,
    },

    /// Partition enumeration was asked for a vertex set larger than the
    /// documented cap.
    #[error("cluster value of a {size}-vertex simplex exceeds the combinatorial budget (cap {cap})")]
    CombinatorialBudget { size: usize, cap: usize },

    /// The filtration would contain more simplices than the configured cap.
    #[error("filtration would hold {count} simplices, exceeding the memory budget of {cap}")]
    MemoryBudget { count: usize, cap: usize },

    /// A filtration value fell outside (0, r_max].
    #[error("filtration value {value} exceeds r_max = {r_max}")]
    OutOfRange { value: f64, r_max: f64 },

    /// A winding number query hit an exactly antipodal pair, where the
    /// geodesic is not unique and the number is undefined.
    #[error("winding number ill-defined: points {a} and {b} are antipodal on the reference circle")]
    IllDefined { a: usize, b: usize },

    /// A bar cannot be attributed to a critical simplex.
    #[error("no critical simplex attribution for this bar: {reason}")]
    NoAttribution { reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
