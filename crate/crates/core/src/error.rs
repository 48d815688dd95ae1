use std::fmt;

/// Errors raised by graph loading, metrics and the improvement drivers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A line of an input file could not be parsed.
    Parse { line: usize, message: String },
    NegativeWeight { line: usize, weight: f64 },
    IdOverflow { line: usize, id: String },
    EmptyGraph,
    /// A node id outside `[0, node_count)`.
    NodeOutOfRange { id: usize, node_count: usize },
    EmptySet,
    /// Conductance and related ratios are undefined for `S = {}` and `S = V`.
    UndefinedRatio(&'static str),
    /// The seed set violates `vol(R) <= vol(G)/2`.
    SeedTooLarge { seed_volume: f64, total_volume: f64 },
    /// The seed has a non-positive denominator `g(R)`.
    InfeasibleSeed,
    /// Exact arithmetic requested on a graph with non-integer weights.
    NonIntegerWeights,
    /// Integer capacities exceeded the 128-bit range.
    Overflow,
    SourceEqualsSink,
    /// Min-cut extraction requested before the flow was maximal.
    FlowNotMaximal,
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::NegativeWeight { line, weight } => {
                write!(f, "line {line}: negative edge weight {weight}")
            }
            Error::IdOverflow { line, id } => write!(f, "line {line}: node id {id} out of range"),
            Error::EmptyGraph => write!(f, "graph has no edges"),
            Error::NodeOutOfRange { id, node_count } => {
                write!(f, "node id {id} out of range (graph has {node_count} nodes)")
            }
            Error::EmptySet => write!(f, "node set is empty"),
            Error::UndefinedRatio(what) => write!(f, "undefined {what}"),
            Error::SeedTooLarge {
                seed_volume,
                total_volume,
            } => write!(
                f,
                "seed volume {seed_volume} exceeds half of the graph volume {total_volume}"
            ),
            Error::InfeasibleSeed => write!(f, "seed set has non-positive denominator"),
            Error::NonIntegerWeights => write!(f, "exactness not guaranteed: graph has non-integer weights"),
            Error::Overflow => write!(f, "integer capacity overflow"),
            Error::SourceEqualsSink => write!(f, "source and sink coincide"),
            Error::FlowNotMaximal => write!(f, "flow is not maximal"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
