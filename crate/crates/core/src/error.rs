use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matching pairs share an endpoint at vertex {0}")]
    OverlappingMatching(usize),
    #[error("degree sums do not match ({left} vs {right})")]
    DegreeSumMismatch { left: usize, right: usize },
    #[error("vertex {vertex} needs degree {degree} but has only {chords} chords")]
    DegreeExceedsChords { vertex: usize, degree: usize, chords: usize },
    #[error("star center {0} is out of range")]
    StarCenterOutOfRange(usize),
    #[error("star leaves were given without a star center")]
    LeavesWithoutCenter,
    #[error("vertex index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("field `{0}` is missing or not valid for this instance kind")]
    InvalidField(&'static str),
    #[error("out- and in-degree sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("out- and in-degree sums differ ({0} vs {1})")]
    SumMismatch(usize, usize),
    #[error("forbidding opposite arcs cannot be expressed by a star plus a matching")]
    OppositeArcsUnsupported,
    #[error("instance was not built from a directed degree sequence")]
    NotDirectedKind,
    #[error("operation requires a bipartite instance")]
    NotBipartite,
    #[error("pair ({0}, {1}) is not a chord")]
    NotAChord(usize, usize),
    #[error("edge ({0}, {1}) is listed twice")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} has degree {actual}, expected {expected}")]
    DegreeMismatch { vertex: usize, expected: usize, actual: usize },
    #[error("neighborhood of vertex {0} is not normal")]
    NotNormal(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("chord sequence is not a valid circuit: {0}")]
    InvalidCircuit(&'static str),
    #[error("circuit does not alternate in the host realization")]
    NotAlternating,
    #[error("circuit is not elementary")]
    NotElementary,
    #[error("input of size {size} exceeds the exhaustive bound {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("state space has more than {limit} realizations")]
    TooManyStates { limit: usize },
    #[error("chain needs at least two vertices in each class")]
    InstanceTooSmall,
    #[error("realizations are not one chain move apart")]
    NotAdjacent,
    #[error("realizations do not differ by exactly the given cycle")]
    NotAMilestonePair,
    #[error("audit failed at step {step}: {reason}")]
    AuditFailed { step: usize, reason: &'static str },
    #[error("instance is not graphical")]
    NotGraphical,
    #[error("realizations belong to different instances")]
    InstanceMismatch,
}
