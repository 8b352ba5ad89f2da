use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("conductance on edge {u}-{v} must be strictly positive")]
    NonPositiveConductance { u: usize, v: usize },
    #[error("cannot mix exact and float conductances in one graph")]
    MixedScalarKinds,
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("ball radius must be at least 1")]
    ZeroRadius,
    #[error("torus needs at least 3 cells per axis, got {0}")]
    TorusTooSmall(usize),
    #[error("radii must be strictly increasing")]
    NonMonotoneRadii,
    #[error("boundary fraction is undefined on a torus")]
    NoBoundary,
    #[error("pair class {0} does not fit inside this lattice")]
    PairOutsideLattice(String),
    #[error("pair class {class} does not apply to the {family} lattice")]
    WrongFamily { class: String, family: String },
    #[error("unknown pair class {0:?}")]
    UnknownPairClass(String),
    #[error("unknown lattice family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("exact oracle needs exact rational conductances")]
    FloatGraph,
    #[error("graph has {n} vertices, above the exact-oracle cap of {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("singular system")]
    Singular,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("source and target coincide at vertex {0}")]
    SamePair(usize),
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("extrapolation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("sizes must be strictly increasing and positive")]
    NonIncreasingSizes,
    #[error("sizes and values differ in length")]
    LengthMismatch,
    #[error("degenerate extrapolation fit")]
    DegenerateFit,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("walk counting needs unit conductances")]
    NotUnit,
    #[error("walk length must be at least 1")]
    ZeroLength,
    #[error("degenerate census is defined for r in {{3, 4}}, got {0}")]
    UnsupportedCensus(usize),
    #[error("walk count overflowed")]
    Overflow,
}

#[derive(Debug, Error)]
pub enum FosterError {
    #[error("walk-count table covers s < {have}, need s < {need}")]
    InsufficientTable { have: usize, need: usize },
    #[error("non-degenerate rule defined for r in {{3, 4}}, got {0}")]
    UnsupportedRule(usize),
    #[error("the r = 4 non-degenerate rule requires a triangle-free lattice")]
    NeedsTriangleFree,
    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: i64, got: i64 },
    #[error("walk length must be at least 1")]
    ZeroLength,
    #[error("lattice sum rules are evaluated for r <= 4, got {0}")]
    LengthTooLarge(usize),
    #[error("closed-form table: {0}")]
    Table(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("source and target coincide at vertex {0}")]
    SamePair(usize),
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("replications must be at least 1")]
    NoReplications,
    #[error("{count} replications exceeded the step cap of {cap}")]
    StepCap { count: u64, cap: u64 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
