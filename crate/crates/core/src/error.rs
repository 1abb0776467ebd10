use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph structure error: {0}")]
    GraphStructure(String),

    #[error("graph fails validity requirements: {0}")]
    InvalidGraph(String),

    #[error("edge sequence is not a path (edge {1} does not continue edge {0})")]
    NonConsecutivePath(usize, usize),

    #[error("path is not closed")]
    OpenPath,

    #[error("path is not reduced")]
    UnreducedPath,

    #[error("marking error: {0}")]
    InvalidMarking(String),

    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("word syntax error: {0}")]
    WordSyntax(String),

    #[error("the identity word has no associated current")]
    IdentityWord,

    #[error("current error: {0}")]
    InvalidCurrent(String),

    #[error("current does not match graph: {0}")]
    CurrentGraphMismatch(String),

    #[error("markings are over different free groups: {0}")]
    RankMismatch(String),

    #[error("graphs do not share the same underlying marked graph")]
    GraphMismatch,

    #[error("eigensolver failed to converge after {0} iterations")]
    EigenNoConvergence(usize),

    #[error("bisection bracketing failed: {0}")]
    BracketingFailure(String),

    #[error("support digraph has no cycle")]
    NoCycle,

    #[error("enumeration cap of {cap} exceeded")]
    EnumerationCap { cap: usize },

    #[error("subshift is reducible")]
    ReducibleShift,

    #[error("measure is not normalized (total mass {0})")]
    Unnormalized(f64),

    #[error("no witness found: {0}")]
    NoWitness(String),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
