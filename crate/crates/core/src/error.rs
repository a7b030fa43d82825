use thiserror::Error;

/// Errors raised by tree, hierarchy and family operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leaf label {0} is not a leaf of the tree")]
    UnknownLabel(u32),
    #[error("leaf label {0} is outside the supported range 1..=64")]
    LabelOutOfRange(u64),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("the given leaf set is not a cherry of the tree")]
    NotACherry,
    #[error("tree is not a pseudostar of kind ({n},{k})")]
    NotAPseudostar { n: usize, k: usize },
    #[error("tree has a vertex of degree 2")]
    NotEssential,
    #[error("k = {k} is not supported for n = {n} by this operation")]
    UnsupportedK { n: usize, k: usize },
    #[error("invalid hierarchy: {0}")]
    InvalidHierarchy(String),
    #[error("hierarchy covers [n] with exactly two maximal clusters")]
    TwoMaximalCover,
    #[error("family does not induce a laminar hierarchy: {0}")]
    NotLaminar(String),
    #[error("no admissible selection exists: {0}")]
    SelectionImpossible(String),
    #[error("infeasible generator shape: {0}")]
    InfeasibleShape(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
