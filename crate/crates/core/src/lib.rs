//! Reconstruction of weighted trees from their k-weights.
//!
//! A family of numbers indexed by the k-subsets of `{1..n}` is the family
//! of k-weights of a weighted tree when each value is the total weight of
//! the smallest subtree spanning that subset. For `5 <= k <= n-1`,
//! [`decide_treelike`] either rebuilds the unique essential pseudostar with
//! nonzero internal weights realizing a family, or returns a witness that
//! no tree does.
//!
//! All algorithms are generic over [`Scalar`]; [`Rational`] (exact) is the
//! default, and `f64` is available for float-typed inputs.

pub mod classical;
pub mod error;
pub mod family;
pub mod generate;
pub mod hierarchy;
pub mod inference;
pub mod leafset;
pub mod newick;
pub mod reconstruction;
pub mod roundtrip;
pub mod scalar;
pub mod selection;
pub mod tree;

pub use classical::{aggregate_pairwise, four_point_check};
pub use error::{Error, Result};
pub use family::{family_from_tree, KWeightFamily};
pub use generate::{random_pseudostar, GeneratorConfig, SignMode, WeightRange};
pub use hierarchy::{hierarchy_from_pseudostar, pseudostar_from_hierarchy, FormalSum, Hierarchy};
pub use inference::{
    check_condition_i, check_condition_ii, family_quartet, infer_hierarchy, neighbor_constant, ConditionII,
    InferredHierarchy, NeighborTest,
};
pub use leafset::LeafSet;
pub use newick::{parse_newick, to_newick};
pub use reconstruction::{
    classify_positivity, decide_treelike, internal_edge_weight, twig_weight, Outcome, Positivity,
    ReconstructionReport, Rejection,
};
pub use scalar::Scalar;
pub use selection::{select_quadruple_for_cluster, select_x_pair_zero, Choice};
pub use tree::{trees_isomorphic, QuartetTopology, WeightedTree};

/// Exact rational scalar used by default.
pub type Rational = num_rational::BigRational;
pub type Tree = WeightedTree<Rational>;
pub type FloatTree = WeightedTree<f64>;
pub type Family = KWeightFamily<Rational>;
pub type FloatFamily = KWeightFamily<f64>;
pub type Report = ReconstructionReport<Rational>;
