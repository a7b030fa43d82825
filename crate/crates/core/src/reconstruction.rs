//! Deciding whether a family is treelike and rebuilding its pseudostar.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::KWeightFamily;
use crate::hierarchy::{pseudostar_from_hierarchy, Hierarchy, HierarchyJson};
use crate::inference::{check_condition_i, infer_hierarchy, InferenceStage, InferredHierarchy};
use crate::leafset::LeafSet;
use crate::newick::to_newick;
use crate::scalar::Scalar;
use crate::selection::{select_quadruple_for_cluster, select_x_pair_zero, Choice, Quadruple};
use crate::tree::{TreeBuilder, WeightedTree};

/// `w(e_J) = D_{aX} - D_{a'X} - D_{aX'} + D_{a'X'}`.
pub fn internal_edge_weight<S: Scalar>(
    family: &KWeightFamily<S>,
    hierarchy: &Hierarchy,
    cluster: LeafSet,
    choice: Choice,
) -> Result<(S, Quadruple)> {
    check_family(family, hierarchy)?;
    let q = select_quadruple_for_cluster(hierarchy, cluster, choice)?;
    let d = |t: u32, x: LeafSet| family.get(x.with(t)).clone();
    let weight = d(q.a, q.x) - d(q.a_prime, q.x) - d(q.a, q.x_prime) + d(q.a_prime, q.x_prime);
    Ok((weight, q))
}

/// The k-subset used by [`twig_weight`] for a given choice.
pub fn twig_subset(n: usize, k: usize, choice: Choice) -> LeafSet {
    let universe = LeafSet::full(n);
    match choice {
        Choice::Smallest => LeafSet::full(k),
        Choice::Largest => universe - LeafSet::full(n - k),
    }
}

/// The twig weight of leaf `i`:
/// `(1/k) [D_I + sum_{l in I} (D_{i X(i,l)} - D_{l X(i,l)}) - sum w(e_J)]`,
/// the last sum over clusters meeting `I` without containing it.
/// `internal` holds the cluster weights in hierarchy order.
pub fn twig_weight<S: Scalar>(
    family: &KWeightFamily<S>,
    hierarchy: &Hierarchy,
    internal: &[S],
    i: u32,
    subset: LeafSet,
    choice: Choice,
) -> Result<(S, Vec<(u32, LeafSet)>)> {
    check_family(family, hierarchy)?;
    if internal.len() != hierarchy.len() {
        return Err(Error::InvalidHierarchy(format!(
            "{} cluster weights for {} clusters",
            internal.len(),
            hierarchy.len()
        )));
    }
    let mut total = family.try_get(subset)?.clone();
    let mut sets = Vec::new();
    for l in subset.iter().filter(|&l| l != i) {
        let x = select_x_pair_zero(hierarchy, i, l, choice)?;
        total = total + family.get(x.with(i)).clone() - family.get(x.with(l)).clone();
        sets.push((l, x));
    }
    for (cluster, w) in hierarchy.clusters().iter().zip(internal) {
        if cluster.intersects(subset) && !subset.is_subset(*cluster) {
            total = total - w.clone();
        }
    }
    Ok((total / S::from_count(family.k()), sets))
}

fn check_family<S: Scalar>(family: &KWeightFamily<S>, hierarchy: &Hierarchy) -> Result<()> {
    if family.n() != hierarchy.n() || family.k() != hierarchy.k() {
        return Err(Error::InvalidHierarchy(format!(
            "hierarchy over ({}, {}) used with a family over ({}, {})",
            hierarchy.n(),
            hierarchy.k(),
            family.n(),
            family.k()
        )));
    }
    Ok(())
}

/// Why a family was found not to be treelike.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    /// The decision procedure needs `5 <= k <= n-1`.
    UnsupportedK { n: usize, k: usize },
    /// Inferred neighbour classes overlap.
    NotLaminar { detail: String },
    /// The inferred clusters cover `[n]` with exactly two maximal clusters.
    ConditionIFailed { maximal: Vec<Vec<u32>> },
    /// Two admissible choices give different weights for one edge.
    WeightInconsistent { edge: String, first: String, second: String },
    /// The rebuilt tree disagrees with the family on one subset.
    VerificationFailed { subset: Vec<u32>, expected: String, got: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<S> {
    Realized { tree: WeightedTree<S> },
    NotTreelike(Rejection),
}

/// The subsets used to compute one edge weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "edge", rename_all = "snake_case")]
pub enum SelectionRecord {
    Cluster {
        cluster: Vec<u32>,
        a: u32,
        a_prime: u32,
        x: Vec<u32>,
        x_prime: Vec<u32>,
        weight: String,
    },
    Twig {
        leaf: u32,
        subset: Vec<u32>,
        pair_sets: Vec<(u32, Vec<u32>)>,
        weight: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionReport<S> {
    pub n: usize,
    pub k: usize,
    pub outcome: Outcome<S>,
    pub inferred: Option<InferredHierarchy>,
    pub selections: Vec<SelectionRecord>,
}

/// Whether a family is treelike, and with which sign of weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Positivity {
    #[serde(rename = "p-l-treelike")]
    PositiveTreelike,
    #[serde(rename = "l-treelike")]
    Treelike,
    #[serde(rename = "neither")]
    Neither,
}

impl std::fmt::Display for Positivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Positivity::PositiveTreelike => "p-l-treelike",
            Positivity::Treelike => "l-treelike",
            Positivity::Neither => "neither",
        })
    }
}

/// Positive-treelike when realized with every edge weight above zero.
pub fn classify_positivity<S: Scalar>(report: &ReconstructionReport<S>) -> Positivity {
    match &report.outcome {
        Outcome::Realized { tree } if tree.edges().iter().all(|e| e.weight.is_strictly_positive()) => {
            Positivity::PositiveTreelike
        }
        Outcome::Realized { .. } => Positivity::Treelike,
        Outcome::NotTreelike(_) => Positivity::Neither,
    }
}

impl<S: Scalar> ReconstructionReport<S> {
    fn rejected(n: usize, k: usize, reason: Rejection) -> Self {
        ReconstructionReport {
            n,
            k,
            outcome: Outcome::NotTreelike(reason),
            inferred: None,
            selections: Vec::new(),
        }
    }

    pub fn is_realized(&self) -> bool {
        matches!(self.outcome, Outcome::Realized { .. })
    }

    pub fn tree(&self) -> Option<&WeightedTree<S>> {
        match &self.outcome {
            Outcome::Realized { tree } => Some(tree),
            Outcome::NotTreelike(_) => None,
        }
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match &self.outcome {
            Outcome::Realized { .. } => None,
            Outcome::NotTreelike(r) => Some(r),
        }
    }

    pub fn to_json(&self) -> ReportJson {
        let (outcome, newick, rejection) = match &self.outcome {
            Outcome::Realized { tree } => ("realized", Some(to_newick(tree)), None),
            Outcome::NotTreelike(r) => ("not_treelike", None, Some(r.clone())),
        };
        ReportJson {
            outcome: outcome.to_string(),
            classification: classify_positivity(self),
            n: self.n,
            k: self.k,
            newick,
            rejection,
            hierarchy: self.inferred.as_ref().map(|i| i.hierarchy.to_json()),
            stages: self.inferred.as_ref().map(|i| i.stages.clone()).unwrap_or_default(),
            selections: self.selections.clone(),
        }
    }
}

/// Wire format of a report; fields serialize in declaration order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportJson {
    pub outcome: String,
    pub classification: Positivity,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newick: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchyJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<InferenceStage>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub selections: Vec<SelectionRecord>,
}

/// Compares the tree's k-weights with the family on every k-subset and
/// returns the lexicographically first mismatch.
pub fn first_mismatch<S: Scalar>(tree: &WeightedTree<S>, family: &KWeightFamily<S>) -> Option<Rejection> {
    let table = tree.split_table();
    let subsets: Vec<LeafSet> = LeafSet::full(family.n()).subsets(family.k()).collect();
    subsets
        .par_iter()
        .find_first(|s| !table.weight(**s).same(family.get(**s)))
        .map(|s| Rejection::VerificationFailed {
            subset: s.to_vec(),
            expected: family.get(*s).render(),
            got: table.weight(*s).render(),
        })
}

/// Weighted star realizing a family with `k = n-1`:
/// `w_i = (sum_j D_{[n]-j}) / (n-1) - D_{[n]-i}`.
pub fn star_from_complements<S: Scalar>(family: &KWeightFamily<S>) -> Result<WeightedTree<S>> {
    let (n, k) = (family.n(), family.k());
    if k + 1 != n || n < 3 {
        return Err(Error::UnsupportedK { n, k });
    }
    let universe = LeafSet::full(n);
    let complement = |i: u32| family.get(universe.without(i)).clone();
    let total = (1..=n as u32).fold(S::zero(), |acc, j| acc + complement(j));
    let mean = total / S::from_count(n - 1);
    let mut builder = TreeBuilder::new();
    let center = builder.add_vertex();
    for i in 1..=n as u32 {
        let leaf = builder.add_leaf(i);
        builder.add_edge(center, leaf, mean.clone() - complement(i));
    }
    builder.build()
}

/// Decides whether `family` is the family of k-weights of a weighted tree.
///
/// For `k = n-1` the answer is always yes and a star is returned. Otherwise
/// the hierarchy is inferred, its pseudostar built, every edge weight
/// computed twice from independent choices, and the result compared with
/// the family on all k-subsets. A realized report is always verified.
pub fn decide_treelike<S: Scalar>(family: &KWeightFamily<S>) -> Result<ReconstructionReport<S>> {
    let (n, k) = (family.n(), family.k());
    if k < 5 || k + 1 > n {
        return Ok(ReconstructionReport::rejected(n, k, Rejection::UnsupportedK { n, k }));
    }
    if k + 1 == n {
        let tree = star_from_complements(family)?;
        if let Some(reason) = first_mismatch(&tree, family) {
            return Ok(ReconstructionReport::rejected(n, k, reason));
        }
        return Ok(ReconstructionReport {
            n,
            k,
            outcome: Outcome::Realized { tree },
            inferred: None,
            selections: Vec::new(),
        });
    }
    let inferred = match infer_hierarchy(family) {
        Ok(inferred) => inferred,
        Err(Error::NotLaminar(detail)) => {
            return Ok(ReconstructionReport::rejected(n, k, Rejection::NotLaminar { detail }))
        }
        Err(e) => return Err(e),
    };
    let mut report = ReconstructionReport {
        n,
        k,
        outcome: Outcome::NotTreelike(Rejection::UnsupportedK { n, k }),
        inferred: Some(inferred.clone()),
        selections: Vec::new(),
    };
    let hierarchy = &inferred.hierarchy;
    if !check_condition_i(hierarchy) {
        report.outcome = Outcome::NotTreelike(Rejection::ConditionIFailed {
            maximal: hierarchy.maximal_clusters().iter().map(|c| c.to_vec()).collect(),
        });
        return Ok(report);
    }
    let shape = pseudostar_from_hierarchy::<S>(hierarchy)?;

    let internal: Vec<(S, S, Quadruple)> = hierarchy
        .clusters()
        .par_iter()
        .map(|&cluster| {
            let (first, quad) = internal_edge_weight(family, hierarchy, cluster, Choice::Smallest)?;
            let (second, _) = internal_edge_weight(family, hierarchy, cluster, Choice::Largest)?;
            Ok((first, second, quad))
        })
        .collect::<Result<_>>()?;
    for (cluster, (first, second, quad)) in hierarchy.clusters().iter().zip(&internal) {
        report.selections.push(SelectionRecord::Cluster {
            cluster: cluster.to_vec(),
            a: quad.a,
            a_prime: quad.a_prime,
            x: quad.x.to_vec(),
            x_prime: quad.x_prime.to_vec(),
            weight: first.render(),
        });
        if !first.same(second) {
            report.outcome = Outcome::NotTreelike(Rejection::WeightInconsistent {
                edge: format!("cluster {cluster}"),
                first: first.render(),
                second: second.render(),
            });
            return Ok(report);
        }
    }
    let cluster_weights: Vec<S> = internal.into_iter().map(|(w, _, _)| w).collect();

    let first_subset = twig_subset(n, k, Choice::Smallest);
    let second_subset = twig_subset(n, k, Choice::Largest);
    // (first weight, second weight, pair sets of the first choice)
    type TwigWeights<S> = (S, S, Vec<(u32, LeafSet)>);
    let twigs: Vec<TwigWeights<S>> = (1..=n as u32)
        .into_par_iter()
        .map(|i| {
            let (first, sets) =
                twig_weight(family, hierarchy, &cluster_weights, i, first_subset, Choice::Smallest)?;
            let (second, _) =
                twig_weight(family, hierarchy, &cluster_weights, i, second_subset, Choice::Largest)?;
            Ok((first, second, sets))
        })
        .collect::<Result<_>>()?;
    for (i, (first, second, sets)) in (1..=n as u32).zip(&twigs) {
        report.selections.push(SelectionRecord::Twig {
            leaf: i,
            subset: first_subset.to_vec(),
            pair_sets: sets.iter().map(|(l, x)| (*l, x.to_vec())).collect(),
            weight: first.render(),
        });
        if !first.same(second) {
            report.outcome = Outcome::NotTreelike(Rejection::WeightInconsistent {
                edge: format!("twig {i}"),
                first: first.render(),
                second: second.render(),
            });
            return Ok(report);
        }
    }
    let twig_weights: Vec<S> = twigs.into_iter().map(|(w, _, _)| w).collect();
    let tree = shape.with_weights(&cluster_weights, &twig_weights);
    report.outcome = match first_mismatch(&tree, family) {
        Some(reason) => Outcome::NotTreelike(reason),
        None => Outcome::Realized { tree },
    };
    Ok(report)
}
