//! End-to-end check: generate a pseudostar, take its k-weights, decide and
//! compare.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::family::family_from_tree;
use crate::generate::{random_pseudostar_with, GeneratorConfig};
use crate::leafset::LeafSet;
use crate::newick::to_newick;
use crate::reconstruction::{decide_treelike, Rejection};
use crate::tree::{trees_isomorphic, WeightedTree};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub passed: bool,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbed_subset: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
    pub detail: String,
}

/// Generates a pseudostar from `config`, reconstructs it from its k-weights
/// and compares. With `perturb`, one random family value is shifted by the
/// given amount first; the trial then passes if the family is rejected, or
/// if the tree returned reproduces the shifted family exactly (some shifts
/// are themselves treelike, e.g. every family with `k = n-1`).
pub fn roundtrip(config: &GeneratorConfig, perturb: Option<Rational>) -> Result<RoundTripReport> {
    let mut rng = config.rng();
    let source: WeightedTree<Rational> = random_pseudostar_with(config, &mut rng)?;
    let mut family = family_from_tree(&source, config.k)?;
    let mut perturbed_subset = None;
    if let Some(delta) = perturb {
        let subsets: Vec<LeafSet> = LeafSet::full(config.n).subsets(config.k).collect();
        let target = subsets[rng.gen_range(0..subsets.len())];
        family = family.perturbed(target, delta)?;
        perturbed_subset = Some(target.to_vec());
    }
    let report = decide_treelike(&family)?;
    let recovered = report.tree().map(to_newick);
    let rejection = report.rejection().cloned();
    let (passed, detail) = match (report.tree(), perturbed_subset.is_some()) {
        (Some(tree), false) => {
            if trees_isomorphic(tree, &source, true) {
                (true, "recovered the source tree".to_string())
            } else {
                (false, "realized by a tree that differs from the source".to_string())
            }
        }
        (None, false) => (false, "the family of a pseudostar was rejected".to_string()),
        (Some(tree), true) => {
            if family_from_tree(tree, config.k)? == family {
                (true, "the perturbed family is treelike and was realized exactly".to_string())
            } else {
                (false, "a perturbed family was accepted by a tree that does not realize it".to_string())
            }
        }
        (None, true) => (true, "the perturbed family was rejected".to_string()),
    };
    Ok(RoundTripReport {
        seed: config.seed,
        n: config.n,
        k: config.k,
        passed,
        source: to_newick(&source),
        perturbed_subset,
        recovered,
        rejection,
        detail,
    })
}
