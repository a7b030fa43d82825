//! Constructive choice of the subsets used by the edge-weight formulas.
//!
//! Every choice is checked against the signature identity it is meant to
//! satisfy before it is returned.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::{FormalSum, Hierarchy};
use crate::leafset::LeafSet;

/// Which admissible choice to make. `Smallest` is the default; `Largest`
/// gives an independent second choice for consistency checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    Smallest,
    Largest,
}

impl Choice {
    fn pick(self, set: LeafSet) -> Option<u32> {
        match self {
            Choice::Smallest => set.min(),
            Choice::Largest => set.max(),
        }
    }

    fn order(self, set: LeafSet) -> Vec<u32> {
        let mut labels = set.to_vec();
        if self == Choice::Largest {
            labels.reverse();
        }
        labels
    }
}

/// Builds a `size`-set containing `preset`, avoiding `avoid`, meeting every
/// set in `required`, then padded with free labels in `choice` order.
fn fill(
    universe: LeafSet,
    size: usize,
    preset: LeafSet,
    avoid: LeafSet,
    required: &[LeafSet],
    choice: Choice,
) -> Option<LeafSet> {
    if preset.intersects(avoid) {
        return None;
    }
    let mut x = preset;
    for r in required {
        if !x.intersects(*r) {
            x.insert(choice.pick(*r - avoid - x)?);
        }
    }
    for label in choice.order(universe - avoid - x) {
        if x.len() >= size {
            break;
        }
        x.insert(label);
    }
    (x.len() == size).then_some(x)
}

/// A `(k-1)`-subset `X` of `[n] - {i, l}` with
/// `signature(iX) - signature(lX) = 0`.
///
/// With `m_t` / `M_t` the smallest / largest cluster containing `t`, `X`
/// receives an element of `m_i - {i}` or `m_l - {l}`, and an element
/// outside `M_i` or `M_l`, as the relative position of `i` and `l` in the
/// hierarchy demands.
pub fn select_x_pair_zero(hierarchy: &Hierarchy, i: u32, l: u32, choice: Choice) -> Result<LeafSet> {
    let (n, k) = (hierarchy.n(), hierarchy.k());
    let universe = LeafSet::full(n);
    if i == l || !universe.contains(i) || !universe.contains(l) {
        return Err(Error::SelectionImpossible(format!("bad pair ({i}, {l})")));
    }
    if k < 2 {
        return Err(Error::UnsupportedK { n, k });
    }
    let inner = |t: u32| hierarchy.minimal_containing(t).map(|m| m.without(t));
    let outer = |t: u32| hierarchy.maximal_containing(t).map(|m| universe - m);
    let mut required = Vec::new();
    match (hierarchy.minimal_containing(i), hierarchy.minimal_containing(l)) {
        (Some(mi), Some(ml)) => {
            let big_i = hierarchy.maximal_containing(i).expect("clustered");
            let big_l = hierarchy.maximal_containing(l).expect("clustered");
            if mi == ml {
                // every cluster holds both labels or neither: any set works
            } else if !big_i.intersects(big_l) {
                required.extend([inner(i), inner(l)]);
            } else if mi.is_subset(ml) {
                required.extend([inner(i), outer(i)]);
            } else if ml.is_subset(mi) {
                required.extend([inner(l), outer(l)]);
            } else {
                required.extend([inner(i), inner(l), outer(i)]);
            }
        }
        (Some(_), None) => required.extend([inner(i), outer(i)]),
        (None, Some(_)) => required.extend([inner(l), outer(l)]),
        (None, None) => {}
    }
    let required: Vec<LeafSet> = required.into_iter().flatten().collect();
    let avoid = LeafSet::from_iter([i, l]);
    let x = fill(universe, k - 1, LeafSet::EMPTY, avoid, &required, choice).ok_or_else(|| {
        Error::SelectionImpossible(format!("no admissible set for the pair ({i}, {l})"))
    })?;
    let difference = hierarchy.signature(x.with(i)) - &hierarchy.signature(x.with(l));
    if !difference.is_zero() {
        return Err(Error::SelectionImpossible(format!(
            "set {x} for the pair ({i}, {l}) has nonzero signature difference"
        )));
    }
    Ok(x)
}

/// Labels and sets whose family values isolate the weight of one cluster edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub a: u32,
    pub a_prime: u32,
    pub x: LeafSet,
    pub x_prime: LeafSet,
}

impl Quadruple {
    /// `sig(aX) - sig(a'X) - sig(aX') + sig(a'X')`.
    pub fn signature(&self, hierarchy: &Hierarchy) -> FormalSum {
        hierarchy.signature(self.x.with(self.a)) - &hierarchy.signature(self.x.with(self.a_prime))
            - &hierarchy.signature(self.x_prime.with(self.a))
            + &hierarchy.signature(self.x_prime.with(self.a_prime))
    }
}

/// Finds `a in J`, `a' not in J` and `(k-1)`-sets `X, X'` avoiding both,
/// such that the alternating signature sum is exactly the cluster `J`.
///
/// `X` avoids `J` and meets the smallest cluster strictly above `J` outside
/// `J`. `X'` meets `J` while avoiding the largest cluster strictly below `J`
/// that holds `a`. Both share an element of `m_{a'} - {a'}` and each has one
/// outside `M_{a'}` when `a'` is clustered; otherwise both share an element
/// outside the largest cluster containing `J`.
pub fn select_quadruple_for_cluster(hierarchy: &Hierarchy, cluster: LeafSet, choice: Choice) -> Result<Quadruple> {
    let index = hierarchy
        .index_of(cluster)
        .ok_or_else(|| Error::SelectionImpossible(format!("{cluster} is not a cluster")))?;
    let (n, k) = (hierarchy.n(), hierarchy.k());
    let universe = LeafSet::full(n);
    let target = FormalSum::unit(hierarchy.len(), index);
    let top = hierarchy.maximal_containing_set(cluster).expect("cluster contains itself");
    let parent = hierarchy.parent_of(cluster);
    for a in choice.order(cluster) {
        let below = hierarchy.child_containing(cluster, a);
        for a_prime in choice.order(universe - cluster) {
            let pair = LeafSet::from_iter([a, a_prime]);
            let avoid_x = pair | cluster;
            let avoid_x_prime = pair | below.unwrap_or(LeafSet::EMPTY);
            let mut required_x = Vec::new();
            let mut required_x_prime = Vec::new();
            let shared = match hierarchy.minimal_containing(a_prime) {
                Some(m) => {
                    let outside = universe - hierarchy.maximal_containing(a_prime).expect("clustered");
                    required_x.push(outside);
                    required_x_prime.push(outside);
                    m.without(a_prime)
                }
                None => universe - top,
            };
            if let Some(p) = parent {
                required_x.push(p - cluster);
            }
            required_x_prime.push(match below {
                Some(b) => cluster - b,
                None => cluster,
            });
            for common in choice.order(shared - pair) {
                let preset = LeafSet::singleton(common);
                let Some(x) = fill(universe, k - 1, preset, avoid_x, &required_x, choice) else {
                    continue;
                };
                let Some(x_prime) = fill(universe, k - 1, preset, avoid_x_prime, &required_x_prime, choice)
                else {
                    continue;
                };
                let quad = Quadruple { a, a_prime, x, x_prime };
                if quad.signature(hierarchy) == target {
                    return Ok(quad);
                }
            }
        }
    }
    Err(Error::SelectionImpossible(format!("no quadruple isolates {cluster}")))
}
