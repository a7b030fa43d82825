//! Inferring the hierarchy of a k-weight family, and the two conditions
//! that characterize treelike families.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::KWeightFamily;
use crate::hierarchy::{Descendants, FormalSum, Hierarchy};
use crate::leafset::LeafSet;
use crate::scalar::Scalar;

/// Outcome of testing whether `D_{iX} - D_{jX}` is independent of `X`.
#[derive(Clone, Debug, PartialEq)]
pub enum NeighborTest<S> {
    /// The difference is this constant for every admissible `X`.
    Constant(S),
    /// Two sets on which the difference disagrees.
    Varies { first: LeafSet, second: LeafSet },
}

impl<S> NeighborTest<S> {
    pub fn holds(&self) -> bool {
        matches!(self, NeighborTest::Constant(_))
    }
}

/// Tests whether `D_{iX} - D_{jX}` is the same for all `X` in `C([n]-{i,j}, k-1)`.
pub fn neighbor_constant<S: Scalar>(family: &KWeightFamily<S>, i: u32, j: u32) -> Result<NeighborTest<S>> {
    let (n, k) = (family.n(), family.k());
    if k < 2 || k - 1 > n - 2 {
        return Err(Error::UnsupportedK { n, k });
    }
    check_labels(n, &[i, j])?;
    let rest = LeafSet::full(n).without(i).without(j);
    let mut reference: Option<(LeafSet, S)> = None;
    for x in rest.subsets(k - 1) {
        let diff = family.get(x.with(i)).clone() - family.get(x.with(j)).clone();
        match &reference {
            None => reference = Some((x, diff)),
            Some((first, value)) => {
                if !value.same(&diff) {
                    return Ok(NeighborTest::Varies { first: *first, second: x });
                }
            }
        }
    }
    let (_, value) = reference.expect("at least one admissible set");
    Ok(NeighborTest::Constant(value))
}

fn check_labels(n: usize, labels: &[u32]) -> Result<()> {
    let set: LeafSet = labels.iter().copied().collect();
    if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l as usize > n) {
        return Err(Error::UnknownLabel(bad));
    }
    if set.len() != labels.len() {
        return Err(Error::InvalidFamily(format!("labels {labels:?} are not distinct")));
    }
    Ok(())
}

/// Decides `<i,j|x,y>` from a family: either `{i,j}` and `{x,y}` are both
/// two-element members of `complete`, or some `(k-2)`-set `S` avoiding the
/// four labels has `D_{ijS} + D_{xyS} != D_{ixS} + D_{jyS}` and some `R`
/// has `D_{ijR} + D_{xyR} != D_{iyR} + D_{jxR}`.
pub fn family_quartet<S: Scalar>(
    family: &KWeightFamily<S>,
    i: u32,
    j: u32,
    x: u32,
    y: u32,
    complete: &[LeafSet],
) -> Result<bool> {
    let mut oracle = QuartetOracle::new(family, complete)?;
    check_labels(family.n(), &[i, j, x, y])?;
    Ok(oracle.holds(i, j, x, y))
}

/// Cached quartet decisions for one family.
///
/// For a sorted quadruple `a<b<c<d` the three pair sums are
/// `A = ab+cd`, `B = ac+bd`, `C = ad+bc`; one sweep over the `(k-2)`-sets
/// records which of them ever differ, which settles all three splits.
pub struct QuartetOracle<'a, S> {
    family: &'a KWeightFamily<S>,
    pairs: Vec<LeafSet>,
    // bit 0: A != B somewhere, bit 1: A != C, bit 2: B != C
    cache: HashMap<u64, u8>,
}

impl<'a, S: Scalar> QuartetOracle<'a, S> {
    /// `complete` is the set of maximal neighbour classes at stage zero;
    /// only its two-element members matter.
    pub fn new(family: &'a KWeightFamily<S>, complete: &[LeafSet]) -> Result<Self> {
        if family.k() < 4 {
            return Err(Error::UnsupportedK { n: family.n(), k: family.k() });
        }
        Ok(QuartetOracle {
            family,
            pairs: complete.iter().copied().filter(|c| c.len() == 2).collect(),
            cache: HashMap::new(),
        })
    }

    fn differences(&mut self, quad: LeafSet) -> u8 {
        if let Some(&flags) = self.cache.get(&quad.bits()) {
            return flags;
        }
        let [a, b, c, d]: [u32; 4] = quad.to_vec().try_into().expect("four labels");
        let family = self.family;
        let pair = |p: u32, q: u32, s: LeafSet| family.get(s.with(p).with(q)).clone();
        let rest = LeafSet::full(family.n()) - quad;
        let mut flags = 0u8;
        for s in rest.subsets(family.k() - 2) {
            let sum_a = pair(a, b, s) + pair(c, d, s);
            let sum_b = pair(a, c, s) + pair(b, d, s);
            let sum_c = pair(a, d, s) + pair(b, c, s);
            if !sum_a.same(&sum_b) {
                flags |= 1;
            }
            if !sum_a.same(&sum_c) {
                flags |= 2;
            }
            if !sum_b.same(&sum_c) {
                flags |= 4;
            }
            if flags == 7 {
                break;
            }
        }
        self.cache.insert(quad.bits(), flags);
        flags
    }

    /// Whether `<i,j|x,y>` holds. The labels must be distinct.
    pub fn holds(&mut self, i: u32, j: u32, x: u32, y: u32) -> bool {
        let ij = LeafSet::from_iter([i, j]);
        let xy = LeafSet::from_iter([x, y]);
        if self.pairs.contains(&ij) && self.pairs.contains(&xy) {
            return true;
        }
        let quad = ij | xy;
        let a = quad.min().expect("nonempty");
        // which of A, B, C is the sum pairing {i,j} with {x,y}
        let partner = if ij.contains(a) { ij.without(a) } else { xy.without(a) };
        let sorted = quad.to_vec();
        let own = sorted.iter().position(|&l| partner.contains(l)).expect("partner present") - 1;
        let flags = self.differences(quad);
        match own {
            0 => flags & 1 != 0 && flags & 2 != 0,
            1 => flags & 1 != 0 && flags & 4 != 0,
            _ => flags & 2 != 0 && flags & 4 != 0,
        }
    }
}

/// Maximal cliques with at least two vertices of the graph on `vertices`.
pub fn maximal_cliques(vertices: LeafSet, adjacency: &BTreeMap<u32, LeafSet>) -> Vec<LeafSet> {
    fn expand(
        r: LeafSet,
        mut p: LeafSet,
        mut x: LeafSet,
        adjacency: &BTreeMap<u32, LeafSet>,
        out: &mut Vec<LeafSet>,
    ) {
        if p.is_empty() && x.is_empty() {
            if r.len() >= 2 {
                out.push(r);
            }
            return;
        }
        let pivot = (p | x)
            .iter()
            .max_by_key(|u| (adjacency[u] & p).len())
            .expect("nonempty");
        for v in (p - adjacency[&pivot]).iter() {
            let nv = adjacency[&v];
            expand(r.with(v), p & nv, x & nv, adjacency, out);
            p.remove(v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    expand(LeafSet::EMPTY, vertices, LeafSet::EMPTY, adjacency, &mut out);
    out.sort();
    out
}

/// One stage of hierarchy inference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InferenceStage {
    /// Labels surviving at this stage (`[n]^s`).
    pub labels: Vec<u32>,
    /// Pairs of surviving labels found to be neighbours.
    pub neighbour_pairs: Vec<(u32, u32)>,
    /// Maximal neighbour classes.
    pub maximal: Vec<Vec<u32>>,
    /// Classes passing the size and quartet tests.
    pub selected: Vec<Vec<u32>>,
    /// Descendant sets added to the hierarchy.
    pub recorded: Vec<Vec<u32>>,
}

/// A hierarchy inferred from a family, with the per-stage log.
#[derive(Clone, Debug, PartialEq)]
pub struct InferredHierarchy {
    pub hierarchy: Hierarchy,
    pub stages: Vec<InferenceStage>,
}

fn labels_of(sets: &[LeafSet]) -> Vec<Vec<u32>> {
    sets.iter().map(|s| s.to_vec()).collect()
}

fn adjacency_from_pairs(labels: LeafSet, pairs: &[(u32, u32)]) -> BTreeMap<u32, LeafSet> {
    let mut adjacency: BTreeMap<u32, LeafSet> = labels.iter().map(|l| (l, LeafSet::EMPTY)).collect();
    for &(i, j) in pairs {
        adjacency.get_mut(&i).expect("label").insert(j);
        adjacency.get_mut(&j).expect("label").insert(i);
    }
    adjacency
}

fn disjoint_or_fail(cliques: &[LeafSet], stage: usize) -> Result<()> {
    for (idx, a) in cliques.iter().enumerate() {
        if let Some(b) = cliques[idx + 1..].iter().find(|b| a.intersects(**b)) {
            return Err(Error::NotLaminar(format!(
                "stage {stage}: neighbour classes {a} and {b} overlap"
            )));
        }
    }
    Ok(())
}

/// Infers the hierarchy associated to a family with `5 <= k <= n-1`.
///
/// Stage zero groups labels whose differences `D_{iX} - D_{jX}` are
/// constant. Later stages group surviving labels that no quartet
/// separates. At each stage the classes of descendant size at most `n-k`
/// that every outside pair splits off by a quartet are recorded and
/// collapsed to their smallest label; inference stops when none remain.
pub fn infer_hierarchy<S: Scalar>(family: &KWeightFamily<S>) -> Result<InferredHierarchy> {
    let (n, k) = (family.n(), family.k());
    if k < 5 || k + 1 > n {
        return Err(Error::UnsupportedK { n, k });
    }
    let universe = LeafSet::full(n);
    let stage_zero_pairs: Vec<(u32, u32)> = universe
        .subsets(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|pair| {
            let [i, j]: [u32; 2] = pair.to_vec().try_into().expect("pair");
            neighbor_constant(family, i, j).map(|t| t.holds().then_some((i, j)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let complete_zero = maximal_cliques(universe, &adjacency_from_pairs(universe, &stage_zero_pairs));
    disjoint_or_fail(&complete_zero, 0)?;

    let mut oracle = QuartetOracle::new(family, &complete_zero)?;
    let mut descendants = Descendants::identity(n);
    let mut clusters = Vec::new();
    let mut stages = Vec::new();
    for stage in 0.. {
        let labels = descendants.labels();
        let (pairs, maximal) = if stage == 0 {
            (stage_zero_pairs.clone(), complete_zero.clone())
        } else {
            let pairs: Vec<(u32, u32)> = labels
                .subsets(2)
                .filter_map(|pair| {
                    let [i, j]: [u32; 2] = pair.to_vec().try_into().expect("pair");
                    let others = labels - pair;
                    let separated = others.subsets(2).any(|xy| {
                        let [x, y]: [u32; 2] = xy.to_vec().try_into().expect("pair");
                        oracle.holds(i, x, j, y) || oracle.holds(i, y, j, x)
                    });
                    (!separated).then_some((i, j))
                })
                .collect();
            let maximal = maximal_cliques(labels, &adjacency_from_pairs(labels, &pairs));
            disjoint_or_fail(&maximal, stage)?;
            (pairs, maximal)
        };
        let selected: Vec<LeafSet> = maximal
            .iter()
            .copied()
            .filter(|z| descendants.closure(*z).len() <= n - k)
            .filter(|z| {
                let outside = labels - *z;
                z.subsets(2).all(|ij| {
                    let [i, j]: [u32; 2] = ij.to_vec().try_into().expect("pair");
                    outside.subsets(2).all(|xy| {
                        let [x, y]: [u32; 2] = xy.to_vec().try_into().expect("pair");
                        oracle.holds(i, j, x, y)
                    })
                })
            })
            .collect();
        let closures: Vec<LeafSet> = selected.iter().map(|z| descendants.closure(*z)).collect();
        let two_class_split = maximal.len() == 2
            && selected.len() == 2
            && (maximal[0] | maximal[1]) == labels;
        let recorded: Vec<LeafSet> = if two_class_split {
            let lowest = (closures[0] | closures[1]).min().expect("nonempty");
            closures.iter().copied().filter(|c| c.contains(lowest)).collect()
        } else {
            closures.clone()
        };
        for z in &selected {
            descendants.collapse(*z);
        }
        clusters.extend(recorded.iter().copied());
        stages.push(InferenceStage {
            labels: labels.to_vec(),
            neighbour_pairs: pairs,
            maximal: labels_of(&maximal),
            selected: labels_of(&selected),
            recorded: labels_of(&recorded),
        });
        if selected.is_empty() {
            break;
        }
    }
    let hierarchy = Hierarchy::new(n, k, clusters).map_err(|e| Error::NotLaminar(e.to_string()))?;
    Ok(InferredHierarchy { hierarchy, stages })
}

/// False exactly when the clusters cover `[n]` with two maximal clusters.
pub fn check_condition_i(hierarchy: &Hierarchy) -> bool {
    !(hierarchy.covers() && hierarchy.maximal_clusters().len() == 2)
}

/// Two tuples with equal signature sums but different value sums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionIIWitness {
    pub s: usize,
    pub w: Vec<u32>,
    pub w_prime: Vec<u32>,
    pub first: Vec<Vec<u32>>,
    pub second: Vec<Vec<u32>>,
    pub first_sum: String,
    pub second_sum: String,
}

/// Result of checking the signature-invariance condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ConditionII {
    /// Every tuple up to `q_max` was examined.
    Holds,
    /// No violation found, but the budget cut off this many enumerations.
    Exhausted { truncated: usize },
    Violated(ConditionIIWitness),
}

impl ConditionII {
    pub fn is_violated(&self) -> bool {
        matches!(self, ConditionII::Violated(_))
    }
}

/// Checks that for `s in {1, k-1}`, all `W != W'` in `C([n], s)` and all
/// `q <= q_max`, the sum `sum_t D_{W Z_t} - D_{W' Z_t}` over `Z_t` in
/// `C([n] - W - W', k - s)` depends only on the signature sum
/// `sum_t sig(W Z_t) - sig(W' Z_t)`.
///
/// Single sets are compared exhaustively. Once those agree, a tuple's value
/// sum depends only on the multiset of signature classes, so longer tuples
/// are enumerated as multisets of classes in lexicographic order, at most
/// `budget` per `(W, W', q)` when a budget is given.
pub fn check_condition_ii<S: Scalar>(
    family: &KWeightFamily<S>,
    hierarchy: &Hierarchy,
    q_max: usize,
    budget: Option<u64>,
) -> ConditionII {
    let (n, k) = (family.n(), family.k());
    let mut sizes = vec![1, k - 1];
    sizes.dedup();
    let mut truncated = 0usize;
    for s in sizes {
        if s == 0 || s >= k {
            continue;
        }
        let subsets: Vec<LeafSet> = LeafSet::full(n).subsets(s).collect();
        let pairs: Vec<(LeafSet, LeafSet)> = subsets
            .iter()
            .enumerate()
            .flat_map(|(a, w)| subsets[a + 1..].iter().map(move |wp| (*w, *wp)))
            .collect();
        let outcomes: Vec<std::result::Result<usize, Box<ConditionIIWitness>>> = pairs
            .par_iter()
            .map(|(w, wp)| check_pair(family, hierarchy, s, *w, *wp, q_max, budget))
            .collect();
        for outcome in outcomes {
            match outcome {
                Ok(cut) => truncated += cut,
                Err(witness) => return ConditionII::Violated(*witness),
            }
        }
    }
    if truncated == 0 {
        ConditionII::Holds
    } else {
        ConditionII::Exhausted { truncated }
    }
}

/// Returns how many `q` levels were truncated, or a witness.
fn check_pair<S: Scalar>(
    family: &KWeightFamily<S>,
    hierarchy: &Hierarchy,
    s: usize,
    w: LeafSet,
    wp: LeafSet,
    q_max: usize,
    budget: Option<u64>,
) -> std::result::Result<usize, Box<ConditionIIWitness>> {
    let k = family.k();
    let rest = LeafSet::full(family.n()) - (w | wp);
    // signature class -> (representative Z, value)
    let mut classes: Vec<(FormalSum, LeafSet, S)> = Vec::new();
    let mut index: HashMap<FormalSum, usize> = HashMap::new();
    let witness = |first: Vec<LeafSet>, second: Vec<LeafSet>, a: &S, b: &S| ConditionIIWitness {
        s,
        w: w.to_vec(),
        w_prime: wp.to_vec(),
        first: first.iter().map(|z| z.to_vec()).collect(),
        second: second.iter().map(|z| z.to_vec()).collect(),
        first_sum: a.render(),
        second_sum: b.render(),
    };
    for z in rest.subsets(k - s) {
        let sig = hierarchy.signature(w | z) - &hierarchy.signature(wp | z);
        let value = family.get(w | z).clone() - family.get(wp | z).clone();
        match index.get(&sig) {
            Some(&c) => {
                if !classes[c].2.same(&value) {
                    return Err(Box::new(witness(vec![classes[c].1], vec![z], &classes[c].2, &value)));
                }
            }
            None => {
                index.insert(sig.clone(), classes.len());
                classes.push((sig, z, value));
            }
        }
    }
    if classes.len() <= 1 {
        return Ok(0);
    }
    let mut truncated = 0;
    for q in 2..=q_max {
        let mut seen: HashMap<FormalSum, (Vec<usize>, S)> = HashMap::new();
        let mut visited = 0u64;
        let mut stack: Vec<usize> = Vec::with_capacity(q);
        let mut cut = false;
        if let Some((a, b)) = enumerate_multisets(
            &classes,
            q,
            0,
            &mut stack,
            &mut seen,
            &mut visited,
            budget,
            &mut cut,
        ) {
            let reps = |m: &[usize]| m.iter().map(|&c| classes[c].1).collect::<Vec<_>>();
            let sum = |m: &[usize]| {
                m.iter()
                    .fold(S::zero(), |acc, &c| acc + classes[c].2.clone())
            };
            return Err(Box::new(witness(reps(&a), reps(&b), &sum(&a), &sum(&b))));
        }
        if cut {
            truncated += 1;
        }
    }
    Ok(truncated)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_multisets<S: Scalar>(
    classes: &[(FormalSum, LeafSet, S)],
    q: usize,
    from: usize,
    stack: &mut Vec<usize>,
    seen: &mut HashMap<FormalSum, (Vec<usize>, S)>,
    visited: &mut u64,
    budget: Option<u64>,
    cut: &mut bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if *cut {
        return None;
    }
    if stack.len() == q {
        if budget.is_some_and(|b| *visited >= b) {
            *cut = true;
            return None;
        }
        *visited += 1;
        let len = classes[0].0.coefficients().len();
        let mut sig = FormalSum::zero(len);
        let mut value = S::zero();
        for &c in stack.iter() {
            sig += &classes[c].0;
            value = value + classes[c].2.clone();
        }
        match seen.get(&sig) {
            Some((first, v)) if !v.same(&value) => return Some((first.clone(), stack.clone())),
            Some(_) => {}
            None => {
                seen.insert(sig, (stack.clone(), value));
            }
        }
        return None;
    }
    for c in from..classes.len() {
        stack.push(c);
        let found = enumerate_multisets(classes, q, c, stack, seen, visited, budget, cut);
        stack.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::family_from_tree;
    use crate::newick::parse_newick;
    use crate::Rational;

    fn set(labels: &[u32]) -> LeafSet {
        labels.iter().copied().collect()
    }

    fn fam(text: &str, k: usize) -> KWeightFamily<Rational> {
        family_from_tree(&parse_newick::<Rational>(text).unwrap(), k).unwrap()
    }

    const SIX_TWELVE: &str = "(1,2,3,(4,5,6),((7,8,9),10,11,12));";
    const TWO_GROUPS: &str = "(11,12,(1,2,3,(4,5,6)),((7,8),(9,10)));";

    #[test]
    fn neighbor_tests() {
        let star = fam("(1:1,2:5/2,3:3,4:4,5:7,6:1);", 4);
        assert_eq!(
            neighbor_constant(&star, 1, 2).unwrap(),
            NeighborTest::Constant(Rational::from_ratio(-3, 2))
        );
        let f = fam(SIX_TWELVE, 6);
        assert_eq!(neighbor_constant(&f, 1, 2).unwrap(), NeighborTest::Constant(Rational::from_count(0)));
        match neighbor_constant(&f, 1, 7).unwrap() {
            NeighborTest::Varies { first, second } => {
                let d = |x: LeafSet| f.get(x.with(1)).clone() - f.get(x.with(7)).clone();
                assert_ne!(d(first), d(second));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(neighbor_constant(&fam("(1,2,3);", 3), 1, 2).is_err());
    }

    #[test]
    fn quartets_from_family() {
        let f = fam(SIX_TWELVE, 6);
        assert!(family_quartet(&f, 1, 2, 7, 8, &[]).unwrap());
        assert!(!family_quartet(&f, 1, 7, 2, 8, &[]).unwrap());
        let star = fam("(1,2,3,4,5,6,7,8);", 5);
        assert!(!family_quartet(&star, 1, 2, 3, 4, &[]).unwrap());
        assert!(family_quartet(&star, 1, 2, 3, 4, &[set(&[1, 2]), set(&[3, 4])]).unwrap());
        assert!(family_quartet(&fam(SIX_TWELVE, 3), 1, 2, 7, 8, &[]).is_err());
    }

    #[test]
    fn cliques() {
        let labels = set(&[1, 2, 3, 4, 5]);
        let adjacency = adjacency_from_pairs(labels, &[(1, 2), (2, 3), (1, 3), (3, 4)]);
        assert_eq!(maximal_cliques(labels, &adjacency), vec![set(&[1, 2, 3]), set(&[3, 4])]);
    }

    #[test]
    fn reference_hierarchies_from_families() {
        let inferred = infer_hierarchy(&fam(SIX_TWELVE, 6)).unwrap();
        assert_eq!(
            inferred.hierarchy.clusters(),
            &[set(&[1, 2, 3, 4, 5, 6]), set(&[4, 5, 6]), set(&[7, 8, 9])]
        );
        let two_groups = infer_hierarchy(&fam(TWO_GROUPS, 6)).unwrap();
        assert_eq!(
            two_groups.hierarchy.clusters(),
            &[
                set(&[1, 2, 3, 4, 5, 6]),
                set(&[4, 5, 6]),
                set(&[7, 8]),
                set(&[7, 8, 9, 10]),
                set(&[9, 10])
            ]
        );
        assert_eq!(two_groups.stages[0].selected, vec![vec![4, 5, 6], vec![7, 8], vec![9, 10]]);
        let star = infer_hierarchy(&fam("(1:2,2,3,4,5,6,7:3);", 5)).unwrap();
        assert!(star.hierarchy.is_empty());
        assert!(infer_hierarchy(&fam(SIX_TWELVE, 4)).is_err());
    }

    #[test]
    fn condition_i_cases() {
        let split = Hierarchy::new(12, 6, [LeafSet::full(6), LeafSet::full(12) - LeafSet::full(6)]).unwrap();
        assert!(!check_condition_i(&split));
        assert!(check_condition_i(&Hierarchy::empty(12, 6).unwrap()));
        let two_groups = infer_hierarchy(&fam(TWO_GROUPS, 6)).unwrap().hierarchy;
        assert!(check_condition_i(&two_groups));
    }

    #[test]
    fn condition_ii_on_small_instances() {
        let f = fam("((1:2,2:3):5,3:1,4:2,5:1/2,6:1,7:4);", 5);
        let h = infer_hierarchy(&f).unwrap().hierarchy;
        assert_eq!(h.clusters(), &[set(&[1, 2])]);
        assert_eq!(check_condition_ii(&f, &h, 6, None), ConditionII::Holds);

        let star = fam("(1:1,2:2,3:3,4:4,5:5,6:6,7:7);", 5);
        let empty = Hierarchy::empty(7, 5).unwrap();
        assert_eq!(check_condition_ii(&star, &empty, 6, None), ConditionII::Holds);

        let bad = f.perturbed(set(&[1, 2, 3, 4, 5]), Rational::from_count(1)).unwrap();
        match check_condition_ii(&bad, &h, 6, None) {
            ConditionII::Violated(w) => {
                assert_eq!(w.first.len(), 1);
                assert_ne!(w.first_sum, w.second_sum);
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }
}
