//! Laminar cluster families over `[n]` and their correspondence with
//! essential pseudostars.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::leafset::LeafSet;
use crate::scalar::Scalar;
use crate::tree::{EdgeId, TreeBuilder, VertexId, WeightedTree};

/// A laminar family of clusters over `[n]` whose sizes lie in `[2, n-k]`.
/// Clusters are kept in lexicographic order; that order indexes
/// [`FormalSum`] coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hierarchy {
    n: usize,
    k: usize,
    clusters: Vec<LeafSet>,
}

impl Hierarchy {
    pub fn new<I: IntoIterator<Item = LeafSet>>(n: usize, k: usize, clusters: I) -> Result<Self> {
        if n < 2 || n > crate::leafset::MAX_LABEL as usize || k == 0 || k >= n {
            return Err(Error::InvalidHierarchy(format!("bad parameters n={n}, k={k}")));
        }
        let mut clusters: Vec<LeafSet> = clusters.into_iter().collect();
        clusters.sort();
        let universe = LeafSet::full(n);
        for (idx, c) in clusters.iter().enumerate() {
            if !c.is_subset(universe) {
                return Err(Error::InvalidHierarchy(format!("{c} is not inside [{n}]")));
            }
            if c.len() < 2 || c.len() > n - k {
                return Err(Error::InvalidHierarchy(format!(
                    "{c} has size {} outside [2, {}]",
                    c.len(),
                    n - k
                )));
            }
            if idx > 0 && clusters[idx - 1] == *c {
                return Err(Error::InvalidHierarchy(format!("{c} listed twice")));
            }
        }
        for (a_idx, a) in clusters.iter().enumerate() {
            for b in &clusters[a_idx + 1..] {
                let meet = *a & *b;
                if !(meet.is_empty() || meet == *a || meet == *b) {
                    return Err(Error::InvalidHierarchy(format!("{a} and {b} overlap")));
                }
            }
        }
        Ok(Hierarchy { n, k, clusters })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Hierarchy::new(n, k, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clusters(&self) -> &[LeafSet] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn index_of(&self, cluster: LeafSet) -> Option<usize> {
        self.clusters.binary_search(&cluster).ok()
    }

    pub fn union(&self) -> LeafSet {
        self.clusters.iter().fold(LeafSet::EMPTY, |acc, c| acc | *c)
    }

    pub fn covers(&self) -> bool {
        self.union() == LeafSet::full(self.n)
    }

    pub fn maximal_clusters(&self) -> Vec<LeafSet> {
        self.clusters
            .iter()
            .copied()
            .filter(|c| !self.clusters.iter().any(|d| d != c && c.is_subset(*d)))
            .collect()
    }

    /// Clusters strictly inside `cluster` and maximal with that property.
    pub fn children(&self, cluster: LeafSet) -> Vec<LeafSet> {
        let inside: Vec<LeafSet> = self
            .clusters
            .iter()
            .copied()
            .filter(|c| *c != cluster && c.is_subset(cluster))
            .collect();
        inside
            .iter()
            .copied()
            .filter(|c| !inside.iter().any(|d| d != c && c.is_subset(*d)))
            .collect()
    }

    fn containing(&self, set: LeafSet) -> impl Iterator<Item = LeafSet> + '_ {
        self.clusters.iter().copied().filter(move |c| set.is_subset(*c))
    }

    /// `m_t`: the smallest cluster containing `t`.
    pub fn minimal_containing(&self, t: u32) -> Option<LeafSet> {
        self.containing(LeafSet::singleton(t)).min_by_key(|c| c.len())
    }

    /// `M_t`: the largest cluster containing `t`.
    pub fn maximal_containing(&self, t: u32) -> Option<LeafSet> {
        self.containing(LeafSet::singleton(t)).max_by_key(|c| c.len())
    }

    /// The largest cluster containing all of `set`.
    pub fn maximal_containing_set(&self, set: LeafSet) -> Option<LeafSet> {
        self.containing(set).max_by_key(|c| c.len())
    }

    /// The smallest cluster strictly containing `cluster`.
    pub fn parent_of(&self, cluster: LeafSet) -> Option<LeafSet> {
        self.containing(cluster)
            .filter(|c| *c != cluster)
            .min_by_key(|c| c.len())
    }

    /// The largest cluster strictly inside `cluster` that contains `t`.
    pub fn child_containing(&self, cluster: LeafSet, t: u32) -> Option<LeafSet> {
        self.children(cluster).into_iter().find(|c| c.contains(t))
    }

    /// Coefficient of cluster `J` is 1 exactly when the edge `e_J` lies on
    /// the subtree spanning `set`: `J` meets `set` without containing it.
    pub fn signature(&self, set: LeafSet) -> FormalSum {
        FormalSum {
            coefficients: self
                .clusters
                .iter()
                .map(|c| i64::from(c.intersects(set) && !set.is_subset(*c)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> HierarchyJson {
        HierarchyJson {
            n: self.n,
            k: self.k,
            clusters: self.clusters.iter().map(|c| c.to_vec()).collect(),
        }
    }

    pub fn from_json(json: &HierarchyJson) -> Result<Self> {
        let clusters = json
            .clusters
            .iter()
            .map(|c| LeafSet::try_from_labels(c.iter().map(|&l| l as u64)))
            .collect::<Result<Vec<_>>>()?;
        Hierarchy::new(json.n, json.k, clusters)
    }
}

/// Wire format: `{"n": int, "k": int, "clusters": [[int, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyJson {
    pub n: usize,
    pub k: usize,
    pub clusters: Vec<Vec<u32>>,
}

/// An element of the free Z-module on the clusters of one hierarchy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSum {
    coefficients: Vec<i64>,
}

impl FormalSum {
    pub fn zero(len: usize) -> Self {
        FormalSum {
            coefficients: vec![0; len],
        }
    }

    /// The basis element of the cluster at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut sum = FormalSum::zero(len);
        sum.coefficients[index] = 1;
        sum
    }

    pub fn coefficient(&self, index: usize) -> i64 {
        self.coefficients[index]
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    /// Nonzero coefficients keyed by comma-joined cluster members.
    pub fn named(&self, hierarchy: &Hierarchy) -> BTreeMap<String, i64> {
        hierarchy
            .clusters()
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| **c != 0)
            .map(|(cluster, c)| {
                let key = cluster.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
                (key, *c)
            })
            .collect()
    }
}

impl AddAssign<&FormalSum> for FormalSum {
    fn add_assign(&mut self, rhs: &FormalSum) {
        debug_assert_eq!(self.coefficients.len(), rhs.coefficients.len());
        for (a, b) in self.coefficients.iter_mut().zip(&rhs.coefficients) {
            *a += b;
        }
    }
}

impl SubAssign<&FormalSum> for FormalSum {
    fn sub_assign(&mut self, rhs: &FormalSum) {
        debug_assert_eq!(self.coefficients.len(), rhs.coefficients.len());
        for (a, b) in self.coefficients.iter_mut().zip(&rhs.coefficients) {
            *a -= b;
        }
    }
}

impl Add<&FormalSum> for FormalSum {
    type Output = FormalSum;
    fn add(mut self, rhs: &FormalSum) -> FormalSum {
        self += rhs;
        self
    }
}

impl Sub<&FormalSum> for FormalSum {
    type Output = FormalSum;
    fn sub(mut self, rhs: &FormalSum) -> FormalSum {
        self -= rhs;
        self
    }
}

impl Neg for FormalSum {
    type Output = FormalSum;
    fn neg(mut self) -> FormalSum {
        for c in &mut self.coefficients {
            *c = -*c;
        }
        self
    }
}

/// Which original labels each leaf of a pruned stage stands for.
///
/// A collapsed group is named by its smallest label, and its descendant set
/// is the union of the members' descendant sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descendants {
    sets: BTreeMap<u32, LeafSet>,
}

impl Descendants {
    /// Stage zero: every label stands for itself.
    pub fn identity(n: usize) -> Self {
        Descendants {
            sets: (1..=n as u32).map(|l| (l, LeafSet::singleton(l))).collect(),
        }
    }

    /// Current stage labels.
    pub fn labels(&self) -> LeafSet {
        self.sets.keys().copied().collect()
    }

    pub fn of(&self, label: u32) -> Option<LeafSet> {
        self.sets.get(&label).copied()
    }

    /// Union of the descendant sets of `labels`.
    pub fn closure(&self, labels: LeafSet) -> LeafSet {
        labels
            .iter()
            .filter_map(|l| self.sets.get(&l))
            .fold(LeafSet::EMPTY, |acc, s| acc | *s)
    }

    /// Replaces `group` by its smallest member; returns that label and the
    /// merged descendant set.
    pub fn collapse(&mut self, group: LeafSet) -> (u32, LeafSet) {
        let closure = self.closure(group);
        let rep = group.min().expect("group is nonempty");
        for label in group.iter() {
            self.sets.remove(&label);
        }
        self.sets.insert(rep, closure);
        (rep, closure)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, LeafSet)> + '_ {
        self.sets.iter().map(|(l, s)| (*l, *s))
    }
}

/// One round of good-cherry pruning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneStage {
    /// Good cherries (stage labels) pruned in this round.
    pub pruned: Vec<LeafSet>,
    /// Descendant sets added to the hierarchy in this round.
    pub recorded: Vec<LeafSet>,
    /// Bookkeeping after the round.
    pub descendants: Descendants,
}

/// Stage-by-stage pruning of an essential pseudostar, as used to define its
/// hierarchy. At each stage all good cherries whose descendant set has at
/// most `n-k` labels are pruned and their descendant sets recorded; when the
/// stage's leaves are exactly two such complete cherries only the one whose
/// descendant set holds the smallest label is recorded.
pub fn pruning_stages<S: Scalar>(tree: &WeightedTree<S>, k: usize) -> Result<Vec<PruneStage>> {
    let n = tree.require_standard_labels()?;
    if k < 2 || k + 2 > n {
        return Err(Error::UnsupportedK { n, k });
    }
    if !tree.is_essential() {
        return Err(Error::NotEssential);
    }
    if !tree.is_pseudostar(k) {
        return Err(Error::NotAPseudostar { n, k });
    }
    let mut descendants = Descendants::identity(n);
    let mut current = tree.clone();
    let mut stages = Vec::new();
    loop {
        let complete = current.complete_cherries();
        let selected: Vec<LeafSet> = complete
            .iter()
            .filter(|c| descendants.closure(c.leaves).len() <= n - k && current.is_good_cherry(c))
            .map(|c| c.leaves)
            .collect();
        if selected.is_empty() {
            break;
        }
        let two_cherry_split = complete.len() == 2
            && selected.len() == 2
            && (complete[0].leaves | complete[1].leaves) == current.leaf_labels();
        let recorded: Vec<LeafSet> = if two_cherry_split {
            let closures = [selected[0], selected[1]].map(|c| descendants.closure(c));
            let lowest = (closures[0] | closures[1]).min().expect("nonempty");
            closures.into_iter().filter(|c| c.contains(lowest)).collect()
        } else {
            selected.iter().map(|c| descendants.closure(*c)).collect()
        };
        for cherry in &selected {
            current = current.prune(*cherry)?.tree;
            descendants.collapse(*cherry);
        }
        stages.push(PruneStage {
            pruned: selected,
            recorded,
            descendants: descendants.clone(),
        });
    }
    Ok(stages)
}

/// The hierarchy over `[n]` associated with an essential pseudostar of kind `(n,k)`.
pub fn hierarchy_from_pseudostar<S: Scalar>(tree: &WeightedTree<S>, k: usize) -> Result<Hierarchy> {
    let stages = pruning_stages(tree, k)?;
    let n = tree.leaf_count();
    Hierarchy::new(n, k, stages.into_iter().flat_map(|s| s.recorded))
}

/// A pseudostar built from a hierarchy, with the edge of every cluster and
/// the twig of every leaf identified.
#[derive(Clone, Debug)]
pub struct PseudostarShape<S> {
    pub tree: WeightedTree<S>,
    /// `cluster_edges[idx]` is `e_J` for `J = hierarchy.clusters()[idx]`.
    pub cluster_edges: Vec<EdgeId>,
    /// `twig_edges[label - 1]` is the twig of that leaf.
    pub twig_edges: Vec<EdgeId>,
    /// The central vertex `O`.
    pub center: VertexId,
}

impl<S: Scalar> PseudostarShape<S> {
    /// Sets every cluster and twig weight and returns the weighted tree.
    pub fn with_weights(mut self, cluster_weights: &[S], twig_weights: &[S]) -> WeightedTree<S> {
        assert_eq!(cluster_weights.len(), self.cluster_edges.len());
        assert_eq!(twig_weights.len(), self.twig_edges.len());
        for (e, w) in self.cluster_edges.iter().zip(cluster_weights) {
            self.tree.set_weight(*e, w.clone());
        }
        for (e, w) in self.twig_edges.iter().zip(twig_weights) {
            self.tree.set_weight(*e, w.clone());
        }
        self.tree
    }
}

/// Rebuilds the essential pseudostar of a hierarchy: a star on the labels
/// outside every cluster, with each maximal cluster hanging from its center
/// by one edge and nested clusters hanging recursively. All weights are one.
pub fn pseudostar_from_hierarchy<S: Scalar>(hierarchy: &Hierarchy) -> Result<PseudostarShape<S>> {
    let n = hierarchy.n();
    if n < 3 {
        return Err(Error::InvalidHierarchy(format!("n = {n} is too small for a pseudostar")));
    }
    let maximal = hierarchy.maximal_clusters();
    if hierarchy.covers() && maximal.len() == 2 {
        return Err(Error::TwoMaximalCover);
    }
    let mut builder = TreeBuilder::new();
    let mut cluster_edges = vec![usize::MAX; hierarchy.len()];
    let mut twig_edges = vec![usize::MAX; n];
    let center = builder.add_vertex();
    let loose = LeafSet::full(n) - hierarchy.union();
    for label in loose.iter() {
        let leaf = builder.add_leaf(label);
        twig_edges[label as usize - 1] = builder.add_edge(center, leaf, S::one());
    }
    let mut pending: Vec<(VertexId, LeafSet)> = maximal.into_iter().map(|m| (center, m)).collect();
    while let Some((parent, cluster)) = pending.pop() {
        let node = builder.add_vertex();
        let idx = hierarchy.index_of(cluster).expect("cluster of the hierarchy");
        cluster_edges[idx] = builder.add_edge(parent, node, S::one());
        let children = hierarchy.children(cluster);
        let covered = children.iter().fold(LeafSet::EMPTY, |acc, c| acc | *c);
        for label in (cluster - covered).iter() {
            let leaf = builder.add_leaf(label);
            twig_edges[label as usize - 1] = builder.add_edge(node, leaf, S::one());
        }
        pending.extend(children.into_iter().map(|c| (node, c)));
    }
    Ok(PseudostarShape {
        tree: builder.build()?,
        cluster_edges,
        twig_edges,
        center,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::tree::trees_isomorphic;
    use crate::Rational;

    fn set(labels: &[u32]) -> LeafSet {
        labels.iter().copied().collect()
    }

    fn clusters(h: &Hierarchy) -> Vec<LeafSet> {
        h.clusters().to_vec()
    }

    fn sorted(mut v: Vec<LeafSet>) -> Vec<LeafSet> {
        v.sort();
        v
    }

    fn tree(text: &str) -> WeightedTree<Rational> {
        parse_newick(text).unwrap()
    }

    #[test]
    fn reference_pseudostar_hierarchies() {
        let a = hierarchy_from_pseudostar(&tree("(1,2,3,(4,5,6),((7,8,9),10,11,12));"), 6).unwrap();
        assert_eq!(
            clusters(&a),
            sorted(vec![set(&[4, 5, 6]), set(&[7, 8, 9]), set(&[1, 2, 3, 4, 5, 6])])
        );
        let b = hierarchy_from_pseudostar(&tree("((1,2),(3,4),(5,6,7,8,9,10));"), 5).unwrap();
        assert_eq!(clusters(&b), sorted(vec![set(&[1, 2]), set(&[3, 4]), set(&[1, 2, 3, 4])]));
        let c = hierarchy_from_pseudostar(&tree("((3,4,5),1,2,((6,7),(8,9),10,11,12));"), 5).unwrap();
        assert_eq!(
            clusters(&c),
            sorted(vec![set(&[3, 4, 5]), set(&[6, 7]), set(&[8, 9]), set(&[1, 2, 3, 4, 5])])
        );
    }

    #[test]
    fn star_hierarchy_is_empty() {
        for k in 2..=5 {
            assert!(hierarchy_from_pseudostar(&tree("(1,2,3,4,5,6,7);"), k).unwrap().is_empty());
        }
    }

    #[test]
    fn hierarchy_preconditions() {
        let t = tree("(1,2,3,(4,5,6),((7,8,9),10,11,12));");
        assert_eq!(
            hierarchy_from_pseudostar(&t, 11),
            Err(Error::UnsupportedK { n: 12, k: 11 })
        );
        let caterpillar = tree("((1,2),3,(4,(5,6)));");
        assert_eq!(
            hierarchy_from_pseudostar(&caterpillar, 4),
            Err(Error::NotAPseudostar { n: 6, k: 4 })
        );
        let path = tree("((1,2),(3,4));");
        assert_eq!(hierarchy_from_pseudostar(&path, 2), Err(Error::NotEssential));
    }

    #[test]
    fn pseudostar_from_five_clusters() {
        let h = Hierarchy::new(
            12,
            6,
            [
                set(&[1, 2, 3, 4, 5, 6]),
                set(&[4, 5, 6]),
                set(&[7, 8, 9, 10]),
                set(&[7, 8]),
                set(&[9, 10]),
            ],
        )
        .unwrap();
        let shape = pseudostar_from_hierarchy::<Rational>(&h).unwrap();
        let expected = tree("(11,12,(1,2,3,(4,5,6)),((7,8),(9,10)));");
        assert!(trees_isomorphic(&shape.tree, &expected, false));
        assert_eq!(hierarchy_from_pseudostar(&shape.tree, 6).unwrap(), h);
    }

    #[test]
    fn small_pseudostars_from_hierarchies() {
        let empty = Hierarchy::empty(6, 3).unwrap();
        let star = pseudostar_from_hierarchy::<Rational>(&empty).unwrap();
        assert!(star.tree.is_star());
        assert_eq!(star.tree.leaf_count(), 6);

        let one = Hierarchy::new(6, 4, [set(&[1, 2])]).unwrap();
        let shape = pseudostar_from_hierarchy::<Rational>(&one).unwrap();
        assert!(trees_isomorphic(&shape.tree, &tree("((1,2),3,4,5,6);"), false));

        let split = Hierarchy::new(6, 3, [set(&[1, 2, 3]), set(&[4, 5, 6])]).unwrap();
        assert_eq!(
            pseudostar_from_hierarchy::<Rational>(&split).unwrap_err(),
            Error::TwoMaximalCover
        );
    }

    #[test]
    fn hierarchy_validation() {
        assert!(Hierarchy::new(6, 4, [set(&[1, 2, 3])]).is_err());
        assert!(Hierarchy::new(6, 2, [set(&[1, 2, 3]), set(&[3, 4])]).is_err());
        assert!(Hierarchy::new(6, 2, [set(&[1])]).is_err());
        assert!(Hierarchy::new(6, 2, [set(&[1, 7])]).is_err());
        assert!(Hierarchy::new(6, 2, [set(&[1, 2]), set(&[1, 2])]).is_err());
        let h = Hierarchy::new(6, 2, [set(&[3, 4]), set(&[1, 2, 3, 4])]).unwrap();
        assert_eq!(h.clusters()[0], set(&[1, 2, 3, 4]));
        assert_eq!(Hierarchy::from_json(&h.to_json()).unwrap(), h);
        let text = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(text, r#"{"n":6,"k":2,"clusters":[[1,2,3,4],[3,4]]}"#);
    }

    #[test]
    fn signatures() {
        let h = Hierarchy::new(
            12,
            6,
            [set(&[4, 5, 6]), set(&[7, 8, 9]), set(&[1, 2, 3, 4, 5, 6])],
        )
        .unwrap();
        let all = h.signature(LeafSet::full(12));
        assert!(all.coefficients().iter().all(|&c| c == 1));
        let s = h.signature(set(&[4, 7, 10, 11, 12, 1]));
        assert!(s.coefficients().iter().all(|&c| c == 1));
        // inside the minimal cluster {4,5,6}
        let inner = h.signature(set(&[4, 5]));
        assert_eq!(inner.named(&h), BTreeMap::new());
        let partial = h.signature(set(&[4, 1]));
        assert_eq!(
            partial.named(&h),
            BTreeMap::from([("4,5,6".to_string(), 1)])
        );
        let diff = h.signature(set(&[4, 7])) - &h.signature(set(&[5, 7]));
        assert!(diff.is_zero());
    }

    #[test]
    fn descendant_bookkeeping() {
        let t = tree("((1,2),(3,4),(5,6,7,8,9,10));");
        let stages = pruning_stages(&t, 5).unwrap();
        assert_eq!(stages.len(), 2);
        let first = &stages[0].descendants;
        assert_eq!(first.of(1), Some(set(&[1, 2])));
        assert_eq!(first.of(3), Some(set(&[3, 4])));
        assert_eq!(first.of(2), None);
        let second = &stages[1].descendants;
        assert_eq!(second.of(1), Some(set(&[1, 2, 3, 4])));
        let d0 = Descendants::identity(10);
        assert_eq!(d0.of(7), Some(set(&[7])));
        for stage in &stages {
            let mut union = LeafSet::EMPTY;
            for (_, s) in stage.descendants.iter() {
                assert!(!union.intersects(s));
                union = union | s;
            }
            assert_eq!(union, LeafSet::full(10));
        }
    }
}
