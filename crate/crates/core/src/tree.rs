//! Weighted leaf-labeled trees.
//!
//! Vertices are opaque indices. Every degree-1 vertex carries a leaf label
//! and no internal vertex does. Labels live in `1..=64` (see [`LeafSet`]).

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::leafset::LeafSet;
use crate::scalar::Scalar;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub ends: (VertexId, VertexId),
    pub weight: S,
}

/// The topology of a tree restricted to four leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuartetTopology {
    /// `⟨a,b|c,d⟩`: pairs are sorted internally, and by their first element.
    Split([u32; 2], [u32; 2]),
    /// All four leaves meet at a common vertex.
    Star,
}

impl QuartetTopology {
    pub fn split(i: u32, j: u32, l: u32, m: u32) -> Self {
        let p = [i.min(j), i.max(j)];
        let q = [l.min(m), l.max(m)];
        if p[0] < q[0] {
            QuartetTopology::Split(p, q)
        } else {
            QuartetTopology::Split(q, p)
        }
    }

    /// Whether this is exactly `⟨i,j|l,m⟩`.
    pub fn is_split(&self, i: u32, j: u32, l: u32, m: u32) -> bool {
        *self == QuartetTopology::split(i, j, l, m)
    }
}

/// A complete cherry together with its stalk vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cherry {
    pub leaves: LeafSet,
    pub stalk: VertexId,
}

/// Result of pruning a cherry.
#[derive(Clone, Debug)]
pub struct Pruned<S> {
    pub tree: WeightedTree<S>,
    /// The stalk's id in the pruned tree.
    pub stalk: VertexId,
    /// Whether the stalk became a leaf; if so it carries `min(cherry)` as label.
    pub stalk_is_leaf: bool,
}

/// `==` compares representations; use [`trees_isomorphic`] to compare trees.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTree<S> {
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<Edge<S>>,
    labels: Vec<Option<u32>>,
    leaves: BTreeMap<u32, VertexId>,
}

/// Incremental construction of a [`WeightedTree`].
#[derive(Clone, Debug, Default)]
pub struct TreeBuilder<S> {
    vertex_count: usize,
    labels: Vec<(VertexId, u32)>,
    edges: Vec<(VertexId, VertexId, S)>,
}

impl<S: Scalar> TreeBuilder<S> {
    pub fn new() -> Self {
        TreeBuilder {
            vertex_count: 0,
            labels: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_leaf(&mut self, label: u32) -> VertexId {
        let v = self.add_vertex();
        self.labels.push((v, label));
        v
    }

    pub fn label(&mut self, vertex: VertexId, label: u32) {
        self.labels.push((vertex, label));
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: S) -> EdgeId {
        self.edges.push((u, v, weight));
        self.edges.len() - 1
    }

    /// Validates and builds; requires at least two leaves.
    pub fn build(self) -> Result<WeightedTree<S>> {
        let tree = WeightedTree::from_parts(self.vertex_count, self.labels, self.edges)?;
        if tree.leaf_count() < 2 {
            return Err(Error::InvalidTree("a tree needs at least two leaves".into()));
        }
        Ok(tree)
    }
}

impl<S: Scalar> WeightedTree<S> {
    /// Builds a tree from raw parts, checking connectivity, acyclicity and
    /// the labeling rules. Trees with fewer than two leaves are accepted here
    /// (they only arise from pruning).
    pub fn from_parts(
        vertex_count: usize,
        labels: Vec<(VertexId, u32)>,
        edges: Vec<(VertexId, VertexId, S)>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() + 1 != vertex_count {
            return Err(Error::InvalidTree(format!(
                "{} vertices need {} edges, got {}",
                vertex_count,
                vertex_count - 1,
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut stored = Vec::with_capacity(edges.len());
        for (id, (u, v, weight)) in edges.into_iter().enumerate() {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::InvalidTree(format!("bad edge ({u},{v})")));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            stored.push(Edge { ends: (u, v), weight });
        }
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached != vertex_count {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        let mut label_of = vec![None; vertex_count];
        let mut leaves = BTreeMap::new();
        for (v, label) in labels {
            if v >= vertex_count {
                return Err(Error::InvalidTree(format!("label on missing vertex {v}")));
            }
            if !(1..=crate::leafset::MAX_LABEL).contains(&label) {
                return Err(Error::LabelOutOfRange(label as u64));
            }
            if label_of[v].replace(label).is_some() {
                return Err(Error::InvalidTree(format!("vertex {v} labeled twice")));
            }
            if leaves.insert(label, v).is_some() {
                return Err(Error::InvalidTree(format!("label {label} used twice")));
            }
        }
        for v in 0..vertex_count {
            let degree = adjacency[v].len();
            match (degree, label_of[v]) {
                (1, None) => {
                    return Err(Error::InvalidTree(format!("leaf vertex {v} has no label")))
                }
                (d, Some(label)) if d > 1 => {
                    return Err(Error::InvalidTree(format!(
                        "internal vertex {v} carries label {label}"
                    )))
                }
                _ => {}
            }
        }
        Ok(WeightedTree {
            adjacency,
            edges: stored,
            labels: label_of,
            leaves,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<S> {
        &self.edges[id]
    }

    pub fn set_weight(&mut self, id: EdgeId, weight: S) {
        self.edges[id].weight = weight;
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn label(&self, v: VertexId) -> Option<u32> {
        self.labels[v]
    }

    pub fn leaf(&self, label: u32) -> Option<VertexId> {
        self.leaves.get(&label).copied()
    }

    pub fn leaf_labels(&self) -> LeafSet {
        self.leaves.keys().copied().collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Checks that the leaf labels are exactly `{1, ..., n}` and returns `n`.
    pub fn require_standard_labels(&self) -> Result<usize> {
        let n = self.leaf_count();
        if n < 2 || self.leaf_labels() != LeafSet::full(n) {
            return Err(Error::InvalidTree(format!(
                "leaf labels must be exactly 1..={n}, got {:?}",
                self.leaf_labels()
            )));
        }
        Ok(n)
    }

    /// A node is a vertex of degree at least 3.
    pub fn is_node(&self, v: VertexId) -> bool {
        self.degree(v) >= 3
    }

    fn check_labels(&self, set: LeafSet) -> Result<()> {
        match (set - self.leaf_labels()).min() {
            Some(label) => Err(Error::UnknownLabel(label)),
            None => Ok(()),
        }
    }

    /// For each edge, the leaves on the side of `edge.ends.1`.
    pub fn edge_sides(&self) -> Vec<LeafSet> {
        let n = self.vertex_count();
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![0];
        let mut seen = vec![false; n];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, e) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = (v, e);
                    stack.push(w);
                }
            }
        }
        let mut below = vec![LeafSet::EMPTY; n];
        for &v in order.iter().rev() {
            if let Some(label) = self.labels[v] {
                below[v].insert(label);
            }
            let (p, _) = parent[v];
            if p != usize::MAX {
                below[p] = below[p] | below[v];
            }
        }
        let all = self.leaf_labels();
        let mut sides = vec![LeafSet::EMPTY; self.edges.len()];
        for v in 1..n {
            let (_, e) = parent[v];
            sides[e] = if self.edges[e].ends.1 == v {
                below[v]
            } else {
                all - below[v]
            };
        }
        sides
    }

    /// Edges whose removal leaves members of `set` on both sides.
    pub fn minimal_spanning_subtree(&self, set: LeafSet) -> Result<Vec<EdgeId>> {
        if set.is_empty() {
            return Err(Error::InvalidTree("empty leaf set".into()));
        }
        self.check_labels(set)?;
        Ok(self
            .edge_sides()
            .into_iter()
            .enumerate()
            .filter(|(_, side)| separates(*side, set))
            .map(|(e, _)| e)
            .collect())
    }

    /// Total weight of the minimal subtree spanning `set`.
    pub fn steiner_weight(&self, set: LeafSet) -> Result<S> {
        Ok(self
            .minimal_spanning_subtree(set)?
            .into_iter()
            .fold(S::zero(), |acc, e| acc + self.edges[e].weight.clone()))
    }

    /// Precomputed edge bipartitions for evaluating many k-weights.
    pub fn split_table(&self) -> SplitTable<'_, S> {
        SplitTable {
            sides: self.edge_sides(),
            tree: self,
        }
    }

    /// The twig of a leaf: edges from the leaf to its nearest node, and the
    /// node itself. `None` when the path reaches another leaf first.
    pub fn twig(&self, label: u32) -> Option<(VertexId, Vec<EdgeId>)> {
        let start = self.leaf(label)?;
        let mut path = Vec::new();
        let mut previous = usize::MAX;
        let mut current = start;
        loop {
            let next = self.adjacency[current]
                .iter()
                .find(|(w, _)| *w != previous)
                .copied();
            let (w, e) = next?;
            path.push(e);
            previous = current;
            current = w;
            match self.degree(current) {
                d if d >= 3 => return Some((current, path)),
                2 => continue,
                _ => return None,
            }
        }
    }

    /// Two leaves are neighbours when the path between them has exactly one node.
    pub fn are_neighbours(&self, i: u32, j: u32) -> bool {
        i != j
            && matches!((self.twig(i), self.twig(j)), (Some((a, _)), Some((b, _))) if a == b)
    }

    /// Complete (inclusion-maximal) cherries, ordered by their leaf sets.
    pub fn complete_cherries(&self) -> Vec<Cherry> {
        let mut by_stalk: BTreeMap<VertexId, LeafSet> = BTreeMap::new();
        for &label in self.leaves.keys() {
            if let Some((stalk, _)) = self.twig(label) {
                by_stalk.entry(stalk).or_default().insert(label);
            }
        }
        let mut cherries: Vec<Cherry> = by_stalk
            .into_iter()
            .filter(|(_, leaves)| leaves.len() >= 2)
            .map(|(stalk, leaves)| Cherry { leaves, stalk })
            .collect();
        cherries.sort_by_key(|c| c.leaves);
        cherries
    }

    /// Alias for [`Self::complete_cherries`]: the inclusion-maximal cherries.
    pub fn cherries(&self) -> Vec<Cherry> {
        self.complete_cherries()
    }

    pub fn is_good_cherry(&self, cherry: &Cherry) -> bool {
        self.prune(cherry.leaves)
            .map(|p| p.stalk_is_leaf)
            .unwrap_or(false)
    }

    /// Complete cherries whose stalk becomes a leaf once they are pruned.
    pub fn good_cherries(&self) -> Vec<Cherry> {
        self.complete_cherries()
            .into_iter()
            .filter(|c| self.is_good_cherry(c))
            .collect()
    }

    /// Contracts the twigs of every member of `cherry`. If the stalk turns
    /// into a leaf it is labeled with the smallest member label.
    pub fn prune(&self, cherry: LeafSet) -> Result<Pruned<S>> {
        if cherry.len() < 2 {
            return Err(Error::NotACherry);
        }
        self.check_labels(cherry)?;
        let mut stalk = None;
        let mut dropped_vertices = vec![false; self.vertex_count()];
        let mut dropped_edges = vec![false; self.edges.len()];
        for label in cherry.iter() {
            let (node, path) = self.twig(label).ok_or(Error::NotACherry)?;
            if *stalk.get_or_insert(node) != node {
                return Err(Error::NotACherry);
            }
            for e in path {
                dropped_edges[e] = true;
                let (u, v) = self.edges[e].ends;
                for w in [u, v] {
                    if w != node {
                        dropped_vertices[w] = true;
                    }
                }
            }
        }
        let stalk = stalk.expect("cherry is nonempty");
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        let mut count = 0;
        for v in 0..self.vertex_count() {
            if !dropped_vertices[v] {
                new_id[v] = count;
                count += 1;
            }
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| !dropped_edges[*e])
            .map(|(_, edge)| (new_id[edge.ends.0], new_id[edge.ends.1], edge.weight.clone()))
            .collect();
        let mut labels: Vec<_> = self
            .leaves
            .iter()
            .filter(|(label, _)| !cherry.contains(**label))
            .map(|(label, v)| (new_id[*v], *label))
            .collect();
        let stalk_degree = self.degree(stalk) - cherry.len();
        let stalk_is_leaf = stalk_degree == 1;
        if stalk_is_leaf {
            labels.push((new_id[stalk], cherry.min().expect("nonempty")));
        }
        Ok(Pruned {
            tree: WeightedTree::from_parts(count, labels, edges)?,
            stalk: new_id[stalk],
            stalk_is_leaf,
        })
    }

    /// Every edge splits the leaves into two parts, one of size at least `k`.
    pub fn is_pseudostar(&self, k: usize) -> bool {
        let n = self.leaf_count();
        self.edge_sides()
            .into_iter()
            .all(|side| side.len().max(n - side.len()) >= k)
    }

    pub fn is_essential(&self) -> bool {
        (0..self.vertex_count()).all(|v| self.degree(v) != 2)
    }

    pub fn is_star(&self) -> bool {
        (0..self.vertex_count()).filter(|&v| self.degree(v) >= 2).count() == 1
            && self.is_essential()
    }

    /// Topology of the subtree spanned by four distinct leaves.
    pub fn quartet_topology(&self, i: u32, j: u32, l: u32, m: u32) -> Result<QuartetTopology> {
        let quad: LeafSet = [i, j, l, m].into_iter().collect();
        if quad.len() != 4 {
            return Err(Error::InvalidTree(format!(
                "quartet needs four distinct labels, got {i},{j},{l},{m}"
            )));
        }
        self.check_labels(quad)?;
        for side in self.edge_sides() {
            let part = side & quad;
            if part.len() == 2 {
                let pair = part.to_vec();
                let rest = (quad - part).to_vec();
                return Ok(QuartetTopology::split(pair[0], pair[1], rest[0], rest[1]));
            }
        }
        Ok(QuartetTopology::Star)
    }

    /// A string that two trees share exactly when a label-preserving
    /// isomorphism exists (and, with `with_weights`, it preserves weights).
    pub fn canonical_form(&self, with_weights: bool) -> String {
        let Some(&first) = self.leaves.values().next() else {
            return "()".to_string();
        };
        let root = match self.adjacency[first].first() {
            Some(&(next, _)) if self.labels[next].is_none() => next,
            _ => first,
        };
        let mut out = String::new();
        if self.label(root).is_some() {
            // Two-leaf single-edge tree: root it at its smaller leaf.
            out.push('(');
            let (child, e) = self.adjacency[root][0];
            self.encode(child, root, Some(e), with_weights, &mut out);
            out.push(')');
            out.push_str(&self.label(root).expect("leaf").to_string());
        } else {
            self.encode(root, usize::MAX, None, with_weights, &mut out);
        }
        out
    }

    fn min_leaf_below(&self, v: VertexId, parent: VertexId) -> u32 {
        let mut best = u32::MAX;
        let mut stack = vec![(v, parent)];
        while let Some((x, p)) = stack.pop() {
            if let Some(label) = self.labels[x] {
                best = best.min(label);
            }
            for &(w, _) in &self.adjacency[x] {
                if w != p {
                    stack.push((w, x));
                }
            }
        }
        best
    }

    fn encode(
        &self,
        v: VertexId,
        parent: VertexId,
        via: Option<EdgeId>,
        with_weights: bool,
        out: &mut String,
    ) {
        if let Some(label) = self.labels[v] {
            if parent != usize::MAX || self.degree(v) == 0 {
                out.push_str(&label.to_string());
            }
        }
        let mut children: Vec<(u32, VertexId, EdgeId)> = self.adjacency[v]
            .iter()
            .filter(|(w, _)| *w != parent)
            .map(|&(w, e)| (self.min_leaf_below(w, v), w, e))
            .collect();
        if !children.is_empty() && self.labels[v].is_none() {
            children.sort();
            out.push('(');
            for (idx, (_, w, e)) in children.into_iter().enumerate() {
                if idx > 0 {
                    out.push(',');
                }
                self.encode(w, v, Some(e), with_weights, out);
            }
            out.push(')');
        }
        if let (true, Some(e)) = (with_weights, via) {
            out.push(':');
            out.push_str(&self.edges[e].weight.render());
        }
    }
}

/// Whether the edge with leaf side `side` lies on the subtree spanning `set`.
pub fn separates(side: LeafSet, set: LeafSet) -> bool {
    side.intersects(set) && !set.is_subset(side)
}

/// Label-preserving isomorphism test, optionally comparing weights exactly.
pub fn trees_isomorphic<S: Scalar>(
    a: &WeightedTree<S>,
    b: &WeightedTree<S>,
    compare_weights: bool,
) -> bool {
    a.leaf_labels() == b.leaf_labels()
        && a.canonical_form(compare_weights) == b.canonical_form(compare_weights)
}

/// Edge bipartitions cached for repeated k-weight evaluation.
pub struct SplitTable<'a, S> {
    sides: Vec<LeafSet>,
    tree: &'a WeightedTree<S>,
}

impl<S: Scalar> SplitTable<'_, S> {
    pub fn weight(&self, set: LeafSet) -> S {
        self.sides
            .iter()
            .zip(self.tree.edges())
            .filter(|(side, _)| separates(**side, set))
            .fold(S::zero(), |acc, (_, edge)| acc + edge.weight.clone())
    }

    pub fn sides(&self) -> &[LeafSet] {
        &self.sides
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::Rational;

    fn tree(text: &str) -> WeightedTree<Rational> {
        parse_newick(text).unwrap()
    }

    fn set(labels: &[u32]) -> LeafSet {
        labels.iter().copied().collect()
    }

    fn r(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    #[test]
    fn path_with_pendant_leaf() {
        // 1 - a - b - 2, leaf 3 on a, leaf 4 on b
        let mut b = TreeBuilder::new();
        let l1 = b.add_leaf(1);
        let l2 = b.add_leaf(2);
        let l3 = b.add_leaf(3);
        let l4 = b.add_leaf(4);
        let va = b.add_vertex();
        let vb = b.add_vertex();
        let e1a = b.add_edge(l1, va, r(1));
        let eab = b.add_edge(va, vb, r(-3));
        let eb2 = b.add_edge(vb, l2, r(2));
        b.add_edge(va, l3, r(5));
        b.add_edge(vb, l4, r(7));
        let t = b.build().unwrap();
        let mut edges = t.minimal_spanning_subtree(set(&[1, 2])).unwrap();
        edges.sort();
        assert_eq!(edges, vec![e1a, eab, eb2]);
        assert_eq!(t.steiner_weight(set(&[1, 2])).unwrap(), r(0));
        assert_eq!(t.steiner_weight(set(&[2, 1])).unwrap(), r(0));
        assert_eq!(
            t.minimal_spanning_subtree(set(&[1, 9])),
            Err(Error::UnknownLabel(9))
        );
    }

    #[test]
    fn star_spans_all_twigs() {
        let t = tree("(1:1,2:1,3:1,4:1);");
        assert_eq!(t.minimal_spanning_subtree(t.leaf_labels()).unwrap().len(), 4);
        assert_eq!(t.steiner_weight(set(&[1, 2, 3])).unwrap(), r(3));
        assert!(t.is_star());
    }

    #[test]
    fn good_and_bad_cherries() {
        let t = tree("((1,2,3),4,5,(6,7));");
        let good: Vec<_> = t.good_cherries().into_iter().map(|c| c.leaves).collect();
        assert_eq!(good, vec![set(&[1, 2, 3]), set(&[6, 7])]);
        let complete: Vec<_> = t.complete_cherries().into_iter().map(|c| c.leaves).collect();
        assert!(complete.contains(&set(&[4, 5])));
        let bad = t.complete_cherries().into_iter().find(|c| c.leaves == set(&[4, 5])).unwrap();
        let pruned = t.prune(bad.leaves).unwrap();
        assert!(!pruned.stalk_is_leaf);
        assert_eq!(pruned.tree.degree(pruned.stalk), 2);
    }

    #[test]
    fn star_leaf_set_is_bad_cherry() {
        let t = tree("(1,2,3,4,5);");
        let complete = t.complete_cherries();
        assert_eq!(complete.len(), 1);
        assert_eq!(complete[0].leaves, set(&[1, 2, 3, 4, 5]));
        assert!(t.good_cherries().is_empty());
    }

    #[test]
    fn pruning() {
        let t = tree("((1,2,3),4,5,(6,7));");
        let p = t.prune(set(&[6, 7])).unwrap();
        assert!(p.stalk_is_leaf);
        assert_eq!(p.tree.label(p.stalk), Some(6));
        assert_eq!(p.tree.leaf_count(), 6);

        let star = tree("(1,2,3,4);");
        let p = star.prune(set(&[1, 2])).unwrap();
        assert!(!p.stalk_is_leaf);
        assert!(!p.tree.is_essential());
        assert_eq!(p.tree.leaf_labels(), set(&[3, 4]));
        // the stalk keeps two leaves and is unlabeled: 3 vertices now
        assert_eq!(p.tree.vertex_count(), 3);

        let p = t.prune(set(&[1, 2, 3])).unwrap();
        let p = p.tree.prune(set(&[6, 7])).unwrap();
        assert_eq!(p.tree.leaf_labels(), set(&[1, 4, 5, 6]));
        assert!(p.tree.is_star());

        assert_eq!(t.prune(set(&[1, 6])).unwrap_err(), Error::NotACherry);
        assert_eq!(t.prune(set(&[1])).unwrap_err(), Error::NotACherry);
    }

    #[test]
    fn pseudostar_and_essential() {
        let three_cherries = tree("(1,2,3,4,(5,6),(7,8),(9,10));");
        assert!(three_cherries.is_pseudostar(8));
        assert!(!three_cherries.is_pseudostar(9));
        let star = tree("(1,2,3,4,5,6);");
        assert!(star.is_pseudostar(5));
        let caterpillar = tree("((1,2),3,(4,(5,6)));");
        assert!(caterpillar.is_pseudostar(3));

        let edge = TreeBuilder::<Rational>::new();
        let mut edge = edge;
        let a = edge.add_leaf(1);
        let b = edge.add_leaf(2);
        edge.add_edge(a, b, r(1));
        assert!(edge.build().unwrap().is_essential());

        let mut path = TreeBuilder::<Rational>::new();
        let a = path.add_leaf(1);
        let m = path.add_vertex();
        let b = path.add_leaf(2);
        path.add_edge(a, m, r(1));
        path.add_edge(m, b, r(1));
        assert!(!path.build().unwrap().is_essential());

        assert!(tree("(11,12,(1,2,3,(4,5,6)),((7,8),(9,10)));").is_essential());
    }

    #[test]
    fn quartets() {
        let two_groups = tree("(11,12,(1,2,3,(4,5,6)),((7,8),(9,10)));");
        assert_eq!(
            two_groups.quartet_topology(1, 2, 7, 9).unwrap(),
            QuartetTopology::split(1, 2, 7, 9)
        );
        assert_eq!(
            tree("(1,2,3,4);").quartet_topology(1, 2, 3, 4).unwrap(),
            QuartetTopology::Star
        );
        let mixed_cherries = tree("((1,2,3),4,5,(6,7));");
        assert!(mixed_cherries.quartet_topology(1, 2, 6, 7).unwrap().is_split(1, 2, 6, 7));
        assert!(mixed_cherries.quartet_topology(7, 6, 2, 1).unwrap().is_split(1, 2, 6, 7));
        assert!(mixed_cherries.quartet_topology(1, 1, 6, 7).is_err());
    }

    #[test]
    fn isomorphism() {
        let a = tree("(1:1,(2:1,3:2):5,4:1);");
        let b = tree("((3:2,2:1):5,4:1,1:1);");
        assert!(trees_isomorphic(&a, &b, true));
        let c = tree("((3:2,2:1):6,4:1,1:1);");
        assert!(trees_isomorphic(&a, &c, false));
        assert!(!trees_isomorphic(&a, &c, true));
        let star = tree("(1,2,3,4);");
        let cat = tree("((1,2),3,4);");
        assert!(!trees_isomorphic(&star, &cat, false));
    }

    #[test]
    fn neighbours_through_degree_two_vertices() {
        let mut b = TreeBuilder::<Rational>::new();
        let c = b.add_vertex();
        let m = b.add_vertex();
        let l1 = b.add_leaf(1);
        let l2 = b.add_leaf(2);
        let l3 = b.add_leaf(3);
        b.add_edge(c, m, r(1));
        b.add_edge(m, l1, r(1));
        b.add_edge(c, l2, r(1));
        b.add_edge(c, l3, r(1));
        let t = b.build().unwrap();
        assert!(t.are_neighbours(1, 2));
        assert_eq!(t.twig(1).unwrap().1.len(), 2);
        let p = t.prune(set(&[1, 2])).unwrap();
        assert!(p.stalk_is_leaf);
        assert_eq!(p.tree.vertex_count(), 2);
    }

    #[test]
    fn builder_rejects_bad_shapes() {
        let mut b = TreeBuilder::<Rational>::new();
        let x = b.add_leaf(1);
        let y = b.add_vertex();
        b.add_edge(x, y, r(1));
        assert!(b.build().is_err());

        let mut b = TreeBuilder::<Rational>::new();
        let x = b.add_leaf(1);
        let y = b.add_leaf(1);
        b.add_edge(x, y, r(1));
        assert!(b.build().is_err());
    }
}
