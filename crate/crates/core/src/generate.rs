//! Seeded random trees, pseudostars and hierarchies.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{pseudostar_from_hierarchy, Hierarchy};
use crate::leafset::{LeafSet, MAX_LABEL};
use crate::scalar::Scalar;
use crate::tree::{TreeBuilder, WeightedTree};

/// Default cap on `n` for generated instances.
pub const DEFAULT_MAX_N: usize = 14;

/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "MULTIWEIGHT_MAX_N";

/// The cap on `n`, read from `MULTIWEIGHT_MAX_N` when set.
pub fn max_n() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .map(|v: usize| v.min(MAX_LABEL as usize))
        .unwrap_or(DEFAULT_MAX_N)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    /// Every weight strictly positive.
    Positive,
    /// Internal edges nonzero; twigs unrestricted.
    InternalNonzero,
    /// Any value in range, zero included.
    Unrestricted,
}

/// Weights are drawn as `p/q` with `1 <= q <= max_denominator` and
/// `low <= p/q <= high`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRange {
    pub low: i64,
    pub high: i64,
    pub max_denominator: i64,
}

impl Default for WeightRange {
    fn default() -> Self {
        WeightRange {
            low: -5,
            high: 5,
            max_denominator: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub weight_range: WeightRange,
    pub sign_mode: SignMode,
    pub max_n: usize,
}

impl GeneratorConfig {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            k,
            seed,
            weight_range: WeightRange::default(),
            sign_mode: SignMode::InternalNonzero,
            max_n: max_n(),
        }
    }

    pub fn with_sign_mode(mut self, mode: SignMode) -> Self {
        self.sign_mode = mode;
        self
    }

    pub fn with_weight_range(mut self, range: WeightRange) -> Self {
        self.weight_range = range;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn validate(&self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        if n < 3 || k == 0 || k >= n {
            return Err(Error::InfeasibleShape(format!(
                "no essential pseudostar of kind ({n},{k}) with at least three leaves"
            )));
        }
        if n > self.max_n {
            return Err(Error::InfeasibleShape(format!(
                "n = {n} exceeds the cap {} (set {MAX_N_ENV} to raise it)",
                self.max_n
            )));
        }
        let r = self.weight_range;
        if r.max_denominator < 1 || r.low > r.high {
            return Err(Error::InfeasibleShape(format!("empty weight range {r:?}")));
        }
        let allows = |positive: bool, nonzero: bool| {
            if positive {
                r.high > 0
            } else if nonzero {
                r.low < 0 || r.high > 0
            } else {
                true
            }
        };
        let ok = match self.sign_mode {
            SignMode::Positive => allows(true, true),
            SignMode::InternalNonzero => allows(false, true),
            SignMode::Unrestricted => true,
        };
        if !ok {
            return Err(Error::InfeasibleShape(format!(
                "weight range {r:?} has no value allowed by {:?}",
                self.sign_mode
            )));
        }
        Ok(())
    }
}

/// A rational `p/q` in the range; `nonzero` / `positive` resample.
pub fn sample_weight<S: Scalar, R: Rng>(rng: &mut R, range: WeightRange, positive: bool, nonzero: bool) -> S {
    loop {
        let q = rng.gen_range(1..=range.max_denominator);
        let p = rng.gen_range(range.low * q..=range.high * q);
        if (positive && p <= 0) || (nonzero && p == 0) {
            continue;
        }
        return S::from_ratio(p, q);
    }
}

/// A random hierarchy over `[n]` with clusters of size `2..=n-k`, never
/// covering `[n]` with exactly two maximal clusters.
pub fn random_hierarchy<R: Rng>(rng: &mut R, n: usize, k: usize) -> Result<Hierarchy> {
    if n < 3 || k == 0 || k >= n {
        return Err(Error::InfeasibleShape(format!("no hierarchy shape for ({n},{k})")));
    }
    let limit = n - k;
    loop {
        let mut tops: Vec<LeafSet> = (1..=n as u32).map(LeafSet::singleton).collect();
        let mut clusters = Vec::new();
        let merges = rng.gen_range(0..=n);
        for _ in 0..merges {
            tops.shuffle(rng);
            let want = rng.gen_range(2..=4usize);
            let mut group = Vec::new();
            let mut union = LeafSet::EMPTY;
            for (idx, t) in tops.iter().enumerate() {
                if group.len() == want {
                    break;
                }
                if (union | *t).len() <= limit {
                    union = union | *t;
                    group.push(idx);
                }
            }
            if group.len() < 2 {
                break;
            }
            for idx in group.into_iter().rev() {
                tops.swap_remove(idx);
            }
            tops.push(union);
            clusters.push(union);
        }
        let hierarchy = Hierarchy::new(n, k, clusters)?;
        if !(hierarchy.covers() && hierarchy.maximal_clusters().len() == 2) {
            return Ok(hierarchy);
        }
    }
}

/// A random essential pseudostar of kind `(n,k)` with weights drawn per
/// the configured sign mode. Deterministic in the seed.
pub fn random_pseudostar<S: Scalar>(config: &GeneratorConfig) -> Result<WeightedTree<S>> {
    let mut rng = config.rng();
    random_pseudostar_with(config, &mut rng)
}

/// As [`random_pseudostar`], drawing from a caller-supplied generator.
pub fn random_pseudostar_with<S: Scalar, R: Rng>(config: &GeneratorConfig, rng: &mut R) -> Result<WeightedTree<S>> {
    config.validate()?;
    let hierarchy = random_hierarchy(rng, config.n, config.k)?;
    let shape = pseudostar_from_hierarchy::<S>(&hierarchy)?;
    let range = config.weight_range;
    let (positive, internal_nonzero) = match config.sign_mode {
        SignMode::Positive => (true, true),
        SignMode::InternalNonzero => (false, true),
        SignMode::Unrestricted => (false, false),
    };
    let cluster_weights: Vec<S> = (0..shape.cluster_edges.len())
        .map(|_| sample_weight(rng, range, positive, internal_nonzero))
        .collect();
    let twig_weights: Vec<S> = (0..shape.twig_edges.len())
        .map(|_| sample_weight(rng, range, positive, positive))
        .collect();
    Ok(shape.with_weights(&cluster_weights, &twig_weights))
}

/// A random tree on `[n]` of arbitrary shape. Internal vertices have
/// degree at least three unless `degree_two` is set, in which case some
/// edges are subdivided.
pub fn random_tree<S: Scalar, R: Rng>(
    rng: &mut R,
    n: usize,
    range: WeightRange,
    positive: bool,
    degree_two: bool,
) -> Result<WeightedTree<S>> {
    if !(2..=MAX_LABEL as usize).contains(&n) {
        return Err(Error::InfeasibleShape(format!("n = {n} leaves")));
    }
    let mut labels: Vec<u32> = (1..=n as u32).collect();
    labels.shuffle(rng);
    // vertices 0..; edges as (u, v); vertex v is a leaf iff leaf_of[v] is set
    let mut leaf_of: Vec<Option<u32>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let new_vertex = |leaf_of: &mut Vec<Option<u32>>, label: Option<u32>| {
        leaf_of.push(label);
        leaf_of.len() - 1
    };
    if n == 2 {
        let a = new_vertex(&mut leaf_of, Some(labels[0]));
        let b = new_vertex(&mut leaf_of, Some(labels[1]));
        edges.push((a, b));
    } else {
        let center = new_vertex(&mut leaf_of, None);
        for &label in &labels[..3] {
            let leaf = new_vertex(&mut leaf_of, Some(label));
            edges.push((center, leaf));
        }
        for &label in &labels[3..] {
            let leaf = new_vertex(&mut leaf_of, Some(label));
            let internal: Vec<usize> = (0..leaf_of.len() - 1).filter(|&v| leaf_of[v].is_none()).collect();
            if rng.gen_bool(0.5) {
                let at = *internal.choose(rng).expect("an internal vertex");
                edges.push((at, leaf));
            } else {
                let e = rng.gen_range(0..edges.len());
                let (u, v) = edges[e];
                let mid = new_vertex(&mut leaf_of, None);
                edges[e] = (u, mid);
                edges.push((mid, v));
                edges.push((mid, leaf));
            }
        }
    }
    if degree_two {
        let extra = rng.gen_range(0..=edges.len() / 2);
        for _ in 0..extra {
            let e = rng.gen_range(0..edges.len());
            let (u, v) = edges[e];
            let mid = new_vertex(&mut leaf_of, None);
            edges[e] = (u, mid);
            edges.push((mid, v));
        }
    }
    let mut builder = TreeBuilder::new();
    let ids: Vec<usize> = leaf_of
        .iter()
        .map(|label| match label {
            Some(l) => builder.add_leaf(*l),
            None => builder.add_vertex(),
        })
        .collect();
    for (u, v) in edges {
        builder.add_edge(ids[u], ids[v], sample_weight(rng, range, positive, positive));
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::hierarchy_from_pseudostar;
    use crate::newick::to_newick;
    use crate::Rational;

    #[test]
    fn k_one_less_than_n_gives_a_star() {
        for seed in 0..20 {
            let t: WeightedTree<Rational> = random_pseudostar(&GeneratorConfig::new(10, 9, seed)).unwrap();
            assert!(t.is_star());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let config = GeneratorConfig::new(12, 6, 1);
        let a: WeightedTree<Rational> = random_pseudostar(&config).unwrap();
        let b: WeightedTree<Rational> = random_pseudostar(&config).unwrap();
        assert_eq!(to_newick(&a), to_newick(&b));
    }

    #[test]
    fn pseudostars_have_the_requested_kind() {
        for seed in 0..100 {
            let config = GeneratorConfig::new(12, 6, seed);
            let t: WeightedTree<Rational> = random_pseudostar(&config).unwrap();
            assert!(t.is_pseudostar(6) && t.is_essential());
            assert_eq!(t.leaf_count(), 12);
            let h = hierarchy_from_pseudostar(&t, 6).unwrap();
            assert!(h.clusters().iter().all(|c| c.len() <= 6));
        }
    }

    #[test]
    fn sign_modes() {
        for seed in 0..20 {
            let config = GeneratorConfig::new(9, 5, seed).with_sign_mode(SignMode::Positive);
            let t: WeightedTree<Rational> = random_pseudostar(&config).unwrap();
            assert!(t.edges().iter().all(|e| e.weight.is_strictly_positive()));
        }
        let bad = GeneratorConfig::new(9, 5, 0)
            .with_sign_mode(SignMode::Positive)
            .with_weight_range(WeightRange { low: -3, high: 0, max_denominator: 2 });
        assert!(random_pseudostar::<Rational>(&bad).is_err());
    }

    #[test]
    fn infeasible_shapes() {
        for (n, k) in [(5, 5), (5, 0), (2, 1), (15, 5)] {
            let mut config = GeneratorConfig::new(n, k, 0);
            config.max_n = DEFAULT_MAX_N;
            assert!(matches!(
                random_pseudostar::<Rational>(&config),
                Err(Error::InfeasibleShape(_))
            ));
        }
    }

    #[test]
    fn random_trees_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..12 {
            let t: WeightedTree<Rational> = random_tree(&mut rng, n, WeightRange::default(), false, false).unwrap();
            assert_eq!(t.require_standard_labels().unwrap(), n);
            assert!(t.is_essential() || n == 2);
            let u: WeightedTree<Rational> = random_tree(&mut rng, n, WeightRange::default(), true, true).unwrap();
            assert_eq!(u.leaf_count(), n);
        }
    }
}
