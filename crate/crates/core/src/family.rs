//! Families of values indexed by the k-subsets of `[n]`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::leafset::{LeafSet, MAX_LABEL};
use crate::scalar::Scalar;
use crate::tree::WeightedTree;

/// Largest number of entries a family may hold.
pub const MAX_FAMILY_LEN: u64 = 1 << 26;

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A total map from `C([n], k)` to scalars, stored densely by colex rank.
#[derive(Clone, Debug, PartialEq)]
pub struct KWeightFamily<S> {
    n: usize,
    k: usize,
    values: Vec<S>,
    // binom[m][t] = C(m, t) for m < n, t <= k
    binom: Vec<Vec<u64>>,
}

impl<S: Scalar> KWeightFamily<S> {
    /// Builds a family by evaluating `f` on every k-subset.
    pub fn from_fn<F: FnMut(LeafSet) -> S>(n: usize, k: usize, mut f: F) -> Result<Self> {
        let mut family = KWeightFamily::filled(n, k, S::zero())?;
        for subset in LeafSet::full(n).subsets(k) {
            let rank = family.rank(subset);
            family.values[rank] = f(subset);
        }
        Ok(family)
    }

    /// Builds a family from `(subset, value)` pairs covering every k-subset once.
    pub fn from_entries<I: IntoIterator<Item = (LeafSet, S)>>(n: usize, k: usize, entries: I) -> Result<Self> {
        let mut family = KWeightFamily::filled(n, k, S::zero())?;
        let mut seen = vec![false; family.values.len()];
        for (subset, value) in entries {
            if subset.len() != k || !subset.is_subset(LeafSet::full(n)) {
                return Err(Error::InvalidFamily(format!(
                    "{subset} is not a {k}-subset of [{n}]"
                )));
            }
            let rank = family.rank(subset);
            if std::mem::replace(&mut seen[rank], true) {
                return Err(Error::InvalidFamily(format!("duplicate subset {subset}")));
            }
            family.values[rank] = value;
        }
        if let Some(rank) = seen.iter().position(|s| !s) {
            let missing = LeafSet::full(n)
                .subsets(k)
                .find(|s| family.rank(*s) == rank)
                .expect("every rank has a subset");
            return Err(Error::InvalidFamily(format!("missing subset {missing}")));
        }
        Ok(family)
    }

    fn filled(n: usize, k: usize, value: S) -> Result<Self> {
        if n < 2 || n > MAX_LABEL as usize || k == 0 || k > n {
            return Err(Error::InvalidFamily(format!("bad parameters n={n}, k={k}")));
        }
        let len = binomial(n, k);
        if len > MAX_FAMILY_LEN {
            return Err(Error::InvalidFamily(format!("C({n},{k}) = {len} entries is too many")));
        }
        let binom = (0..n)
            .map(|m| (0..=k).map(|t| binomial(m, t)).collect())
            .collect();
        Ok(KWeightFamily {
            n,
            k,
            values: vec![value; len as usize],
            binom,
        })
    }

    fn rank(&self, subset: LeafSet) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(t, label)| self.binom[label as usize - 1][t + 1])
            .sum::<u64>() as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `D_I`. Panics if `subset` is not a k-subset of `[n]`.
    pub fn get(&self, subset: LeafSet) -> &S {
        assert!(
            subset.len() == self.k && subset.is_subset(LeafSet::full(self.n)),
            "{subset} is not a {}-subset of [{}]",
            self.k,
            self.n
        );
        &self.values[self.rank(subset)]
    }

    pub fn try_get(&self, subset: LeafSet) -> Result<&S> {
        if subset.len() != self.k || !subset.is_subset(LeafSet::full(self.n)) {
            return Err(Error::InvalidFamily(format!(
                "{subset} is not a {}-subset of [{}]",
                self.k, self.n
            )));
        }
        Ok(&self.values[self.rank(subset)])
    }

    pub fn set(&mut self, subset: LeafSet, value: S) {
        let rank = self.rank(subset);
        self.values[rank] = value;
    }

    /// Entries in lexicographic subset order.
    pub fn iter(&self) -> impl Iterator<Item = (LeafSet, &S)> + '_ {
        LeafSet::full(self.n)
            .subsets(self.k)
            .map(move |s| (s, &self.values[self.rank(s)]))
    }

    /// A copy with `D_subset` shifted by `delta`.
    pub fn perturbed(&self, subset: LeafSet, delta: S) -> Result<Self> {
        let current = self.try_get(subset)?.clone();
        let mut out = self.clone();
        out.set(subset, current + delta);
        Ok(out)
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> KWeightFamily<T> {
        KWeightFamily {
            n: self.n,
            k: self.k,
            values: self.values.iter().map(f).collect(),
            binom: self.binom.clone(),
        }
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            n: self.n,
            k: self.k,
            entries: self
                .iter()
                .map(|(s, v)| FamilyEntry {
                    subset: s.to_vec(),
                    value: JsonValue::Text(v.render()),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Self> {
        let entries = json
            .entries
            .iter()
            .map(|e| {
                let subset = LeafSet::try_from_labels(e.subset.iter().map(|&l| l as u64))?;
                if subset.len() != e.subset.len() {
                    return Err(Error::InvalidFamily(format!("repeated label in {:?}", e.subset)));
                }
                Ok((subset, e.value.parse::<S>()?))
            })
            .collect::<Result<Vec<_>>>()?;
        KWeightFamily::from_entries(json.n, json.k, entries)
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        let json: FamilyJson =
            serde_json::from_reader(reader).map_err(|e| Error::Parse(format!("family json: {e}")))?;
        KWeightFamily::from_json(&json)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, &self.to_json())
            .map_err(|e| Error::Parse(format!("family json: {e}")))
    }

    /// Reads rows `i1,...,ik,value`. `n` is the largest label seen and `k`
    /// is one less than the row width. Lines starting with `#` are skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        let mut width = None;
        for record in csv.records() {
            let record = record.map_err(|e| Error::Parse(format!("family csv: {e}")))?;
            if record.len() < 2 {
                return Err(Error::Parse("family csv: row has fewer than two fields".into()));
            }
            if *width.get_or_insert(record.len()) != record.len() {
                return Err(Error::Parse("family csv: rows differ in width".into()));
            }
            let labels = record
                .iter()
                .take(record.len() - 1)
                .map(|f| f.parse::<u64>().map_err(|_| Error::Parse(format!("family csv: bad label {f:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let subset = LeafSet::try_from_labels(labels.iter().copied())?;
            if subset.len() != labels.len() {
                return Err(Error::InvalidFamily(format!("repeated label in {labels:?}")));
            }
            rows.push((subset, S::parse_value(&record[record.len() - 1])?));
        }
        let k = width.ok_or_else(|| Error::Parse("family csv: no rows".into()))? - 1;
        let n = rows.iter().filter_map(|(s, _)| LeafSet::max(*s)).max().unwrap_or(0) as usize;
        KWeightFamily::from_entries(n, k, rows)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for (subset, value) in self.iter() {
            let mut row: Vec<String> = subset.iter().map(|l| l.to_string()).collect();
            row.push(value.render());
            csv.write_record(&row).map_err(|e| Error::Parse(format!("family csv: {e}")))?;
        }
        csv.flush().map_err(|e| Error::Parse(format!("family csv: {e}")))
    }
}

/// The k-weights of a tree: `D_I` is the weight of the subtree spanning `I`.
pub fn family_from_tree<S: Scalar>(tree: &WeightedTree<S>, k: usize) -> Result<KWeightFamily<S>> {
    let n = tree.require_standard_labels()?;
    if k > n {
        return Err(Error::InvalidFamily(format!("k = {k} exceeds n = {n}")));
    }
    let table = tree.split_table();
    KWeightFamily::from_fn(n, k, |subset| table.weight(subset))
}

/// Wire format: `{"n", "k", "entries": [{"subset": [...], "value": "..."}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub k: usize,
    pub entries: Vec<FamilyEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub subset: Vec<u32>,
    pub value: JsonValue,
}

/// A family value written either as a string (`"3/2"`, `"0.25"`) or as a
/// bare JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonValue {
    Text(String),
    Number(serde_json::Number),
}

impl JsonValue {
    pub fn parse<S: Scalar>(&self) -> Result<S> {
        match self {
            JsonValue::Text(text) => S::parse_value(text),
            JsonValue::Number(number) => S::parse_value(&number.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::Rational;

    fn set(labels: &[u32]) -> LeafSet {
        labels.iter().copied().collect()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(14, 7), 3432);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn ranks_are_a_bijection() {
        let f = KWeightFamily::from_fn(7, 3, |s| Rational::from_count(s.bits() as usize)).unwrap();
        assert_eq!(f.len(), 35);
        let mut ranks: Vec<usize> = LeafSet::full(7).subsets(3).map(|s| f.rank(s)).collect();
        ranks.sort();
        assert_eq!(ranks, (0..35).collect::<Vec<_>>());
        for s in LeafSet::full(7).subsets(3) {
            assert_eq!(*f.get(s), Rational::from_count(s.bits() as usize));
        }
    }

    #[test]
    fn star_values_equal_k() {
        let t = parse_newick::<Rational>("(1,2,3,4,5,6);").unwrap();
        for k in 2..=6 {
            let f = family_from_tree(&t, k).unwrap();
            assert!(f.iter().all(|(_, v)| *v == Rational::from_count(k)));
        }
    }

    #[test]
    fn caterpillar_value() {
        let t = parse_newick::<Rational>("((1,2),(3,4),(5,6,7,8,9,10));").unwrap();
        let f = family_from_tree(&t, 5).unwrap();
        assert_eq!(*f.get(set(&[1, 2, 3, 4, 5])), Rational::from_count(8));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let t = parse_newick::<Rational>("((1:1/2,2),3,(4,5:3));").unwrap();
        let f = family_from_tree(&t, 3).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        assert!(text.starts_with(r#"{"n":5,"k":3,"entries":[{"subset":[1,2,3],"value":"7/2"}"#));
        let back: KWeightFamily<Rational> = KWeightFamily::read_json(text.as_bytes()).unwrap();
        assert_eq!(back, f);

        let numeric = r#"{"n":3,"k":2,"entries":[{"subset":[1,2],"value":1.5},{"subset":[1,3],"value":"2"},{"subset":[2,3],"value":3}]}"#;
        let g: KWeightFamily<Rational> = KWeightFamily::read_json(numeric.as_bytes()).unwrap();
        assert_eq!(*g.get(set(&[1, 2])), Rational::from_ratio(3, 2));

        let missing = r#"{"n":3,"k":2,"entries":[{"subset":[1,2],"value":"1"},{"subset":[1,3],"value":"2"}]}"#;
        assert!(KWeightFamily::<Rational>::read_json(missing.as_bytes()).is_err());
        let duplicate = r#"{"n":3,"k":2,"entries":[{"subset":[1,2],"value":"1"},{"subset":[2,1],"value":"1"},{"subset":[1,3],"value":"2"},{"subset":[2,3],"value":"2"}]}"#;
        assert!(KWeightFamily::<Rational>::read_json(duplicate.as_bytes()).is_err());
        let repeated = r#"{"n":3,"k":2,"entries":[{"subset":[1,1],"value":"1"}]}"#;
        assert!(KWeightFamily::<Rational>::read_json(repeated.as_bytes()).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = parse_newick::<Rational>("((1:1/2,2),3,(4,5:3));").unwrap();
        let f = family_from_tree(&t, 3).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("1,2,3,7/2\n"));
        let back: KWeightFamily<Rational> = KWeightFamily::read_csv(format!("# comment\n{text}").as_bytes()).unwrap();
        assert_eq!(back, f);
        assert!(KWeightFamily::<Rational>::read_csv("1,2,3\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn perturbation_changes_one_value() {
        let t = parse_newick::<Rational>("(1,2,3,4,5);").unwrap();
        let f = family_from_tree(&t, 2).unwrap();
        let g = f.perturbed(set(&[2, 4]), Rational::from_count(1)).unwrap();
        let changed: Vec<LeafSet> = f.iter().zip(g.iter()).filter(|(a, b)| a.1 != b.1).map(|(a, _)| a.0).collect();
        assert_eq!(changed, vec![set(&[2, 4])]);
    }
}
