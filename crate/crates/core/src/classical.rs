//! Classical pairwise checks: the four-point condition and the aggregation
//! of a k-weight family into pairwise values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::KWeightFamily;
use crate::leafset::LeafSet;
use crate::scalar::Scalar;

/// A quadruple whose three pair sums have a unique maximum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourPointWitness {
    pub quadruple: [u32; 4],
    /// `D_ab + D_cd`, `D_ac + D_bd`, `D_ad + D_bc` for `a<b<c<d`.
    pub sums: [String; 3],
}

/// Checks that for every quadruple the largest of the three pair sums is
/// attained at least twice.
pub fn four_point_check<S: Scalar>(family: &KWeightFamily<S>) -> Result<Option<FourPointWitness>> {
    if family.k() != 2 {
        return Err(Error::UnsupportedK { n: family.n(), k: family.k() });
    }
    let d = |a: u32, b: u32| family.get(LeafSet::from_iter([a, b])).clone();
    for quad in LeafSet::full(family.n()).subsets(4) {
        let [a, b, c, e]: [u32; 4] = quad.to_vec().try_into().expect("four labels");
        let sums = [d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)];
        let max = sums
            .iter()
            .fold(sums[0].clone(), |m, s| if *s > m { s.clone() } else { m });
        if sums.iter().filter(|s| s.same(&max)).count() < 2 {
            return Ok(Some(FourPointWitness {
                quadruple: [a, b, c, e],
                sums: sums.map(|s| s.render()),
            }));
        }
    }
    Ok(None)
}

/// `S(i,j) = sum over (k-2)-subsets Y of [n]-{i,j} of D_{ijY}`.
pub fn aggregate_pairwise<S: Scalar>(family: &KWeightFamily<S>) -> Result<KWeightFamily<S>> {
    let (n, k) = (family.n(), family.k());
    if k < 2 {
        return Err(Error::UnsupportedK { n, k });
    }
    KWeightFamily::from_fn(n, 2, |pair| {
        (LeafSet::full(n) - pair)
            .subsets(k - 2)
            .fold(S::zero(), |acc, y| acc + family.get(y | pair).clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::family_from_tree;
    use crate::newick::parse_newick;
    use crate::Rational;

    fn pairs(n: usize, values: &[(u32, u32, i64)]) -> KWeightFamily<Rational> {
        KWeightFamily::from_entries(
            n,
            2,
            values.iter().map(|&(a, b, v)| (LeafSet::from_iter([a, b]), Rational::from_ratio(v, 1))),
        )
        .unwrap()
    }

    #[test]
    fn four_point_examples() {
        let tied = pairs(4, &[(1, 2, 1), (3, 4, 1), (1, 3, 10), (1, 4, 10), (2, 3, 10), (2, 4, 10)]);
        assert_eq!(four_point_check(&tied).unwrap(), None);
        let distinct = pairs(4, &[(1, 2, 1), (1, 3, 2), (1, 4, 3), (2, 3, 4), (2, 4, 6), (3, 4, 5)]);
        let witness = four_point_check(&distinct).unwrap().unwrap();
        assert_eq!(witness.sums, ["6".to_string(), "8".to_string(), "7".to_string()]);
        let caterpillar = parse_newick::<Rational>("((1:2,2:1):3,3:1,(4:5,(5:1,6:2):1):2);").unwrap();
        assert_eq!(four_point_check(&family_from_tree(&caterpillar, 2).unwrap()).unwrap(), None);
        assert!(four_point_check(&family_from_tree(&caterpillar, 3).unwrap()).is_err());
    }

    #[test]
    fn aggregation() {
        let star = parse_newick::<Rational>("(1,2,3,4,5,6);").unwrap();
        let s = aggregate_pairwise(&family_from_tree(&star, 3).unwrap()).unwrap();
        assert!(s.iter().all(|(_, v)| *v == Rational::from_count(12)));
        let f2 = family_from_tree(&star, 2).unwrap();
        assert_eq!(aggregate_pairwise(&f2).unwrap(), f2);
    }
}
