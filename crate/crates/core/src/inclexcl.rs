//! Inclusion-exclusion on finite set systems, and its indicator form, whose
//! term list is the shift-operator expansion with `chi` in place of `sigma`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarize::{shift_expand, SubsetMask, MAX_ENGINE_ORDER};

/// A universe `A` of labelled elements with subsets `A_1, ..., A_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    universe: Vec<String>,
    subsets: Vec<FixedBitSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystemJson {
    pub universe: Vec<String>,
    pub subsets: Vec<Vec<String>>,
}

impl SetSystem {
    /// Labels must be distinct and every subset member must be a label.
    pub fn new<S: AsRef<str>>(universe: &[S], subsets: &[Vec<S>]) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::Parse("a set system needs at least one subset".into()));
        }
        if subsets.len() > MAX_ENGINE_ORDER {
            return Err(Error::OutOfBounds { what: "number of subsets", value: subsets.len(), bound: MAX_ENGINE_ORDER });
        }
        let mut ids = HashMap::new();
        for (i, label) in universe.iter().enumerate() {
            if ids.insert(label.as_ref(), i).is_some() {
                return Err(Error::Parse(format!("duplicate universe element {:?}", label.as_ref())));
            }
        }
        let subsets = subsets
            .iter()
            .map(|members| {
                let mut bits = FixedBitSet::with_capacity(universe.len());
                for m in members {
                    let id = ids
                        .get(m.as_ref())
                        .ok_or_else(|| Error::Parse(format!("{:?} is not in the universe", m.as_ref())))?;
                    bits.insert(*id);
                }
                Ok(bits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SetSystem { universe: universe.iter().map(|s| s.as_ref().to_string()).collect(), subsets })
    }

    /// Subsets given as membership vectors over `0..size`.
    pub fn from_membership(size: usize, subsets: &[Vec<bool>]) -> Result<Self> {
        let universe: Vec<String> = (0..size).map(|i| i.to_string()).collect();
        let members: Vec<Vec<String>> = subsets
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i.to_string()).collect())
            .collect();
        if let Some(row) = subsets.iter().find(|r| r.len() != size) {
            return Err(Error::DimensionMismatch { expected: size, found: row.len() });
        }
        SetSystem::new(&universe, &members)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    /// Number of subsets `n`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// Whether element `x` belongs to `A_{i+1}`.
    pub fn contains(&self, i: usize, x: usize) -> bool {
        self.subsets[i].contains(x)
    }

    /// `|A_{i_1} cap ... cap A_{i_k}|` over the indices in `mask`; the empty
    /// intersection is the whole universe.
    pub fn intersection_size(&self, mask: SubsetMask) -> usize {
        let mut acc = FixedBitSet::with_capacity(self.universe.len());
        acc.insert_range(..);
        for i in mask.members().take_while(|&i| i < self.len()) {
            acc.intersect_with(&self.subsets[i]);
        }
        acc.count_ones(..)
    }

    pub fn to_json(&self) -> SetSystemJson {
        SetSystemJson {
            universe: self.universe.clone(),
            subsets: self.subsets.iter().map(|b| b.ones().map(|i| self.universe[i].clone()).collect()).collect(),
        }
    }

    pub fn from_json(json: &SetSystemJson) -> Result<Self> {
        SetSystem::new(&json.universe, &json.subsets)
    }
}

/// `|A_1' cap ... cap A_n'|` by scanning each element.
pub fn complement_intersection_count(s: &SetSystem) -> i64 {
    (0..s.universe_size()).filter(|&x| (0..s.len()).all(|i| !s.contains(i, x))).count() as i64
}

/// `sum_k (-1)^k sum_{i_1 < ... < i_k} |A_{i_1} cap ... cap A_{i_k}|`.
pub fn inclusion_exclusion(s: &SetSystem) -> i64 {
    k7_terms(s.len())
        .into_iter()
        .map(|(mask, sign)| i64::from(sign) * s.intersection_size(mask) as i64)
        .sum()
}

/// Both sides of the indicator identity at element `x`:
/// `prod_i (1 - chi_{A_i}(x))` and `sum_I (-1)^{|I|} prod_{i in I} chi_{A_i}(x)`.
pub fn indicator_sides(s: &SetSystem, x: usize) -> (i64, i64) {
    let chi: Vec<i64> = (0..s.len()).map(|i| i64::from(s.contains(i, x))).collect();
    let lhs = chi.iter().map(|c| 1 - c).product();
    let rhs = k7_terms(s.len()).into_iter().map(|(mask, sign)| i64::from(sign) * mask.members().map(|i| chi[i]).product::<i64>()).sum();
    (lhs, rhs)
}

/// True iff the indicator identity holds at every element of the universe.
pub fn verify_indicator_identity(s: &SetSystem) -> bool {
    (0..s.universe_size()).all(|x| {
        let (lhs, rhs) = indicator_sides(s, x);
        lhs == rhs
    })
}

/// Indicator sides summed over the universe; these are the direct count and
/// the alternating sum respectively.
pub fn summed_indicator_sides(s: &SetSystem) -> (i64, i64) {
    (0..s.universe_size()).map(|x| indicator_sides(s, x)).fold((0, 0), |(a, b), (l, r)| (a + l, b + r))
}

/// Terms `(I, (-1)^{|I|})` of the indicator expansion, masks ascending.
pub fn k7_terms(n: usize) -> Vec<(SubsetMask, i8)> {
    assert!(n < 64, "k7_terms supports n < 64");
    let top = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    (0..=top)
        .map(|m| {
            let mask = SubsetMask(m);
            (mask, if mask.len() % 2 == 1 { -1 } else { 1 })
        })
        .collect()
}

/// The shift expansion reindexed by complements, `J -> J'`, keeping its sign
/// `(-1)^{n-|J|} = (-1)^{|J'|}`; sorted.
pub fn shift_terms_on_complements(n: usize) -> Vec<(SubsetMask, i8)> {
    let mut terms: Vec<(SubsetMask, i8)> =
        shift_expand(n).into_iter().map(|(mask, sign)| (mask.complement(n), sign)).collect();
    terms.sort_unstable();
    terms
}

/// Whether the reindexed shift expansion and the indicator expansion are the
/// same signed-mask multiset.
pub fn shift_indicator_correspondence(n: usize) -> bool {
    let mut k7 = k7_terms(n);
    k7.sort_unstable();
    shift_terms_on_complements(n) == k7
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::RngCore;

    fn example() -> SetSystem {
        SetSystem::new(&["1", "2", "3", "4", "5"], &[vec!["1", "2"], vec!["2", "3"]]).unwrap()
    }

    #[test]
    fn worked_example() {
        let s = example();
        assert_eq!(complement_intersection_count(&s), 2);
        assert_eq!(inclusion_exclusion(&s), 2);
        assert_eq!(s.intersection_size(SubsetMask(0)), 5);
        assert_eq!(s.intersection_size(SubsetMask(0b11)), 1);
        assert!(verify_indicator_identity(&s));
        assert_eq!(summed_indicator_sides(&s), (2, 2));
    }

    #[test]
    fn degenerate_systems() {
        let empty = SetSystem::new(&["a", "b", "c"], &[vec![], vec![]]).unwrap();
        assert_eq!(complement_intersection_count(&empty), 3);
        assert_eq!(inclusion_exclusion(&empty), 3);
        let full = SetSystem::new(&["a", "b"], &[vec!["a", "b"]]).unwrap();
        assert_eq!(inclusion_exclusion(&full), 0);
        assert_eq!(complement_intersection_count(&full), 0);
        let nothing = SetSystem::new::<&str>(&[], &[vec![]]).unwrap();
        assert_eq!(inclusion_exclusion(&nothing), 0);
    }

    #[test]
    fn pointwise_sides() {
        let s = SetSystem::new(&["in", "out"], &[vec!["in"], vec!["in"]]).unwrap();
        assert_eq!(indicator_sides(&s, 0), (0, 0));
        assert_eq!(indicator_sides(&s, 1), (1, 1));
    }

    #[test]
    fn validation() {
        assert!(SetSystem::new(&["a", "a"], &[vec!["a"]]).is_err());
        assert!(SetSystem::new(&["a"], &[vec!["b"]]).is_err());
        assert!(SetSystem::new::<&str>(&["a"], &[]).is_err());
        assert!(SetSystem::from_membership(2, &[vec![true]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let json: SetSystemJson =
            serde_json::from_str(r#"{"universe":["a","b","c"],"subsets":[["a","b"],["b","c"]]}"#).unwrap();
        let s = SetSystem::from_json(&json).unwrap();
        assert_eq!(s.to_json(), json);
        assert_eq!(complement_intersection_count(&s), 0);
        assert_eq!(inclusion_exclusion(&s), 0);
    }

    fn random_system(rng: &mut impl RngCore) -> SetSystem {
        let size = (rng.next_u64() % 21) as usize;
        let n = 1 + (rng.next_u64() % 6) as usize;
        let rows: Vec<Vec<bool>> = (0..n).map(|_| (0..size).map(|_| rng.next_u64() % 3 == 0).collect()).collect();
        SetSystem::from_membership(size, &rows).unwrap()
    }

    /// Alternating sum computed with index tuples instead of masks.
    fn alternating_sum_oracle(s: &SetSystem) -> i64 {
        fn rec(s: &SetSystem, start: usize, chosen: &mut Vec<usize>, out: &mut i64) {
            let sign = if chosen.len() % 2 == 0 { 1 } else { -1 };
            let count = (0..s.universe_size()).filter(|&x| chosen.iter().all(|&i| s.contains(i, x))).count() as i64;
            *out += sign * count;
            for i in start..s.len() {
                chosen.push(i);
                rec(s, i + 1, chosen, out);
                chosen.pop();
            }
        }
        let mut total = 0;
        rec(s, 0, &mut Vec::new(), &mut total);
        total
    }

    #[test]
    fn random_systems_agree() {
        let mut rng = sampling::rng(81);
        for _ in 0..200 {
            let s = random_system(&mut rng);
            let direct = complement_intersection_count(&s);
            assert_eq!(inclusion_exclusion(&s), direct);
            assert_eq!(alternating_sum_oracle(&s), direct);
            assert!(verify_indicator_identity(&s));
            assert_eq!(summed_indicator_sides(&s), (direct, direct));
        }
    }

    #[test]
    fn term_lists_correspond() {
        for n in 0..=8 {
            assert!(shift_indicator_correspondence(n), "n = {n}");
            assert_eq!(k7_terms(n).len(), 1 << n);
        }
        let terms = k7_terms(2);
        assert_eq!(terms, vec![(SubsetMask(0), 1), (SubsetMask(1), -1), (SubsetMask(2), -1), (SubsetMask(3), 1)]);
        // Without complementing, signs only agree up to (-1)^n.
        let raw: Vec<(SubsetMask, i8)> = shift_expand(3);
        assert!(raw.iter().zip(k7_terms(3)).all(|(a, b)| a.0 == b.0 && a.1 == -b.1));
    }
}
