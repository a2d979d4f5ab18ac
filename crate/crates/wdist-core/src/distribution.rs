//! Sorted exact frequency tables.
//!
//! A [`DistributionTable`] maps a key (kernel dimension, sum class, weight, …)
//! to an exact nonnegative integer frequency. Frequencies are arbitrary
//! precision because the closed-form expressions reach p^{2n+…} quickly;
//! empirical sweeps count in machine words and convert at the boundary.

use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Sorted map from key to exact frequency.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistributionTable<K: Ord> {
    rows: BTreeMap<K, BigUint>,
}

impl<K: Ord> DistributionTable<K> {
    pub fn new() -> Self {
        DistributionTable { rows: BTreeMap::new() }
    }

    /// Accumulate `freq` onto `key` (missing keys start at zero).
    pub fn add(&mut self, key: K, freq: impl Into<BigUint>) {
        let freq = freq.into();
        *self.rows.entry(key).or_insert_with(BigUint::zero) += freq;
    }

    /// Frequency at `key`; an absent row reads as zero.
    pub fn get(&self, key: &K) -> BigUint {
        self.rows.get(key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigUint)> {
        self.rows.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sum of all frequencies.
    pub fn total(&self) -> BigUint {
        let mut t = BigUint::zero();
        for f in self.rows.values() {
            t += f;
        }
        t
    }

    /// The table with exact-zero rows removed. Closed-form tables may carry
    /// structurally present rows of frequency zero; empirical counts cannot
    /// observe them, so equality checks compare normalized tables.
    pub fn without_zero_rows(&self) -> Self
    where
        K: Clone,
    {
        DistributionTable {
            rows: self
                .rows
                .iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|(k, f)| (k.clone(), f.clone()))
                .collect(),
        }
    }

    /// Every row (in key order) where the two tables disagree, with both
    /// frequencies (zero standing in for an absent row).
    pub fn divergences(&self, other: &Self) -> Vec<(K, BigUint, BigUint)>
    where
        K: Clone,
    {
        let keys: std::collections::BTreeSet<&K> =
            self.rows.keys().chain(other.rows.keys()).collect();
        let mut out = Vec::new();
        for k in keys {
            let a = self.rows.get(k).cloned().unwrap_or_else(BigUint::zero);
            let b = other.rows.get(k).cloned().unwrap_or_else(BigUint::zero);
            if a != b {
                out.push((k.clone(), a, b));
            }
        }
        out
    }

    /// First row where the two tables disagree, if any.
    pub fn first_divergence(&self, other: &Self) -> Option<(K, BigUint, BigUint)>
    where
        K: Clone,
    {
        self.divergences(other).into_iter().next()
    }
}

impl<K: Ord> FromIterator<(K, BigUint)> for DistributionTable<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigUint)>>(iter: I) -> Self {
        let mut t = DistributionTable::new();
        for (k, f) in iter {
            t.add(k, f);
        }
        t
    }
}

/// JSON form: an object of `"key": "frequency"` pairs in key order, both as
/// strings — keys because sum classes have symbolic names, frequencies
/// because they exceed every fixed integer width.
impl<K: Ord + std::fmt::Display> serde::Serialize for DistributionTable<K> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.rows.len()))?;
        for (k, f) in &self.rows {
            map.serialize_entry(&k.to_string(), &f.to_string())?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulation_totals_and_normalization() {
        let mut t: DistributionTable<u32> = DistributionTable::new();
        t.add(9, 5u64);
        t.add(9, 7u64);
        t.add(12, 0u64);
        assert_eq!(t.get(&9), BigUint::from(12u64));
        assert_eq!(t.get(&7777), BigUint::ZERO);
        assert_eq!(t.total(), BigUint::from(12u64));
        assert_eq!(t.len(), 2);
        assert_eq!(t.without_zero_rows().len(), 1);
    }

    #[test]
    fn divergence_reports_the_smallest_differing_key() {
        let a: DistributionTable<u32> =
            [(1u32, 10u64), (2, 20), (3, 30)].iter().map(|&(k, f)| (k, f.into())).collect();
        let mut b = a.clone();
        assert_eq!(a.first_divergence(&b), None);
        b.add(2, 1u64);
        b.add(5, 9u64);
        let (k, fa, fb) = a.first_divergence(&b).unwrap();
        assert_eq!((k, fa, fb), (2, 20u64.into(), 21u64.into()));
    }
}
