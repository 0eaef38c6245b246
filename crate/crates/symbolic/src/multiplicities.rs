use std::cmp::Ordering;
use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

/// A two-component index `(l, r)`.
///
/// Depending on context this is a Δ-block `Δ_l f_{y^r}` (l x-slots, r extra
/// y-derivatives) or a formal partial `f_{x^l y^r}`. Ordering is ascending by
/// `l`, then by `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorKey {
    pub l: u32,
    pub r: u32,
}

impl VectorKey {
    pub const fn new(l: u32, r: u32) -> Self {
        VectorKey { l, r }
    }

    /// `l + r`, the total differentiation order of the key.
    pub const fn weight(self) -> u32 {
        self.l + self.r
    }
}

impl From<(u32, u32)> for VectorKey {
    fn from((l, r): (u32, u32)) -> Self {
        VectorKey { l, r }
    }
}

impl fmt::Display for VectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.r)
    }
}

/// Finitely supported map `VectorKey -> count` with all stored counts `>= 1`.
///
/// Zero counts are never materialized: setting a key to zero removes it.
/// Iteration is in canonical key order (ascending `l`, then `r`).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiplicities {
    entries: BTreeMap<VectorKey, u32>,
}

impl Multiplicities {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map from `((l, r), count)` pairs; repeated keys add up and
    /// zero counts are dropped.
    pub fn from_pairs<I, K>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, u32)>,
        K: Into<VectorKey>,
    {
        let mut m = Multiplicities::new();
        for (k, c) in pairs {
            m.add(k.into(), c);
        }
        m
    }

    pub fn get(&self, key: impl Into<VectorKey>) -> u32 {
        self.entries.get(&key.into()).copied().unwrap_or(0)
    }

    pub fn contains(&self, key: impl Into<VectorKey>) -> bool {
        self.entries.contains_key(&key.into())
    }

    pub fn set(&mut self, key: impl Into<VectorKey>, count: u32) {
        let key = key.into();
        if count == 0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, count);
        }
    }

    pub fn add(&mut self, key: impl Into<VectorKey>, count: u32) {
        if count == 0 {
            return;
        }
        *self.entries.entry(key.into()).or_insert(0) += count;
    }

    pub fn increment(&mut self, key: impl Into<VectorKey>) {
        self.add(key, 1);
    }

    /// Decrements the count at `key`. Returns `false` (leaving the map
    /// untouched) when the key is absent.
    pub fn decrement(&mut self, key: impl Into<VectorKey>) -> bool {
        let key = key.into();
        match self.entries.get_mut(&key) {
            None => false,
            Some(c) if *c == 1 => {
                self.entries.remove(&key);
                true
            }
            Some(c) => {
                *c -= 1;
                true
            }
        }
    }

    /// Returns a copy with `key` removed entirely.
    pub fn without(&self, key: impl Into<VectorKey>) -> Self {
        let mut m = self.clone();
        m.entries.remove(&key.into());
        m
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct keys.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VectorKey, u32)> + '_ {
        self.entries.iter().map(|(k, c)| (*k, *c))
    }

    pub fn keys(&self) -> impl Iterator<Item = VectorKey> + '_ {
        self.entries.keys().copied()
    }

    /// `Σ m`, the number of vectors counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.entries.values().map(|&c| c as u64).sum()
    }

    /// `Σ l·m`.
    pub fn sum_l(&self) -> u64 {
        self.iter().map(|(k, c)| k.l as u64 * c as u64).sum()
    }

    /// `Σ r·m`.
    pub fn sum_r(&self) -> u64 {
        self.iter().map(|(k, c)| k.r as u64 * c as u64).sum()
    }

    /// The multiset as a list of keys, largest first.
    pub fn descending_keys(&self) -> Vec<VectorKey> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (k, c) in self.entries.iter().rev() {
            out.extend(std::iter::repeat_n(*k, *c as usize));
        }
        out
    }

    /// Deterministic presentation order used for enumerations and formula
    /// terms: fewer vectors first, then by the descending key list, larger
    /// lists first.
    pub fn stratified_cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.descending_keys().cmp(&self.descending_keys()))
    }
}

impl<K: Into<VectorKey>> FromIterator<(K, u32)> for Multiplicities {
    fn from_iter<T: IntoIterator<Item = (K, u32)>>(iter: T) -> Self {
        Multiplicities::from_pairs(iter)
    }
}

impl<'a> IntoIterator for &'a Multiplicities {
    type Item = (&'a VectorKey, &'a u32);
    type IntoIter = btree_map::Iter<'a, VectorKey, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl fmt::Display for Multiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{c}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_counts_are_not_stored() {
        let m = Multiplicities::from_pairs([((2, 0), 1), ((0, 1), 0)]);
        assert_eq!(m.support_len(), 1);
        assert!(!m.contains((0, 1)));

        let mut m = m;
        assert!(m.decrement((2, 0)));
        assert!(m.is_empty());
        assert!(!m.decrement((2, 0)));
    }

    #[test]
    fn canonical_iteration_order() {
        let m = Multiplicities::from_pairs([((2, 0), 1), ((1, 1), 2), ((0, 2), 1), ((1, 0), 3)]);
        let keys: Vec<_> = m.keys().map(|k| (k.l, k.r)).collect();
        assert_eq!(keys, vec![(0, 2), (1, 0), (1, 1), (2, 0)]);
        assert_eq!(m.to_string(), "{(0,2):1, (1,0):3, (1,1):2, (2,0):1}");
    }

    #[test]
    fn stratified_order_matches_hand_listing() {
        // h = 2 elements of the n = 4 family, in the hand-written order.
        let a = Multiplicities::from_pairs([((3, 0), 1), ((1, 1), 1)]);
        let b = Multiplicities::from_pairs([((2, 1), 1), ((2, 0), 1)]);
        assert_eq!(a.stratified_cmp(&b), Ordering::Less);
        let c = Multiplicities::from_pairs([((2, 0), 2), ((0, 2), 1)]);
        let d = Multiplicities::from_pairs([((2, 0), 1), ((1, 1), 2)]);
        assert_eq!(c.stratified_cmp(&d), Ordering::Less);
        assert_eq!(a.stratified_cmp(&c), Ordering::Less);
    }

    proptest! {
        #[test]
        fn sums_are_additive(pairs in proptest::collection::vec(((0u32..6, 0u32..6), 0u32..4), 0..8)) {
            let m = Multiplicities::from_pairs(pairs.clone());
            let total: u64 = pairs.iter().map(|(_, c)| *c as u64).sum();
            let sl: u64 = pairs.iter().map(|((l, _), c)| *l as u64 * *c as u64).sum();
            let sr: u64 = pairs.iter().map(|((_, r), c)| *r as u64 * *c as u64).sum();
            prop_assert_eq!(m.total(), total);
            prop_assert_eq!(m.sum_l(), sl);
            prop_assert_eq!(m.sum_r(), sr);
            prop_assert!(m.iter().all(|(_, c)| c >= 1));
        }
    }
}
