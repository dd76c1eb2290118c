//! Small shared utilities: bit sets over structure domains.

/// A fixed-width bit set over a structure domain.
///
/// Element indices are `u32` positions below `len`. The word vector is the
/// canonical representation: two sets over the same domain are equal iff
/// their words are equal, which makes `ElemSet` usable as a map key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ElemSet {
    len: u32,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(len: u32) -> Self {
        let n_words = (len as usize + 63) / 64;
        ElemSet {
            len,
            words: vec![0; n_words.max(1)],
        }
    }

    pub fn full(len: u32) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_iter(len: u32, items: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn domain_len(&self) -> u32 {
        self.len
    }

    pub fn insert(&mut self, i: u32) {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: u32) {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: u32) -> bool {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] & (1u64 << (i % 64)) != 0
    }

    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_subset_of(&self, other: &ElemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Advance to the next subset in binary-counter order over the first
    /// `len` bits. Returns `false` on wrap-around past the full set.
    pub fn increment(&mut self) -> bool {
        let full_words = (self.len / 64) as usize;
        let tail_bits = self.len % 64;
        for w in 0..self.words.len() {
            let limit = if w < full_words {
                u64::MAX
            } else if tail_bits > 0 {
                (1u64 << tail_bits) - 1
            } else {
                0
            };
            if self.words[w] < limit {
                self.words[w] += 1;
                return true;
            }
            self.words[w] = 0;
        }
        false
    }
}

/// Exact binomial coefficient in `u128`, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increment_enumerates_all_subsets() {
        let mut s = ElemSet::empty(5);
        let mut seen = std::collections::BTreeSet::new();
        loop {
            seen.insert(s.words()[0]);
            if !s.increment() {
                break;
            }
        }
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn subset_and_count() {
        let a = ElemSet::from_iter(70, [0, 65]);
        let b = ElemSet::from_iter(70, [0, 3, 65]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(b.count(), 3);
        assert_eq!(a.iter_ones().collect::<Vec<_>>(), vec![0, 65]);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
