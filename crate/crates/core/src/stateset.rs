//! Fixed-universe bitsets indexed by canonical state number.

use std::fmt;

/// A set of states of one state space, stored as a dense bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    len: usize,
    words: Vec<u64>,
}

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64).max(1)
}

/// Mask selecting the valid bits of the last word.
pub(crate) fn tail_mask(len: usize) -> u64 {
    match len % 64 {
        0 if len > 0 => u64::MAX,
        0 => 0,
        r => (1u64 << r) - 1,
    }
}

impl StateSet {
    pub fn empty(len: usize) -> Self {
        StateSet {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; words_for(len)];
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        StateSet { len, words }
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        StateSet { len, words }
    }

    pub fn from_states(len: usize, states: impl IntoIterator<Item = usize>) -> Self {
        let mut set = StateSet::empty(len);
        for s in states {
            set.insert(s);
        }
        set
    }

    /// Size of the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, state: usize) -> bool {
        state < self.len && self.words[state / 64] & (1 << (state % 64)) != 0
    }

    pub fn insert(&mut self, state: usize) {
        assert!(state < self.len, "state {state} outside universe of {}", self.len);
        self.words[state / 64] |= 1 << (state % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn complement(&self) -> StateSet {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if let Some(last) = out.words.last_mut() {
            *last &= tail_mask(self.len);
        }
        out
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        assert_eq!(self.len, other.len);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        StateSet { len: self.len, words }
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        assert_eq!(self.len, other.len);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        StateSet { len: self.len, words }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    /// Members outside the set, in increasing order.
    pub fn missing(&self) -> Vec<usize> {
        self.complement().iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
