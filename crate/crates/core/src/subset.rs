//! Fixed-universe bitsets.
//!
//! A [`Subset`] remembers the width of the universe it was drawn from, so
//! that subsets of different universes never compare equal and combining
//! them can be rejected.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const WORD: usize = 64;

/// A subset of the universe `{0, .., width - 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    width: usize,
    words: Vec<u64>,
}

fn word_count(width: usize) -> usize {
    width.div_ceil(WORD)
}

impl Subset {
    pub fn empty(width: usize) -> Self {
        Subset {
            width,
            words: alloc::vec![0; word_count(width)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Subset {
            width,
            words: alloc::vec![u64::MAX; word_count(width)],
        };
        s.trim();
        s
    }

    /// Builds the subset whose membership bits are the low `width` bits of
    /// `bits`. Bits above `width` are discarded.
    pub fn from_bits(width: usize, bits: u64) -> Self {
        let mut s = Subset::empty(width);
        if let Some(w) = s.words.first_mut() {
            *w = bits;
        }
        s.trim();
        s
    }

    /// Returns `None` if some index is outside the universe.
    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Option<Self> {
        let mut s = Subset::empty(width);
        for i in indices {
            if i >= width {
                return None;
            }
            s.insert(i);
        }
        Some(s)
    }

    /// Width of the ambient universe.
    pub fn width(&self) -> usize {
        self.width
    }

    /// The low 64 membership bits.
    pub fn low_bits(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    /// Panics if `i` is outside the universe.
    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.width,
            "index {i} outside universe of width {}",
            self.width
        );
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.width {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Subset::full(self.width)
    }

    pub fn union(&self, other: &Subset) -> Option<Subset> {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Option<Subset> {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Option<Subset> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Subset {
        let mut s = Subset {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.width == other.width
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { set: self, next: 0 }
    }

    fn zip(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Option<Subset> {
        if self.width != other.width {
            return None;
        }
        Some(Subset {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn trim(&mut self) {
        let rem = self.width % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Subsets order by universe width, then by their value read as a binary
/// number with element 0 as the least significant bit. For widths up to 64
/// this matches [`Subset::from_bits`] order.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset<{}>", self.width)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    set: &'a Subset,
    next: usize,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.next < self.set.width {
            let i = self.next;
            self.next += 1;
            if self.set.contains(i) {
                return Some(i);
            }
        }
        None
    }
}
