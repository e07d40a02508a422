//! Bitrops: the scalar structures that select information.
//!
//! A bitrop is a carrier with a commutative addition `⊕`, a distributive
//! multiplication `⊗` and a center `τ` with `x ⊗ τ = x` and `τ ⊕ τ = τ`.
//! Elements `λ` with `λ ⊕ τ = τ` form the positive cone `B⁺`, the only
//! granulars allowed as witnesses for absorption and ordering.
//!
//! Carriers here are finite windows in a fixed canonical order. Bounded
//! integer models are windows onto an infinite structure: their operations
//! compute exactly and may produce values outside the window, which the
//! checker reports as closure restrictions rather than errors.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::error::AlgebraError;
use crate::subset::Subset;

/// A bitrop over an enumerable carrier.
pub trait Bitrop {
    type Granular: Clone + Eq + Ord + Debug;

    fn name(&self) -> String;

    /// Number of carrier elements, `None` when it does not fit in a `u64`.
    fn size(&self) -> Option<u64>;

    /// The carrier element at `index` in canonical order. `index` must be
    /// below [`Bitrop::size`].
    fn nth(&self, index: u64) -> Self::Granular;

    /// Whether `g` lies in the enumerated carrier.
    fn contains(&self, g: &Self::Granular) -> bool;

    fn oplus(&self, a: &Self::Granular, b: &Self::Granular)
        -> Result<Self::Granular, AlgebraError>;

    fn otimes(
        &self,
        a: &Self::Granular,
        b: &Self::Granular,
    ) -> Result<Self::Granular, AlgebraError>;

    /// The center `τ`.
    fn tau(&self) -> Self::Granular;

    fn render(&self, g: &Self::Granular) -> String;

    /// Inverse of [`Bitrop::render`].
    fn parse(&self, text: &str) -> Option<Self::Granular>;

    /// A strictly larger window onto the same structure, for bounded
    /// truncations of infinite carriers. Finite structures return `None`.
    fn widened(&self) -> Option<Self>
    where
        Self: Sized,
    {
        None
    }

    /// Carrier elements in canonical order.
    fn elements(&self) -> Result<Elements<'_, Self>, AlgebraError>
    where
        Self: Sized,
    {
        let end = self
            .size()
            .ok_or_else(|| AlgebraError::NotEnumerable { model: self.name() })?;
        Ok(Elements {
            model: self,
            next: 0,
            end,
        })
    }

    /// `λ ∈ B⁺`, i.e. `λ ⊕ τ = τ`.
    fn is_positive(&self, g: &Self::Granular) -> bool {
        let tau = self.tau();
        self.oplus(g, &tau).is_ok_and(|s| s == tau)
    }

    fn positive_cone(&self) -> Result<Vec<Self::Granular>, AlgebraError>
    where
        Self: Sized,
    {
        Ok(self.elements()?.filter(|g| self.is_positive(g)).collect())
    }

    /// The least `α ∈ B⁺` in canonical order with `(x ⊕ y) ⊗ α = x`, if the
    /// carrier holds one.
    fn absorption_witness(
        &self,
        x: &Self::Granular,
        y: &Self::Granular,
    ) -> Result<Option<Self::Granular>, AlgebraError>
    where
        Self: Sized,
    {
        scan_absorption_witness(self, x, y)
    }
}

/// Ascending scan of the carrier for the least `α ∈ B⁺` with
/// `(x ⊕ y) ⊗ α = x`. Independent of any model-specific shortcut.
pub fn scan_absorption_witness<B: Bitrop>(
    model: &B,
    x: &B::Granular,
    y: &B::Granular,
) -> Result<Option<B::Granular>, AlgebraError> {
    let sum = model.oplus(x, y)?;
    for alpha in model.elements()? {
        if model.is_positive(&alpha) && model.otimes(&sum, &alpha)? == *x {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

/// Iterator over a carrier in canonical order.
pub struct Elements<'a, B> {
    model: &'a B,
    next: u64,
    end: u64,
}

impl<B: Bitrop> Iterator for Elements<'_, B> {
    type Item = B::Granular;

    fn next(&mut self) -> Option<B::Granular> {
        if self.next < self.end {
            let g = self.model.nth(self.next);
            self.next += 1;
            Some(g)
        } else {
            None
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.end - self.next).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// Display name of universe element `i` in generated models: `a`..`z`,
/// then `k26`, `k27`, ...
pub fn element_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("k{i}")
    }
}

fn element_index(name: &str) -> Option<usize> {
    let b = name.as_bytes();
    match b {
        [c @ b'a'..=b'z'] => Some(usize::from(c - b'a')),
        [b'k', rest @ ..] if !rest.is_empty() => {
            let i: usize = name[1..].parse().ok()?;
            (i >= 26 && element_name(i) == name).then_some(i)
        }
        _ => None,
    }
}

/// Renders a subset as `{a,c}` with generated element names.
pub fn render_subset(s: &Subset) -> String {
    let mut out = String::from("{");
    for (n, i) in s.iter().enumerate() {
        if n > 0 {
            out.push(',');
        }
        out.push_str(&element_name(i));
    }
    out.push('}');
    out
}

/// Parses the output of [`render_subset`] against a universe of `width`.
pub fn parse_subset(width: usize, text: &str) -> Option<Subset> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?.trim();
    if inner.is_empty() {
        return Some(Subset::empty(width));
    }
    let mut indices = Vec::new();
    for part in inner.split(',') {
        indices.push(element_index(part.trim())?);
    }
    Subset::from_indices(width, indices)
}

/// The boolean lattice of all subsets of a fixed universe: `⊕` is union,
/// `⊗` is intersection and `τ` is the whole universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetBitrop {
    universe: usize,
}

impl SubsetBitrop {
    pub fn new(universe: usize) -> Self {
        SubsetBitrop { universe }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Complement relative to the universe.
    pub fn complement(&self, a: &Subset) -> Result<Subset, AlgebraError> {
        self.check(a)?;
        Ok(a.complement())
    }

    pub fn bottom(&self) -> Subset {
        Subset::empty(self.universe)
    }

    pub(crate) fn check(&self, a: &Subset) -> Result<(), AlgebraError> {
        if a.width() == self.universe {
            Ok(())
        } else {
            Err(AlgebraError::Foreign {
                model: self.name(),
                value: format!("{a:?}"),
            })
        }
    }
}

impl Bitrop for SubsetBitrop {
    type Granular = Subset;

    fn name(&self) -> String {
        format!("subset({})", self.universe)
    }

    fn size(&self) -> Option<u64> {
        (self.universe < 64).then(|| 1u64 << self.universe)
    }

    fn nth(&self, index: u64) -> Subset {
        Subset::from_bits(self.universe, index)
    }

    fn contains(&self, g: &Subset) -> bool {
        g.width() == self.universe
    }

    fn oplus(&self, a: &Subset, b: &Subset) -> Result<Subset, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.union(b).expect("widths checked"))
    }

    fn otimes(&self, a: &Subset, b: &Subset) -> Result<Subset, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.intersection(b).expect("widths checked"))
    }

    fn tau(&self) -> Subset {
        Subset::full(self.universe)
    }

    fn render(&self, g: &Subset) -> String {
        render_subset(g)
    }

    fn parse(&self, text: &str) -> Option<Subset> {
        parse_subset(self.universe, text)
    }

    /// `(x ∪ y) ∩ x = x`, so `x` itself is the least witness.
    fn absorption_witness(&self, x: &Subset, y: &Subset) -> Result<Option<Subset>, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(Some(x.clone()))
    }
}

/// Min-plus integers enumerated over the window `[lo, hi]`: `⊕` is the
/// minimum, `⊗` is integer addition and `τ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinPlus {
    lo: i64,
    hi: i64,
}

/// Rejected integer windows.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RangeError {
    #[error("empty range {lo}..{hi}")]
    Empty { lo: i64, hi: i64 },
    #[error("range {lo}..{hi} must contain {required}")]
    Missing { lo: i64, hi: i64, required: i64 },
}

impl MinPlus {
    /// The window must contain the center `0`.
    pub fn new(lo: i64, hi: i64) -> Result<Self, RangeError> {
        if lo > hi {
            return Err(RangeError::Empty { lo, hi });
        }
        if lo > 0 || hi < 0 {
            return Err(RangeError::Missing {
                lo,
                hi,
                required: 0,
            });
        }
        Ok(MinPlus { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }
}

/// Widens `[lo, hi]` by its own span on both sides.
pub(crate) fn widen_range(lo: i64, hi: i64) -> Option<(i64, i64)> {
    let span = hi.checked_sub(lo)?.max(1);
    Some((lo.checked_sub(span)?, hi.checked_add(span)?))
}

impl Bitrop for MinPlus {
    type Granular = i64;

    fn name(&self) -> String {
        format!("minplus[{},{}]", self.lo, self.hi)
    }

    fn size(&self) -> Option<u64> {
        u64::try_from(i128::from(self.hi) - i128::from(self.lo) + 1).ok()
    }

    fn nth(&self, index: u64) -> i64 {
        self.lo + index as i64
    }

    fn contains(&self, g: &i64) -> bool {
        (self.lo..=self.hi).contains(g)
    }

    fn oplus(&self, a: &i64, b: &i64) -> Result<i64, AlgebraError> {
        Ok(*a.min(b))
    }

    fn otimes(&self, a: &i64, b: &i64) -> Result<i64, AlgebraError> {
        a.checked_add(*b)
            .ok_or_else(|| AlgebraError::Overflow { model: self.name() })
    }

    fn tau(&self) -> i64 {
        0
    }

    fn render(&self, g: &i64) -> String {
        g.to_string()
    }

    fn parse(&self, text: &str) -> Option<i64> {
        text.trim().parse().ok()
    }

    fn widened(&self) -> Option<Self> {
        let (lo, hi) = widen_range(self.lo, self.hi)?;
        Some(MinPlus { lo, hi })
    }

    /// `α = x − min(x, y)`, when it lies in the window.
    fn absorption_witness(&self, x: &i64, y: &i64) -> Result<Option<i64>, AlgebraError> {
        let alpha = x
            .checked_sub(*x.min(y))
            .ok_or_else(|| AlgebraError::Overflow { model: self.name() })?;
        Ok(self.contains(&alpha).then_some(alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(b: &SubsetBitrop, text: &str) -> Subset {
        b.parse(text).unwrap()
    }

    #[test]
    fn minplus_operations() {
        let m = MinPlus::new(-8, 8).unwrap();
        assert_eq!(m.oplus(&3, &5), Ok(3));
        assert_eq!(m.otimes(&3, &4), Ok(7));
        assert_eq!(m.tau(), 0);
        for x in m.elements().unwrap() {
            assert_eq!(m.otimes(&x, &m.tau()), Ok(x));
        }
        assert!(m.is_positive(&4));
        assert!(!m.is_positive(&-2));
    }

    #[test]
    fn minplus_range_must_hold_center() {
        assert!(MinPlus::new(1, 4).is_err());
        assert!(MinPlus::new(2, 1).is_err());
        assert!(MinPlus::new(0, 0).is_ok());
    }

    #[test]
    fn minplus_overflow_is_reported() {
        let m = MinPlus::new(-1, 1).unwrap();
        assert!(matches!(
            m.otimes(&i64::MAX, &1),
            Err(AlgebraError::Overflow { .. })
        ));
    }

    #[test]
    fn minplus_witnesses_match_scan() {
        let m = MinPlus::new(-8, 8).unwrap();
        let scan = |x: i64, y: i64| -> Option<i64> {
            let sum = x.min(y);
            (-8..=8).find(|&a| a >= 0 && sum + a == x)
        };
        assert_eq!(scan(5, 2), Some(3));
        assert_eq!(m.absorption_witness(&5, &2), Ok(Some(3)));
        assert_eq!(m.absorption_witness(&2, &5), Ok(Some(0)));
        for x in -8..=8 {
            for y in -8..=8 {
                assert_eq!(m.absorption_witness(&x, &y), Ok(scan(x, y)), "x={x} y={y}");
            }
        }
        // outside the window
        assert_eq!(m.absorption_witness(&8, &-8), Ok(None));
    }

    #[test]
    fn subset_operations() {
        let b = SubsetBitrop::new(3);
        let sweden = set(&b, "{a}");
        let germany = set(&b, "{b}");
        assert_eq!(b.oplus(&sweden, &sweden), Ok(sweden.clone()));
        assert_eq!(b.oplus(&sweden, &germany), Ok(set(&b, "{a,b}")));
        assert_eq!(
            b.otimes(&set(&b, "{a,b}"), &set(&b, "{b,c}")),
            Ok(germany.clone())
        );
        assert_eq!(b.tau(), set(&b, "{a,b,c}"));
        assert!(b.elements().unwrap().all(|g| b.is_positive(&g)));
        assert_eq!(b.absorption_witness(&sweden, &germany), Ok(Some(sweden)));
    }

    #[test]
    fn subset_override_matches_scan() {
        let b = SubsetBitrop::new(3);
        for x in b.elements().unwrap() {
            for y in b.elements().unwrap() {
                let sum = b.oplus(&x, &y).unwrap();
                let scanned = b
                    .elements()
                    .unwrap()
                    .find(|a| b.otimes(&sum, a).unwrap() == x);
                assert_eq!(b.absorption_witness(&x, &y).unwrap(), scanned);
                assert_eq!(scan_absorption_witness(&b, &x, &y).unwrap(), scanned);
            }
        }
    }

    #[test]
    fn subset_rejects_foreign_granulars() {
        let b = SubsetBitrop::new(3);
        let other = Subset::full(4);
        assert!(matches!(
            b.oplus(&b.tau(), &other),
            Err(AlgebraError::Foreign { .. })
        ));
        assert!(matches!(
            b.otimes(&other, &b.tau()),
            Err(AlgebraError::Foreign { .. })
        ));
        assert!(!b.contains(&other));
    }

    #[test]
    fn empty_universe_has_one_granular() {
        let b = SubsetBitrop::new(0);
        assert_eq!(b.size(), Some(1));
        assert_eq!(b.elements().unwrap().collect::<Vec<_>>(), vec![b.tau()]);
    }

    #[test]
    fn subset_rendering_round_trips() {
        let b = SubsetBitrop::new(30);
        let s = Subset::from_indices(30, [0, 2, 27]).unwrap();
        assert_eq!(b.render(&s), "{a,c,k27}");
        assert_eq!(b.parse("{a,c,k27}"), Some(s));
        assert_eq!(b.parse("{}"), Some(Subset::empty(30)));
        assert_eq!(b.parse("{k3}"), None);
        assert_eq!(SubsetBitrop::new(2).parse("{c}"), None);
    }

    #[test]
    fn huge_universe_is_not_enumerable() {
        let b = SubsetBitrop::new(64);
        assert_eq!(b.size(), None);
        assert!(b.elements().is_err());
        assert_eq!(SubsetBitrop::new(63).size(), Some(1 << 63));
    }
}
