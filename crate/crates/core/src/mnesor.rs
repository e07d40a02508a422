//! Commutative mnesor spaces: idempotent semimodules over a bitrop.
//!
//! A space has an addition `+` with identity `0` and an external
//! multiplication `x λ` by granulars. The derived operations (prefix
//! ordering, orbit witnesses, absorption witnesses and the intersection
//! `x ∘ y`) are provided on the trait by scanning the bitrop carrier;
//! models with a closed form override them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::bitrop::{
    element_name, parse_subset, widen_range, Bitrop, MinPlus, RangeError, SubsetBitrop,
};
use crate::error::AlgebraError;
use crate::subset::Subset;

type GranularOf<S> = <<S as MnesorSpace>::Scalars as Bitrop>::Granular;

pub trait MnesorSpace {
    type Scalars: Bitrop;
    type Mnesor: Clone + Eq + Ord + Debug;

    fn name(&self) -> String;

    fn bitrop(&self) -> &Self::Scalars;

    /// Number of enumerated mnesors, `None` when it does not fit in a `u64`.
    fn size(&self) -> Option<u64>;

    /// The mnesor at `index` in canonical order.
    fn nth(&self, index: u64) -> Self::Mnesor;

    fn contains(&self, x: &Self::Mnesor) -> bool;

    fn add(&self, x: &Self::Mnesor, y: &Self::Mnesor) -> Result<Self::Mnesor, AlgebraError>;

    fn zero(&self) -> Self::Mnesor;

    fn scale(&self, x: &Self::Mnesor, g: &GranularOf<Self>) -> Result<Self::Mnesor, AlgebraError>;

    fn render(&self, x: &Self::Mnesor) -> String;

    fn parse(&self, text: &str) -> Option<Self::Mnesor>;

    /// See [`Bitrop::widened`].
    fn widened(&self) -> Option<Self>
    where
        Self: Sized,
    {
        None
    }

    fn elements(&self) -> Result<Mnesors<'_, Self>, AlgebraError>
    where
        Self: Sized,
    {
        let end = self
            .size()
            .ok_or_else(|| AlgebraError::NotEnumerable { model: self.name() })?;
        Ok(Mnesors {
            space: self,
            next: 0,
            end,
        })
    }

    /// Addition ordering: `x + a = a`.
    fn is_prefix(&self, x: &Self::Mnesor, a: &Self::Mnesor) -> Result<bool, AlgebraError> {
        Ok(self.add(x, a)? == *a)
    }

    /// The least `λ ∈ B⁺` with `a λ = x`, if any.
    fn orbit_witness(
        &self,
        x: &Self::Mnesor,
        a: &Self::Mnesor,
    ) -> Result<Option<GranularOf<Self>>, AlgebraError>
    where
        Self: Sized,
    {
        scan_orbit_witness(self, x, a)
    }

    /// The least `α ∈ B⁺` with `(x + y) α = x`. Fails with
    /// [`AlgebraError::NoWitness`] when the carrier holds none.
    fn absorption_granular(
        &self,
        x: &Self::Mnesor,
        y: &Self::Mnesor,
    ) -> Result<GranularOf<Self>, AlgebraError>
    where
        Self: Sized,
    {
        scan_absorption_granular(self, x, y)?.ok_or_else(|| no_absorption(self))
    }

    /// `x ∘ y = y λ` where `λ` is the absorption witness of `(x, y)`.
    fn intersect(&self, x: &Self::Mnesor, y: &Self::Mnesor) -> Result<Self::Mnesor, AlgebraError>
    where
        Self: Sized,
    {
        let lambda = self.absorption_granular(x, y)?;
        self.scale(y, &lambda)
    }
}

pub(crate) fn no_absorption<S: MnesorSpace>(space: &S) -> AlgebraError {
    AlgebraError::NoWitness {
        property: "space-absorption",
        model: space.name(),
    }
}

/// Iterator over a space's carrier in canonical order.
pub struct Mnesors<'a, S> {
    space: &'a S,
    next: u64,
    end: u64,
}

impl<S: MnesorSpace> Iterator for Mnesors<'_, S> {
    type Item = S::Mnesor;

    fn next(&mut self) -> Option<S::Mnesor> {
        (self.next < self.end).then(|| {
            self.next += 1;
            self.space.nth(self.next - 1)
        })
    }
}

/// Ascending scan of `B⁺` for the least `λ` with `a λ = x`.
pub fn scan_orbit_witness<S: MnesorSpace>(
    space: &S,
    x: &S::Mnesor,
    a: &S::Mnesor,
) -> Result<Option<GranularOf<S>>, AlgebraError> {
    let b = space.bitrop();
    for lambda in b.elements()? {
        if b.is_positive(&lambda) && space.scale(a, &lambda)? == *x {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}

/// Ascending scan of `B⁺` for the least `α` with `(x + y) α = x`.
pub fn scan_absorption_granular<S: MnesorSpace>(
    space: &S,
    x: &S::Mnesor,
    y: &S::Mnesor,
) -> Result<Option<GranularOf<S>>, AlgebraError> {
    let sum = space.add(x, y)?;
    let b = space.bitrop();
    for alpha in b.elements()? {
        if b.is_positive(&alpha) && space.scale(&sum, &alpha)? == *x {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

/// Every granular `λ` of the carrier, positive or not, with
/// `(x + y) λ = x`, in canonical order.
pub fn find_all_witnesses<S: MnesorSpace>(
    space: &S,
    x: &S::Mnesor,
    y: &S::Mnesor,
) -> Result<Vec<GranularOf<S>>, AlgebraError> {
    let sum = space.add(x, y)?;
    let mut out = Vec::new();
    for lambda in space.bitrop().elements()? {
        if space.scale(&sum, &lambda)? == *x {
            out.push(lambda);
        }
    }
    Ok(out)
}

/// Attribute values of one row, keyed by attribute name. Missing
/// attributes are nulls.
pub type Row = BTreeMap<String, String>;

/// A set of rows with at most one row per key. Keys are indices into a
/// universe of fixed width.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    width: usize,
    rows: BTreeMap<usize, Row>,
}

impl Relation {
    pub fn empty(width: usize) -> Self {
        Relation {
            width,
            rows: BTreeMap::new(),
        }
    }

    /// Attribute-free rows for every key of `keys`.
    pub fn from_keys(keys: &Subset) -> Self {
        Relation {
            width: keys.width(),
            rows: keys.iter().map(|k| (k, Row::new())).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Inserts a row, returning the previous row for the key if any.
    /// Panics if the key is outside the universe.
    pub fn insert(&mut self, key: usize, row: Row) -> Option<Row> {
        assert!(
            key < self.width,
            "key {key} outside universe of width {}",
            self.width
        );
        self.rows.insert(key, row)
    }

    pub fn get(&self, key: usize) -> Option<&Row> {
        self.rows.get(&key)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &Row)> {
        self.rows.iter().map(|(k, r)| (*k, r))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn keys(&self) -> Subset {
        Subset::from_indices(self.width, self.rows.keys().copied())
            .expect("keys lie in the universe")
    }
}

/// Keyed relations over a universe, scaled by subset granulars:
/// `+` merges rows by key and `x λ` keeps the rows whose key is in `λ`.
///
/// The enumerated carrier is the attribute-free relations, one per key set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationSpace {
    bitrop: SubsetBitrop,
}

impl RelationSpace {
    pub fn new(universe: usize) -> Self {
        RelationSpace {
            bitrop: SubsetBitrop::new(universe),
        }
    }

    pub fn universe(&self) -> usize {
        self.bitrop.universe()
    }

    fn check(&self, x: &Relation) -> Result<(), AlgebraError> {
        if x.width == self.universe() {
            Ok(())
        } else {
            Err(AlgebraError::Foreign {
                model: self.name(),
                value: format!("{x:?}"),
            })
        }
    }
}

impl MnesorSpace for RelationSpace {
    type Scalars = SubsetBitrop;
    type Mnesor = Relation;

    fn name(&self) -> String {
        format!("relation({})", self.universe())
    }

    fn bitrop(&self) -> &SubsetBitrop {
        &self.bitrop
    }

    fn size(&self) -> Option<u64> {
        self.bitrop.size()
    }

    fn nth(&self, index: u64) -> Relation {
        Relation::from_keys(&self.bitrop.nth(index))
    }

    fn contains(&self, x: &Relation) -> bool {
        x.width == self.universe()
    }

    fn add(&self, x: &Relation, y: &Relation) -> Result<Relation, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        let mut out = x.clone();
        for (&key, row) in &y.rows {
            match out.rows.get_mut(&key) {
                None => {
                    out.rows.insert(key, row.clone());
                }
                Some(existing) => {
                    for (attr, value) in row {
                        match existing.get(attr) {
                            Some(v) if v != value => {
                                return Err(AlgebraError::Conflict {
                                    key,
                                    attribute: attr.clone(),
                                })
                            }
                            Some(_) => {}
                            None => {
                                existing.insert(attr.clone(), value.clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn zero(&self) -> Relation {
        Relation::empty(self.universe())
    }

    fn scale(&self, x: &Relation, g: &Subset) -> Result<Relation, AlgebraError> {
        self.check(x)?;
        self.bitrop.check(g)?;
        Ok(Relation {
            width: x.width,
            rows: x
                .rows
                .iter()
                .filter(|(k, _)| g.contains(**k))
                .map(|(k, r)| (*k, r.clone()))
                .collect(),
        })
    }

    fn render(&self, x: &Relation) -> String {
        let mut out = String::from("{");
        for (n, (key, row)) in x.rows.iter().enumerate() {
            if n > 0 {
                out.push(',');
            }
            out.push_str(&element_name(*key));
            if !row.is_empty() {
                let cells: Vec<String> = row.iter().map(|(a, v)| format!("{a}={v}")).collect();
                out.push('(');
                out.push_str(&cells.join(";"));
                out.push(')');
            }
        }
        out.push('}');
        out
    }

    /// Accepts attribute-free relations only.
    fn parse(&self, text: &str) -> Option<Relation> {
        parse_subset(self.universe(), text).map(|keys| Relation::from_keys(&keys))
    }

    /// The key set of `x`, when selecting it from `a` reproduces `x`.
    fn orbit_witness(&self, x: &Relation, a: &Relation) -> Result<Option<Subset>, AlgebraError> {
        let lambda = x.keys();
        Ok((self.scale(a, &lambda)? == *x).then_some(lambda))
    }

    /// The key set of `x`. Rows of `y` that extend a row of `x` with extra
    /// attributes make `(x + y)` differ from `x` on that key, and then no
    /// witness exists.
    fn absorption_granular(&self, x: &Relation, y: &Relation) -> Result<Subset, AlgebraError> {
        let alpha = x.keys();
        if self.scale(&self.add(x, y)?, &alpha)? == *x {
            Ok(alpha)
        } else {
            Err(no_absorption(self))
        }
    }
}

/// Integers in `[floor, 0]` under `min`, scaled by the non-negative
/// min-plus integers with `x λ = min(x + λ, 0)`. `0` is the identity of
/// `min` on this carrier and serves as the space's zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedTropical {
    floor: i64,
    bitrop: MinPlus,
}

impl TruncatedTropical {
    /// Scalars range over `[0, -floor]`, enough to reach every absorption
    /// witness of the carrier.
    pub fn new(floor: i64) -> Result<Self, RangeError> {
        if floor > 0 {
            return Err(RangeError::Missing {
                lo: floor,
                hi: 0,
                required: 0,
            });
        }
        let top = floor
            .checked_neg()
            .ok_or(RangeError::Empty { lo: floor, hi: 0 })?;
        Ok(TruncatedTropical {
            floor,
            bitrop: MinPlus::new(0, top)?,
        })
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    fn overflow(&self) -> AlgebraError {
        AlgebraError::Overflow { model: self.name() }
    }
}

impl MnesorSpace for TruncatedTropical {
    type Scalars = MinPlus;
    type Mnesor = i64;

    fn name(&self) -> String {
        format!("truncated-tropical[{},0]", self.floor)
    }

    fn bitrop(&self) -> &MinPlus {
        &self.bitrop
    }

    fn size(&self) -> Option<u64> {
        u64::try_from(-i128::from(self.floor) + 1).ok()
    }

    fn nth(&self, index: u64) -> i64 {
        self.floor + index as i64
    }

    fn contains(&self, x: &i64) -> bool {
        (self.floor..=0).contains(x)
    }

    fn add(&self, x: &i64, y: &i64) -> Result<i64, AlgebraError> {
        Ok(*x.min(y))
    }

    fn zero(&self) -> i64 {
        0
    }

    fn scale(&self, x: &i64, g: &i64) -> Result<i64, AlgebraError> {
        Ok(x.checked_add(*g).ok_or_else(|| self.overflow())?.min(0))
    }

    fn render(&self, x: &i64) -> String {
        x.to_string()
    }

    fn parse(&self, text: &str) -> Option<i64> {
        text.trim().parse().ok()
    }

    fn widened(&self) -> Option<Self> {
        let (floor, _) = widen_range(self.floor, 0)?;
        TruncatedTropical::new(floor).ok()
    }
}

/// Min-plus integers extended by a top element that is neutral for `min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(i64),
    Top,
}

/// The min-plus integers on `[lo, hi]` plus [`Extended::Top`] as zero,
/// scaled by integer addition with `Top λ = Top`. Absorption fails at
/// `x = Top`: no finite scalar moves a finite value to `Top`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtendedMinPlus {
    bitrop: MinPlus,
}

impl ExtendedMinPlus {
    pub fn new(lo: i64, hi: i64) -> Result<Self, RangeError> {
        Ok(ExtendedMinPlus {
            bitrop: MinPlus::new(lo, hi)?,
        })
    }

    pub fn lo(&self) -> i64 {
        self.bitrop.lo()
    }

    pub fn hi(&self) -> i64 {
        self.bitrop.hi()
    }
}

impl MnesorSpace for ExtendedMinPlus {
    type Scalars = MinPlus;
    type Mnesor = Extended;

    fn name(&self) -> String {
        format!("extended-minplus[{},{}]", self.lo(), self.hi())
    }

    fn bitrop(&self) -> &MinPlus {
        &self.bitrop
    }

    fn size(&self) -> Option<u64> {
        self.bitrop.size()?.checked_add(1)
    }

    fn nth(&self, index: u64) -> Extended {
        match self.bitrop.size() {
            Some(n) if index < n => Extended::Finite(self.bitrop.nth(index)),
            _ => Extended::Top,
        }
    }

    fn contains(&self, x: &Extended) -> bool {
        match x {
            Extended::Finite(v) => self.bitrop.contains(v),
            Extended::Top => true,
        }
    }

    fn add(&self, x: &Extended, y: &Extended) -> Result<Extended, AlgebraError> {
        Ok(*x.min(y))
    }

    fn zero(&self) -> Extended {
        Extended::Top
    }

    fn scale(&self, x: &Extended, g: &i64) -> Result<Extended, AlgebraError> {
        match x {
            Extended::Finite(v) => Ok(Extended::Finite(self.bitrop.otimes(v, g)?)),
            Extended::Top => Ok(Extended::Top),
        }
    }

    fn render(&self, x: &Extended) -> String {
        match x {
            Extended::Finite(v) => v.to_string(),
            Extended::Top => "top".to_string(),
        }
    }

    fn parse(&self, text: &str) -> Option<Extended> {
        match text.trim() {
            "top" => Some(Extended::Top),
            t => t.parse().ok().map(Extended::Finite),
        }
    }

    fn widened(&self) -> Option<Self> {
        Some(ExtendedMinPlus {
            bitrop: self.bitrop.widened()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rel(space: &RelationSpace, text: &str) -> Relation {
        space.parse(text).unwrap()
    }

    fn keys(width: usize, text: &str) -> Subset {
        parse_subset(width, text).unwrap()
    }

    #[test]
    fn relation_addition_is_union() {
        // a=Sweden b=Germany c=France
        let s = RelationSpace::new(3);
        let x = rel(&s, "{a,b}");
        let y = rel(&s, "{c,a}");
        assert_eq!(s.add(&x, &y), Ok(rel(&s, "{a,b,c}")));
        assert_eq!(s.add(&x, &x), Ok(x.clone()));
        assert_eq!(s.add(&x, &s.zero()), Ok(x));
        assert_eq!(s.add(&s.zero(), &s.zero()), Ok(s.zero()));
    }

    #[test]
    fn relation_scale_selects_keys() {
        // a=Sweden d=Australia, eu = {a,b,c}
        let s = RelationSpace::new(4);
        let eu = keys(4, "{a,b,c}");
        assert_eq!(s.scale(&rel(&s, "{a}"), &eu), Ok(rel(&s, "{a}")));
        assert_eq!(s.scale(&rel(&s, "{d}"), &eu), Ok(s.zero()));
        assert_eq!(
            s.scale(&rel(&s, "{a,d}"), &s.bitrop().tau()),
            Ok(rel(&s, "{a,d}"))
        );
    }

    #[test]
    fn relation_prefix() {
        let s = RelationSpace::new(3);
        assert_eq!(s.is_prefix(&rel(&s, "{a}"), &rel(&s, "{a,b}")), Ok(true));
        assert_eq!(s.is_prefix(&rel(&s, "{c}"), &rel(&s, "{a}")), Ok(false));
        for x in s.elements().unwrap() {
            assert_eq!(s.is_prefix(&x, &x), Ok(true));
        }
    }

    #[test]
    fn relation_witnesses() {
        // a=Sweden b=Germany c=Denmark d=France
        let s = RelationSpace::new(4);
        let gd = rel(&s, "{b,c}");
        let gs = rel(&s, "{a,b}");
        assert_eq!(s.absorption_granular(&gd, &gs), Ok(keys(4, "{b,c}")));
        assert_eq!(s.intersect(&gd, &gs), Ok(rel(&s, "{b}")));
        assert_eq!(
            s.orbit_witness(&rel(&s, "{b}"), &gs),
            Ok(Some(keys(4, "{b}")))
        );
        assert_eq!(s.orbit_witness(&rel(&s, "{d}"), &rel(&s, "{b}")), Ok(None));
    }

    #[test]
    fn relation_overrides_agree_with_scans() {
        let s = RelationSpace::new(3);
        for x in s.elements().unwrap() {
            for y in s.elements().unwrap() {
                assert_eq!(
                    Some(s.absorption_granular(&x, &y).unwrap()),
                    scan_absorption_granular(&s, &x, &y).unwrap()
                );
                assert_eq!(
                    s.orbit_witness(&x, &y).unwrap(),
                    scan_orbit_witness(&s, &x, &y).unwrap()
                );
            }
        }
    }

    #[test]
    fn relation_merge_conflict() {
        let s = RelationSpace::new(2);
        let mut x = Relation::empty(2);
        x.insert(
            0,
            Row::from([("capital".to_string(), "Stockholm".to_string())]),
        );
        let mut y = Relation::empty(2);
        y.insert(0, Row::from([("capital".to_string(), "Oslo".to_string())]));
        assert_eq!(
            s.add(&x, &y),
            Err(AlgebraError::Conflict {
                key: 0,
                attribute: "capital".to_string()
            })
        );
    }

    #[test]
    fn relation_merge_fills_missing_attributes() {
        let s = RelationSpace::new(2);
        let mut x = Relation::empty(2);
        x.insert(
            0,
            Row::from([("capital".to_string(), "Stockholm".to_string())]),
        );
        let mut y = Relation::empty(2);
        y.insert(0, Row::from([("currency".to_string(), "SEK".to_string())]));
        y.insert(1, Row::new());
        let sum = s.add(&x, &y).unwrap();
        assert_eq!(sum.get(0).unwrap().len(), 2);
        assert_eq!(s.render(&sum), "{a(capital=Stockholm;currency=SEK),b}");
        // the extra attribute on key 0 defeats absorption
        assert!(matches!(
            s.absorption_granular(&x, &y),
            Err(AlgebraError::NoWitness { .. })
        ));
    }

    #[test]
    fn relation_rejects_foreign_values() {
        let s = RelationSpace::new(3);
        let other = RelationSpace::new(4).zero();
        assert!(matches!(
            s.add(&s.zero(), &other),
            Err(AlgebraError::Foreign { .. })
        ));
        assert!(matches!(
            s.scale(&s.zero(), &Subset::full(4)),
            Err(AlgebraError::Foreign { .. })
        ));
    }

    #[test]
    fn truncated_tropical_operations() {
        let t = TruncatedTropical::new(-6).unwrap();
        assert_eq!(t.add(&-3, &-5), Ok(-5));
        assert_eq!(t.scale(&-1, &5), Ok(0));
        assert_eq!(t.intersect(&-3, &-5), Ok(-3));
        for x in t.elements().unwrap() {
            assert_eq!(t.add(&x, &t.zero()), Ok(x));
            assert_eq!(t.orbit_witness(&x, &x), Ok(Some(0)));
            for y in t.elements().unwrap() {
                assert_eq!(t.add(&x, &y), Ok(x.min(y)));
                assert_eq!(t.intersect(&x, &y), Ok(x.max(y)));
            }
        }
        assert_eq!(t.bitrop().lo(), 0);
        assert_eq!(t.bitrop().hi(), 6);
    }

    #[test]
    fn truncated_tropical_rejects_positive_floor() {
        assert!(TruncatedTropical::new(1).is_err());
        assert_eq!(TruncatedTropical::new(0).unwrap().size(), Some(1));
    }

    #[test]
    fn extended_minplus_lacks_absorption_at_top() {
        let e = ExtendedMinPlus::new(-6, 6).unwrap();
        assert_eq!(e.zero(), Extended::Top);
        assert_eq!(e.size(), Some(14));
        assert_eq!(e.nth(13), Extended::Top);
        assert!(matches!(
            e.absorption_granular(&Extended::Top, &Extended::Finite(2)),
            Err(AlgebraError::NoWitness { .. })
        ));
        assert_eq!(
            e.absorption_granular(&Extended::Finite(3), &Extended::Finite(1)),
            Ok(2)
        );
        assert_eq!(e.parse("top"), Some(Extended::Top));
        assert_eq!(e.render(&Extended::Finite(-4)), "-4");
    }

    #[test]
    fn find_all_witnesses_lists_every_selector() {
        let s = RelationSpace::new(3);
        let x = rel(&s, "{a}");
        let y = rel(&s, "{a,b}");
        let all = find_all_witnesses(&s, &x, &y).unwrap();
        assert_eq!(all, vec![keys(3, "{a}"), keys(3, "{a,c}")]);
        let same = find_all_witnesses(&s, &x, &x).unwrap();
        assert!(same.contains(&s.bitrop().tau()));
    }
}
