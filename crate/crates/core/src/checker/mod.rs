//! Exhaustive and seeded-random verification of the bitrop and mnesor
//! space properties over the built-in models.
//!
//! Exhaustive runs enumerate every assignment of a property's variables in
//! lexicographic order over the canonical carrier order, so the reported
//! counterexample is the least violating assignment. Random runs draw each
//! variable uniformly from a ChaCha8 stream keyed by the seed and the
//! property's position in the full table.

mod laws;
mod report;

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitrop::{MinPlus, RangeError, SubsetBitrop};
use crate::error::AlgebraError;
use crate::mnesor::{ExtendedMinPlus, RelationSpace, TruncatedTropical};
use laws::{
    bitrop_laws, space_laws, BitropUniverse, Law, Oracles, Outcome, SpaceUniverse, Universe, Var,
};

pub use crate::mnesor::find_all_witnesses;
pub use report::{
    AxiomReport, Binding, Counterexample, Group, Kind, Parameters, PropertyEntry, Status,
};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// Largest universe a subset or relation model accepts.
pub const MAX_UNIVERSE: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSelector {
    Subset,
    MinPlus,
    ExtendedMinPlus,
    TruncatedTropical,
    Relation,
}

impl ModelSelector {
    pub const ALL: [ModelSelector; 5] = [
        ModelSelector::Subset,
        ModelSelector::MinPlus,
        ModelSelector::ExtendedMinPlus,
        ModelSelector::TruncatedTropical,
        ModelSelector::Relation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelSelector::Subset => "subset",
            ModelSelector::MinPlus => "minplus",
            ModelSelector::ExtendedMinPlus => "extended-minplus",
            ModelSelector::TruncatedTropical => "truncated-tropical",
            ModelSelector::Relation => "relation",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }

    fn sized_by_universe(self) -> bool {
        matches!(self, ModelSelector::Subset | ModelSelector::Relation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { cases: u64, seed: u64 },
}

/// What to check and how.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckPlan {
    pub model: ModelSelector,
    /// Universe size for `subset` and `relation`.
    pub universe: Option<usize>,
    /// Integer window for the min-plus based models.
    pub range: Option<(i64, i64)>,
    pub mode: Mode,
    /// Property labels or group names (`bitrop`, `space`); empty means all.
    pub only: Vec<String>,
    /// Exhaustive runs refuse plans with more cases than this.
    pub cap: u64,
}

impl CheckPlan {
    pub fn new(model: ModelSelector) -> Self {
        CheckPlan {
            model,
            universe: None,
            range: None,
            mode: Mode::Exhaustive,
            only: Vec::new(),
            cap: DEFAULT_CAP,
        }
    }

    pub fn universe(mut self, n: usize) -> Self {
        self.universe = Some(n);
        self
    }

    pub fn range(mut self, lo: i64, hi: i64) -> Self {
        self.range = Some((lo, hi));
        self
    }

    pub fn random(mut self, cases: u64, seed: u64) -> Self {
        self.mode = Mode::Random { cases, seed };
        self
    }

    pub fn only<I: IntoIterator<Item = S>, S: Into<String>>(mut self, props: I) -> Self {
        self.only = props.into_iter().map(Into::into).collect();
        self
    }

    pub fn cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    fn parameters(&self) -> Parameters {
        let (mode, cases, seed) = match self.mode {
            Mode::Exhaustive => ("exhaustive", None, None),
            Mode::Random { cases, seed } => ("random", Some(cases), Some(seed)),
        };
        Parameters {
            mode,
            universe: self.universe.filter(|_| self.model.sized_by_universe()),
            range: self
                .range
                .filter(|_| !self.model.sized_by_universe())
                .map(|(lo, hi)| [lo, hi]),
            cases,
            seed,
            cap: self.cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("plan needs {total} cases, above the cap of {cap}")]
    CapExceeded { total: u64, cap: u64 },
    #[error("model {model} needs --{parameter}")]
    MissingParameter {
        model: &'static str,
        parameter: &'static str,
    },
    #[error("universe {universe} is larger than the maximum of {MAX_UNIVERSE}")]
    UniverseTooLarge { universe: usize },
    #[error("truncated-tropical range must end at 0, got {lo}..{hi}")]
    RangeMustEndAtZero { lo: i64, hi: i64 },
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error("unknown property `{name}`; known: {}", known.join(", "))]
    UnknownProperty { name: String, known: Vec<String> },
    #[error("stale counterexample: {0}")]
    Stale(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Runs the plan and returns one entry per selected property, bitrop
/// properties first.
pub fn run_check(plan: &CheckPlan) -> Result<AxiomReport, CheckError> {
    let props = dispatch(
        plan,
        &mut Runner {
            entries: Vec::new(),
        },
    )?;
    Ok(AxiomReport {
        model: props.0,
        parameters: plan.parameters(),
        properties: props.1,
    })
}

/// Re-evaluates the counterexample in the plan's model. `Ok(true)` means
/// the violation reproduces.
pub fn verify_counterexample(c: &Counterexample, plan: &CheckPlan) -> Result<bool, CheckError> {
    dispatch(plan, &mut Verifier { c, verdict: None }).map(|(_, v)| v)
}

/// Something done with each (structure, law table) pair of a model.
trait Visitor {
    type Out;
    fn visit<U: Universe>(
        &mut self,
        u: &U,
        laws: &[Law<U>],
        plan: &CheckPlan,
        selected: &Selection,
    ) -> Result<(), CheckError>;
    fn finish(&mut self) -> Result<Self::Out, CheckError>;
}

/// Builds the plan's model and hands its law tables to `v`. Returns the
/// model name with the visitor's result.
fn dispatch<V: Visitor>(plan: &CheckPlan, v: &mut V) -> Result<(String, V::Out), CheckError> {
    let model = plan.model.as_str();
    let universe = || -> Result<usize, CheckError> {
        let n = plan.universe.ok_or(CheckError::MissingParameter {
            model,
            parameter: "universe",
        })?;
        if n > MAX_UNIVERSE {
            return Err(CheckError::UniverseTooLarge { universe: n });
        }
        Ok(n)
    };
    let range = || {
        plan.range.ok_or(CheckError::MissingParameter {
            model,
            parameter: "range",
        })
    };

    match plan.model {
        ModelSelector::Subset => bitrop_only(&SubsetBitrop::new(universe()?), plan, v),
        ModelSelector::MinPlus => {
            let (lo, hi) = range()?;
            bitrop_only(&MinPlus::new(lo, hi)?, plan, v)
        }
        ModelSelector::Relation => with_space(&RelationSpace::new(universe()?), plan, v),
        ModelSelector::ExtendedMinPlus => {
            let (lo, hi) = range()?;
            with_space(&ExtendedMinPlus::new(lo, hi)?, plan, v)
        }
        ModelSelector::TruncatedTropical => {
            let (lo, hi) = range()?;
            if hi != 0 {
                return Err(CheckError::RangeMustEndAtZero { lo, hi });
            }
            with_space(&TruncatedTropical::new(lo)?, plan, v)
        }
    }
}

fn bitrop_only<B: crate::Bitrop, V: Visitor>(
    b: &B,
    plan: &CheckPlan,
    v: &mut V,
) -> Result<(String, V::Out), CheckError> {
    let u = BitropUniverse(b);
    let laws = bitrop_laws::<B>();
    let selected = Selection::new(&plan.only, &[(&u.group(), labels(&laws))])?;
    v.visit(&u, &laws, plan, &selected)?;
    Ok((b.name(), v.finish()?))
}

fn with_space<S: Oracles, V: Visitor>(
    s: &S,
    plan: &CheckPlan,
    v: &mut V,
) -> Result<(String, V::Out), CheckError> {
    let bu = BitropUniverse(s.bitrop());
    let su = SpaceUniverse(s);
    let blaws = bitrop_laws::<S::Scalars>();
    let slaws = space_laws::<S>();
    let selected = Selection::new(
        &plan.only,
        &[
            (&Group::Bitrop, labels(&blaws)),
            (&Group::Space, labels(&slaws)),
        ],
    )?;
    v.visit(&bu, &blaws, plan, &selected)?;
    v.visit(&su, &slaws, plan, &selected)?;
    Ok((s.name(), v.finish()?))
}

fn labels<U: Universe>(laws: &[Law<U>]) -> Vec<&'static str> {
    laws.iter().map(|l| l.label).collect()
}

/// The `--only` filter resolved against the model's tables.
struct Selection {
    all: bool,
    groups: Vec<Group>,
    labels: Vec<(Group, &'static str)>,
}

impl Selection {
    fn new(only: &[String], tables: &[(&Group, Vec<&'static str>)]) -> Result<Self, CheckError> {
        let mut sel = Selection {
            all: only.is_empty(),
            groups: Vec::new(),
            labels: Vec::new(),
        };
        for name in only {
            let name = name.trim();
            if let Some((g, _)) = tables.iter().find(|(g, _)| g.as_str() == name) {
                sel.groups.push(**g);
                continue;
            }
            let hits: Vec<(Group, &'static str)> = tables
                .iter()
                .flat_map(|(g, ls)| ls.iter().filter(|l| **l == name).map(|l| (**g, *l)))
                .collect();
            if hits.is_empty() {
                let mut known: Vec<String> =
                    tables.iter().map(|(g, _)| g.as_str().to_string()).collect();
                known.extend(
                    tables
                        .iter()
                        .flat_map(|(_, ls)| ls.iter().map(|l| l.to_string())),
                );
                return Err(CheckError::UnknownProperty {
                    name: name.to_string(),
                    known,
                });
            }
            sel.labels.extend(hits);
        }
        Ok(sel)
    }

    fn includes(&self, group: Group, label: &str) -> bool {
        self.all
            || self.groups.contains(&group)
            || self.labels.iter().any(|(g, l)| *g == group && *l == label)
    }
}

/// Values a variable ranges over.
enum Domain<G, M> {
    Granulars(Vec<G>),
    Mnesors(Vec<M>),
}

impl<G, M> Domain<G, M> {
    fn len(&self) -> usize {
        match self {
            Domain::Granulars(v) => v.len(),
            Domain::Mnesors(v) => v.len(),
        }
    }
}

fn carrier_size<U: Universe>(u: &U, var: Var) -> Result<u64, CheckError> {
    let size = match var {
        Var::G(_) | Var::P(_) => u.g_size(),
        Var::M(_) => u.m_size(),
    };
    size.ok_or_else(|| AlgebraError::NotEnumerable { model: u.name() }.into())
}

/// Upper bound on the cases an exhaustive run of `law` evaluates.
fn exhaustive_cases<U: Universe>(u: &U, law: &Law<U>) -> Result<u64, CheckError> {
    law.vars
        .iter()
        .try_fold(1u64, |acc, &v| Ok(acc.saturating_mul(carrier_size(u, v)?)))
}

struct Tally {
    cases: u64,
    restricted: u64,
    violations: u64,
    first: Option<Counterexample>,
}

fn record<U: Universe>(
    u: &U,
    law: &Law<U>,
    tally: &mut Tally,
    g: &[U::G],
    m: &[U::M],
) -> Result<(), CheckError> {
    tally.cases += 1;
    match (law.eval)(u, g, m) {
        Ok(Outcome::Holds) => {}
        Ok(Outcome::Restricted)
        | Err(AlgebraError::Overflow { .. })
        | Err(AlgebraError::NoWitness { .. }) => tally.restricted += 1,
        Ok(Outcome::Violated { lhs, rhs }) => {
            tally.violations += 1;
            if tally.first.is_none() {
                tally.first = Some(Counterexample {
                    model: u.name(),
                    property: law.label.to_string(),
                    bindings: bindings(u, law, g, m),
                    lhs,
                    rhs,
                });
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn bindings<U: Universe>(u: &U, law: &Law<U>, g: &[U::G], m: &[U::M]) -> Vec<Binding> {
    let (mut gi, mut mi) = (0, 0);
    law.vars
        .iter()
        .map(|&v| {
            let value = match v {
                Var::M(_) => {
                    mi += 1;
                    u.m_render(&m[mi - 1])
                }
                _ => {
                    gi += 1;
                    u.g_render(&g[gi - 1])
                }
            };
            Binding {
                var: v.name().to_string(),
                value,
            }
        })
        .collect()
}

struct Runner {
    entries: Vec<PropertyEntry>,
}

impl Runner {
    fn exhaustive<U: Universe>(u: &U, law: &Law<U>, tally: &mut Tally) -> Result<(), CheckError> {
        let mut positive: Option<Vec<U::G>> = None;
        let mut domains: Vec<Domain<U::G, U::M>> = Vec::with_capacity(law.vars.len());
        for &var in law.vars {
            let n = carrier_size(u, var)?;
            domains.push(match var {
                Var::G(_) => Domain::Granulars((0..n).map(|i| u.g_nth(i)).collect()),
                Var::P(_) => Domain::Granulars(
                    positive
                        .get_or_insert_with(|| {
                            (0..n)
                                .map(|i| u.g_nth(i))
                                .filter(|g| u.g_positive(g))
                                .collect()
                        })
                        .clone(),
                ),
                Var::M(_) => Domain::Mnesors((0..n).map(|i| u.m_nth(i)).collect()),
            });
        }
        if domains.iter().any(|d| d.len() == 0) {
            return Ok(());
        }

        // odometer, last variable fastest
        let mut idx = vec![0usize; domains.len()];
        let mut g = Vec::new();
        let mut m = Vec::new();
        loop {
            g.clear();
            m.clear();
            for (d, &i) in domains.iter().zip(&idx) {
                match d {
                    Domain::Granulars(v) => g.push(v[i].clone()),
                    Domain::Mnesors(v) => m.push(v[i].clone()),
                }
            }
            record(u, law, tally, &g, &m)?;

            let mut pos = domains.len();
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < domains[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    fn random<U: Universe>(
        u: &U,
        law: &Law<U>,
        stream: u64,
        cases: u64,
        seed: u64,
        tally: &mut Tally,
    ) -> Result<(), CheckError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let sizes: Vec<u64> = law
            .vars
            .iter()
            .map(|&v| carrier_size(u, v))
            .collect::<Result<_, _>>()?;
        if sizes.contains(&0) {
            return Ok(());
        }
        let mut g = Vec::new();
        let mut m = Vec::new();
        for _ in 0..cases {
            g.clear();
            m.clear();
            for (&var, &n) in law.vars.iter().zip(&sizes) {
                match var {
                    Var::G(_) => g.push(u.g_nth(rng.random_range(0..n))),
                    Var::P(_) => g.push(sample_positive(u, &mut rng, n)),
                    Var::M(_) => m.push(u.m_nth(rng.random_range(0..n))),
                }
            }
            record(u, law, tally, &g, &m)?;
        }
        Ok(())
    }
}

/// Rejection sampling of `B⁺`; falls back to a scan from a random start.
fn sample_positive<U: Universe>(u: &U, rng: &mut ChaCha8Rng, n: u64) -> U::G {
    for _ in 0..64 {
        let g = u.g_nth(rng.random_range(0..n));
        if u.g_positive(&g) {
            return g;
        }
    }
    let start = rng.random_range(0..n);
    (0..n)
        .map(|k| u.g_nth((start + k) % n))
        .find(|g| u.g_positive(g))
        .unwrap_or_else(|| u.g_nth(start))
}

impl Visitor for Runner {
    type Out = Vec<PropertyEntry>;

    fn visit<U: Universe>(
        &mut self,
        u: &U,
        laws: &[Law<U>],
        plan: &CheckPlan,
        selected: &Selection,
    ) -> Result<(), CheckError> {
        let group = u.group();
        let chosen: Vec<(usize, &Law<U>)> = laws
            .iter()
            .enumerate()
            .filter(|(_, l)| selected.includes(group, l.label))
            .collect();

        if plan.mode == Mode::Exhaustive {
            let already: u64 = self.entries.iter().map(|e| e.cases).sum();
            let mut total = already;
            for (_, law) in &chosen {
                total = total.saturating_add(exhaustive_cases(u, law)?);
            }
            if total > plan.cap {
                return Err(CheckError::CapExceeded {
                    total,
                    cap: plan.cap,
                });
            }
        }

        for (index, law) in chosen {
            let mut tally = Tally {
                cases: 0,
                restricted: 0,
                violations: 0,
                first: None,
            };
            match plan.mode {
                Mode::Exhaustive => Runner::exhaustive(u, law, &mut tally)?,
                Mode::Random { cases, seed } => {
                    let stream = ((group as u64) << 32) | index as u64;
                    Runner::random(u, law, stream, cases, seed, &mut tally)?
                }
            }
            let status = if tally.violations > 0 {
                Status::Fail
            } else if tally.restricted > 0 {
                Status::Restricted
            } else {
                Status::Pass
            };
            self.entries.push(PropertyEntry {
                label: law.label,
                group,
                kind: law.kind,
                status,
                cases: tally.cases,
                restricted: tally.restricted,
                violations: tally.violations,
                counterexample: tally.first,
            });
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<Vec<PropertyEntry>, CheckError> {
        Ok(core::mem::take(&mut self.entries))
    }
}

struct Verifier<'a> {
    c: &'a Counterexample,
    verdict: Option<bool>,
}

impl Visitor for Verifier<'_> {
    type Out = bool;

    fn visit<U: Universe>(
        &mut self,
        u: &U,
        laws: &[Law<U>],
        _: &CheckPlan,
        _: &Selection,
    ) -> Result<(), CheckError> {
        let c = self.c;
        let Some(law) = laws.iter().find(|l| l.label == c.property) else {
            return Ok(());
        };
        if u.name() != c.model {
            return Err(CheckError::Stale(alloc::format!(
                "recorded for model {}, checking {}",
                c.model,
                u.name()
            )));
        }
        if law.vars.len() != c.bindings.len() {
            return Err(CheckError::Stale(alloc::format!(
                "{} binds {} variables, counterexample has {}",
                law.label,
                law.vars.len(),
                c.bindings.len()
            )));
        }
        let mut g = Vec::new();
        let mut m = Vec::new();
        for (&var, b) in law.vars.iter().zip(&c.bindings) {
            let stale = || {
                CheckError::Stale(alloc::format!(
                    "`{}` = `{}` is not in {}",
                    b.var,
                    b.value,
                    u.name()
                ))
            };
            if b.var != var.name() {
                return Err(CheckError::Stale(alloc::format!(
                    "expected variable `{}`, found `{}`",
                    var.name(),
                    b.var
                )));
            }
            match var {
                Var::G(_) | Var::P(_) => {
                    let v = u
                        .g_parse(&b.value)
                        .filter(|v| u.g_contains(v))
                        .ok_or_else(stale)?;
                    if matches!(var, Var::P(_)) && !u.g_positive(&v) {
                        return Err(stale());
                    }
                    g.push(v);
                }
                Var::M(_) => m.push(
                    u.m_parse(&b.value)
                        .filter(|v| u.m_contains(v))
                        .ok_or_else(stale)?,
                ),
            }
        }
        self.verdict = Some(matches!(
            (law.eval)(u, &g, &m),
            Ok(Outcome::Violated { .. })
        ));
        Ok(())
    }

    fn finish(&mut self) -> Result<bool, CheckError> {
        self.verdict.ok_or_else(|| {
            CheckError::Stale(alloc::format!(
                "no property `{}` in this model",
                self.c.property
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_cancellation_counterexample_is_least() {
        let report = run_check(
            &CheckPlan::new(ModelSelector::Subset)
                .universe(3)
                .only(["cancellation"]),
        )
        .unwrap();
        let e = report.entry("cancellation").unwrap();
        assert_eq!(e.status, Status::Fail);
        let c = e.counterexample.as_ref().unwrap();
        assert_eq!(c.value("x"), Some("{}"));
        assert_eq!(c.value("lambda"), Some("{}"));
        assert_eq!(c.value("mu"), Some("{a}"));
    }

    #[test]
    fn selection_by_group_and_label() {
        let plan = CheckPlan::new(ModelSelector::Relation)
            .universe(2)
            .only(["space", "cancellation"]);
        let report = run_check(&plan).unwrap();
        assert_eq!(report.group(Group::Bitrop).count(), 1);
        assert!(report.group(Group::Space).count() > 20);
    }

    #[test]
    fn unknown_property_is_rejected() {
        let err = run_check(
            &CheckPlan::new(ModelSelector::Subset)
                .universe(1)
                .only(["space"]),
        )
        .unwrap_err();
        assert!(matches!(err, CheckError::UnknownProperty { ref name, .. } if name == "space"));
    }

    #[test]
    fn missing_parameters() {
        assert!(matches!(
            run_check(&CheckPlan::new(ModelSelector::MinPlus)),
            Err(CheckError::MissingParameter {
                parameter: "range",
                ..
            })
        ));
        assert!(matches!(
            run_check(&CheckPlan::new(ModelSelector::Relation)),
            Err(CheckError::MissingParameter {
                parameter: "universe",
                ..
            })
        ));
        assert!(matches!(
            run_check(&CheckPlan::new(ModelSelector::Subset).universe(64)),
            Err(CheckError::UniverseTooLarge { universe: 64 })
        ));
        assert!(matches!(
            run_check(&CheckPlan::new(ModelSelector::TruncatedTropical).range(-3, 2)),
            Err(CheckError::RangeMustEndAtZero { .. })
        ));
        assert!(matches!(
            run_check(&CheckPlan::new(ModelSelector::MinPlus).range(1, 3)),
            Err(CheckError::Range(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let plan = CheckPlan::new(ModelSelector::Subset).universe(3).cap(100);
        assert!(matches!(
            run_check(&plan),
            Err(CheckError::CapExceeded { cap: 100, .. })
        ));
        let err = run_check(&CheckPlan::new(ModelSelector::Relation).universe(40)).unwrap_err();
        assert!(matches!(err, CheckError::CapExceeded { .. }));
    }

    #[test]
    fn model_selector_names_round_trip() {
        for m in ModelSelector::ALL {
            assert_eq!(ModelSelector::parse(m.as_str()), Some(m));
        }
        assert_eq!(ModelSelector::parse("lattice"), None);
    }
}
