//! The property tables.
//!
//! Every property is a function of its bound variables that either holds,
//! is violated (with the two disagreeing sides), or is restricted: decided
//! only by values outside the bounded window, or undefined there.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::convert::Infallible;

use super::report::{Group, Kind};
use crate::bitrop::{scan_absorption_witness, Bitrop};
use crate::error::AlgebraError;
use crate::mnesor::{
    find_all_witnesses, scan_absorption_granular, scan_orbit_witness, ExtendedMinPlus, MnesorSpace,
    Relation, RelationSpace, TruncatedTropical,
};

pub(crate) enum Outcome {
    Holds,
    Violated { lhs: String, rhs: String },
    Restricted,
}

/// A quantified variable: any granular, a granular of `B⁺`, or a mnesor.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Var {
    G(&'static str),
    P(&'static str),
    M(&'static str),
}

impl Var {
    pub(crate) fn name(self) -> &'static str {
        match self {
            Var::G(n) | Var::P(n) | Var::M(n) => n,
        }
    }
}

/// What the engine needs from a structure under test.
pub(crate) trait Universe {
    type G: Clone + Eq;
    type M: Clone + Eq;

    fn name(&self) -> String;
    fn group(&self) -> Group;

    fn g_size(&self) -> Option<u64>;
    fn g_nth(&self, i: u64) -> Self::G;
    fn g_positive(&self, g: &Self::G) -> bool;
    fn g_contains(&self, g: &Self::G) -> bool;
    fn g_render(&self, g: &Self::G) -> String;
    fn g_parse(&self, s: &str) -> Option<Self::G>;

    fn m_size(&self) -> Option<u64>;
    fn m_nth(&self, i: u64) -> Self::M;
    fn m_contains(&self, m: &Self::M) -> bool;
    fn m_render(&self, m: &Self::M) -> String;
    fn m_parse(&self, s: &str) -> Option<Self::M>;
}

pub(crate) type Eval<U> =
    fn(&U, &[<U as Universe>::G], &[<U as Universe>::M]) -> Result<Outcome, AlgebraError>;

pub(crate) struct Law<U: Universe> {
    pub label: &'static str,
    pub kind: Kind,
    pub vars: &'static [Var],
    pub eval: Eval<U>,
}

pub(crate) struct BitropUniverse<'a, B>(pub &'a B);

impl<B: Bitrop> Universe for BitropUniverse<'_, B> {
    type G = B::Granular;
    type M = Infallible;

    fn name(&self) -> String {
        self.0.name()
    }
    fn group(&self) -> Group {
        Group::Bitrop
    }
    fn g_size(&self) -> Option<u64> {
        self.0.size()
    }
    fn g_nth(&self, i: u64) -> B::Granular {
        self.0.nth(i)
    }
    fn g_positive(&self, g: &B::Granular) -> bool {
        self.0.is_positive(g)
    }
    fn g_contains(&self, g: &B::Granular) -> bool {
        self.0.contains(g)
    }
    fn g_render(&self, g: &B::Granular) -> String {
        self.0.render(g)
    }
    fn g_parse(&self, s: &str) -> Option<B::Granular> {
        self.0.parse(s)
    }
    fn m_size(&self) -> Option<u64> {
        Some(0)
    }
    fn m_nth(&self, _: u64) -> Infallible {
        unreachable!("a bitrop has no mnesors")
    }
    fn m_contains(&self, m: &Infallible) -> bool {
        match *m {}
    }
    fn m_render(&self, m: &Infallible) -> String {
        match *m {}
    }
    fn m_parse(&self, _: &str) -> Option<Infallible> {
        None
    }
}

pub(crate) struct SpaceUniverse<'a, S>(pub &'a S);

type Gr<S> = <<S as MnesorSpace>::Scalars as Bitrop>::Granular;

impl<S: MnesorSpace> Universe for SpaceUniverse<'_, S> {
    type G = Gr<S>;
    type M = S::Mnesor;

    fn name(&self) -> String {
        self.0.name()
    }
    fn group(&self) -> Group {
        Group::Space
    }
    fn g_size(&self) -> Option<u64> {
        self.0.bitrop().size()
    }
    fn g_nth(&self, i: u64) -> Gr<S> {
        self.0.bitrop().nth(i)
    }
    fn g_positive(&self, g: &Gr<S>) -> bool {
        self.0.bitrop().is_positive(g)
    }
    fn g_contains(&self, g: &Gr<S>) -> bool {
        self.0.bitrop().contains(g)
    }
    fn g_render(&self, g: &Gr<S>) -> String {
        self.0.bitrop().render(g)
    }
    fn g_parse(&self, s: &str) -> Option<Gr<S>> {
        self.0.bitrop().parse(s)
    }
    fn m_size(&self) -> Option<u64> {
        self.0.size()
    }
    fn m_nth(&self, i: u64) -> S::Mnesor {
        self.0.nth(i)
    }
    fn m_contains(&self, m: &S::Mnesor) -> bool {
        self.0.contains(m)
    }
    fn m_render(&self, m: &S::Mnesor) -> String {
        self.0.render(m)
    }
    fn m_parse(&self, s: &str) -> Option<S::Mnesor> {
        self.0.parse(s)
    }
}

fn agree<T: PartialEq>(lhs: T, rhs: T, render: impl Fn(&T) -> String) -> Outcome {
    if lhs == rhs {
        Outcome::Holds
    } else {
        Outcome::Violated {
            lhs: render(&lhs),
            rhs: render(&rhs),
        }
    }
}

/// Decides an existential whose witness search failed in the window: a
/// witness in the widened window means the failure is a truncation
/// artifact.
fn missing_witness(found_when_widened: Option<bool>, lhs: String, rhs: String) -> Outcome {
    match found_when_widened {
        Some(true) => Outcome::Restricted,
        _ => Outcome::Violated { lhs, rhs },
    }
}

const OUTSIDE: &str = "outside the carrier";

fn closure(inside: bool, widenable: bool, value: String) -> Outcome {
    match (inside, widenable) {
        (true, _) => Outcome::Holds,
        (false, true) => Outcome::Restricted,
        (false, false) => Outcome::Violated {
            lhs: value,
            rhs: OUTSIDE.to_string(),
        },
    }
}

type BU<'a, B> = BitropUniverse<'a, B>;
type BOut = Result<Outcome, AlgebraError>;

pub(crate) fn bitrop_laws<'a, B: Bitrop + 'a>() -> Vec<Law<BU<'a, B>>> {
    fn r<'u, B: Bitrop>(u: &'u BU<'_, B>) -> impl Fn(&B::Granular) -> String + 'u {
        move |g| u.0.render(g)
    }

    fn oplus_closure<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let v = u.0.oplus(&g[0], &g[1])?;
        Ok(closure(
            u.0.contains(&v),
            u.0.widened().is_some(),
            u.0.render(&v),
        ))
    }
    fn otimes_closure<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let v = u.0.otimes(&g[0], &g[1])?;
        Ok(closure(
            u.0.contains(&v),
            u.0.widened().is_some(),
            u.0.render(&v),
        ))
    }
    fn oplus_comm<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        Ok(agree(b.oplus(&g[0], &g[1])?, b.oplus(&g[1], &g[0])?, r(u)))
    }
    fn oplus_assoc<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        let lhs = b.oplus(&b.oplus(&g[0], &g[1])?, &g[2])?;
        let rhs = b.oplus(&g[0], &b.oplus(&g[1], &g[2])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn otimes_comm<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        Ok(agree(
            b.otimes(&g[0], &g[1])?,
            b.otimes(&g[1], &g[0])?,
            r(u),
        ))
    }
    fn otimes_assoc<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        let lhs = b.otimes(&b.otimes(&g[0], &g[1])?, &g[2])?;
        let rhs = b.otimes(&g[0], &b.otimes(&g[1], &g[2])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn distrib_left<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        let lhs = b.otimes(&g[0], &b.oplus(&g[1], &g[2])?)?;
        let rhs = b.oplus(&b.otimes(&g[0], &g[1])?, &b.otimes(&g[0], &g[2])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn distrib_right<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        let lhs = b.otimes(&b.oplus(&g[1], &g[2])?, &g[0])?;
        let rhs = b.oplus(&b.otimes(&g[1], &g[0])?, &b.otimes(&g[2], &g[0])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn center_unit<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        Ok(agree(u.0.otimes(&g[0], &u.0.tau())?, g[0].clone(), r(u)))
    }
    fn center_idempotent<B: Bitrop>(u: &BU<'_, B>, _: &[B::Granular], _: &[Infallible]) -> BOut {
        let tau = u.0.tau();
        Ok(agree(u.0.oplus(&tau, &tau)?, tau, r(u)))
    }
    fn center_inside<B: Bitrop>(u: &BU<'_, B>, _: &[B::Granular], _: &[Infallible]) -> BOut {
        Ok(closure(
            u.0.contains(&u.0.tau()),
            false,
            u.0.render(&u.0.tau()),
        ))
    }
    fn absorption<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        if scan_absorption_witness(b, &g[0], &g[1])?.is_some() {
            return Ok(Outcome::Holds);
        }
        let widened = match b.widened() {
            Some(w) => Some(scan_absorption_witness(&w, &g[0], &g[1])?.is_some()),
            None => None,
        };
        Ok(missing_witness(
            widened,
            b.render(&b.oplus(&g[0], &g[1])?),
            b.render(&g[0]),
        ))
    }
    fn cancellation<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let b = u.0;
        let lhs = b.otimes(&g[0], &g[1])?;
        let rhs = b.otimes(&g[0], &g[2])?;
        Ok(if lhs != rhs || g[1] == g[2] {
            Outcome::Holds
        } else {
            Outcome::Violated {
                lhs: b.render(&lhs),
                rhs: b.render(&rhs),
            }
        })
    }
    fn cone_oplus<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let v = u.0.oplus(&g[0], &g[1])?;
        Ok(agree(u.0.is_positive(&v), true, |p| {
            if *p {
                "in B+".into()
            } else {
                u.0.render(&v)
            }
        }))
    }
    fn cone_otimes<B: Bitrop>(u: &BU<'_, B>, g: &[B::Granular], _: &[Infallible]) -> BOut {
        let v = u.0.otimes(&g[0], &g[1])?;
        Ok(agree(u.0.is_positive(&v), true, |p| {
            if *p {
                "in B+".into()
            } else {
                u.0.render(&v)
            }
        }))
    }

    use Var::{G, P};
    vec![
        Law {
            label: "center-in-carrier",
            kind: Kind::Closure,
            vars: &[],
            eval: center_inside::<B>,
        },
        Law {
            label: "oplus-closure",
            kind: Kind::Closure,
            vars: &[G("x"), G("y")],
            eval: oplus_closure::<B>,
        },
        Law {
            label: "otimes-closure",
            kind: Kind::Closure,
            vars: &[G("x"), G("y")],
            eval: otimes_closure::<B>,
        },
        Law {
            label: "oplus-commutative",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y")],
            eval: oplus_comm::<B>,
        },
        Law {
            label: "oplus-associative",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y"), G("z")],
            eval: oplus_assoc::<B>,
        },
        Law {
            label: "otimes-commutative",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y")],
            eval: otimes_comm::<B>,
        },
        Law {
            label: "otimes-associative",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y"), G("z")],
            eval: otimes_assoc::<B>,
        },
        Law {
            label: "distributive-left",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y"), G("z")],
            eval: distrib_left::<B>,
        },
        Law {
            label: "distributive-right",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y"), G("z")],
            eval: distrib_right::<B>,
        },
        Law {
            label: "center-unit",
            kind: Kind::Axiom,
            vars: &[G("x")],
            eval: center_unit::<B>,
        },
        Law {
            label: "center-idempotent",
            kind: Kind::Axiom,
            vars: &[],
            eval: center_idempotent::<B>,
        },
        Law {
            label: "bitrop-absorption",
            kind: Kind::Axiom,
            vars: &[G("x"), G("y")],
            eval: absorption::<B>,
        },
        Law {
            label: "cancellation",
            kind: Kind::Axiom,
            vars: &[G("x"), P("lambda"), P("mu")],
            eval: cancellation::<B>,
        },
        Law {
            label: "cone-oplus-closure",
            kind: Kind::Measurement,
            vars: &[P("lambda"), P("mu")],
            eval: cone_oplus::<B>,
        },
        Law {
            label: "cone-otimes-closure",
            kind: Kind::Measurement,
            vars: &[P("lambda"), P("mu")],
            eval: cone_otimes::<B>,
        },
    ]
}

type SU<'a, S> = SpaceUniverse<'a, S>;

/// Space models with extra closed-form checks.
pub(crate) trait Oracles: MnesorSpace + Sized {
    fn oracle_laws<'a>() -> Vec<Law<SU<'a, Self>>>
    where
        Self: 'a,
    {
        Vec::new()
    }
}

impl Oracles for ExtendedMinPlus {}

impl Oracles for RelationSpace {
    fn oracle_laws<'a>() -> Vec<Law<SU<'a, Self>>> {
        /// Rows of `x` whose key also has a row in `y`.
        fn naive(x: &Relation, y: &Relation) -> Relation {
            let mut out = Relation::empty(x.width());
            for (k, row) in x.rows() {
                if y.get(k).is_some() {
                    out.insert(k, row.clone());
                }
            }
            out
        }
        fn intersect_oracle(
            u: &SU<'_, RelationSpace>,
            _: &[Gr<RelationSpace>],
            m: &[Relation],
        ) -> BOut {
            Ok(agree(
                u.0.intersect(&m[0], &m[1])?,
                naive(&m[0], &m[1]),
                |x| u.0.render(x),
            ))
        }
        vec![Law {
            label: "intersect-oracle",
            kind: Kind::Oracle,
            vars: &[Var::M("x"), Var::M("y")],
            eval: intersect_oracle,
        }]
    }
}

impl Oracles for TruncatedTropical {
    fn oracle_laws<'a>() -> Vec<Law<SU<'a, Self>>> {
        fn add_is_min(u: &SU<'_, TruncatedTropical>, _: &[i64], m: &[i64]) -> BOut {
            Ok(agree(u.0.add(&m[0], &m[1])?, m[0].min(m[1]), |v| {
                v.to_string()
            }))
        }
        fn intersect_is_max(u: &SU<'_, TruncatedTropical>, _: &[i64], m: &[i64]) -> BOut {
            Ok(agree(u.0.intersect(&m[0], &m[1])?, m[0].max(m[1]), |v| {
                v.to_string()
            }))
        }
        vec![
            Law {
                label: "add-oracle",
                kind: Kind::Oracle,
                vars: &[Var::M("x"), Var::M("y")],
                eval: add_is_min,
            },
            Law {
                label: "intersect-oracle",
                kind: Kind::Oracle,
                vars: &[Var::M("x"), Var::M("y")],
                eval: intersect_is_max,
            },
        ]
    }
}

pub(crate) fn space_laws<'a, S: Oracles + 'a>() -> Vec<Law<SU<'a, S>>> {
    type M<S> = <S as MnesorSpace>::Mnesor;

    fn r<'u, S: MnesorSpace>(u: &'u SU<'_, S>) -> impl Fn(&S::Mnesor) -> String + 'u {
        move |x| u.0.render(x)
    }

    fn add_closure<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let v = u.0.add(&m[0], &m[1])?;
        Ok(closure(
            u.0.contains(&v),
            u.0.widened().is_some(),
            u.0.render(&v),
        ))
    }
    fn scale_closure<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        let v = u.0.scale(&m[0], &g[0])?;
        Ok(closure(
            u.0.contains(&v),
            u.0.widened().is_some(),
            u.0.render(&v),
        ))
    }
    fn zero_identity<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let left = s.add(&s.zero(), &m[0])?;
        if left != m[0] {
            return Ok(agree(left, m[0].clone(), r(u)));
        }
        Ok(agree(s.add(&m[0], &s.zero())?, m[0].clone(), r(u)))
    }
    fn add_comm<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        Ok(agree(u.0.add(&m[0], &m[1])?, u.0.add(&m[1], &m[0])?, r(u)))
    }
    fn add_assoc<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let lhs = s.add(&s.add(&m[0], &m[1])?, &m[2])?;
        let rhs = s.add(&m[0], &s.add(&m[1], &m[2])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn add_idem<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        Ok(agree(u.0.add(&m[0], &m[0])?, m[0].clone(), r(u)))
    }
    fn unital<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        Ok(agree(
            u.0.scale(&m[0], &u.0.bitrop().tau())?,
            m[0].clone(),
            r(u),
        ))
    }
    fn mnesor_distrib<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let lhs = s.scale(&s.add(&m[0], &m[1])?, &g[0])?;
        let rhs = s.add(&s.scale(&m[0], &g[0])?, &s.scale(&m[1], &g[0])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn scale_assoc<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let lhs = s.scale(&s.scale(&m[0], &g[0])?, &g[1])?;
        let rhs = s.scale(&m[0], &s.bitrop().otimes(&g[0], &g[1])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn granular_distrib<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let lhs = s.scale(&m[0], &s.bitrop().oplus(&g[0], &g[1])?)?;
        let rhs = s.add(&s.scale(&m[0], &g[0])?, &s.scale(&m[0], &g[1])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn absorption<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        if scan_absorption_granular(s, &m[0], &m[1])?.is_some() {
            return Ok(Outcome::Holds);
        }
        let widened = match s.widened() {
            Some(w) => Some(scan_absorption_granular(&w, &m[0], &m[1])?.is_some()),
            None => None,
        };
        Ok(missing_witness(
            widened,
            s.render(&s.add(&m[0], &m[1])?),
            s.render(&m[0]),
        ))
    }
    fn prefix_to_orbit<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let (s, x, a) = (u.0, &m[0], &m[1]);
        if !s.is_prefix(x, a)? || scan_orbit_witness(s, x, a)?.is_some() {
            return Ok(Outcome::Holds);
        }
        let widened = match s.widened() {
            Some(w) => Some(scan_orbit_witness(&w, x, a)?.is_some()),
            None => None,
        };
        Ok(missing_witness(widened, s.render(a), s.render(x)))
    }
    fn orbit_to_prefix<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        let (s, x, a) = (u.0, &m[0], &m[1]);
        if s.scale(a, &g[0])? != *x {
            return Ok(Outcome::Holds);
        }
        Ok(agree(s.add(x, a)?, a.clone(), r(u)))
    }
    fn prefix_antisym<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let (s, x, a) = (u.0, &m[0], &m[1]);
        if s.is_prefix(x, a)? && s.is_prefix(a, x)? {
            return Ok(agree(x.clone(), a.clone(), r(u)));
        }
        Ok(Outcome::Holds)
    }
    fn prefix_trans<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        if s.is_prefix(&m[0], &m[1])? && s.is_prefix(&m[1], &m[2])? {
            return Ok(agree(s.add(&m[0], &m[2])?, m[2].clone(), r(u)));
        }
        Ok(Outcome::Holds)
    }
    fn orbit_antisym<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        let (s, x, a) = (u.0, &m[0], &m[1]);
        if s.scale(a, &g[0])? == *x && s.scale(x, &g[1])? == *a {
            return Ok(agree(x.clone(), a.clone(), r(u)));
        }
        Ok(Outcome::Holds)
    }
    fn orbit_trans<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], m: &[M<S>]) -> BOut {
        // x = yλ and y = zμ give x = z(μ ⊗ λ) with μ ⊗ λ in B⁺
        let s = u.0;
        if s.scale(&m[1], &g[0])? != m[0] || s.scale(&m[2], &g[1])? != m[1] {
            return Ok(Outcome::Holds);
        }
        let composed = s.bitrop().otimes(&g[1], &g[0])?;
        if !s.bitrop().is_positive(&composed) {
            return Ok(Outcome::Violated {
                lhs: s.bitrop().render(&composed),
                rhs: "in B+".into(),
            });
        }
        Ok(agree(s.scale(&m[2], &composed)?, m[0].clone(), r(u)))
    }
    fn uniqueness<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let mut images = find_all_witnesses(s, &m[0], &m[1])?
            .into_iter()
            .map(|l| s.scale(&m[1], &l));
        let Some(first) = images.next().transpose()? else {
            return Ok(Outcome::Holds);
        };
        for img in images {
            let img = img?;
            if img != first {
                return Ok(agree(first, img, r(u)));
            }
        }
        Ok(Outcome::Holds)
    }
    fn symmetric_meet<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        // (x + y)λ = x and (y + x)μ = y give xμ = yλ
        let s = u.0;
        let lambda = s.absorption_granular(&m[0], &m[1])?;
        let mu = s.absorption_granular(&m[1], &m[0])?;
        Ok(agree(s.scale(&m[0], &mu)?, s.scale(&m[1], &lambda)?, r(u)))
    }
    fn canonical_absorption<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let b = s.bitrop();
        let scanned = scan_absorption_granular(s, &m[0], &m[1])?;
        let chosen = match s.absorption_granular(&m[0], &m[1]) {
            Ok(g) => Some(g),
            Err(AlgebraError::NoWitness { .. }) => None,
            Err(e) => return Err(e),
        };
        let show = |g: &Option<Gr<S>>| g.as_ref().map_or_else(|| "none".into(), |g| b.render(g));
        if let Some(c) = &chosen {
            if !b.is_positive(c) || s.scale(&s.add(&m[0], &m[1])?, c)? != m[0] {
                return Ok(Outcome::Violated {
                    lhs: b.render(c),
                    rhs: "a positive absorption witness".into(),
                });
            }
        }
        Ok(agree(chosen, scanned, show))
    }
    fn canonical_orbit<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let b = s.bitrop();
        let show = |g: &Option<Gr<S>>| g.as_ref().map_or_else(|| "none".into(), |g| b.render(g));
        Ok(agree(
            s.orbit_witness(&m[0], &m[1])?,
            scan_orbit_witness(s, &m[0], &m[1])?,
            show,
        ))
    }
    fn lattice_add<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        Ok(agree(
            s.add(&m[0], &s.intersect(&m[0], &m[1])?)?,
            m[0].clone(),
            r(u),
        ))
    }
    fn lattice_meet<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        Ok(agree(
            s.intersect(&m[0], &s.add(&m[0], &m[1])?)?,
            m[0].clone(),
            r(u),
        ))
    }
    fn meet_comm<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        Ok(agree(
            u.0.intersect(&m[0], &m[1])?,
            u.0.intersect(&m[1], &m[0])?,
            r(u),
        ))
    }
    fn meet_assoc<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        let s = u.0;
        let lhs = s.intersect(&s.intersect(&m[0], &m[1])?, &m[2])?;
        let rhs = s.intersect(&m[0], &s.intersect(&m[1], &m[2])?)?;
        Ok(agree(lhs, rhs, r(u)))
    }
    fn meet_idem<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], m: &[M<S>]) -> BOut {
        Ok(agree(u.0.intersect(&m[0], &m[0])?, m[0].clone(), r(u)))
    }
    fn zero_scale<S: MnesorSpace>(u: &SU<'_, S>, g: &[Gr<S>], _: &[M<S>]) -> BOut {
        Ok(agree(u.0.scale(&u.0.zero(), &g[0])?, u.0.zero(), r(u)))
    }
    fn zero_inside<S: MnesorSpace>(u: &SU<'_, S>, _: &[Gr<S>], _: &[M<S>]) -> BOut {
        Ok(closure(
            u.0.contains(&u.0.zero()),
            false,
            u.0.render(&u.0.zero()),
        ))
    }

    use Var::{G, M as Mn, P};
    let mut laws = vec![
        Law {
            label: "zero-in-carrier",
            kind: Kind::Closure,
            vars: &[],
            eval: zero_inside::<S>,
        },
        Law {
            label: "add-closure",
            kind: Kind::Closure,
            vars: &[Mn("x"), Mn("y")],
            eval: add_closure::<S>,
        },
        Law {
            label: "scale-closure",
            kind: Kind::Closure,
            vars: &[Mn("x"), G("lambda")],
            eval: scale_closure::<S>,
        },
        Law {
            label: "zero-identity",
            kind: Kind::Axiom,
            vars: &[Mn("x")],
            eval: zero_identity::<S>,
        },
        Law {
            label: "add-commutative",
            kind: Kind::Axiom,
            vars: &[Mn("x"), Mn("y")],
            eval: add_comm::<S>,
        },
        Law {
            label: "add-associative",
            kind: Kind::Axiom,
            vars: &[Mn("x"), Mn("y"), Mn("z")],
            eval: add_assoc::<S>,
        },
        Law {
            label: "unital",
            kind: Kind::Axiom,
            vars: &[Mn("x")],
            eval: unital::<S>,
        },
        Law {
            label: "mnesor-distributivity",
            kind: Kind::Axiom,
            vars: &[Mn("x"), Mn("y"), G("lambda")],
            eval: mnesor_distrib::<S>,
        },
        Law {
            label: "scale-associativity",
            kind: Kind::Axiom,
            vars: &[Mn("x"), G("lambda"), G("mu")],
            eval: scale_assoc::<S>,
        },
        Law {
            label: "granular-distributivity",
            kind: Kind::Axiom,
            vars: &[Mn("x"), G("lambda"), G("mu")],
            eval: granular_distrib::<S>,
        },
        Law {
            label: "space-absorption",
            kind: Kind::Axiom,
            vars: &[Mn("x"), Mn("y")],
            eval: absorption::<S>,
        },
        Law {
            label: "add-idempotent",
            kind: Kind::Theorem,
            vars: &[Mn("x")],
            eval: add_idem::<S>,
        },
        Law {
            label: "prefix-antisymmetric",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("a")],
            eval: prefix_antisym::<S>,
        },
        Law {
            label: "prefix-transitive",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y"), Mn("z")],
            eval: prefix_trans::<S>,
        },
        Law {
            label: "orbit-antisymmetric",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("a"), P("lambda"), P("mu")],
            eval: orbit_antisym::<S>,
        },
        Law {
            label: "orbit-transitive",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y"), Mn("z"), P("lambda"), P("mu")],
            eval: orbit_trans::<S>,
        },
        Law {
            label: "ordering-prefix-to-orbit",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("a")],
            eval: prefix_to_orbit::<S>,
        },
        Law {
            label: "ordering-orbit-to-prefix",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("a"), P("lambda")],
            eval: orbit_to_prefix::<S>,
        },
        Law {
            label: "intersection-uniqueness",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y")],
            eval: uniqueness::<S>,
        },
        Law {
            label: "intersection-symmetric",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y")],
            eval: symmetric_meet::<S>,
        },
        Law {
            label: "meet-commutative",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y")],
            eval: meet_comm::<S>,
        },
        Law {
            label: "meet-associative",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y"), Mn("z")],
            eval: meet_assoc::<S>,
        },
        Law {
            label: "meet-idempotent",
            kind: Kind::Theorem,
            vars: &[Mn("x")],
            eval: meet_idem::<S>,
        },
        Law {
            label: "lattice-absorption-add",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y")],
            eval: lattice_add::<S>,
        },
        Law {
            label: "lattice-absorption-meet",
            kind: Kind::Theorem,
            vars: &[Mn("x"), Mn("y")],
            eval: lattice_meet::<S>,
        },
        Law {
            label: "canonical-absorption-witness",
            kind: Kind::Contract,
            vars: &[Mn("x"), Mn("y")],
            eval: canonical_absorption::<S>,
        },
        Law {
            label: "canonical-orbit-witness",
            kind: Kind::Contract,
            vars: &[Mn("x"), Mn("a")],
            eval: canonical_orbit::<S>,
        },
        Law {
            label: "zero-scale",
            kind: Kind::Measurement,
            vars: &[G("lambda")],
            eval: zero_scale::<S>,
        },
    ];
    laws.extend(S::oracle_laws());
    laws
}
