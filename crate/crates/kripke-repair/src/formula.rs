//! CTL and ATL formulas: syntax trees, a text grammar, desugaring into the
//! core fragment, and the sub-formula closure that drives both the model
//! checker and the repair encoding.
//!
//! The core CTL fragment is `true`, `false`, propositions, `~`, `&`, `|`,
//! `AX`, `EX`, and the release forms `A[f V g]` / `E[f V g]`. Everything
//! else is sugar:
//!
//! ```text
//! A[f U g] = ~E[~f V ~g]        AF f = A[true U f]     AG f = A[false V f]
//! E[f U g] = ~A[~f V ~g]        EF f = E[true U f]     EG f = E[false V f]
//! f -> g   = ~f | g
//! ```
//!
//! ATL mirrors this with coalition operators `<<a,b>>X f`, `<<a>>[f U g]`,
//! `<<a>>F f`, `<<a>>G f`; until desugars through the complement coalition,
//! so the player universe is a desugaring parameter.
//!
//! Operator precedence, loosest first: `->`, `|`, `&`, then the prefix
//! operators (`~`, `AX`, ..., `<<..>>X`). `->` associates to the right,
//! `&` and `|` to the left. `A[...]` and `E[...]` delimit themselves.
//!
//! Negation is a first-class connective everywhere: desugaring never pushes
//! it inward, and the only simplification it applies is `~true = false`,
//! `~false = true` on negations it introduces itself.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A CTL formula. Children are reference-counted, so cloning is cheap and
/// trees may share subtrees freely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ctl {
    True,
    False,
    Prop(String),
    Not(Arc<Ctl>),
    And(Arc<Ctl>, Arc<Ctl>),
    Or(Arc<Ctl>, Arc<Ctl>),
    Implies(Arc<Ctl>, Arc<Ctl>),
    Ax(Arc<Ctl>),
    Ex(Arc<Ctl>),
    Au(Arc<Ctl>, Arc<Ctl>),
    Eu(Arc<Ctl>, Arc<Ctl>),
    Av(Arc<Ctl>, Arc<Ctl>),
    Ev(Arc<Ctl>, Arc<Ctl>),
    Af(Arc<Ctl>),
    Ef(Arc<Ctl>),
    Ag(Arc<Ctl>),
    Eg(Arc<Ctl>),
}

impl Ctl {
    pub fn prop(name: impl Into<String>) -> Ctl {
        Ctl::Prop(name.into())
    }
    pub fn not(a: Ctl) -> Ctl {
        Ctl::Not(Arc::new(a))
    }
    pub fn and(a: Ctl, b: Ctl) -> Ctl {
        Ctl::And(Arc::new(a), Arc::new(b))
    }
    pub fn or(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Or(Arc::new(a), Arc::new(b))
    }
    pub fn implies(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Implies(Arc::new(a), Arc::new(b))
    }
    pub fn ax(a: Ctl) -> Ctl {
        Ctl::Ax(Arc::new(a))
    }
    pub fn ex(a: Ctl) -> Ctl {
        Ctl::Ex(Arc::new(a))
    }
    pub fn au(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Au(Arc::new(a), Arc::new(b))
    }
    pub fn eu(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Eu(Arc::new(a), Arc::new(b))
    }
    pub fn av(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Av(Arc::new(a), Arc::new(b))
    }
    pub fn ev(a: Ctl, b: Ctl) -> Ctl {
        Ctl::Ev(Arc::new(a), Arc::new(b))
    }
    pub fn af(a: Ctl) -> Ctl {
        Ctl::Af(Arc::new(a))
    }
    pub fn ef(a: Ctl) -> Ctl {
        Ctl::Ef(Arc::new(a))
    }
    pub fn ag(a: Ctl) -> Ctl {
        Ctl::Ag(Arc::new(a))
    }
    pub fn eg(a: Ctl) -> Ctl {
        Ctl::Eg(Arc::new(a))
    }

    /// Negation that folds the constants it is applied to. Used by
    /// desugaring so that `A[true U f]` becomes `~E[false V ~f]` rather
    /// than `~E[~true V ~f]`.
    fn not_folding(a: Ctl) -> Ctl {
        match a {
            Ctl::True => Ctl::False,
            Ctl::False => Ctl::True,
            other => Ctl::not(other),
        }
    }

    /// True when the formula uses only core connectives.
    pub fn is_core(&self) -> bool {
        match self {
            Ctl::True | Ctl::False | Ctl::Prop(_) => true,
            Ctl::Not(a) | Ctl::Ax(a) | Ctl::Ex(a) => a.is_core(),
            Ctl::And(a, b) | Ctl::Or(a, b) | Ctl::Av(a, b) | Ctl::Ev(a, b) => {
                a.is_core() && b.is_core()
            }
            Ctl::Implies(..)
            | Ctl::Au(..)
            | Ctl::Eu(..)
            | Ctl::Af(_)
            | Ctl::Ef(_)
            | Ctl::Ag(_)
            | Ctl::Eg(_) => false,
        }
    }

    /// Rewrites every sugared connective into the core fragment. Idempotent;
    /// the result satisfies [`Ctl::is_core`].
    pub fn desugar(&self) -> Ctl {
        match self {
            Ctl::True | Ctl::False | Ctl::Prop(_) => self.clone(),
            Ctl::Not(a) => Ctl::not(a.desugar()),
            Ctl::And(a, b) => Ctl::and(a.desugar(), b.desugar()),
            Ctl::Or(a, b) => Ctl::or(a.desugar(), b.desugar()),
            Ctl::Implies(a, b) => Ctl::or(Ctl::not_folding(a.desugar()), b.desugar()),
            Ctl::Ax(a) => Ctl::ax(a.desugar()),
            Ctl::Ex(a) => Ctl::ex(a.desugar()),
            Ctl::Av(a, b) => Ctl::av(a.desugar(), b.desugar()),
            Ctl::Ev(a, b) => Ctl::ev(a.desugar(), b.desugar()),
            Ctl::Au(a, b) => Ctl::not(Ctl::ev(
                Ctl::not_folding(a.desugar()),
                Ctl::not_folding(b.desugar()),
            )),
            Ctl::Eu(a, b) => Ctl::not(Ctl::av(
                Ctl::not_folding(a.desugar()),
                Ctl::not_folding(b.desugar()),
            )),
            Ctl::Af(a) => Ctl::not(Ctl::ev(Ctl::False, Ctl::not_folding(a.desugar()))),
            Ctl::Ef(a) => Ctl::not(Ctl::av(Ctl::False, Ctl::not_folding(a.desugar()))),
            Ctl::Ag(a) => Ctl::av(Ctl::False, a.desugar()),
            Ctl::Eg(a) => Ctl::ev(Ctl::False, a.desugar()),
        }
    }

    /// Number of syntax tree nodes; drives the canonical closure order.
    pub fn size(&self) -> usize {
        match self {
            Ctl::True | Ctl::False | Ctl::Prop(_) => 1,
            Ctl::Not(a) | Ctl::Ax(a) | Ctl::Ex(a) | Ctl::Af(a) | Ctl::Ef(a) | Ctl::Ag(a)
            | Ctl::Eg(a) => 1 + a.size(),
            Ctl::And(a, b)
            | Ctl::Or(a, b)
            | Ctl::Implies(a, b)
            | Ctl::Au(a, b)
            | Ctl::Eu(a, b)
            | Ctl::Av(a, b)
            | Ctl::Ev(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// The propositions the formula mentions.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Ctl::True | Ctl::False => {}
            Ctl::Prop(p) => {
                out.insert(p.clone());
            }
            Ctl::Not(a) | Ctl::Ax(a) | Ctl::Ex(a) | Ctl::Af(a) | Ctl::Ef(a) | Ctl::Ag(a)
            | Ctl::Eg(a) => a.collect_props(out),
            Ctl::And(a, b)
            | Ctl::Or(a, b)
            | Ctl::Implies(a, b)
            | Ctl::Au(a, b)
            | Ctl::Eu(a, b)
            | Ctl::Av(a, b)
            | Ctl::Ev(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Ctl::Implies(..) => 0,
            Ctl::Or(..) => 1,
            Ctl::And(..) => 2,
            Ctl::Not(_) | Ctl::Ax(_) | Ctl::Ex(_) | Ctl::Af(_) | Ctl::Ef(_) | Ctl::Ag(_)
            | Ctl::Eg(_) => 3,
            Ctl::True | Ctl::False | Ctl::Prop(_) | Ctl::Au(..) | Ctl::Eu(..) | Ctl::Av(..)
            | Ctl::Ev(..) => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Ctl, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "(")?;
                c.write(f)?;
                write!(f, ")")
            } else {
                c.write(f)
            }
        }
        match self {
            Ctl::True => write!(f, "true"),
            Ctl::False => write!(f, "false"),
            Ctl::Prop(p) => write!(f, "{p}"),
            Ctl::Not(a) => {
                write!(f, "~")?;
                child(f, a, 3)
            }
            Ctl::Ax(a) => {
                write!(f, "AX ")?;
                child(f, a, 3)
            }
            Ctl::Ex(a) => {
                write!(f, "EX ")?;
                child(f, a, 3)
            }
            Ctl::Af(a) => {
                write!(f, "AF ")?;
                child(f, a, 3)
            }
            Ctl::Ef(a) => {
                write!(f, "EF ")?;
                child(f, a, 3)
            }
            Ctl::Ag(a) => {
                write!(f, "AG ")?;
                child(f, a, 3)
            }
            Ctl::Eg(a) => {
                write!(f, "EG ")?;
                child(f, a, 3)
            }
            Ctl::And(a, b) => {
                child(f, a, 2)?;
                write!(f, " & ")?;
                child(f, b, 3)
            }
            Ctl::Or(a, b) => {
                child(f, a, 1)?;
                write!(f, " | ")?;
                child(f, b, 2)
            }
            Ctl::Implies(a, b) => {
                child(f, a, 1)?;
                write!(f, " -> ")?;
                child(f, b, 0)
            }
            Ctl::Au(a, b) | Ctl::Eu(a, b) | Ctl::Av(a, b) | Ctl::Ev(a, b) => {
                let (path, sep) = match self {
                    Ctl::Au(..) => ("A", "U"),
                    Ctl::Eu(..) => ("E", "U"),
                    Ctl::Av(..) => ("A", "V"),
                    _ => ("E", "V"),
                };
                write!(f, "{path}[")?;
                a.write(f)?;
                write!(f, " {sep} ")?;
                b.write(f)?;
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Ctl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

/// Canonical order used for sub-formula closures: strictly smaller formulas
/// first, ties broken by the printed form. Strict subformulas always sort
/// before the formulas containing them.
pub(crate) fn closure_sort<T: fmt::Display>(items: &mut Vec<T>, size: impl Fn(&T) -> usize) {
    items.sort_by_cached_key(|i| (size(i), i.to_string()));
    items.dedup_by_key(|i| i.to_string());
}

/// The sub-formula closure of a core CTL formula.
///
/// Besides the structural subformulas, each release form `A[f V g]`
/// contributes its one-step expansion members `AX A[f V g]`,
/// `f | AX A[f V g]` and `g & (f | AX A[f V g])` (dually for `E`); these are
/// exactly the formulas the repair encoding needs satisfaction variables
/// for. The result is deduplicated (identical printed forms collapse) and
/// sorted in the canonical order, and always contains the formula itself.
///
/// Panics if the formula is not in core form; desugar first.
pub fn sub(phi: &Ctl) -> Vec<Ctl> {
    assert!(phi.is_core(), "sub() expects a core formula; call desugar() first");
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out: Vec<Ctl> = Vec::new();
    collect_sub(phi, &mut seen, &mut out);
    closure_sort(&mut out, Ctl::size);
    out
}

fn push_unique(f: Ctl, seen: &mut BTreeSet<String>, out: &mut Vec<Ctl>) {
    if seen.insert(f.to_string()) {
        out.push(f);
    }
}

fn collect_sub(phi: &Ctl, seen: &mut BTreeSet<String>, out: &mut Vec<Ctl>) {
    match phi {
        Ctl::True | Ctl::False | Ctl::Prop(_) => push_unique(phi.clone(), seen, out),
        Ctl::Not(a) | Ctl::Ax(a) | Ctl::Ex(a) => {
            push_unique(phi.clone(), seen, out);
            collect_sub(a, seen, out);
        }
        Ctl::And(a, b) | Ctl::Or(a, b) => {
            push_unique(phi.clone(), seen, out);
            collect_sub(a, seen, out);
            collect_sub(b, seen, out);
        }
        Ctl::Av(a, b) | Ctl::Ev(a, b) => {
            let next = if matches!(phi, Ctl::Av(..)) { Ctl::ax(phi.clone()) } else { Ctl::ex(phi.clone()) };
            let unroll_or = Ctl::Or(a.clone(), Arc::new(next.clone()));
            let unroll_and = Ctl::And(b.clone(), Arc::new(unroll_or.clone()));
            push_unique(phi.clone(), seen, out);
            push_unique(next, seen, out);
            push_unique(unroll_or, seen, out);
            push_unique(unroll_and, seen, out);
            collect_sub(a, seen, out);
            collect_sub(b, seen, out);
        }
        _ => unreachable!("non-core formula in collect_sub"),
    }
}

/// A coalition: the set of players moving jointly in an ATL operator.
pub type Coalition = BTreeSet<String>;

/// An ATL formula over a turn-based game structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atl {
    True,
    False,
    Prop(String),
    Not(Arc<Atl>),
    And(Arc<Atl>, Arc<Atl>),
    Or(Arc<Atl>, Arc<Atl>),
    Implies(Arc<Atl>, Arc<Atl>),
    /// `<<A>>X f`: the coalition can force `f` at the next step.
    CoalX(Coalition, Arc<Atl>),
    /// `<<A>>[f V g]`: the coalition can force `g` to hold up to and
    /// including the first state where `f` holds, or forever.
    CoalV(Coalition, Arc<Atl>, Arc<Atl>),
    CoalU(Coalition, Arc<Atl>, Arc<Atl>),
    CoalF(Coalition, Arc<Atl>),
    CoalG(Coalition, Arc<Atl>),
}

impl Atl {
    pub fn prop(name: impl Into<String>) -> Atl {
        Atl::Prop(name.into())
    }
    pub fn not(a: Atl) -> Atl {
        Atl::Not(Arc::new(a))
    }
    pub fn and(a: Atl, b: Atl) -> Atl {
        Atl::And(Arc::new(a), Arc::new(b))
    }
    pub fn or(a: Atl, b: Atl) -> Atl {
        Atl::Or(Arc::new(a), Arc::new(b))
    }
    pub fn implies(a: Atl, b: Atl) -> Atl {
        Atl::Implies(Arc::new(a), Arc::new(b))
    }
    pub fn coal_x(a: impl IntoCoalition, f: Atl) -> Atl {
        Atl::CoalX(a.into_coalition(), Arc::new(f))
    }
    pub fn coal_v(a: impl IntoCoalition, f: Atl, g: Atl) -> Atl {
        Atl::CoalV(a.into_coalition(), Arc::new(f), Arc::new(g))
    }
    pub fn coal_u(a: impl IntoCoalition, f: Atl, g: Atl) -> Atl {
        Atl::CoalU(a.into_coalition(), Arc::new(f), Arc::new(g))
    }
    pub fn coal_f(a: impl IntoCoalition, f: Atl) -> Atl {
        Atl::CoalF(a.into_coalition(), Arc::new(f))
    }
    pub fn coal_g(a: impl IntoCoalition, f: Atl) -> Atl {
        Atl::CoalG(a.into_coalition(), Arc::new(f))
    }

    fn not_folding(a: Atl) -> Atl {
        match a {
            Atl::True => Atl::False,
            Atl::False => Atl::True,
            other => Atl::not(other),
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            Atl::True | Atl::False | Atl::Prop(_) => true,
            Atl::Not(a) | Atl::CoalX(_, a) => a.is_core(),
            Atl::And(a, b) | Atl::Or(a, b) | Atl::CoalV(_, a, b) => a.is_core() && b.is_core(),
            Atl::Implies(..) | Atl::CoalU(..) | Atl::CoalF(..) | Atl::CoalG(..) => false,
        }
    }

    /// The players mentioned by coalitions anywhere in the formula.
    pub fn players(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_players(&mut out);
        out
    }

    fn collect_players(&self, out: &mut BTreeSet<String>) {
        match self {
            Atl::True | Atl::False | Atl::Prop(_) => {}
            Atl::Not(a) => a.collect_players(out),
            Atl::And(a, b) | Atl::Or(a, b) | Atl::Implies(a, b) => {
                a.collect_players(out);
                b.collect_players(out);
            }
            Atl::CoalX(c, a) | Atl::CoalF(c, a) | Atl::CoalG(c, a) => {
                out.extend(c.iter().cloned());
                a.collect_players(out);
            }
            Atl::CoalV(c, a, b) | Atl::CoalU(c, a, b) => {
                out.extend(c.iter().cloned());
                a.collect_players(out);
                b.collect_players(out);
            }
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Atl::True | Atl::False => {}
            Atl::Prop(p) => {
                out.insert(p.clone());
            }
            Atl::Not(a) | Atl::CoalX(_, a) | Atl::CoalF(_, a) | Atl::CoalG(_, a) => {
                a.collect_props(out)
            }
            Atl::And(a, b) | Atl::Or(a, b) | Atl::Implies(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            Atl::CoalV(_, a, b) | Atl::CoalU(_, a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Atl::True | Atl::False | Atl::Prop(_) => 1,
            Atl::Not(a) | Atl::CoalX(_, a) | Atl::CoalF(_, a) | Atl::CoalG(_, a) => 1 + a.size(),
            Atl::And(a, b) | Atl::Or(a, b) | Atl::Implies(a, b) | Atl::CoalV(_, a, b)
            | Atl::CoalU(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Atl::Implies(..) => 0,
            Atl::Or(..) => 1,
            Atl::And(..) => 2,
            Atl::Not(_) | Atl::CoalX(..) | Atl::CoalF(..) | Atl::CoalG(..) => 3,
            Atl::True | Atl::False | Atl::Prop(_) | Atl::CoalV(..) | Atl::CoalU(..) => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn coalition(f: &mut fmt::Formatter<'_>, c: &Coalition) -> fmt::Result {
            write!(f, "<<")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ">>")
        }
        fn child(f: &mut fmt::Formatter<'_>, c: &Atl, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "(")?;
                c.write(f)?;
                write!(f, ")")
            } else {
                c.write(f)
            }
        }
        match self {
            Atl::True => write!(f, "true"),
            Atl::False => write!(f, "false"),
            Atl::Prop(p) => write!(f, "{p}"),
            Atl::Not(a) => {
                write!(f, "~")?;
                child(f, a, 3)
            }
            Atl::And(a, b) => {
                child(f, a, 2)?;
                write!(f, " & ")?;
                child(f, b, 3)
            }
            Atl::Or(a, b) => {
                child(f, a, 1)?;
                write!(f, " | ")?;
                child(f, b, 2)
            }
            Atl::Implies(a, b) => {
                child(f, a, 1)?;
                write!(f, " -> ")?;
                child(f, b, 0)
            }
            Atl::CoalX(c, a) => {
                coalition(f, c)?;
                write!(f, "X ")?;
                child(f, a, 3)
            }
            Atl::CoalF(c, a) => {
                coalition(f, c)?;
                write!(f, "F ")?;
                child(f, a, 3)
            }
            Atl::CoalG(c, a) => {
                coalition(f, c)?;
                write!(f, "G ")?;
                child(f, a, 3)
            }
            Atl::CoalV(c, a, b) | Atl::CoalU(c, a, b) => {
                let sep = if matches!(self, Atl::CoalV(..)) { "V" } else { "U" };
                coalition(f, c)?;
                write!(f, "[")?;
                a.write(f)?;
                write!(f, " {sep} ")?;
                b.write(f)?;
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Atl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

/// Coalition constructor helper accepted by the `Atl` builder methods.
pub trait IntoCoalition {
    fn into_coalition(self) -> Coalition;
}

impl IntoCoalition for Coalition {
    fn into_coalition(self) -> Coalition {
        self
    }
}

impl<const N: usize> IntoCoalition for [&str; N] {
    fn into_coalition(self) -> Coalition {
        self.iter().map(|s| s.to_string()).collect()
    }
}

/// Error from [`atl_desugar`]: a coalition mentions a player outside the
/// declared universe.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("coalition mentions `{player}` which is not a declared player")]
pub struct UnknownPlayer {
    pub player: String,
}

/// Rewrites an ATL formula into the core fragment (`CoalX`, `CoalV`,
/// booleans). Until goes through the complement coalition, which is why the
/// player universe must be supplied:
///
/// ```text
/// <<A>>[f U g] = ~<<Players-A>>[~f V ~g]
/// <<A>>F f     = <<A>>[true U f]
/// <<A>>G f     = <<A>>[false V f]
/// ```
pub fn atl_desugar(phi: &Atl, players: &BTreeSet<String>) -> Result<Atl, UnknownPlayer> {
    for p in phi.players() {
        if !players.contains(&p) {
            return Err(UnknownPlayer { player: p });
        }
    }
    Ok(atl_desugar_inner(phi, players))
}

fn complement(players: &BTreeSet<String>, c: &Coalition) -> Coalition {
    players.difference(c).cloned().collect()
}

fn atl_desugar_inner(phi: &Atl, players: &BTreeSet<String>) -> Atl {
    match phi {
        Atl::True | Atl::False | Atl::Prop(_) => phi.clone(),
        Atl::Not(a) => Atl::not(atl_desugar_inner(a, players)),
        Atl::And(a, b) => {
            Atl::and(atl_desugar_inner(a, players), atl_desugar_inner(b, players))
        }
        Atl::Or(a, b) => Atl::or(atl_desugar_inner(a, players), atl_desugar_inner(b, players)),
        Atl::Implies(a, b) => Atl::or(
            Atl::not_folding(atl_desugar_inner(a, players)),
            atl_desugar_inner(b, players),
        ),
        Atl::CoalX(c, a) => Atl::CoalX(c.clone(), Arc::new(atl_desugar_inner(a, players))),
        Atl::CoalV(c, a, b) => Atl::CoalV(
            c.clone(),
            Arc::new(atl_desugar_inner(a, players)),
            Arc::new(atl_desugar_inner(b, players)),
        ),
        Atl::CoalU(c, a, b) => Atl::not(Atl::CoalV(
            complement(players, c),
            Arc::new(Atl::not_folding(atl_desugar_inner(a, players))),
            Arc::new(Atl::not_folding(atl_desugar_inner(b, players))),
        )),
        Atl::CoalF(c, a) => atl_desugar_inner(
            &Atl::CoalU(c.clone(), Arc::new(Atl::True), a.clone()),
            players,
        ),
        Atl::CoalG(c, a) => Atl::CoalV(
            c.clone(),
            Arc::new(Atl::False),
            Arc::new(atl_desugar_inner(a, players)),
        ),
    }
}

/// The sub-formula closure of a core ATL formula, mirroring [`sub`]: each
/// `<<A>>[f V g]` contributes `<<A>>X <<A>>[f V g]`, the disjunction with
/// `f`, and the conjunction with `g`. Panics on non-core input.
pub fn atl_sub(phi: &Atl) -> Vec<Atl> {
    assert!(phi.is_core(), "atl_sub() expects a core formula; call atl_desugar() first");
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out: Vec<Atl> = Vec::new();
    collect_atl_sub(phi, &mut seen, &mut out);
    closure_sort(&mut out, Atl::size);
    out
}

fn push_unique_atl(f: Atl, seen: &mut BTreeSet<String>, out: &mut Vec<Atl>) {
    if seen.insert(f.to_string()) {
        out.push(f);
    }
}

fn collect_atl_sub(phi: &Atl, seen: &mut BTreeSet<String>, out: &mut Vec<Atl>) {
    match phi {
        Atl::True | Atl::False | Atl::Prop(_) => push_unique_atl(phi.clone(), seen, out),
        Atl::Not(a) | Atl::CoalX(_, a) => {
            push_unique_atl(phi.clone(), seen, out);
            collect_atl_sub(a, seen, out);
        }
        Atl::And(a, b) | Atl::Or(a, b) => {
            push_unique_atl(phi.clone(), seen, out);
            collect_atl_sub(a, seen, out);
            collect_atl_sub(b, seen, out);
        }
        Atl::CoalV(c, a, b) => {
            let next = Atl::CoalX(c.clone(), Arc::new(phi.clone()));
            let unroll_or = Atl::Or(a.clone(), Arc::new(next.clone()));
            let unroll_and = Atl::And(b.clone(), Arc::new(unroll_or.clone()));
            push_unique_atl(phi.clone(), seen, out);
            push_unique_atl(next, seen, out);
            push_unique_atl(unroll_or, seen, out);
            push_unique_atl(unroll_and, seen, out);
            collect_atl_sub(a, seen, out);
            collect_atl_sub(b, seen, out);
        }
        _ => unreachable!("non-core formula in collect_atl_sub"),
    }
}

/// Formula syntax error with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct FormulaParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngles,
    RAngles,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(i) => return write!(f, "`{i}`"),
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LAngles => "`<<`",
            Tok::RAngles => "`>>`",
            Tok::Comma => "`,`",
        };
        f.write_str(s)
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexer, FormulaParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '~' => {
                bump(&mut chars);
                toks.push((Tok::Tilde, tline, tcol));
            }
            '&' => {
                bump(&mut chars);
                toks.push((Tok::Amp, tline, tcol));
            }
            '|' => {
                bump(&mut chars);
                toks.push((Tok::Pipe, tline, tcol));
            }
            '(' => {
                bump(&mut chars);
                toks.push((Tok::LParen, tline, tcol));
            }
            ')' => {
                bump(&mut chars);
                toks.push((Tok::RParen, tline, tcol));
            }
            '[' => {
                bump(&mut chars);
                toks.push((Tok::LBracket, tline, tcol));
            }
            ']' => {
                bump(&mut chars);
                toks.push((Tok::RBracket, tline, tcol));
            }
            ',' => {
                bump(&mut chars);
                toks.push((Tok::Comma, tline, tcol));
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    toks.push((Tok::Arrow, tline, tcol));
                } else {
                    return Err(FormulaParseError {
                        line: tline,
                        col: tcol,
                        message: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'<') {
                    bump(&mut chars);
                    toks.push((Tok::LAngles, tline, tcol));
                } else {
                    return Err(FormulaParseError {
                        line: tline,
                        col: tcol,
                        message: "expected `<<`".into(),
                    });
                }
            }
            '>' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    toks.push((Tok::RAngles, tline, tcol));
                } else {
                    return Err(FormulaParseError {
                        line: tline,
                        col: tcol,
                        message: "expected `>>`".into(),
                    });
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(ident), tline, tcol));
            }
            other => {
                return Err(FormulaParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(Lexer { toks, end: (line, col) })
}

struct Parser {
    lexer: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexer.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.lexer.toks.get(self.pos).map(|&(_, l, c)| (l, c)).unwrap_or(self.lexer.end)
    }

    fn err(&self, message: impl Into<String>) -> FormulaParseError {
        let (line, col) = self.here();
        FormulaParseError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.lexer.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), FormulaParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {want}, found {t}"))),
            None => Err(self.err(format!("expected {want}, found end of input"))),
        }
    }

    fn expect_path_sep(&mut self) -> Result<bool, FormulaParseError> {
        match self.peek() {
            Some(Tok::Ident(i)) if i == "U" => {
                self.pos += 1;
                Ok(true)
            }
            Some(Tok::Ident(i)) if i == "V" => {
                self.pos += 1;
                Ok(false)
            }
            Some(t) => Err(self.err(format!("expected `U` or `V`, found {t}"))),
            None => Err(self.err("expected `U` or `V`, found end of input")),
        }
    }
}

const RESERVED_ATOMS: &[&str] = &["AX", "EX", "AF", "EF", "AG", "EG", "U", "V", "X", "F", "G"];

/// Parses a CTL formula. Identifiers are propositions except for the
/// operator keywords; `A` and `E` act as path quantifiers only when
/// immediately followed by `[`.
pub fn parse_ctl(text: &str) -> Result<Ctl, FormulaParseError> {
    let mut p = Parser { lexer: lex(text)?, pos: 0 };
    let f = ctl_implies(&mut p)?;
    if let Some(t) = p.peek() {
        return Err(p.err(format!("unexpected {t} after formula")));
    }
    Ok(f)
}

fn ctl_implies(p: &mut Parser) -> Result<Ctl, FormulaParseError> {
    let lhs = ctl_or(p)?;
    if p.peek() == Some(&Tok::Arrow) {
        p.pos += 1;
        let rhs = ctl_implies(p)?;
        return Ok(Ctl::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn ctl_or(p: &mut Parser) -> Result<Ctl, FormulaParseError> {
    let mut lhs = ctl_and(p)?;
    while p.peek() == Some(&Tok::Pipe) {
        p.pos += 1;
        let rhs = ctl_and(p)?;
        lhs = Ctl::or(lhs, rhs);
    }
    Ok(lhs)
}

fn ctl_and(p: &mut Parser) -> Result<Ctl, FormulaParseError> {
    let mut lhs = ctl_unary(p)?;
    while p.peek() == Some(&Tok::Amp) {
        p.pos += 1;
        let rhs = ctl_unary(p)?;
        lhs = Ctl::and(lhs, rhs);
    }
    Ok(lhs)
}

fn ctl_unary(p: &mut Parser) -> Result<Ctl, FormulaParseError> {
    match p.peek() {
        Some(Tok::Tilde) => {
            p.pos += 1;
            Ok(Ctl::not(ctl_unary(p)?))
        }
        Some(Tok::Ident(i)) => match i.as_str() {
            "AX" => {
                p.pos += 1;
                Ok(Ctl::ax(ctl_unary(p)?))
            }
            "EX" => {
                p.pos += 1;
                Ok(Ctl::ex(ctl_unary(p)?))
            }
            "AF" => {
                p.pos += 1;
                Ok(Ctl::af(ctl_unary(p)?))
            }
            "EF" => {
                p.pos += 1;
                Ok(Ctl::ef(ctl_unary(p)?))
            }
            "AG" => {
                p.pos += 1;
                Ok(Ctl::ag(ctl_unary(p)?))
            }
            "EG" => {
                p.pos += 1;
                Ok(Ctl::eg(ctl_unary(p)?))
            }
            _ => ctl_primary(p),
        },
        _ => ctl_primary(p),
    }
}

fn ctl_primary(p: &mut Parser) -> Result<Ctl, FormulaParseError> {
    match p.next() {
        Some(Tok::LParen) => {
            let f = ctl_implies(p)?;
            p.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(i)) => match i.as_str() {
            "true" => Ok(Ctl::True),
            "false" => Ok(Ctl::False),
            "A" | "E" if p.peek() == Some(&Tok::LBracket) => {
                p.pos += 1;
                let a = ctl_implies(p)?;
                let until = p.expect_path_sep()?;
                let b = ctl_implies(p)?;
                p.expect(&Tok::RBracket)?;
                Ok(match (i.as_str(), until) {
                    ("A", true) => Ctl::au(a, b),
                    ("A", false) => Ctl::av(a, b),
                    ("E", true) => Ctl::eu(a, b),
                    _ => Ctl::ev(a, b),
                })
            }
            w if RESERVED_ATOMS.contains(&w) => {
                p.pos -= 1;
                Err(p.err(format!("`{w}` is a reserved word, not a proposition")))
            }
            _ => Ok(Ctl::prop(i)),
        },
        Some(t) => {
            p.pos -= 1;
            Err(p.err(format!("expected a formula, found {t}")))
        }
        None => Err(p.err("expected a formula, found end of input")),
    }
}

/// Parses an ATL formula. The coalition syntax is `<<a,b>>` (possibly
/// empty: `<<>>`) immediately followed by `X f`, `F f`, `G f`, or
/// `[f U g]` / `[f V g]`.
pub fn parse_atl(text: &str) -> Result<Atl, FormulaParseError> {
    let mut p = Parser { lexer: lex(text)?, pos: 0 };
    let f = atl_implies(&mut p)?;
    if let Some(t) = p.peek() {
        return Err(p.err(format!("unexpected {t} after formula")));
    }
    Ok(f)
}

fn atl_implies(p: &mut Parser) -> Result<Atl, FormulaParseError> {
    let lhs = atl_or(p)?;
    if p.peek() == Some(&Tok::Arrow) {
        p.pos += 1;
        let rhs = atl_implies(p)?;
        return Ok(Atl::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn atl_or(p: &mut Parser) -> Result<Atl, FormulaParseError> {
    let mut lhs = atl_and(p)?;
    while p.peek() == Some(&Tok::Pipe) {
        p.pos += 1;
        let rhs = atl_and(p)?;
        lhs = Atl::or(lhs, rhs);
    }
    Ok(lhs)
}

fn atl_and(p: &mut Parser) -> Result<Atl, FormulaParseError> {
    let mut lhs = atl_unary(p)?;
    while p.peek() == Some(&Tok::Amp) {
        p.pos += 1;
        let rhs = atl_unary(p)?;
        lhs = Atl::and(lhs, rhs);
    }
    Ok(lhs)
}

fn atl_unary(p: &mut Parser) -> Result<Atl, FormulaParseError> {
    match p.peek() {
        Some(Tok::Tilde) => {
            p.pos += 1;
            Ok(Atl::not(atl_unary(p)?))
        }
        Some(Tok::LAngles) => {
            p.pos += 1;
            let mut coalition = Coalition::new();
            if p.peek() != Some(&Tok::RAngles) {
                loop {
                    match p.next() {
                        Some(Tok::Ident(i)) => {
                            coalition.insert(i);
                        }
                        Some(t) => {
                            p.pos -= 1;
                            return Err(p.err(format!("expected a player name, found {t}")));
                        }
                        None => return Err(p.err("expected a player name, found end of input")),
                    }
                    match p.peek() {
                        Some(Tok::Comma) => {
                            p.pos += 1;
                        }
                        _ => break,
                    }
                }
            }
            p.expect(&Tok::RAngles)?;
            match p.next() {
                Some(Tok::Ident(i)) if i == "X" => Ok(Atl::CoalX(coalition, Arc::new(atl_unary(p)?))),
                Some(Tok::Ident(i)) if i == "F" => Ok(Atl::CoalF(coalition, Arc::new(atl_unary(p)?))),
                Some(Tok::Ident(i)) if i == "G" => Ok(Atl::CoalG(coalition, Arc::new(atl_unary(p)?))),
                Some(Tok::LBracket) => {
                    let a = atl_implies(p)?;
                    let until = p.expect_path_sep()?;
                    let b = atl_implies(p)?;
                    p.expect(&Tok::RBracket)?;
                    Ok(if until {
                        Atl::CoalU(coalition, Arc::new(a), Arc::new(b))
                    } else {
                        Atl::CoalV(coalition, Arc::new(a), Arc::new(b))
                    })
                }
                Some(t) => {
                    p.pos -= 1;
                    Err(p.err(format!("expected `X`, `F`, `G` or `[` after `>>`, found {t}")))
                }
                None => Err(p.err("expected `X`, `F`, `G` or `[` after `>>`")),
            }
        }
        _ => atl_primary(p),
    }
}

fn atl_primary(p: &mut Parser) -> Result<Atl, FormulaParseError> {
    match p.next() {
        Some(Tok::LParen) => {
            let f = atl_implies(p)?;
            p.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(i)) => match i.as_str() {
            "true" => Ok(Atl::True),
            "false" => Ok(Atl::False),
            w if RESERVED_ATOMS.contains(&w) => {
                p.pos -= 1;
                Err(p.err(format!("`{w}` is a reserved word, not a proposition")))
            }
            _ => Ok(Atl::prop(i)),
        },
        Some(t) => {
            p.pos -= 1;
            Err(p.err(format!("expected a formula, found {t}")))
        }
        None => Err(p.err("expected a formula, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Ctl {
        parse_ctl(s).unwrap()
    }

    #[test]
    fn precedence_is_not_tighter_than_and_than_or_than_implies() {
        assert_eq!(
            p("~p & q | r -> s"),
            Ctl::implies(
                Ctl::or(Ctl::and(Ctl::not(Ctl::prop("p")), Ctl::prop("q")), Ctl::prop("r")),
                Ctl::prop("s")
            )
        );
        assert_eq!(p("AX p & q"), Ctl::and(Ctl::ax(Ctl::prop("p")), Ctl::prop("q")));
        assert_eq!(p("a -> b -> c"), Ctl::implies(Ctl::prop("a"), Ctl::implies(Ctl::prop("b"), Ctl::prop("c"))));
        assert_eq!(p("a & b & c"), Ctl::and(Ctl::and(Ctl::prop("a"), Ctl::prop("b")), Ctl::prop("c")));
        assert_eq!(p("~~p"), Ctl::not(Ctl::not(Ctl::prop("p"))));
    }

    #[test]
    fn bracket_forms_parse() {
        assert_eq!(p("A[p U q]"), Ctl::au(Ctl::prop("p"), Ctl::prop("q")));
        assert_eq!(p("E[p V q & r]"), Ctl::ev(Ctl::prop("p"), Ctl::and(Ctl::prop("q"), Ctl::prop("r"))));
        // `A` and `E` are ordinary propositions away from `[`.
        assert_eq!(p("A & E"), Ctl::and(Ctl::prop("A"), Ctl::prop("E")));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_ctl("p &").unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        let e = parse_ctl("(p | q").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        let e = parse_ctl("A[p q]").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        let e = parse_ctl("p &\n& q").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        let e = parse_ctl("U & p").unwrap_err();
        assert!(e.message.contains("reserved"));
        let e = parse_ctl("p @ q").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }

    #[test]
    fn desugar_matches_the_dualities() {
        assert_eq!(p("AG p").desugar(), Ctl::av(Ctl::False, Ctl::prop("p")));
        assert_eq!(
            p("AF p").desugar(),
            Ctl::not(Ctl::ev(Ctl::False, Ctl::not(Ctl::prop("p"))))
        );
        assert_eq!(
            p("A[p U q]").desugar(),
            Ctl::not(Ctl::ev(Ctl::not(Ctl::prop("p")), Ctl::not(Ctl::prop("q"))))
        );
        assert_eq!(
            p("p -> q").desugar(),
            Ctl::or(Ctl::not(Ctl::prop("p")), Ctl::prop("q"))
        );
        assert_eq!(p("EG p").desugar(), Ctl::ev(Ctl::False, Ctl::prop("p")));
        assert_eq!(
            p("EF p").desugar(),
            Ctl::not(Ctl::av(Ctl::False, Ctl::not(Ctl::prop("p"))))
        );
    }

    #[test]
    fn the_running_example_closure_has_fourteen_members() {
        let eta = p("(AG p | AG q) & EX p").desugar();
        let s = sub(&eta);
        assert_eq!(s.len(), 14);
        for needed in [
            "p",
            "q",
            "false",
            "EX p",
            "A[false V p]",
            "A[false V q]",
            "AX A[false V p]",
            "false | AX A[false V p]",
            "p & (false | AX A[false V p])",
        ] {
            assert!(
                s.iter().any(|f| f.to_string() == needed),
                "missing {needed} in {:?}",
                s.iter().map(|f| f.to_string()).collect::<Vec<_>>()
            );
        }
        assert!(s.iter().any(|f| f == &eta));
    }

    #[test]
    fn closure_is_ordered_inner_before_outer() {
        let eta = p("AX (p & q)").desugar();
        let s = sub(&eta);
        let pos = |needle: &str| s.iter().position(|f| f.to_string() == needle).unwrap();
        assert!(pos("p") < pos("p & q"));
        assert!(pos("p & q") < pos("AX (p & q)"));
    }

    #[test]
    fn atl_parses_and_desugars() {
        let f = parse_atl("<<1,2>>X p & <<>>G q").unwrap();
        assert_eq!(
            f,
            Atl::and(
                Atl::coal_x(["1", "2"], Atl::prop("p")),
                Atl::coal_g(Coalition::new(), Atl::prop("q"))
            )
        );
        let players: BTreeSet<String> = ["1", "2"].iter().map(|s| s.to_string()).collect();
        let d = atl_desugar(&parse_atl("<<1>>[p U q]").unwrap(), &players).unwrap();
        // Until dualizes through the complement coalition with an outer negation.
        assert_eq!(
            d,
            Atl::not(Atl::coal_v(["2"], Atl::not(Atl::prop("p")), Atl::not(Atl::prop("q"))))
        );
        let d = atl_desugar(&parse_atl("<<1>>F p").unwrap(), &players).unwrap();
        assert_eq!(d, Atl::not(Atl::coal_v(["2"], Atl::False, Atl::not(Atl::prop("p")))));
        let d = atl_desugar(&parse_atl("<<1>>G p").unwrap(), &players).unwrap();
        assert_eq!(d, Atl::coal_v(["1"], Atl::False, Atl::prop("p")));

        let err = atl_desugar(&parse_atl("<<9>>X p").unwrap(), &players).unwrap_err();
        assert_eq!(err.player, "9");
    }

    #[test]
    fn atl_closure_mirrors_ctl() {
        let players: BTreeSet<String> = ["1"].iter().map(|s| s.to_string()).collect();
        let f = atl_desugar(&parse_atl("<<1>>G p").unwrap(), &players).unwrap();
        let s = atl_sub(&f);
        let names: Vec<String> = s.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            names,
            vec![
                "false",
                "p",
                "<<1>>[false V p]",
                "<<1>>X <<1>>[false V p]",
                "false | <<1>>X <<1>>[false V p]",
                "p & (false | <<1>>X <<1>>[false V p])",
            ]
        );
    }

    #[test]
    fn empty_coalition_round_trips() {
        let f = parse_atl("<<>>X p").unwrap();
        assert_eq!(f.to_string(), "<<>>X p");
        assert_eq!(parse_atl(&f.to_string()).unwrap(), f);
    }

    // Random formula trees for round-trip and idempotency properties.
    fn arb_ctl() -> impl Strategy<Value = Ctl> {
        let leaf = prop_oneof![
            Just(Ctl::True),
            Just(Ctl::False),
            "[a-c]".prop_map(Ctl::prop),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Ctl::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::implies(a, b)),
                inner.clone().prop_map(Ctl::ax),
                inner.clone().prop_map(Ctl::ex),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::au(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::eu(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::av(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ctl::ev(a, b)),
                inner.clone().prop_map(Ctl::af),
                inner.clone().prop_map(Ctl::ef),
                inner.clone().prop_map(Ctl::ag),
                inner.prop_map(Ctl::eg),
            ]
        })
    }

    fn arb_atl() -> impl Strategy<Value = Atl> {
        let leaf = prop_oneof![
            Just(Atl::True),
            Just(Atl::False),
            "[a-c]".prop_map(Atl::prop),
        ];
        let coalition = proptest::collection::btree_set("[12]", 0..=2);
        leaf.prop_recursive(4, 32, 2, move |inner| {
            prop_oneof![
                inner.clone().prop_map(Atl::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Atl::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Atl::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Atl::implies(a, b)),
                (coalition.clone(), inner.clone()).prop_map(|(c, a)| Atl::CoalX(c, Arc::new(a))),
                (coalition.clone(), inner.clone(), inner.clone())
                    .prop_map(|(c, a, b)| Atl::CoalV(c, Arc::new(a), Arc::new(b))),
                (coalition.clone(), inner.clone(), inner.clone())
                    .prop_map(|(c, a, b)| Atl::CoalU(c, Arc::new(a), Arc::new(b))),
                (coalition.clone(), inner.clone()).prop_map(|(c, a)| Atl::CoalF(c, Arc::new(a))),
                (coalition.clone(), inner.clone()).prop_map(|(c, a)| Atl::CoalG(c, Arc::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn ctl_print_parse_round_trips(f in arb_ctl()) {
            prop_assert_eq!(parse_ctl(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn atl_print_parse_round_trips(f in arb_atl()) {
            prop_assert_eq!(parse_atl(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn desugar_is_idempotent_and_core(f in arb_ctl()) {
            let d = f.desugar();
            prop_assert!(d.is_core());
            prop_assert_eq!(d.desugar(), d.clone());
            // Desugaring preserves the proposition set.
            prop_assert_eq!(d.props(), f.props());
        }

        #[test]
        fn atl_desugar_is_idempotent_and_core(f in arb_atl()) {
            let players: BTreeSet<String> = ["1", "2"].iter().map(|s| s.to_string()).collect();
            let d = atl_desugar(&f, &players).unwrap();
            prop_assert!(d.is_core());
            prop_assert_eq!(atl_desugar(&d, &players).unwrap(), d.clone());
        }

        #[test]
        fn closure_is_closed_under_sub(f in arb_ctl()) {
            let d = f.desugar();
            let s = sub(&d);
            let all: BTreeSet<String> = s.iter().map(|g| g.to_string()).collect();
            prop_assert!(all.contains(&d.to_string()));
            for member in &s {
                for inner in sub(member) {
                    prop_assert!(
                        all.contains(&inner.to_string()),
                        "sub({}) member {} escapes closure of {}", member, inner, d
                    );
                }
            }
        }

        #[test]
        fn atl_closure_is_closed_under_sub(f in arb_atl()) {
            let players: BTreeSet<String> = ["1", "2"].iter().map(|s| s.to_string()).collect();
            let d = atl_desugar(&f, &players).unwrap();
            let s = atl_sub(&d);
            let all: BTreeSet<String> = s.iter().map(|g| g.to_string()).collect();
            for member in &s {
                for inner in atl_sub(member) {
                    prop_assert!(all.contains(&inner.to_string()));
                }
            }
        }
    }
}
