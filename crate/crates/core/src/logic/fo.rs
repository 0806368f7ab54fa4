//! First-order formulas over the Kripke vocabulary: the binary accessibility
//! relation `R`, unary predicates for propositions, and equality.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use super::LogicError;
use crate::kripke::KripkeModel;

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoFormula {
    /// `R(x, y)`
    Rel(Var, Var),
    Equal(Var, Var),
    /// `U_p(x)`
    Pred(String, Var),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Iff(Box<FoFormula>, Box<FoFormula>),
    Exists(Var, Box<FoFormula>),
    Forall(Var, Box<FoFormula>),
}

fn rel(x: &str, y: &str) -> FoFormula {
    FoFormula::Rel(x.into(), y.into())
}

fn and(l: FoFormula, r: FoFormula) -> FoFormula {
    FoFormula::And(Box::new(l), Box::new(r))
}

fn implies(l: FoFormula, r: FoFormula) -> FoFormula {
    FoFormula::Implies(Box::new(l), Box::new(r))
}

fn exists(v: &str, f: FoFormula) -> FoFormula {
    FoFormula::Exists(v.into(), Box::new(f))
}

fn forall(v: &str, f: FoFormula) -> FoFormula {
    FoFormula::Forall(v.into(), Box::new(f))
}

impl FoFormula {
    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut alloc::vec::Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut alloc::vec::Vec<&'a str>, out: &mut BTreeSet<&'a str>) {
        let mut note = |v: &'a str, bound: &alloc::vec::Vec<&'a str>| {
            if !bound.contains(&v) {
                out.insert(v);
            }
        };
        match self {
            FoFormula::Rel(x, y) | FoFormula::Equal(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            FoFormula::Pred(_, x) => note(x, bound),
            FoFormula::Not(f) => f.collect_free(bound, out),
            FoFormula::And(l, r)
            | FoFormula::Or(l, r)
            | FoFormula::Implies(l, r)
            | FoFormula::Iff(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FoFormula::Exists(v, f) | FoFormula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

/// How [`fo_size`] counts atoms.
///
/// `AtomsCounted` counts every atom as 1 and reproduces the closed forms
/// `3·2^(n+2) − 13` and `3·2^(n+2) − 7` for ψₙ and φₙ. `AtomsFree`
/// counts literals as 0, giving 7 for ψ₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeConvention {
    #[default]
    AtomsCounted,
    AtomsFree,
}

/// Number of quantifiers and binary connectives (plus atoms under
/// [`SizeConvention::AtomsCounted`]). Negation is free, `→` is one
/// connective and `α ↔ β` is counted as `(α → β) ∧ (β → α)`.
pub fn fo_size(f: &FoFormula, convention: SizeConvention) -> u64 {
    match f {
        FoFormula::Rel(..) | FoFormula::Equal(..) | FoFormula::Pred(..) => match convention {
            SizeConvention::AtomsCounted => 1,
            SizeConvention::AtomsFree => 0,
        },
        FoFormula::Not(g) => fo_size(g, convention),
        FoFormula::And(l, r) | FoFormula::Or(l, r) | FoFormula::Implies(l, r) => {
            fo_size(l, convention) + fo_size(r, convention) + 1
        }
        FoFormula::Iff(l, r) => 2 * fo_size(l, convention) + 2 * fo_size(r, convention) + 3,
        FoFormula::Exists(_, g) | FoFormula::Forall(_, g) => fo_size(g, convention) + 1,
    }
}

/// Assignment of variables to world indices.
pub type Assignment = BTreeMap<Var, u32>;

pub fn eval_fo(m: &KripkeModel, f: &FoFormula, env: &Assignment) -> Result<bool, LogicError> {
    let lookup = |v: &Var| env.get(v).copied().ok_or_else(|| LogicError::UnboundVariable(v.clone()));
    Ok(match f {
        FoFormula::Rel(x, y) => m.has_edge(lookup(x)?, lookup(y)?),
        FoFormula::Equal(x, y) => lookup(x)? == lookup(y)?,
        FoFormula::Pred(p, x) => {
            let pi = m
                .prop_index(p)
                .ok_or_else(|| LogicError::UnknownProposition(p.clone()))?;
            m.holds(lookup(x)?, pi)
        }
        FoFormula::Not(g) => !eval_fo(m, g, env)?,
        FoFormula::And(l, r) => eval_fo(m, l, env)? && eval_fo(m, r, env)?,
        FoFormula::Or(l, r) => eval_fo(m, l, env)? || eval_fo(m, r, env)?,
        FoFormula::Implies(l, r) => !eval_fo(m, l, env)? || eval_fo(m, r, env)?,
        FoFormula::Iff(l, r) => eval_fo(m, l, env)? == eval_fo(m, r, env)?,
        FoFormula::Exists(v, g) | FoFormula::Forall(v, g) => {
            let universal = matches!(f, FoFormula::Forall(..));
            let mut inner = env.clone();
            for w in 0..m.world_count() as u32 {
                inner.insert(v.clone(), w);
                if eval_fo(m, g, &inner)? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// Evaluates with variables bound to world names.
pub fn eval_fo_named(m: &KripkeModel, f: &FoFormula, env: &[(&str, &str)]) -> Result<bool, LogicError> {
    let mut assignment = Assignment::new();
    for (v, w) in env {
        let wi = m
            .world_index(w)
            .ok_or_else(|| LogicError::UnknownWorld(w.to_string()))?;
        assignment.insert(v.to_string(), wi);
    }
    eval_fo(m, f, &assignment)
}

fn psi_between(n: u32, x: &str, y: &str) -> FoFormula {
    let s = format!("s{n}");
    let t = format!("t{n}");
    if n == 1 {
        return FoFormula::Iff(
            Box::new(exists(&s, rel(x, &s))),
            Box::new(exists(&t, rel(y, &t))),
        );
    }
    let forth = forall(
        &s,
        implies(rel(x, &s), exists(&t, and(rel(y, &t), psi_between(n - 1, &s, &t)))),
    );
    let back = forall(
        &t,
        implies(rel(y, &t), exists(&s, and(rel(x, &s), psi_between(n - 1, &s, &t)))),
    );
    and(forth, back)
}

/// ψₙ(x, y), true of two worlds exactly when they are n-bisimilar (empty signature).
///
/// Level `i` of the recursion binds `s{i}` and `t{i}`, so no substitution captures.
pub fn make_psi(n: u32) -> Result<FoFormula, LogicError> {
    if n == 0 {
        return Err(LogicError::ZeroIndex);
    }
    Ok(psi_between(n, "x", "y"))
}

/// φₙ(x) = ∀y∀z(R(x,y) ∧ R(x,z) → ψₙ(y,z)): all successors of x are n-bisimilar.
pub fn make_phi(n: u32) -> Result<FoFormula, LogicError> {
    if n == 0 {
        return Err(LogicError::ZeroIndex);
    }
    let psi = psi_between(n, "y", "z");
    Ok(forall(
        "y",
        forall("z", implies(and(rel("x", "y"), rel("x", "z")), psi)),
    ))
}

/// Binary connectives are parenthesized everywhere except at the top.
fn write_fo(f: &mut fmt::Formatter<'_>, phi: &FoFormula, top: bool) -> fmt::Result {
    let binary = |f: &mut fmt::Formatter<'_>, l: &FoFormula, op: &str, r: &FoFormula| {
        if !top {
            f.write_str("(")?;
        }
        write_fo(f, l, false)?;
        write!(f, " {op} ")?;
        write_fo(f, r, false)?;
        if !top {
            f.write_str(")")?;
        }
        Ok(())
    };
    match phi {
        FoFormula::Rel(x, y) => write!(f, "R({x},{y})"),
        FoFormula::Equal(x, y) => write!(f, "{x} = {y}"),
        FoFormula::Pred(p, x) => write!(f, "U_{p}({x})"),
        FoFormula::Not(g) => {
            f.write_str("~")?;
            write_fo(f, g, false)
        }
        FoFormula::And(l, r) => binary(f, l, "&", r),
        FoFormula::Or(l, r) => binary(f, l, "|", r),
        FoFormula::Implies(l, r) => binary(f, l, "->", r),
        FoFormula::Iff(l, r) => binary(f, l, "<->", r),
        FoFormula::Exists(v, g) => {
            write!(f, "exists {v} ")?;
            write_fo(f, g, false)
        }
        FoFormula::Forall(v, g) => {
            write!(f, "forall {v} ")?;
            write_fo(f, g, false)
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fo(f, self, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{ee_set, frame, vv_set};
    use alloc::string::ToString;

    #[test]
    fn psi_one_is_the_displayed_base_case() {
        let psi = make_psi(1).unwrap();
        assert_eq!(psi.to_string(), "exists s1 R(x,s1) <-> exists t1 R(y,t1)");
        assert_eq!(fo_size(&psi, SizeConvention::AtomsCounted), 11);
        assert_eq!(fo_size(&psi, SizeConvention::AtomsFree), 7);
        assert_eq!(psi.free_vars().into_iter().collect::<alloc::vec::Vec<_>>(), ["x", "y"]);
    }

    #[test]
    fn sizes_follow_the_closed_forms() {
        assert_eq!(fo_size(&make_psi(2).unwrap(), SizeConvention::AtomsCounted), 35);
        for n in 1..=10u32 {
            let closed = 3 * (1u64 << (n + 2));
            let psi = fo_size(&make_psi(n).unwrap(), SizeConvention::AtomsCounted);
            let phi = fo_size(&make_phi(n).unwrap(), SizeConvention::AtomsCounted);
            assert_eq!(psi, closed - 13);
            assert_eq!(phi, closed - 7);
        }
        assert_eq!(make_psi(0), Err(LogicError::ZeroIndex));
        assert_eq!(make_phi(0), Err(LogicError::ZeroIndex));
    }

    #[test]
    fn strict_convention_zeroes_atoms() {
        assert_eq!(fo_size(&rel("x", "y"), SizeConvention::AtomsFree), 0);
        assert_eq!(fo_size(&rel("x", "y"), SizeConvention::AtomsCounted), 1);
    }

    #[test]
    fn psi_one_on_f2() {
        let f2 = frame(2).unwrap();
        let psi = make_psi(1).unwrap();
        assert!(eval_fo_named(&f2, &psi, &[("x", "{}"), ("y", "{}")]).unwrap());
        assert!(!eval_fo_named(&f2, &psi, &[("x", "{}"), ("y", "{{}}")]).unwrap());
    }

    #[test]
    fn phi_one_separates_vv1_from_ee1() {
        let phi = make_phi(1).unwrap();
        for v in vv_set(1).unwrap() {
            assert!(eval_fo_named(v.model(), &phi, &[("x", v.point_name())]).unwrap());
        }
        for e in ee_set(1).unwrap() {
            assert!(!eval_fo_named(e.model(), &phi, &[("x", e.point_name())]).unwrap());
        }
    }

    #[test]
    fn unbound_variables_are_reported() {
        let f2 = frame(2).unwrap();
        let psi = make_psi(1).unwrap();
        assert_eq!(
            eval_fo_named(&f2, &psi, &[("x", "{}")]),
            Err(LogicError::UnboundVariable("y".into()))
        );
    }
}
