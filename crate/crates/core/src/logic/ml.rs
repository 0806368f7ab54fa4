//! Modal formulas in negation normal form.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;

use super::LogicError;
use crate::kripke::{KripkeModel, ModelSet, PointedModel};

/// A formula of basic modal logic in negation normal form.
///
/// Negation can only be applied to a proposition, so every value of this type
/// is in NNF by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MlFormula {
    Top,
    Bot,
    Prop(String),
    NegProp(String),
    And(Box<MlFormula>, Box<MlFormula>),
    Or(Box<MlFormula>, Box<MlFormula>),
    Diamond(Box<MlFormula>),
    Box(Box<MlFormula>),
}

impl MlFormula {
    pub fn prop(p: impl Into<String>) -> Self {
        MlFormula::Prop(p.into())
    }

    pub fn neg_prop(p: impl Into<String>) -> Self {
        MlFormula::NegProp(p.into())
    }

    pub fn and(l: MlFormula, r: MlFormula) -> Self {
        MlFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: MlFormula, r: MlFormula) -> Self {
        MlFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn diamond(f: MlFormula) -> Self {
        MlFormula::Diamond(Box::new(f))
    }

    pub fn boxed(f: MlFormula) -> Self {
        MlFormula::Box(Box::new(f))
    }

    pub fn is_literal(&self) -> bool {
        matches!(
            self,
            MlFormula::Top | MlFormula::Bot | MlFormula::Prop(_) | MlFormula::NegProp(_)
        )
    }

    /// Proposition symbols occurring in the formula.
    pub fn props(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            MlFormula::Top | MlFormula::Bot => {}
            MlFormula::Prop(p) | MlFormula::NegProp(p) => {
                out.insert(p);
            }
            MlFormula::And(l, r) | MlFormula::Or(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
            MlFormula::Diamond(f) | MlFormula::Box(f) => f.collect_props(out),
        }
    }

    pub fn sizes(&self) -> SizeReport {
        ml_sizes(self)
    }

    pub fn modal_depth(&self) -> u32 {
        modal_depth(self)
    }
}

/// A literal: the formulas S can win with at a terminal position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Top,
    Bot,
    Prop(String),
    NegProp(String),
}

impl Literal {
    pub fn to_formula(&self) -> MlFormula {
        match self {
            Literal::Top => MlFormula::Top,
            Literal::Bot => MlFormula::Bot,
            Literal::Prop(p) => MlFormula::Prop(p.clone()),
            Literal::NegProp(p) => MlFormula::NegProp(p.clone()),
        }
    }

    /// All literals over a signature: `⊤`, `⊥`, then `p`, `¬p` for each symbol.
    pub fn all(signature: &[String]) -> impl Iterator<Item = Literal> + '_ {
        [Literal::Top, Literal::Bot].into_iter().chain(
            signature
                .iter()
                .flat_map(|p| [Literal::Prop(p.clone()), Literal::NegProp(p.clone())]),
        )
    }
}

impl From<Literal> for MlFormula {
    fn from(l: Literal) -> Self {
        l.to_formula()
    }
}

/// Modal size, connective size and total size of an ML formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SizeReport {
    pub ms: u32,
    pub cs: u32,
    pub s: u32,
}

pub fn ml_sizes(f: &MlFormula) -> SizeReport {
    fn go(f: &MlFormula) -> (u32, u32) {
        match f {
            MlFormula::Top | MlFormula::Bot | MlFormula::Prop(_) | MlFormula::NegProp(_) => (0, 0),
            MlFormula::And(l, r) | MlFormula::Or(l, r) => {
                let (lm, lc) = go(l);
                let (rm, rc) = go(r);
                (lm + rm, lc + rc + 1)
            }
            MlFormula::Diamond(g) | MlFormula::Box(g) => {
                let (m, c) = go(g);
                (m + 1, c)
            }
        }
    }
    let (ms, cs) = go(f);
    SizeReport { ms, cs, s: ms + cs }
}

pub fn modal_depth(f: &MlFormula) -> u32 {
    match f {
        MlFormula::Top | MlFormula::Bot | MlFormula::Prop(_) | MlFormula::NegProp(_) => 0,
        MlFormula::And(l, r) | MlFormula::Or(l, r) => modal_depth(l).max(modal_depth(r)),
        MlFormula::Diamond(g) | MlFormula::Box(g) => modal_depth(g) + 1,
    }
}

/// Checks that every proposition of `f` is in the model's signature.
pub(crate) fn check_props(model: &KripkeModel, f: &MlFormula) -> Result<(), LogicError> {
    for p in f.props() {
        if model.prop_index(p).is_none() {
            return Err(LogicError::UnknownProposition(p.into()));
        }
    }
    Ok(())
}

/// Truth of `f` at world `w`; the caller has validated the propositions.
pub(crate) fn eval_at(model: &KripkeModel, w: u32, f: &MlFormula) -> bool {
    match f {
        MlFormula::Top => true,
        MlFormula::Bot => false,
        MlFormula::Prop(p) => model.holds(w, model.prop_index(p).expect("validated")),
        MlFormula::NegProp(p) => !model.holds(w, model.prop_index(p).expect("validated")),
        MlFormula::And(l, r) => eval_at(model, w, l) && eval_at(model, w, r),
        MlFormula::Or(l, r) => eval_at(model, w, l) || eval_at(model, w, r),
        MlFormula::Diamond(g) => model.successors(w).iter().any(|&v| eval_at(model, v, g)),
        MlFormula::Box(g) => model.successors(w).iter().all(|&v| eval_at(model, v, g)),
    }
}

/// `(M, w) ⊨ f`.
pub fn eval_ml(p: &PointedModel, f: &MlFormula) -> Result<bool, LogicError> {
    check_props(p.model(), f)?;
    Ok(eval_at(p.model(), p.point(), f))
}

/// Whether `f` holds on every member of `a` and fails on every member of `b`.
pub fn separates(f: &MlFormula, a: &ModelSet, b: &ModelSet) -> Result<bool, LogicError> {
    for p in a {
        if !eval_ml(p, f)? {
            return Ok(false);
        }
    }
    for q in b {
        if eval_ml(q, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}
