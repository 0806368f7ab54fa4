use alloc::boxed::Box;

use super::position::{apply_move, separating_literal, DChoice, GamePosition, Move, Split};
use super::GameError;
use crate::kripke::{ChoiceMap, ModelSet};
use crate::logic::{eval_ml, ml_sizes, separates, Literal, MlFormula};

/// A winning strategy tree for S.
///
/// Every node records the position it is played from. Split nodes have one
/// child per answer of D, successor nodes a single child, and leaves name a
/// literal that separates the leaf position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpoilerStrategy {
    pub position: GamePosition,
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Literal(Literal),
    LeftSplit {
        split: Split,
        first: Box<SpoilerStrategy>,
        second: Box<SpoilerStrategy>,
    },
    RightSplit {
        split: Split,
        first: Box<SpoilerStrategy>,
        second: Box<SpoilerStrategy>,
    },
    LeftSucc {
        choice: ChoiceMap,
        next: Box<SpoilerStrategy>,
    },
    RightSucc {
        choice: ChoiceMap,
        next: Box<SpoilerStrategy>,
    },
}

impl SpoilerStrategy {
    pub fn leaf(position: GamePosition, literal: Literal) -> Self {
        SpoilerStrategy {
            position,
            step: Step::Literal(literal),
        }
    }

    /// The move played at this node, if it is not a leaf.
    pub fn root_move(&self) -> Option<Move> {
        match &self.step {
            Step::Literal(_) => None,
            Step::LeftSplit { split, .. } => Some(Move::LeftSplit(split.clone())),
            Step::RightSplit { split, .. } => Some(Move::RightSplit(split.clone())),
            Step::LeftSucc { choice, .. } => Some(Move::LeftSucc(choice.clone())),
            Step::RightSucc { choice, .. } => Some(Move::RightSucc(choice.clone())),
        }
    }

    /// The subtree played after D's answer (`None` for successor moves).
    pub fn child(&self, choice: Option<DChoice>) -> Option<&SpoilerStrategy> {
        match (&self.step, choice) {
            (Step::LeftSplit { first, .. } | Step::RightSplit { first, .. }, Some(DChoice::Left)) => Some(first),
            (Step::LeftSplit { second, .. } | Step::RightSplit { second, .. }, Some(DChoice::Right)) => Some(second),
            (Step::LeftSucc { next, .. } | Step::RightSucc { next, .. }, None) => Some(next),
            _ => None,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match &self.step {
            Step::Literal(_) => 1,
            Step::LeftSplit { first, second, .. } | Step::RightSplit { first, second, .. } => {
                1 + first.size() + second.size()
            }
            Step::LeftSucc { next, .. } | Step::RightSucc { next, .. } => 1 + next.size(),
        }
    }

    /// Checks that every move is legal from its node's position, that each
    /// child sits at the position the move leads to, and that each leaf
    /// literal separates its position.
    pub fn check(&self) -> Result<(), GameError> {
        let pos = &self.position;
        match &self.step {
            Step::Literal(lit) => {
                let f = lit.to_formula();
                if separates(&f, &pos.left, &pos.right)? {
                    Ok(())
                } else {
                    Err(GameError::InvalidStrategy("leaf literal does not separate"))
                }
            }
            Step::LeftSplit { first, second, .. } | Step::RightSplit { first, second, .. } => {
                let mv = self.root_move().expect("split node");
                for (d, child) in [(DChoice::Left, first), (DChoice::Right, second)] {
                    if apply_move(pos, &mv, Some(d))? != child.position {
                        return Err(GameError::InvalidStrategy("child position does not follow the split"));
                    }
                    child.check()?;
                }
                Ok(())
            }
            Step::LeftSucc { next, .. } | Step::RightSucc { next, .. } => {
                let mv = self.root_move().expect("successor node");
                if apply_move(pos, &mv, None)? != next.position {
                    return Err(GameError::InvalidStrategy("child position does not follow the successor move"));
                }
                next.check()
            }
        }
    }
}

fn build(s: &SpoilerStrategy) -> MlFormula {
    match &s.step {
        Step::Literal(lit) => lit.to_formula(),
        Step::LeftSplit { first, second, .. } => MlFormula::or(build(first), build(second)),
        Step::RightSplit { first, second, .. } => MlFormula::and(build(first), build(second)),
        Step::LeftSucc { next, .. } => MlFormula::diamond(build(next)),
        Step::RightSucc { next, .. } => MlFormula::boxed(build(next)),
    }
}

/// The separating formula read off a strategy: left splits become `∨`, right
/// splits `∧`, left successor moves `◇`, right successor moves `□`.
pub fn extract_formula(s: &SpoilerStrategy) -> Result<MlFormula, GameError> {
    s.check()?;
    Ok(build(s))
}

/// A winning strategy for the position `(ms(f), cs(f), a, b)` following the
/// structure of a separating formula.
pub fn strategy_from_formula(f: &MlFormula, a: &ModelSet, b: &ModelSet) -> Result<SpoilerStrategy, GameError> {
    if !separates(f, a, b)? {
        return Err(GameError::NotSeparating);
    }
    Ok(follow(f, a.clone(), b.clone()))
}

/// `f` separates `a` from `b`; the recursion keeps that invariant.
fn follow(f: &MlFormula, a: ModelSet, b: ModelSet) -> SpoilerStrategy {
    let sz = ml_sizes(f);
    let position = GamePosition::new(sz.ms, sz.cs, a, b);
    let holds = |p: &crate::kripke::PointedModel, g: &MlFormula| eval_ml(p, g).expect("signature checked");
    let step = match f {
        MlFormula::Top => Step::Literal(Literal::Top),
        MlFormula::Bot => Step::Literal(Literal::Bot),
        MlFormula::Prop(p) => Step::Literal(Literal::Prop(p.clone())),
        MlFormula::NegProp(p) => Step::Literal(Literal::NegProp(p.clone())),
        MlFormula::Or(l, r) => {
            let (a1, a2): (ModelSet, ModelSet) = split_by(&position.left, |p| holds(p, l));
            let split = sized_split(l, a1.clone(), r, a2.clone());
            Step::LeftSplit {
                first: Box::new(follow(l, a1, position.right.clone())),
                second: Box::new(follow(r, a2, position.right.clone())),
                split,
            }
        }
        MlFormula::And(l, r) => {
            let (b1, b2): (ModelSet, ModelSet) = split_by(&position.right, |q| !holds(q, l));
            let split = sized_split(l, b1.clone(), r, b2.clone());
            Step::RightSplit {
                first: Box::new(follow(l, position.left.clone(), b1)),
                second: Box::new(follow(r, position.left.clone(), b2)),
                split,
            }
        }
        MlFormula::Diamond(g) => {
            let choice: ChoiceMap = position
                .left
                .iter()
                .map(|p| {
                    let w = p.successor_iter().find(|v| holds(v, g)).expect("a witness successor");
                    (p.clone(), w)
                })
                .collect();
            let next = follow(g, position.left.diamond_choice(&choice).expect("total"), position.right.diamond_all());
            Step::LeftSucc {
                choice,
                next: Box::new(next),
            }
        }
        MlFormula::Box(g) => {
            let choice: ChoiceMap = position
                .right
                .iter()
                .map(|q| {
                    let w = q.successor_iter().find(|v| !holds(v, g)).expect("a failing successor");
                    (q.clone(), w)
                })
                .collect();
            let next = follow(g, position.left.diamond_all(), position.right.diamond_choice(&choice).expect("total"));
            Step::RightSucc {
                choice,
                next: Box::new(next),
            }
        }
    };
    SpoilerStrategy { position, step }
}

fn split_by(set: &ModelSet, mut first: impl FnMut(&crate::kripke::PointedModel) -> bool) -> (ModelSet, ModelSet) {
    let mut a = ModelSet::new();
    let mut b = ModelSet::new();
    for p in set {
        if first(p) {
            a.insert(p.clone());
        } else {
            b.insert(p.clone());
        }
    }
    (a, b)
}

fn sized_split(l: &MlFormula, part1: ModelSet, r: &MlFormula, part2: ModelSet) -> Split {
    let (sl, sr) = (ml_sizes(l), ml_sizes(r));
    Split {
        m1: sl.ms,
        k1: sl.cs,
        part1,
        m2: sr.ms,
        k2: sr.cs,
        part2,
    }
}

/// Whether `s` wins against every answer of D, checked by replaying each
/// branch through [`apply_move`] and testing leaves with the terminal rule.
pub fn wins_every_playout(s: &SpoilerStrategy) -> bool {
    let pos = &s.position;
    match &s.step {
        Step::Literal(_) => {
            let sig = pos.signature().unwrap_or_default();
            separating_literal(&pos.left, &pos.right, &sig).is_some()
        }
        _ => {
            let mv = s.root_move().expect("inner node");
            let answers: &[Option<DChoice>] = if mv.is_split() {
                &[Some(DChoice::Left), Some(DChoice::Right)]
            } else {
                &[None]
            };
            answers.iter().all(|&d| match (apply_move(pos, &mv, d), s.child(d)) {
                (Ok(next), Some(child)) => next == child.position && wins_every_playout(child),
                _ => false,
            })
        }
    }
}
