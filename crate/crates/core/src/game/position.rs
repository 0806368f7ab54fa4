use alloc::vec::Vec;

use super::GameError;
use crate::kripke::{ChoiceMap, ModelSet, PointedModel};
use crate::logic::{eval_ml, Literal};

/// A position `(m, k, 𝒜, ℬ)` of the formula-size game.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GamePosition {
    pub m: u32,
    pub k: u32,
    pub left: ModelSet,
    pub right: ModelSet,
}

impl GamePosition {
    pub fn new(m: u32, k: u32, left: ModelSet, right: ModelSet) -> Self {
        GamePosition { m, k, left, right }
    }

    /// The common signature of all members; empty when both sides are empty.
    pub fn signature(&self) -> Result<Vec<alloc::string::String>, GameError> {
        let l = self.left.signature()?;
        let r = self.right.signature()?;
        match (l, r) {
            (Some(a), Some(b)) if a != b => Err(crate::kripke::ModelError::SignatureMismatch.into()),
            (Some(a), _) | (None, Some(a)) => Ok(a.to_vec()),
            (None, None) => Ok(Vec::new()),
        }
    }
}

/// The data of a splitting move: budgets and the two chosen subsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split {
    pub m1: u32,
    pub k1: u32,
    pub part1: ModelSet,
    pub m2: u32,
    pub k2: u32,
    pub part2: ModelSet,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    LeftSplit(Split),
    RightSplit(Split),
    LeftSucc(ChoiceMap),
    RightSucc(ChoiceMap),
}

impl Move {
    pub fn is_split(&self) -> bool {
        matches!(self, Move::LeftSplit(_) | Move::RightSplit(_))
    }
}

/// D's answer to a split: continue with the first or the second part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DChoice {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    SWin(Literal),
    DWin,
    Ongoing,
}

fn literal_holds(p: &PointedModel, lit: &Literal) -> bool {
    // members of a position share one signature, so evaluation cannot fail
    eval_ml(p, &lit.to_formula()).unwrap_or(false)
}

/// The first literal separating `left` from `right`, trying `⊥`, `⊤`, then
/// `p` and `¬p` for each proposition in signature order.
pub fn separating_literal(left: &ModelSet, right: &ModelSet, signature: &[alloc::string::String]) -> Option<Literal> {
    if left.is_empty() {
        return Some(Literal::Bot);
    }
    if right.is_empty() {
        return Some(Literal::Top);
    }
    Literal::all(signature)
        .skip(2)
        .find(|lit| left.iter().all(|p| literal_holds(p, lit)) && !right.iter().any(|q| literal_holds(q, lit)))
}

fn has_legal_move(pos: &GamePosition) -> bool {
    pos.k >= 1
        || (pos.m >= 1
            && (pos.left.iter().all(PointedModel::has_successor)
                || pos.right.iter().all(PointedModel::has_successor)))
}

/// Terminal status of a position. A position where S has no legal move and
/// no literal separates is a win for D, as is any non-separated position
/// with `m = k = 0`.
pub fn terminal_status(pos: &GamePosition) -> Terminal {
    let signature = pos.signature().unwrap_or_default();
    if let Some(lit) = separating_literal(&pos.left, &pos.right, &signature) {
        return Terminal::SWin(lit);
    }
    if !has_legal_move(pos) {
        return Terminal::DWin;
    }
    Terminal::Ongoing
}

/// All subsets of `set` paired with their complements, in bitmask order.
fn partitions(set: &ModelSet) -> Vec<(ModelSet, ModelSet)> {
    let members: Vec<&PointedModel> = set.iter().collect();
    assert!(members.len() < 32, "too many members to enumerate partitions");
    (0u32..1 << members.len())
        .map(|mask| {
            let mut a = ModelSet::new();
            let mut b = ModelSet::new();
            for (i, p) in members.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.insert((*p).clone());
                } else {
                    b.insert((*p).clone());
                }
            }
            (a, b)
        })
        .collect()
}

/// Every total choice of one successor per member.
fn choice_maps(set: &ModelSet) -> Vec<ChoiceMap> {
    let mut out = alloc::vec![ChoiceMap::new()];
    for p in set {
        let succ: Vec<PointedModel> = p.successor_iter().collect();
        let mut next = Vec::with_capacity(out.len() * succ.len());
        for f in &out {
            for q in &succ {
                let mut g = f.clone();
                g.insert(p.clone(), q.clone());
                next.push(g);
            }
        }
        out = next;
    }
    out
}

fn split_moves(pos: &GamePosition, side: &ModelSet, wrap: fn(Split) -> Move, out: &mut Vec<Move>) {
    if pos.k == 0 {
        return;
    }
    for (part1, part2) in partitions(side) {
        for m1 in 0..=pos.m {
            for k1 in 0..pos.k {
                out.push(wrap(Split {
                    m1,
                    k1,
                    part1: part1.clone(),
                    m2: pos.m - m1,
                    k2: pos.k - 1 - k1,
                    part2: part2.clone(),
                }));
            }
        }
    }
}

/// All legal moves. Splits range over partitions of the split side (both
/// orders, empty parts included) and every budget division; successor moves
/// over every total choice map. Exponential: meant for small positions.
pub fn legal_moves(pos: &GamePosition) -> Vec<Move> {
    let mut out = Vec::new();
    split_moves(pos, &pos.left, Move::LeftSplit, &mut out);
    split_moves(pos, &pos.right, Move::RightSplit, &mut out);
    if pos.m >= 1 {
        if pos.left.iter().all(PointedModel::has_successor) {
            out.extend(choice_maps(&pos.left).into_iter().map(Move::LeftSucc));
        }
        if pos.right.iter().all(PointedModel::has_successor) {
            out.extend(choice_maps(&pos.right).into_iter().map(Move::RightSucc));
        }
    }
    out
}

fn check_split(pos: &GamePosition, side: &ModelSet, s: &Split) -> Result<(), GameError> {
    if pos.k == 0 {
        return Err(GameError::IllegalMove("a split needs k ≥ 1"));
    }
    if s.m1 + s.m2 != pos.m || s.k1 + s.k2 + 1 != pos.k {
        return Err(GameError::IllegalMove("split budgets do not add up"));
    }
    if !s.part1.is_subset(side) || !s.part2.is_subset(side) || s.part1.union(&s.part2) != *side {
        return Err(GameError::IllegalMove("split parts do not cover the side"));
    }
    Ok(())
}

fn check_choice(side: &ModelSet, f: &ChoiceMap) -> Result<ModelSet, GameError> {
    let image = side.diamond_choice(f)?;
    if f.len() != side.len() {
        return Err(GameError::IllegalMove("choice map is defined outside the side"));
    }
    Ok(image)
}

/// The position after `mv`, with D's answer for splits.
pub fn apply_move(pos: &GamePosition, mv: &Move, choice: Option<DChoice>) -> Result<GamePosition, GameError> {
    match mv {
        Move::LeftSplit(s) | Move::RightSplit(s) => {
            let on_left = matches!(mv, Move::LeftSplit(_));
            check_split(pos, if on_left { &pos.left } else { &pos.right }, s)?;
            let (m, k, part) = match choice.ok_or(GameError::MissingChoice)? {
                DChoice::Left => (s.m1, s.k1, &s.part1),
                DChoice::Right => (s.m2, s.k2, &s.part2),
            };
            Ok(if on_left {
                GamePosition::new(m, k, part.clone(), pos.right.clone())
            } else {
                GamePosition::new(m, k, pos.left.clone(), part.clone())
            })
        }
        Move::LeftSucc(f) | Move::RightSucc(f) => {
            if choice.is_some() {
                return Err(GameError::ExtraneousChoice);
            }
            if pos.m == 0 {
                return Err(GameError::IllegalMove("a successor move needs m ≥ 1"));
            }
            Ok(if matches!(mv, Move::LeftSucc(_)) {
                GamePosition::new(pos.m - 1, pos.k, check_choice(&pos.left, f)?, pos.right.diamond_all())
            } else {
                GamePosition::new(pos.m - 1, pos.k, pos.left.diamond_all(), check_choice(&pos.right, f)?)
            })
        }
    }
}
