use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::position::{apply_move, legal_moves, terminal_status, DChoice, GamePosition, Move, Terminal};
use super::GameError;
use crate::bisim::{n_bisimilar, BisimWitness};
use crate::kripke::PointedModel;

/// A Duplicator strategy: answers an S move and moves to its next state.
pub trait Responder: Sized {
    /// D's choice (for splits) and the responder for the next position.
    fn respond(&self, pos: &GamePosition, mv: &Move) -> Result<(Option<DChoice>, Self), GameError>;
}

/// Keeps a pair of pointed models, one per side, that are `m`-bisimilar at
/// every position with modal budget `m`.
#[derive(Debug, Clone)]
pub struct BisimResponder {
    witness: Arc<BisimWitness>,
    left: PointedModel,
    right: PointedModel,
}

impl BisimResponder {
    pub fn pinned(&self) -> (&PointedModel, &PointedModel) {
        (&self.left, &self.right)
    }

    fn repinned(&self, left: PointedModel, right: PointedModel) -> Self {
        BisimResponder {
            witness: self.witness.clone(),
            left,
            right,
        }
    }
}

impl PartialEq for BisimResponder {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BisimResponder {}

impl PartialOrd for BisimResponder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BisimResponder {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.left, &self.right).cmp(&(&other.left, &other.right))
    }
}

impl Responder for BisimResponder {
    fn respond(&self, pos: &GamePosition, mv: &Move) -> Result<(Option<DChoice>, Self), GameError> {
        let lost = || GameError::Precondition("pinned pair left the position");
        match mv {
            Move::LeftSplit(s) | Move::RightSplit(s) => {
                let pinned = if matches!(mv, Move::LeftSplit(_)) { &self.left } else { &self.right };
                let d = if s.part1.contains(pinned) {
                    DChoice::Left
                } else if s.part2.contains(pinned) {
                    DChoice::Right
                } else {
                    return Err(lost());
                };
                Ok((Some(d), self.clone()))
            }
            Move::LeftSucc(f) => {
                let v = f.get(&self.left).ok_or_else(lost)?;
                let depth = pos.m.checked_sub(1).ok_or(GameError::IllegalMove("a successor move needs m ≥ 1"))?;
                let w = self
                    .witness
                    .forth(depth, self.right.point(), v.point())
                    .ok_or(GameError::Precondition("witness has no matching successor"))?;
                Ok((None, self.repinned(v.clone(), self.right.repoint(w))))
            }
            Move::RightSucc(g) => {
                let w = g.get(&self.right).ok_or_else(lost)?;
                let depth = pos.m.checked_sub(1).ok_or(GameError::IllegalMove("a successor move needs m ≥ 1"))?;
                let v = self
                    .witness
                    .back(depth, self.left.point(), w.point())
                    .ok_or(GameError::Precondition("witness has no matching successor"))?;
                Ok((None, self.repinned(self.left.repoint(v), w.clone())))
            }
        }
    }
}

/// D's strategy from a witness of `p ∼ₘ q` with `p` on the left and `q` on
/// the right of `pos`, where `m = pos.m`.
pub fn duplicator_bisim_strategy(pos: &GamePosition, witness: Arc<BisimWitness>) -> Result<BisimResponder, GameError> {
    if witness.depth() < pos.m {
        return Err(GameError::WitnessTooShallow {
            depth: witness.depth(),
            needed: pos.m,
        });
    }
    if !pos.left.contains(&witness.left) || !pos.right.contains(&witness.right) {
        return Err(GameError::Precondition("witnessed pair is not in the position"));
    }
    if !witness.relates(pos.m, witness.left.point(), witness.right.point()) {
        return Err(GameError::Precondition("witness does not relate the pair at depth m"));
    }
    Ok(BisimResponder {
        left: witness.left.clone(),
        right: witness.right.clone(),
        witness,
    })
}

/// Some pair `p ∈ left`, `q ∈ right` with `p ∼ₘ q`, with its witness.
pub fn find_bisimilar_pair(pos: &GamePosition) -> Result<Option<Arc<BisimWitness>>, GameError> {
    for p in &pos.left {
        if pos.right.contains(p) {
            return Ok(n_bisimilar(p, p, pos.m)?.map(Arc::new));
        }
    }
    for p in &pos.left {
        for q in &pos.right {
            if let Some(w) = n_bisimilar(p, q, pos.m)? {
                return Ok(Some(Arc::new(w)));
            }
        }
    }
    Ok(None)
}

/// Outcome of playing a responder against every sequence of S moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayoutReport {
    /// Distinct (position, responder state) pairs visited.
    pub states: usize,
    /// A reachable position where S wins, if D's strategy ever allows one.
    pub s_win: Option<GamePosition>,
}

impl PlayoutReport {
    pub fn duplicator_survives(&self) -> bool {
        self.s_win.is_none()
    }
}

/// Plays `responder` against all legal S moves from `pos`, depth first, and
/// stops at the first position won by S. Every legal move is expanded, so
/// this is only feasible for small positions.
pub fn exhaustive_playout<R: Responder + Ord + Clone>(pos: &GamePosition, responder: R) -> Result<PlayoutReport, GameError> {
    let mut seen: BTreeSet<(GamePosition, R)> = BTreeSet::new();
    let mut stack: Vec<(GamePosition, R)> = alloc::vec![(pos.clone(), responder)];
    while let Some(state) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        let (pos, r) = state;
        match terminal_status(&pos) {
            Terminal::SWin(_) => {
                return Ok(PlayoutReport {
                    states: seen.len(),
                    s_win: Some(pos),
                })
            }
            Terminal::DWin => continue,
            Terminal::Ongoing => {}
        }
        for mv in legal_moves(&pos) {
            let (d, next_r) = r.respond(&pos, &mv)?;
            let next = apply_move(&pos, &mv, d)?;
            stack.push((next, next_r));
        }
    }
    Ok(PlayoutReport {
        states: seen.len(),
        s_win: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Split;
    use crate::hierarchy::HfSet;
    use crate::kripke::{ChoiceMap, ModelSet};

    fn pm(s: &str) -> PointedModel {
        s.parse::<HfSet>().unwrap().model()
    }

    fn responder_for(pos: &GamePosition) -> BisimResponder {
        let w = find_bisimilar_pair(pos).unwrap().expect("planted pair");
        duplicator_bisim_strategy(pos, w).unwrap()
    }

    #[test]
    fn split_answer_follows_the_pinned_model() {
        let (a, b) = (pm("{{}}"), pm("{{},{{}}}"));
        let left: ModelSet = [a.clone(), b.clone()].into_iter().collect();
        let right: ModelSet = [a.clone()].into_iter().collect();
        let pos = GamePosition::new(1, 1, left, right);
        let r = responder_for(&pos);
        assert_eq!(r.pinned().0, &a);
        let s = Split {
            m1: 1,
            k1: 0,
            part1: [b.clone()].into_iter().collect(),
            m2: 0,
            k2: 0,
            part2: [a].into_iter().collect(),
        };
        let (d, _) = r.respond(&pos, &Move::LeftSplit(s)).unwrap();
        assert_eq!(d, Some(DChoice::Right));
    }

    #[test]
    fn successor_move_repins_through_the_witness() {
        let (p, q) = (pm("{{}}"), pm("{{},{{}}}"));
        // {{}} and {{},{{}}} agree up to depth 1 only
        let pos = GamePosition::new(1, 0, [p.clone()].into_iter().collect(), [q.clone()].into_iter().collect());
        let r = responder_for(&pos);
        let mut g = ChoiceMap::new();
        let q_child = q.successor_iter().find(|c| c.point_name() == "{{}}").unwrap();
        g.insert(q.clone(), q_child.clone());
        let (d, next) = r.respond(&pos, &Move::RightSucc(g)).unwrap();
        assert_eq!(d, None);
        assert_eq!(next.pinned().1, &q_child);
        assert_eq!(next.pinned().0.point_name(), "{}");
    }

    #[test]
    fn shallow_witness_is_rejected() {
        let p = pm("{{}}");
        let set: ModelSet = [p.clone()].into_iter().collect();
        let pos = GamePosition::new(3, 0, set.clone(), set);
        let w = Arc::new(n_bisimilar(&p, &p, 1).unwrap().unwrap());
        assert!(matches!(
            duplicator_bisim_strategy(&pos, w),
            Err(GameError::WitnessTooShallow { depth: 1, needed: 3 })
        ));
    }

    #[test]
    fn playout_with_planted_pair() {
        let (p, q) = (pm("{{}}"), pm("{{},{{}}}"));
        let left: ModelSet = [p.clone(), pm("{}")].into_iter().collect();
        let right: ModelSet = [q, pm("{{{}}}")].into_iter().collect();
        let pos = GamePosition::new(1, 1, left, right);
        let report = exhaustive_playout(&pos, responder_for(&pos)).unwrap();
        assert!(report.duplicator_survives());
        assert!(report.states > 1);
    }
}
