//! Exact solver for the formula-size game.
//!
//! The search runs on bisimulation types rather than on models: a position is
//! keyed by `(m, k, L, R)` where `L` and `R` are the sorted sets of depth-`m`
//! types of the members of each side. Positions with equal keys have equal
//! verdicts, because formulas with `ms ≤ m` cannot look deeper than `m`
//! and two members of the same depth-`m` type satisfy the same such formulas.
//!
//! Only moves that a smallest separator could use are searched:
//!
//! * splits are partitions into two nonempty sets of types, with the first
//!   part holding the least type; covers and trivial splits never help S;
//! * a successor move picks one successor type per member type, and a pick
//!   that also occurs among the successors on the other side is skipped when
//!   the shared-type cutoff is on, since the next position would then hold the
//!   same type on both sides.
//!
//! A win is stored with the move that achieved it, and [`Solver::solve`] turns
//! the stored moves into a [`SpoilerStrategy`] over the concrete models.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::position::{DChoice, GamePosition, Split};
use super::strategy::{SpoilerStrategy, Step};
use super::GameError;
use crate::bisim::{TypeId, TypeTable};
use crate::kripke::{ChoiceMap, KripkeModel, ModelSet, PointedModel};
use crate::logic::Literal;

/// Default ceiling on memo entries.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// Widest side (in distinct types) whose partitions the solver enumerates.
pub const MAX_SPLIT_WIDTH: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub node_limit: u64,
    /// Treat any position with a type on both sides as lost for S without
    /// searching it, and skip successor picks that create such positions.
    pub shared_type_cutoff: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_limit: DEFAULT_NODE_LIMIT,
            shared_type_cutoff: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    SpoilerWins(SpoilerStrategy),
    DuplicatorWins,
}

impl Verdict {
    pub fn spoiler_wins(&self) -> bool {
        matches!(self, Verdict::SpoilerWins(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Plan {
    Literal(Literal),
    LeftSplit { m1: u32, k1: u32, part1: Vec<TypeId> },
    RightSplit { m1: u32, k1: u32, part1: Vec<TypeId> },
    /// `picks[i]` is the successor type chosen for the `i`-th left type.
    LeftSucc { picks: Vec<TypeId> },
    RightSucc { picks: Vec<TypeId> },
}

type Key = (u32, u32, Vec<TypeId>, Vec<TypeId>);

/// A memoizing solver bound to one proposition signature.
///
/// The memo survives between calls, so solving many positions over the same
/// models (as [`super::minimal_separating`] does) reuses earlier work.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    table: TypeTable,
    memo: BTreeMap<Key, Option<Plan>>,
    /// Per-model world types, keyed by the model's address.
    layers: BTreeMap<usize, (Arc<KripkeModel>, Vec<Vec<TypeId>>)>,
}

impl Solver {
    pub fn new(signature: &[String], config: SolverConfig) -> Self {
        Solver {
            config,
            table: TypeTable::new(signature),
            memo: BTreeMap::new(),
            layers: BTreeMap::new(),
        }
    }

    /// A solver for the signature of `pos`.
    pub fn for_position(pos: &GamePosition, config: SolverConfig) -> Result<Self, GameError> {
        Ok(Solver::new(&pos.signature()?, config))
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    /// Number of positions in the memo.
    pub fn nodes(&self) -> u64 {
        self.memo.len() as u64
    }

    fn check_signature(&self, pos: &GamePosition) -> Result<(), GameError> {
        let sig = pos.signature()?;
        let any_member = !(pos.left.is_empty() && pos.right.is_empty());
        if any_member && sig.as_slice() != self.table.signature() {
            return Err(crate::kripke::ModelError::SignatureMismatch.into());
        }
        Ok(())
    }

    /// Whether S wins, without building a strategy.
    pub fn wins(&mut self, pos: &GamePosition) -> Result<bool, GameError> {
        self.check_signature(pos)?;
        let key = self.key(pos.m, pos.k, &pos.left, &pos.right);
        self.search(key)
    }

    pub fn solve(&mut self, pos: &GamePosition) -> Result<Verdict, GameError> {
        if !self.wins(pos)? {
            return Ok(Verdict::DuplicatorWins);
        }
        let strategy = self.realize(pos.m, pos.k, pos.left.clone(), pos.right.clone())?;
        Ok(Verdict::SpoilerWins(strategy))
    }

    fn world_types(&mut self, model: &Arc<KripkeModel>, depth: u32) -> &[Vec<TypeId>] {
        let addr = Arc::as_ptr(model) as usize;
        let stale = match self.layers.get(&addr) {
            Some((_, l)) => l.len() <= depth as usize,
            None => true,
        };
        if stale {
            let l = self
                .table
                .world_types(model, depth)
                .expect("signature checked on entry");
            self.layers.insert(addr, (model.clone(), l));
        }
        &self.layers[&addr].1
    }

    fn type_of(&mut self, p: &PointedModel, depth: u32) -> TypeId {
        self.world_types(p.model_arc(), depth)[depth as usize][p.point() as usize]
    }

    fn types(&mut self, set: &ModelSet, depth: u32) -> Vec<TypeId> {
        let mut out: Vec<TypeId> = set.iter().map(|p| self.type_of(p, depth)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn key(&mut self, m: u32, k: u32, left: &ModelSet, right: &ModelSet) -> Key {
        (m, k, self.types(left, m), self.types(right, m))
    }

    fn truncate_all(&mut self, set: &[TypeId], depth: u32) -> Vec<TypeId> {
        let mut out: Vec<TypeId> = set.iter().map(|&t| self.table.truncate(t, depth)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn successor_union(&self, set: &[TypeId]) -> Vec<TypeId> {
        let mut out: Vec<TypeId> = set
            .iter()
            .flat_map(|&t| self.table.node(t).successors.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn separating_literal(&self, left: &[TypeId], right: &[TypeId]) -> Option<Literal> {
        if left.is_empty() {
            return Some(Literal::Bot);
        }
        if right.is_empty() {
            return Some(Literal::Top);
        }
        let has = |t: TypeId, p: u32| self.table.node(t).labels.binary_search(&p).is_ok();
        for (i, name) in self.table.signature().iter().enumerate() {
            let p = i as u32;
            if left.iter().all(|&t| has(t, p)) && !right.iter().any(|&t| has(t, p)) {
                return Some(Literal::Prop(name.clone()));
            }
            if !left.iter().any(|&t| has(t, p)) && right.iter().all(|&t| has(t, p)) {
                return Some(Literal::NegProp(name.clone()));
            }
        }
        None
    }

    fn search(&mut self, key: Key) -> Result<bool, GameError> {
        if let Some(outcome) = self.memo.get(&key) {
            return Ok(outcome.is_some());
        }
        let plan = self.decide(&key)?;
        let won = plan.is_some();
        if self.memo.len() as u64 >= self.config.node_limit {
            return Err(GameError::BudgetExceeded {
                limit: self.config.node_limit,
            });
        }
        self.memo.insert(key, plan);
        Ok(won)
    }

    fn decide(&mut self, key: &Key) -> Result<Option<Plan>, GameError> {
        let (m, k, left, right) = key;
        let (m, k) = (*m, *k);
        if let Some(lit) = self.separating_literal(left, right) {
            return Ok(Some(Plan::Literal(lit)));
        }
        if self.config.shared_type_cutoff && shares(left, right) {
            return Ok(None);
        }
        if m >= 1 {
            if let Some(picks) = self.try_successor(m, k, left, right, true)? {
                return Ok(Some(Plan::LeftSucc { picks }));
            }
            if let Some(picks) = self.try_successor(m, k, left, right, false)? {
                return Ok(Some(Plan::RightSucc { picks }));
            }
        }
        if k >= 1 {
            if let Some((m1, k1, part1)) = self.try_split(m, k, left, right, true)? {
                return Ok(Some(Plan::LeftSplit { m1, k1, part1 }));
            }
            if let Some((m1, k1, part1)) = self.try_split(m, k, left, right, false)? {
                return Ok(Some(Plan::RightSplit { m1, k1, part1 }));
            }
        }
        Ok(None)
    }

    /// Searches successor moves on one side; returns winning picks aligned
    /// with that side's types.
    fn try_successor(
        &mut self,
        m: u32,
        k: u32,
        left: &[TypeId],
        right: &[TypeId],
        on_left: bool,
    ) -> Result<Option<Vec<TypeId>>, GameError> {
        let (chooser, other) = if on_left { (left, right) } else { (right, left) };
        let other_next = self.successor_union(other);
        let mut options: Vec<Vec<TypeId>> = Vec::with_capacity(chooser.len());
        for &t in chooser {
            let succ = &self.table.node(t).successors;
            let opts: Vec<TypeId> = if self.config.shared_type_cutoff {
                succ.iter().copied().filter(|s| other_next.binary_search(s).is_err()).collect()
            } else {
                succ.clone()
            };
            if opts.is_empty() {
                return Ok(None);
            }
            options.push(opts);
        }
        let mut index = alloc::vec![0usize; options.len()];
        loop {
            let picks: Vec<TypeId> = index.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            let mut next = picks.clone();
            next.sort_unstable();
            next.dedup();
            let key = if on_left {
                (m - 1, k, next, other_next.clone())
            } else {
                (m - 1, k, other_next.clone(), next)
            };
            if self.search(key)? {
                return Ok(Some(picks));
            }
            // odometer over the product of options
            let mut pos = 0;
            loop {
                if pos == index.len() {
                    return Ok(None);
                }
                index[pos] += 1;
                if index[pos] < options[pos].len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Searches splits of one side into two nonempty parts.
    fn try_split(
        &mut self,
        m: u32,
        k: u32,
        left: &[TypeId],
        right: &[TypeId],
        on_left: bool,
    ) -> Result<Option<(u32, u32, Vec<TypeId>)>, GameError> {
        let (side, other) = if on_left { (left, right) } else { (right, left) };
        let n = side.len();
        if n < 2 {
            return Ok(None);
        }
        if n > MAX_SPLIT_WIDTH {
            return Err(GameError::SplitTooWide { width: n });
        }
        let full: u64 = (1u64 << n) - 1;
        // odd masks only: the least type always goes to the first part
        let mut mask: u64 = 1;
        while mask < full {
            let part1: Vec<TypeId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| side[i]).collect();
            let part2: Vec<TypeId> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| side[i]).collect();
            for m1 in 0..=m {
                for k1 in 0..k {
                    let (m2, k2) = (m - m1, k - 1 - k1);
                    if self.branch_wins(m1, k1, &part1, other, on_left)?
                        && self.branch_wins(m2, k2, &part2, other, on_left)?
                    {
                        return Ok(Some((m1, k1, part1)));
                    }
                }
            }
            mask += 2;
        }
        Ok(None)
    }

    fn branch_wins(&mut self, m: u32, k: u32, part: &[TypeId], other: &[TypeId], on_left: bool) -> Result<bool, GameError> {
        let part = self.truncate_all(part, m);
        let other = self.truncate_all(other, m);
        let key = if on_left { (m, k, part, other) } else { (m, k, other, part) };
        self.search(key)
    }

    /// Builds the concrete strategy for a won position from the memo.
    fn realize(&mut self, m: u32, k: u32, left: ModelSet, right: ModelSet) -> Result<SpoilerStrategy, GameError> {
        let key = self.key(m, k, &left, &right);
        if !self.search(key.clone())? {
            return Err(GameError::InvalidStrategy("realizing a position S does not win"));
        }
        let plan = self.memo[&key].clone().expect("won positions carry a plan");
        let position = GamePosition::new(m, k, left, right);
        let step = match plan {
            Plan::Literal(lit) => Step::Literal(lit),
            Plan::LeftSplit { m1, k1, part1 } | Plan::RightSplit { m1, k1, part1 } => {
                let on_left = matches!(self.memo[&key], Some(Plan::LeftSplit { .. }));
                let side = if on_left { &position.left } else { &position.right };
                let (mut a, mut b) = (ModelSet::new(), ModelSet::new());
                for p in side.clone() {
                    if part1.binary_search(&self.type_of(&p, m)).is_ok() {
                        a.insert(p);
                    } else {
                        b.insert(p);
                    }
                }
                let split = Split {
                    m1,
                    k1,
                    part1: a,
                    m2: m - m1,
                    k2: k - 1 - k1,
                    part2: b,
                };
                let first = super::apply_move(&position, &wrap(on_left, split.clone()), Some(DChoice::Left))?;
                let second = super::apply_move(&position, &wrap(on_left, split.clone()), Some(DChoice::Right))?;
                let first = self.realize(first.m, first.k, first.left, first.right)?;
                let second = self.realize(second.m, second.k, second.left, second.right)?;
                let (first, second) = (alloc::boxed::Box::new(first), alloc::boxed::Box::new(second));
                if on_left {
                    Step::LeftSplit { split, first, second }
                } else {
                    Step::RightSplit { split, first, second }
                }
            }
            Plan::LeftSucc { picks } | Plan::RightSucc { picks } => {
                let on_left = matches!(self.memo[&key], Some(Plan::LeftSucc { .. }));
                let (side, side_types) = if on_left {
                    (position.left.clone(), key.2.clone())
                } else {
                    (position.right.clone(), key.3.clone())
                };
                let mut choice = ChoiceMap::new();
                for p in side {
                    let t = self.type_of(&p, m);
                    let want = picks[side_types.binary_search(&t).expect("member type in key")];
                    let layers = self.world_types(p.model_arc(), m);
                    let v = p
                        .model()
                        .successors(p.point())
                        .iter()
                        .copied()
                        .find(|&v| layers[m as usize - 1][v as usize] == want)
                        .expect("type successor has a witness");
                    let q = p.repoint(v);
                    choice.insert(p, q);
                }
                let mv = if on_left {
                    super::Move::LeftSucc(choice.clone())
                } else {
                    super::Move::RightSucc(choice.clone())
                };
                let next = super::apply_move(&position, &mv, None)?;
                let next = alloc::boxed::Box::new(self.realize(next.m, next.k, next.left, next.right)?);
                if on_left {
                    Step::LeftSucc { choice, next }
                } else {
                    Step::RightSucc { choice, next }
                }
            }
        };
        Ok(SpoilerStrategy { position, step })
    }
}

fn wrap(on_left: bool, split: Split) -> super::Move {
    if on_left {
        super::Move::LeftSplit(split)
    } else {
        super::Move::RightSplit(split)
    }
}

fn shares(a: &[TypeId], b: &[TypeId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Verdict together with the number of memo entries the search created.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub verdict: Verdict,
    pub nodes: u64,
}

/// Solves a position with the default configuration.
pub fn solve(pos: &GamePosition) -> Result<Verdict, GameError> {
    Ok(solve_with(pos, SolverConfig::default())?.verdict)
}

pub fn solve_with(pos: &GamePosition, config: SolverConfig) -> Result<Solution, GameError> {
    let mut solver = Solver::for_position(pos, config)?;
    let verdict = solver.solve(pos)?;
    Ok(Solution {
        verdict,
        nodes: solver.nodes(),
    })
}
