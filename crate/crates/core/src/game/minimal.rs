use alloc::vec::Vec;

use super::solver::{Solver, SolverConfig, Verdict};
use super::strategy::extract_formula;
use super::{GameError, GamePosition};
use crate::kripke::ModelSet;
use crate::logic::MlFormula;

/// A Pareto-minimal budget pair with a separator found for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierEntry {
    pub m: u32,
    pub k: u32,
    pub formula: MlFormula,
}

pub fn minimal_separating(a: &ModelSet, b: &ModelSet, max_total: u32) -> Result<Vec<FrontierEntry>, GameError> {
    minimal_separating_with(a, b, max_total, SolverConfig::default())
}

/// All budget pairs `(m, k)` with `m + k ≤ max_total` at which S wins and at
/// which S loses with one unit less of either budget, in increasing `m`.
///
/// Pairs are visited by increasing total, so a pair dominated by an earlier
/// win is never solved. One solver is shared by the whole scan.
pub fn minimal_separating_with(
    a: &ModelSet,
    b: &ModelSet,
    max_total: u32,
    config: SolverConfig,
) -> Result<Vec<FrontierEntry>, GameError> {
    let probe = GamePosition::new(0, 0, a.clone(), b.clone());
    let mut solver = Solver::for_position(&probe, config)?;
    let mut out: Vec<FrontierEntry> = Vec::new();
    for total in 0..=max_total {
        for m in 0..=total {
            let k = total - m;
            if out.iter().any(|e| e.m <= m && e.k <= k) {
                continue;
            }
            let pos = GamePosition::new(m, k, a.clone(), b.clone());
            if let Verdict::SpoilerWins(s) = solver.solve(&pos)? {
                out.push(FrontierEntry {
                    m,
                    k,
                    formula: extract_formula(&s)?,
                });
            }
        }
    }
    out.sort_by_key(|e| (e.m, e.k));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{ee_set, vv_set, HfSet};
    use crate::logic::{ml_sizes, separates};

    fn one(s: &str) -> ModelSet {
        [s.parse::<HfSet>().unwrap().model()].into_iter().collect()
    }

    #[test]
    fn dead_end_against_one_successor() {
        let frontier = minimal_separating(&one("{}"), &one("{{}}"), 3).unwrap();
        assert_eq!(frontier.len(), 1);
        assert_eq!((frontier[0].m, frontier[0].k), (1, 0));
        assert_eq!(frontier[0].formula, MlFormula::boxed(MlFormula::Bot));
    }

    #[test]
    fn a_set_against_itself() {
        let vv = vv_set(1).unwrap();
        assert!(minimal_separating(&vv, &vv, 4).unwrap().is_empty());
    }

    #[test]
    fn level_one_frontier() {
        let (vv, ee) = (vv_set(1).unwrap(), ee_set(1).unwrap());
        let frontier = minimal_separating(&vv, &ee, 5).unwrap();
        assert!(!frontier.is_empty());
        for e in &frontier {
            assert!(e.k >= 1);
            let sz = ml_sizes(&e.formula);
            assert!(sz.ms <= e.m && sz.cs <= e.k);
            assert!(separates(&e.formula, &vv, &ee).unwrap());
        }
        for pair in frontier.windows(2) {
            assert!(pair[0].m < pair[1].m && pair[0].k > pair[1].k);
        }
    }
}
