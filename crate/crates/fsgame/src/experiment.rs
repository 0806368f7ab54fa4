//! The succinctness experiment: FO separator sizes against the modal game.
//!
//! For level `n` the report pairs the size of the first-order formula φₙ
//! separating 𝕍ₙ from 𝔼ₙ with solver verdicts on `EF_{m,k}(𝕍ₙ, 𝔼ₙ)` over a
//! budget grid, the Pareto frontier of modal separators, and the lower bound
//! certified by the chromatic number of `G(𝕍ₙ, 𝔼ₙ)`.

use std::time::Instant;

use fsgame_core::game::{minimal_separating_with, solve_with, GamePosition, SolverConfig};
use fsgame_core::graphs::{certified_connectives, chromatic_number, graph_of};
use fsgame_core::hierarchy::{ee_set, vv_set};
use fsgame_core::logic::{eval_fo_named, fo_size, make_phi, make_psi, SizeConvention};
use fsgame_core::PointedModel;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::VerdictJson;
use crate::CliError;

/// Largest level the solver grid runs on.
pub const MAX_SOLVER_LEVEL: u32 = 2;
/// Largest level with a report at all (𝔼ₙ is enumerated explicitly).
pub const MAX_REPORT_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentOptions {
    pub n: u32,
    pub m_max: Option<u32>,
    pub k_max: Option<u32>,
    pub frontier_budget: Option<u32>,
    pub timings: bool,
    pub threads: usize,
    pub config: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoSizes {
    pub atoms_counted: u64,
    pub atoms_free: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// `χ(G(𝕍ₙ, 𝔼ₙ))`.
    pub chi: u32,
    pub edges: usize,
    /// Largest `k` with `2^k < χ`: D wins every `EF_{m,k}` with `k` up to this.
    pub max_k: Option<u32>,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    /// Whether the coloring certificate predicts a D win here.
    pub certified_d: bool,
    pub error: Option<String>,
    pub k: u32,
    pub m: u32,
    pub verdict: Option<VerdictJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrontierPoint {
    pub formula: String,
    pub k: u32,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub certificate: Certificate,
    pub cells: Vec<Cell>,
    pub fo_size_phi: FoSizes,
    pub fo_size_psi: FoSizes,
    pub frontier: Option<Vec<FrontierPoint>>,
    pub frontier_budget: Option<u32>,
    pub n: u32,
    /// φₙ holds at every 𝕍ₙ root and fails at every 𝔼ₙ root.
    pub phi_separates: bool,
    pub wall_ms: Option<u64>,
}

fn sizes(f: &fsgame_core::logic::FoFormula) -> FoSizes {
    FoSizes {
        atoms_counted: fo_size(f, SizeConvention::AtomsCounted),
        atoms_free: fo_size(f, SizeConvention::AtomsFree),
    }
}

fn default_grid(n: u32) -> (u32, u32) {
    match n {
        1 => (4, 2),
        _ => (3, 1),
    }
}

fn default_frontier_budget(n: u32) -> Option<u32> {
    match n {
        1 => Some(5),
        // the first separator at level 2 sits at (12, 3)
        2 => Some(16),
        _ => None,
    }
}

pub fn run_experiment(opts: &ExperimentOptions) -> Result<ExperimentReport, CliError> {
    let start = Instant::now();
    let n = opts.n;
    if n == 0 || n > MAX_REPORT_LEVEL {
        return Err(CliError::Refused(format!(
            "experiment levels run from 1 to {MAX_REPORT_LEVEL}, got {n}"
        )));
    }
    let vv = vv_set(n as usize).map_err(|e| CliError::Refused(e.to_string()))?;
    let ee = ee_set(n as usize).map_err(|e| CliError::Refused(e.to_string()))?;
    let phi = make_phi(n).map_err(|e| CliError::Internal(e.to_string()))?;
    let psi = make_psi(n).map_err(|e| CliError::Internal(e.to_string()))?;
    let at_root = |p: &PointedModel| eval_fo_named(p.model(), &phi, &[("x", p.point_name())]);
    let mut phi_separates = true;
    for p in &vv {
        phi_separates &= at_root(p).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    for p in &ee {
        phi_separates &= !at_root(p).map_err(|e| CliError::Internal(e.to_string()))?;
    }

    let graph = graph_of(&vv, &ee).map_err(|e| CliError::Internal(e.to_string()))?;
    let chi = chromatic_number(&graph).map_err(|e| CliError::Refused(e.to_string()))?;
    let certificate = Certificate {
        chi,
        edges: graph.edge_count(),
        max_k: certified_connectives(chi),
        vertices: graph.vertex_count(),
    };

    let (mut cells, mut frontier, mut frontier_budget) = (Vec::new(), None, None);
    if n <= MAX_SOLVER_LEVEL {
        let (dm, dk) = default_grid(n);
        let (m_max, k_max) = (opts.m_max.unwrap_or(dm), opts.k_max.unwrap_or(dk));
        let grid: Vec<(u32, u32)> = (0..=k_max).flat_map(|k| (0..=m_max).map(move |m| (m, k))).collect();
        let solve_cell = |&(m, k): &(u32, u32)| -> Cell {
            let pos = GamePosition::new(m, k, vv.clone(), ee.clone());
            let certified_d = certificate.max_k.is_some_and(|max| k <= max);
            match solve_with(&pos, opts.config) {
                Ok(sol) => match VerdictJson::from_solution(&sol) {
                    Ok(v) => Cell { certified_d, error: None, k, m, verdict: Some(v) },
                    Err(e) => Cell { certified_d, error: Some(e.to_string()), k, m, verdict: None },
                },
                Err(e) => Cell { certified_d, error: Some(e.to_string()), k, m, verdict: None },
            }
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads.max(1))
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        cells = pool.install(|| grid.par_iter().map(solve_cell).collect());

        frontier_budget = opts.frontier_budget.or(default_frontier_budget(n));
        if let Some(budget) = frontier_budget {
            let points = minimal_separating_with(&vv, &ee, budget, opts.config).map_err(|e| CliError::Refused(e.to_string()))?;
            frontier = Some(
                points
                    .into_iter()
                    .map(|p| FrontierPoint {
                        formula: p.formula.to_string(),
                        k: p.k,
                        m: p.m,
                    })
                    .collect(),
            );
        }
    }

    Ok(ExperimentReport {
        certificate,
        cells,
        fo_size_phi: sizes(&phi),
        fo_size_psi: sizes(&psi),
        frontier,
        frontier_budget,
        n,
        phi_separates,
        wall_ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
    })
}
