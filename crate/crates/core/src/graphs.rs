//! Coloring graphs of hierarchy positions and the coloring-driven Duplicator.
//!
//! For `𝕍 ⊆ 𝕍ₙ` and `𝔼 ⊆ 𝔼ₙ`, the graph `G(𝕍, 𝔼)` has a vertex for every set
//! `a` with `⊎{(M_a, a)} ∈ 𝕍` and an edge `{a, b}` whenever
//! `⊎{(M_a, a), (M_b, b)} ∈ 𝔼`. D survives `k` connectives as long as
//! `2^k < χ(G)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{
    apply_move, duplicator_bisim_strategy, find_bisimilar_pair, BisimResponder, DChoice, GameError, GamePosition,
    Move, Responder,
};
use crate::hierarchy::HfSet;
use crate::kripke::{ModelSet, PointedModel};

/// Default largest graph accepted by [`chromatic_number`].
pub const DEFAULT_COLORING_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("graph has {n} vertices, more than the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("member pointed at `{0}` is not a join of hierarchy submodels")]
    Malformed(String),
    #[error("coloring precondition violated: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A finite simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    adj: Vec<BTreeSet<u32>>,
}

impl Graph {
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(|v| v.as_ref().to_string()).collect();
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i as u32).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut adj = alloc::vec![BTreeSet::new(); vertices.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = *index.get(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let j = *index.get(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            if i == j {
                return Err(GraphError::SelfLoop(a.to_string()));
            }
            adj[i as usize].insert(j);
            adj[j as usize].insert(i);
        }
        Ok(Graph { vertices, adj })
    }

    /// `n` vertices `0..n` with edges given by index pairs.
    pub fn from_indices(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Graph::new(
            names.iter().map(String::as_str),
            edges.iter().map(|&(a, b)| (names[a as usize].as_str(), names[b as usize].as_str())),
        )
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
            .collect();
        Graph::from_indices(n, &edges).expect("valid complete graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].contains(&b)
    }

    /// Edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i as u32).map(move |&j| (i as u32, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// One `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.edges() {
            out.push_str(&self.vertices[a as usize]);
            out.push(' ');
            out.push_str(&self.vertices[b as usize]);
            out.push('\n');
        }
        out
    }

    /// Whether `colors` is a proper coloring.
    pub fn is_proper(&self, colors: &[u32]) -> bool {
        colors.len() == self.vertex_count() && self.edges().all(|(a, b)| colors[a as usize] != colors[b as usize])
    }
}

/// The unique successor of a singleton join, decoded.
fn single_child(p: &PointedModel) -> Result<HfSet, GraphError> {
    let malformed = || GraphError::Malformed(p.point_name().to_string());
    let children: Vec<PointedModel> = p.successor_iter().collect();
    if children.len() != 1 || !p.model().labels(p.point()).is_empty() {
        return Err(malformed());
    }
    HfSet::decode(&children[0]).ok_or_else(malformed)
}

fn pair_children(p: &PointedModel) -> Result<(HfSet, HfSet), GraphError> {
    let malformed = || GraphError::Malformed(p.point_name().to_string());
    let children: Vec<PointedModel> = p.successor_iter().collect();
    if children.len() != 2 || !p.model().labels(p.point()).is_empty() {
        return Err(malformed());
    }
    let a = HfSet::decode(&children[0]).ok_or_else(malformed)?;
    let b = HfSet::decode(&children[1]).ok_or_else(malformed)?;
    Ok((a, b))
}

/// `G(𝕍, 𝔼)`. Vertices are named by their sets in brace notation and listed
/// in set order; pairs of `𝔼` with an endpoint outside `𝕍` add no edge.
pub fn graph_of(vv: &ModelSet, ee: &ModelSet) -> Result<Graph, GraphError> {
    let mut vertices: BTreeSet<HfSet> = BTreeSet::new();
    for p in vv {
        vertices.insert(single_child(p)?);
    }
    let mut edges: Vec<(String, String)> = Vec::new();
    for p in ee {
        let (a, b) = pair_children(p)?;
        if vertices.contains(&a) && vertices.contains(&b) {
            edges.push((a.to_string(), b.to_string()));
        }
    }
    let names: Vec<String> = vertices.iter().map(|a| a.to_string()).collect();
    Graph::new(
        names.iter().map(String::as_str),
        edges.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )
}

/// Greedy clique through vertices of decreasing degree, tried from every start.
fn clique_lower_bound(g: &Graph) -> u32 {
    let n = g.vertex_count() as u32;
    let mut order: Vec<u32> = (0..n).collect();
    order.sort_by_key(|&v| core::cmp::Reverse(g.degree(v)));
    let mut best = u32::from(n > 0);
    for &start in &order {
        let mut clique = alloc::vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len() as u32);
    }
    best
}

/// DSATUR: repeatedly color the vertex with most distinct neighbor colors.
fn dsatur(g: &Graph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut colors: Vec<Option<u32>> = alloc::vec![None; n];
    for _ in 0..n {
        let v = (0..n as u32)
            .filter(|&v| colors[v as usize].is_none())
            .max_by_key(|&v| {
                let sat: BTreeSet<u32> = g.neighbors(v).filter_map(|u| colors[u as usize]).collect();
                (sat.len(), g.degree(v), core::cmp::Reverse(v))
            })
            .expect("uncolored vertex remains");
        let used: BTreeSet<u32> = g.neighbors(v).filter_map(|u| colors[u as usize]).collect();
        colors[v as usize] = (0..).find(|c| !used.contains(c));
    }
    colors.into_iter().map(|c| c.expect("all colored")).collect()
}

fn colorable(g: &Graph, order: &[u32], colors: &mut [Option<u32>], i: usize, c: u32, used: u32) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    // a fresh color is tried only once, which removes color permutations
    for color in 0..c.min(used + 1) {
        if g.neighbors(v).any(|u| colors[u as usize] == Some(color)) {
            continue;
        }
        colors[v as usize] = Some(color);
        if colorable(g, order, colors, i + 1, c, used.max(color + 1)) {
            return true;
        }
        colors[v as usize] = None;
    }
    false
}

/// A proper coloring with `c` colors, if one exists.
pub fn color_with(g: &Graph, c: u32) -> Option<Vec<u32>> {
    let n = g.vertex_count();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| core::cmp::Reverse(g.degree(v)));
    let mut colors = alloc::vec![None; n];
    if colorable(g, &order, &mut colors, 0, c, 0) {
        Some(colors.into_iter().map(|c| c.expect("all colored")).collect())
    } else {
        None
    }
}

pub fn chromatic_number(g: &Graph) -> Result<u32, GraphError> {
    chromatic_number_with_cap(g, DEFAULT_COLORING_CAP)
}

/// Exact chromatic number: clique bound below, DSATUR above, and exhaustive
/// search for each count in between.
pub fn chromatic_number_with_cap(g: &Graph, cap: usize) -> Result<u32, GraphError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(GraphError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let lower = clique_lower_bound(g);
    let upper = dsatur(g).into_iter().max().map_or(0, |c| c + 1);
    for c in lower..upper {
        if color_with(g, c).is_some() {
            return Ok(c);
        }
    }
    Ok(upper)
}

/// Whether `2^k < chi`, i.e. `k < log₂ chi`.
pub fn below_log2(k: u32, chi: u32) -> bool {
    k < 32 && (1u64 << k) < u64::from(chi)
}

/// Largest `k` with `2^k < chi`, or `None` when `chi ≤ 1`.
pub fn certified_connectives(chi: u32) -> Option<u32> {
    (0..32).rev().find(|&k| below_log2(k, chi))
}

/// D's strategy on positions shaped like `(𝕍, 𝔼)`: keep `2^k < χ(G(left, right))`
/// through splits, and switch to a bisimulation strategy on the first
/// successor move, which leaves one pointed model on both sides.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColoringResponder {
    Coloring,
    Handoff(BisimResponder),
}

impl Responder for ColoringResponder {
    fn respond(&self, pos: &GamePosition, mv: &Move) -> Result<(Option<DChoice>, Self), GameError> {
        let responder = match self {
            ColoringResponder::Handoff(b) => {
                let (d, next) = b.respond(pos, mv)?;
                return Ok((d, ColoringResponder::Handoff(next)));
            }
            ColoringResponder::Coloring => self,
        };
        let chi = |vv: &ModelSet, ee: &ModelSet| -> Result<u32, GameError> {
            graph_of(vv, ee)
                .and_then(|g| chromatic_number(&g))
                .map_err(|_| GameError::Precondition("position is not a hierarchy coloring position"))
        };
        match mv {
            Move::LeftSplit(s) | Move::RightSplit(s) => {
                let branches = [(DChoice::Left, s.k1, &s.part1), (DChoice::Right, s.k2, &s.part2)];
                for (d, k, part) in branches {
                    let c = if matches!(mv, Move::LeftSplit(_)) {
                        chi(part, &pos.right)?
                    } else {
                        chi(&pos.left, part)?
                    };
                    if below_log2(k, c) {
                        return Ok((Some(d), responder.clone()));
                    }
                }
                Err(GameError::Precondition("no split branch keeps 2^k below the chromatic number"))
            }
            Move::LeftSucc(_) | Move::RightSucc(_) => {
                let next = apply_move(pos, mv, None)?;
                let w = find_bisimilar_pair(&next)?
                    .ok_or(GameError::Precondition("successor move left no shared model"))?;
                Ok((None, ColoringResponder::Handoff(duplicator_bisim_strategy(&next, w)?)))
            }
        }
    }
}

/// Requires `χ(G(left, right)) ≥ 2` and `2^k < χ`.
pub fn duplicator_coloring_strategy(pos: &GamePosition) -> Result<ColoringResponder, GraphError> {
    let chi = chromatic_number(&graph_of(&pos.left, &pos.right)?)?;
    if chi < 2 {
        return Err(GraphError::Precondition("chromatic number below 2"));
    }
    if !below_log2(pos.k, chi) {
        return Err(GraphError::Precondition("k is not below log2 of the chromatic number"));
    }
    Ok(ColoringResponder::Coloring)
}
