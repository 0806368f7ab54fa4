#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use fsgame_core::game::GamePosition;
use fsgame_core::logic::{FormulaEnumeration, Literal, Node};
use fsgame_core::{KripkeModel, ModelSet, PointedModel};
use rand::Rng;

pub fn signature(props: usize) -> Vec<String> {
    ["p", "q", "r"][..props].iter().map(|s| s.to_string()).collect()
}

/// A random model on `1..=max_worlds` worlds named `w0, w1, …`.
pub fn random_model<R: Rng>(rng: &mut R, max_worlds: usize, props: &[String], edge_p: f64) -> Arc<KripkeModel> {
    let n = rng.gen_range(1..=max_worlds);
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut edges = Vec::new();
    for a in &names {
        for b in &names {
            if rng.gen_bool(edge_p) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    let valuation: Vec<(String, BTreeSet<String>)> = props
        .iter()
        .map(|p| (p.clone(), names.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()))
        .collect();
    Arc::new(KripkeModel::new(names.clone(), edges, valuation).unwrap())
}

pub fn random_point<R: Rng>(rng: &mut R, model: &Arc<KripkeModel>) -> PointedModel {
    PointedModel::at(model.clone(), rng.gen_range(0..model.world_count() as u32))
}

/// A position whose members are points of a small shared pool of models, so
/// that the two sides often hold similar models. No member is on both sides,
/// since that alone makes every budget a D win.
pub fn random_position<R: Rng>(rng: &mut R, m: u32, k: u32) -> GamePosition {
    let props = signature(rng.gen_range(0..=2));
    loop {
        let pool: Vec<Arc<KripkeModel>> = (0..rng.gen_range(1..=3)).map(|_| random_model(rng, 4, &props, 0.35)).collect();
        let points: Vec<PointedModel> = pool
            .iter()
            .flat_map(|model| (0..model.world_count() as u32).map(|w| PointedModel::at(model.clone(), w)))
            .collect();
        let left: ModelSet = (0..rng.gen_range(1..=3))
            .map(|_| points[rng.gen_range(0..points.len())].clone())
            .collect();
        let rest: Vec<&PointedModel> = points.iter().filter(|p| !left.contains(p)).collect();
        if rest.is_empty() {
            continue;
        }
        let right: ModelSet = (0..rng.gen_range(1..=3))
            .map(|_| rest[rng.gen_range(0..rest.len())].clone())
            .collect();
        return GamePosition::new(m, k, left, right);
    }
}

/// Extension bitmasks of every formula of an enumeration over the disjoint
/// union of the models in a position, computed bottom-up.
pub struct MaskOracle {
    /// Per distinct model: offset of its first world in the union.
    offsets: BTreeMap<*const KripkeModel, u32>,
    ext: Vec<u64>,
}

impl MaskOracle {
    pub fn new(e: &FormulaEnumeration, pos: &GamePosition) -> Self {
        let mut models: Vec<Arc<KripkeModel>> = Vec::new();
        let mut offsets = BTreeMap::new();
        let mut total = 0u32;
        for p in pos.left.iter().chain(pos.right.iter()) {
            let ptr = Arc::as_ptr(p.model_arc());
            if let std::collections::btree_map::Entry::Vacant(slot) = offsets.entry(ptr) {
                slot.insert(total);
                total += p.model().world_count() as u32;
                models.push(p.model_arc().clone());
            }
        }
        assert!(total <= 64);
        let all: u64 = if total == 64 { u64::MAX } else { (1u64 << total) - 1 };
        let mut succ: Vec<u64> = Vec::new();
        let mut prop_masks: BTreeMap<String, u64> = BTreeMap::new();
        for model in &models {
            let off = offsets[&Arc::as_ptr(model)];
            for w in 0..model.world_count() as u32 {
                succ.push(model.successors(w).iter().fold(0, |acc, &v| acc | 1u64 << (off + v)));
                for (i, name) in model.signature().iter().enumerate() {
                    if model.holds(w, i as u32) {
                        *prop_masks.entry(name.clone()).or_default() |= 1u64 << (off + w);
                    } else {
                        prop_masks.entry(name.clone()).or_default();
                    }
                }
            }
        }
        let mut ext: Vec<u64> = Vec::with_capacity(e.len());
        for node in e.nodes() {
            let x = match node {
                Node::Lit(Literal::Top) => all,
                Node::Lit(Literal::Bot) => 0,
                Node::Lit(Literal::Prop(p)) => prop_masks.get(p).copied().unwrap_or(0),
                Node::Lit(Literal::NegProp(p)) => all & !prop_masks.get(p).copied().unwrap_or(0),
                Node::Diamond(i) => {
                    let inner = ext[*i as usize];
                    (0..total).filter(|&w| succ[w as usize] & inner != 0).fold(0, |a, w| a | 1u64 << w)
                }
                Node::Box(i) => {
                    let inner = ext[*i as usize];
                    (0..total).filter(|&w| succ[w as usize] & !inner == 0).fold(0, |a, w| a | 1u64 << w)
                }
                Node::And(i, j) => ext[*i as usize] & ext[*j as usize],
                Node::Or(i, j) => ext[*i as usize] | ext[*j as usize],
            };
            ext.push(x);
        }
        MaskOracle { offsets, ext }
    }

    fn mask(&self, set: &ModelSet) -> u64 {
        set.iter()
            .fold(0, |acc, p| acc | 1u64 << (self.offsets[&Arc::as_ptr(p.model_arc())] + p.point()))
    }

    /// Indices of the formulas separating the position's sides.
    pub fn separators<'a>(&'a self, pos: &GamePosition) -> impl Iterator<Item = u32> + 'a {
        let (a, b) = (self.mask(&pos.left), self.mask(&pos.right));
        (0..self.ext.len() as u32).filter(move |&i| {
            let x = self.ext[i as usize];
            x & a == a && x & b == 0
        })
    }

    /// Whether some formula with `ms ≤ m`, `cs ≤ k` separates.
    pub fn separable(&self, e: &FormulaEnumeration, pos: &GamePosition, m: u32, k: u32) -> bool {
        self.separators(pos).any(|i| {
            let (ms, cs) = e.size_of(i);
            ms <= m && cs <= k
        })
    }
}

/// The tree unraveling of `p` cut at depth `n`: worlds are paths from the
/// point, which makes the result `n`-bisimilar to `p`.
pub fn unravel(p: &PointedModel, n: u32) -> PointedModel {
    let model = p.model();
    let mut names = Vec::new();
    let mut edges = Vec::new();
    let mut labels: BTreeMap<String, BTreeSet<String>> =
        model.signature().iter().map(|s| (s.clone(), BTreeSet::new())).collect();
    let mut frontier = vec![(format!("t{}", model.world_name(p.point())), p.point())];
    for depth in 0..=n {
        let mut next = Vec::new();
        for (name, w) in &frontier {
            names.push(name.clone());
            for (i, prop) in model.signature().iter().enumerate() {
                if model.holds(*w, i as u32) {
                    labels.get_mut(prop).unwrap().insert(name.clone());
                }
            }
            if depth < n {
                for &v in model.successors(*w) {
                    let child = format!("{name}.{}", model.world_name(v));
                    edges.push((name.clone(), child.clone()));
                    next.push((child, v));
                }
            }
        }
        frontier = next;
    }
    let root = names[0].clone();
    let m = KripkeModel::new(names, edges, labels).unwrap();
    PointedModel::new(Arc::new(m), &root).unwrap()
}
