//! n-bisimulation by iterated signature refinement.
//!
//! The depth-`i` *type* of a world is its set of true propositions together
//! with the set of depth-`(i-1)` types of its successors. Types are
//! hash-consed in a [`TypeTable`], so two worlds (in the same or different
//! models over one signature) get the same depth-`i` [`TypeId`] exactly when
//! they are i-bisimilar. Successor types are collected as a set, not a
//! multiset: this is bisimulation, not graph isomorphism.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::kripke::{KripkeModel, ModelError, PointedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeNode {
    pub depth: u32,
    /// Indices into the table signature of the propositions that hold.
    pub labels: Vec<u32>,
    /// Sorted, duplicate-free depth-`(depth-1)` types; empty at depth 0.
    pub successors: Vec<TypeId>,
}

/// Interner for bisimulation types over one signature.
#[derive(Debug, Clone, Default)]
pub struct TypeTable {
    signature: Vec<String>,
    nodes: Vec<TypeNode>,
    index: BTreeMap<TypeNode, TypeId>,
    truncations: BTreeMap<(TypeId, u32), TypeId>,
}

impl TypeTable {
    pub fn new(signature: &[String]) -> Self {
        TypeTable {
            signature: signature.to_vec(),
            ..Default::default()
        }
    }

    pub fn signature(&self) -> &[String] {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn intern(&mut self, node: TypeNode) -> TypeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = TypeId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn node(&self, id: TypeId) -> &TypeNode {
        &self.nodes[id.0 as usize]
    }

    pub fn depth(&self, id: TypeId) -> u32 {
        self.node(id).depth
    }

    /// Types of every world of `model` at depths `0..=depth`; `out[i][w]` is the
    /// depth-`i` type of world `w`.
    pub fn world_types(&mut self, model: &KripkeModel, depth: u32) -> Result<Vec<Vec<TypeId>>, ModelError> {
        if model.signature() != self.signature.as_slice() {
            return Err(ModelError::SignatureMismatch);
        }
        let n = model.world_count() as u32;
        let mut layers: Vec<Vec<TypeId>> = Vec::with_capacity(depth as usize + 1);
        let base: Vec<TypeId> = (0..n)
            .map(|w| {
                self.intern(TypeNode {
                    depth: 0,
                    labels: model.labels(w).to_vec(),
                    successors: Vec::new(),
                })
            })
            .collect();
        layers.push(base);
        for d in 1..=depth {
            let prev = &layers[d as usize - 1];
            let nodes: Vec<TypeNode> = (0..n)
                .map(|w| {
                    let mut succ: Vec<TypeId> =
                        model.successors(w).iter().map(|&v| prev[v as usize]).collect();
                    succ.sort_unstable();
                    succ.dedup();
                    TypeNode {
                        depth: d,
                        labels: model.labels(w).to_vec(),
                        successors: succ,
                    }
                })
                .collect();
            let layer = nodes.into_iter().map(|node| self.intern(node)).collect();
            layers.push(layer);
        }
        Ok(layers)
    }

    /// Depth-`depth` type of the point of `p`.
    pub fn type_of(&mut self, p: &PointedModel, depth: u32) -> Result<TypeId, ModelError> {
        let layers = self.world_types(p.model(), depth)?;
        Ok(layers[depth as usize][p.point() as usize])
    }

    /// The depth-`depth` type of any world whose type is `id` (`depth ≤ depth(id)`).
    pub fn truncate(&mut self, id: TypeId, depth: u32) -> TypeId {
        let own = self.depth(id);
        assert!(depth <= own, "cannot deepen a type");
        if depth == own {
            return id;
        }
        if let Some(&t) = self.truncations.get(&(id, depth)) {
            return t;
        }
        let node = self.node(id).clone();
        let successors = if depth == 0 {
            Vec::new()
        } else {
            let mut s: Vec<TypeId> = node
                .successors
                .iter()
                .map(|&c| self.truncate(c, depth - 1))
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let t = self.intern(TypeNode {
            depth,
            labels: node.labels,
            successors,
        });
        self.truncations.insert((id, depth), t);
        t
    }
}

/// Partition of the worlds of `model` into full-bisimulation classes, given
/// as a class number per world; numbers are dense and ordered by first world.
fn stable_partition(model: &KripkeModel) -> Vec<u32> {
    let mut table = TypeTable::new(model.signature());
    let n = model.world_count();
    let classes = |layer: &[TypeId]| {
        let mut seen: BTreeMap<TypeId, u32> = BTreeMap::new();
        layer
            .iter()
            .map(|t| {
                let next = seen.len() as u32;
                *seen.entry(*t).or_insert(next)
            })
            .collect::<Vec<u32>>()
    };
    // refinement stabilizes after at most n rounds
    let layers = table
        .world_types(model, n as u32)
        .expect("own signature");
    let mut prev = classes(&layers[0]);
    for layer in &layers[1..] {
        let cur = classes(layer);
        if cur == prev {
            break;
        }
        prev = cur;
    }
    prev
}

pub fn prop_equivalent(p: &PointedModel, q: &PointedModel) -> Result<bool, ModelError> {
    if p.signature() != q.signature() {
        return Err(ModelError::SignatureMismatch);
    }
    Ok(p.model().labels(p.point()) == q.model().labels(q.point()))
}

/// Relations `Z_n ⊆ … ⊆ Z_0` between the worlds of two models.
///
/// `layers[i]` is `Z_i`; pairs are `(world of left, world of right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimWitness {
    pub left: PointedModel,
    pub right: PointedModel,
    pub layers: Vec<BTreeSet<(u32, u32)>>,
}

impl BisimWitness {
    pub fn depth(&self) -> u32 {
        self.layers.len() as u32 - 1
    }

    pub fn relates(&self, i: u32, v: u32, w: u32) -> bool {
        self.layers[i as usize].contains(&(v, w))
    }

    /// A successor `w'` of `w` with `(v', w') ∈ Z_i`, given `(v, w) ∈ Z_{i+1}`
    /// and a successor `v'` of `v`.
    pub fn forth(&self, i: u32, w: u32, v_succ: u32) -> Option<u32> {
        self.right
            .model()
            .successors(w)
            .iter()
            .copied()
            .find(|&u| self.relates(i, v_succ, u))
    }

    /// A successor `v'` of `v` with `(v', w') ∈ Z_i`.
    pub fn back(&self, i: u32, v: u32, w_succ: u32) -> Option<u32> {
        self.left
            .model()
            .successors(v)
            .iter()
            .copied()
            .find(|&u| self.relates(i, u, w_succ))
    }
}

/// Whether `p ∼ₙ q`, without materializing a witness.
pub fn are_n_bisimilar(p: &PointedModel, q: &PointedModel, n: u32) -> Result<bool, ModelError> {
    let mut table = TypeTable::new(p.signature());
    let a = table.type_of(p, n)?;
    let b = table.type_of(q, n)?;
    Ok(a == b)
}

/// A witness for `p ∼ₙ q`, or `None` when they are not n-bisimilar.
///
/// `Z_i` relates every pair of worlds with equal depth-`i` types.
pub fn n_bisimilar(p: &PointedModel, q: &PointedModel, n: u32) -> Result<Option<BisimWitness>, ModelError> {
    let mut table = TypeTable::new(p.signature());
    let left = table.world_types(p.model(), n)?;
    let right = table.world_types(q.model(), n)?;
    if left[n as usize][p.point() as usize] != right[n as usize][q.point() as usize] {
        return Ok(None);
    }
    let layers = (0..=n as usize)
        .map(|i| {
            let mut by_type: BTreeMap<TypeId, Vec<u32>> = BTreeMap::new();
            for (w, t) in right[i].iter().enumerate() {
                by_type.entry(*t).or_default().push(w as u32);
            }
            let mut z = BTreeSet::new();
            for (v, t) in left[i].iter().enumerate() {
                for &w in by_type.get(t).into_iter().flatten() {
                    z.insert((v as u32, w));
                }
            }
            z
        })
        .collect();
    Ok(Some(BisimWitness {
        left: p.clone(),
        right: q.clone(),
        layers,
    }))
}

/// Full bisimilarity.
pub fn bisimilar(p: &PointedModel, q: &PointedModel) -> Result<bool, ModelError> {
    let n = (p.model().world_count() + q.model().world_count()) as u32;
    are_n_bisimilar(p, q, n)
}

/// Depth bound for [`quotient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Bounded(u32),
    Unbounded,
}

/// Collapses the part of `p` reachable from its point by n-bisimilarity of
/// worlds (or full bisimilarity). Each class is named after its least world.
/// The result is n-bisimilar to `p`.
pub fn quotient(p: &PointedModel, depth: Depth) -> PointedModel {
    let keep = p.model().reachable_from(p.point());
    let sub = p.model().restrict(&keep);
    let class: Vec<u32> = match depth {
        Depth::Unbounded => stable_partition(&sub),
        Depth::Bounded(n) => {
            let mut table = TypeTable::new(sub.signature());
            let layers = table.world_types(&sub, n).expect("own signature");
            layers[n as usize].iter().map(|t| t.0).collect()
        }
    };
    // worlds are sorted, so the first member seen is the least name
    let mut rep: BTreeMap<u32, u32> = BTreeMap::new();
    for (w, c) in class.iter().enumerate() {
        rep.entry(*c).or_insert(w as u32);
    }
    let name = |w: u32| sub.world_name(rep[&class[w as usize]]);
    let worlds: BTreeSet<&str> = (0..sub.world_count() as u32).map(name).collect();
    let edges: BTreeSet<(&str, &str)> = sub.edges().map(|(a, b)| (name(a), name(b))).collect();
    let valuation = sub.valuation().into_iter().map(|(prop, ws)| {
        let ws = ws
            .iter()
            .filter_map(|w| sub.world_index(w))
            .filter(|&w| rep[&class[w as usize]] == w)
            .map(|w| String::from(sub.world_name(w)))
            .collect();
        (prop, ws)
    });
    let model = KripkeModel::new(worlds, edges, valuation).expect("quotient of a valid model");
    let point = name(sub.world_index(p.point_name()).expect("point kept"));
    PointedModel::new(Arc::new(model), point).expect("point class exists")
}

/// Membership in the class of pointed models whose successors are pairwise
/// n-bisimilar.
pub fn in_class_a(p: &PointedModel, n: u32) -> bool {
    let mut table = TypeTable::new(p.signature());
    let layers = table.world_types(p.model(), n).expect("own signature");
    let mut types = p
        .model()
        .successors(p.point())
        .iter()
        .map(|&v| layers[n as usize][v as usize]);
    match types.next() {
        None => true,
        Some(first) => types.all(|t| t == first),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{ee_set, vv_set, HfSet};
    use alloc::string::ToString;

    fn set(s: &str) -> HfSet {
        s.parse().unwrap()
    }

    fn labelled(point_has_p: bool) -> PointedModel {
        let val: BTreeSet<String> = if point_has_p {
            ["a".to_string()].into_iter().collect()
        } else {
            BTreeSet::new()
        };
        let m = KripkeModel::new(["a"], Vec::<(&str, &str)>::new(), [("p".to_string(), val)]).unwrap();
        PointedModel::new(Arc::new(m), "a").unwrap()
    }

    #[test]
    fn propositional_equivalence() {
        let e = set("{}").model();
        let s = set("{{}}").model();
        assert!(prop_equivalent(&e, &s).unwrap());
        assert!(prop_equivalent(&e, &e).unwrap());
        assert!(!prop_equivalent(&labelled(true), &labelled(false)).unwrap());
        assert_eq!(prop_equivalent(&e, &labelled(true)), Err(ModelError::SignatureMismatch));
    }

    #[test]
    fn empty_and_singleton_differ_at_depth_one() {
        let e = set("{}").model();
        let s = set("{{}}").model();
        assert!(n_bisimilar(&e, &s, 0).unwrap().is_some());
        assert!(n_bisimilar(&e, &s, 1).unwrap().is_none());
        for n in 0..4 {
            let w = n_bisimilar(&s, &s, n).unwrap().unwrap();
            assert!(w.relates(n, s.point(), s.point()));
        }
    }

    #[test]
    fn truncation_agrees_with_direct_computation() {
        let mut t = TypeTable::new(&[]);
        for a in crate::hierarchy::v_level(3).unwrap() {
            let p = a.model();
            let deep = t.type_of(&p, 3).unwrap();
            for d in 0..=3 {
                let direct = t.type_of(&p, d).unwrap();
                assert_eq!(t.truncate(deep, d), direct);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let e = set("{}").model();
        assert_eq!(quotient(&e, Depth::Unbounded), e);
        assert_eq!(quotient(&e, Depth::Bounded(2)), e);

        let two_sinks = Arc::new(KripkeModel::frame(["u", "v"], Vec::<(&str, &str)>::new()).unwrap());
        let q = quotient(&PointedModel::new(two_sinks.clone(), "v").unwrap(), Depth::Unbounded);
        assert_eq!(q.model().world_count(), 1);
        assert_eq!(q.model().edge_count(), 0);

        let root_to_sinks = Arc::new(KripkeModel::frame(["r", "u", "v"], [("r", "u"), ("r", "v")]).unwrap());
        let q = quotient(&PointedModel::new(root_to_sinks, "r").unwrap(), Depth::Unbounded);
        assert_eq!(q.model().world_count(), 2);
        assert_eq!(q.model().edge_count(), 1);
    }

    #[test]
    fn quotient_of_ee1_against_vv1() {
        let e1 = ee_set(1).unwrap().into_iter().next().unwrap();
        let vv: Vec<PointedModel> = vv_set(1).unwrap().into_iter().collect();
        let q1 = quotient(&e1, Depth::Bounded(1));
        assert!(are_n_bisimilar(&q1, &e1, 1).unwrap());
        // At depth 1 the E₁ root collapses exactly like the V₁ root over {{}}:
        // one looping class plus the sink.
        let same: Vec<&PointedModel> = vv.iter().filter(|v| quotient(v, Depth::Bounded(1)) == q1).collect();
        assert_eq!(same.len(), 1);
        assert_eq!(q1.model().world_count(), 2);
        assert_eq!(q1.model().edge_count(), 2);
        // One level deeper the two distinct children of the E₁ root survive.
        for v in &vv {
            assert_ne!(quotient(&e1, Depth::Bounded(2)), quotient(v, Depth::Bounded(2)));
            assert_ne!(quotient(&e1, Depth::Unbounded), quotient(v, Depth::Unbounded));
        }
        assert_eq!(quotient(&e1, Depth::Unbounded).model().world_count(), 3);
    }

    #[test]
    fn class_a_membership() {
        assert!(in_class_a(&set("{}").model(), 3));
        for n in 0..=2 {
            for v in vv_set(n).unwrap() {
                assert!(in_class_a(&v, n as u32));
            }
            for e in ee_set(n).unwrap() {
                assert!(!in_class_a(&e, n as u32));
            }
        }
    }
}
