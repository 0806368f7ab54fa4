//! Finite pointed Kripke models, successor-set operators and the root join.
//!
//! A [`KripkeModel`] is stored in a normalized form: worlds are kept sorted by
//! name, successor lists and label lists are sorted index vectors. Two models
//! compare equal exactly when they have the same worlds, edges, signature and
//! valuation, which is the structural identity used by [`ModelSet`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised while building or transforming models.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("edge endpoint `{0}` is not a world of the model")]
    UnknownEdgeEndpoint(String),
    #[error("valuation of `{prop}` mentions unknown world `{world}`")]
    UnknownValuationWorld { prop: String, world: String },
    #[error("point `{0}` is not a world of the model")]
    UnknownPoint(String),
    #[error("models disagree on world `{0}`")]
    JoinConflict(String),
    #[error("models have different proposition signatures")]
    SignatureMismatch,
    #[error("choice map is not defined on a member pointed at `{0}`")]
    PartialChoice(String),
    #[error("choice map sends `{from}` to `{to}`, which is not one of its successors")]
    NotASuccessor { from: String, to: String },
}

/// A finite Kripke model `(W, R, V)` over a finite signature.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KripkeModel {
    worlds: Vec<String>,
    succ: Vec<Vec<u32>>,
    props: Vec<String>,
    labels: Vec<Vec<u32>>,
}

impl KripkeModel {
    /// Builds a model from world names, edges and a valuation.
    ///
    /// The key set of `valuation` is the signature of the model; a proposition
    /// that is true nowhere must still be listed with an empty world set.
    pub fn new<W, E, V, S>(worlds: W, edges: E, valuation: V) -> Result<Self, ModelError>
    where
        W: IntoIterator,
        W::Item: AsRef<str>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
        V: IntoIterator<Item = (String, BTreeSet<String>)>,
    {
        let mut names: Vec<String> = Vec::new();
        for w in worlds {
            names.push(w.as_ref().to_string());
        }
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(ModelError::DuplicateWorld(pair[0].clone()));
            }
        }
        let lookup = |name: &str| names.binary_search_by(|w| w.as_str().cmp(name)).ok();

        let mut succ = alloc::vec![Vec::new(); names.len()];
        for (from, to) in edges {
            let (from, to) = (from.as_ref(), to.as_ref());
            let f = lookup(from).ok_or_else(|| ModelError::UnknownEdgeEndpoint(from.to_string()))?;
            let t = lookup(to).ok_or_else(|| ModelError::UnknownEdgeEndpoint(to.to_string()))?;
            succ[f].push(t as u32);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }

        let valuation: BTreeMap<String, BTreeSet<String>> = valuation.into_iter().collect();
        let props: Vec<String> = valuation.keys().cloned().collect();
        let mut labels = alloc::vec![Vec::new(); names.len()];
        for (pi, (prop, ws)) in valuation.iter().enumerate() {
            for w in ws {
                let wi = lookup(w).ok_or_else(|| ModelError::UnknownValuationWorld {
                    prop: prop.clone(),
                    world: w.clone(),
                })?;
                labels[wi].push(pi as u32);
            }
        }
        Ok(KripkeModel {
            worlds: names,
            succ,
            props,
            labels,
        })
    }

    /// Model with an empty signature.
    pub fn frame<W, E, S>(worlds: W, edges: E) -> Result<Self, ModelError>
    where
        W: IntoIterator,
        W::Item: AsRef<str>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        Self::new(worlds, edges, core::iter::empty())
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: u32) -> &str {
        &self.worlds[w as usize]
    }

    pub fn world_index(&self, name: &str) -> Option<u32> {
        self.worlds
            .binary_search_by(|w| w.as_str().cmp(name))
            .ok()
            .map(|i| i as u32)
    }

    pub fn successors(&self, w: u32) -> &[u32] {
        &self.succ[w as usize]
    }

    pub fn has_edge(&self, from: u32, to: u32) -> bool {
        self.succ[from as usize].binary_search(&to).is_ok()
    }

    /// All edges as index pairs, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(f, ts)| ts.iter().map(move |&t| (f as u32, t)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// The proposition signature, sorted.
    pub fn signature(&self) -> &[String] {
        &self.props
    }

    pub fn prop_index(&self, prop: &str) -> Option<u32> {
        self.props
            .binary_search_by(|p| p.as_str().cmp(prop))
            .ok()
            .map(|i| i as u32)
    }

    /// Sorted indices (into [`signature`](Self::signature)) of the propositions true at `w`.
    pub fn labels(&self, w: u32) -> &[u32] {
        &self.labels[w as usize]
    }

    pub fn holds(&self, w: u32, prop: u32) -> bool {
        self.labels[w as usize].binary_search(&prop).is_ok()
    }

    /// The valuation as a map from proposition to the worlds where it holds.
    pub fn valuation(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut out: BTreeMap<String, BTreeSet<String>> =
            self.props.iter().map(|p| (p.clone(), BTreeSet::new())).collect();
        for (w, ls) in self.labels.iter().enumerate() {
            for &p in ls {
                out.get_mut(&self.props[p as usize])
                    .expect("label index within signature")
                    .insert(self.worlds[w].clone());
            }
        }
        out
    }

    /// Worlds reachable from `w` (including `w`), in increasing index order.
    pub fn reachable_from(&self, w: u32) -> Vec<u32> {
        let mut seen = alloc::vec![false; self.worlds.len()];
        let mut stack = alloc::vec![w];
        seen[w as usize] = true;
        while let Some(v) = stack.pop() {
            for &u in &self.succ[v as usize] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        (0..self.worlds.len() as u32).filter(|&v| seen[v as usize]).collect()
    }

    /// Restriction of the model to the given worlds, which should be closed under successors.
    pub fn restrict(&self, keep: &[u32]) -> KripkeModel {
        let worlds: Vec<&str> = keep.iter().map(|&w| self.world_name(w)).collect();
        let edges: Vec<(&str, &str)> = keep
            .iter()
            .flat_map(|&f| {
                self.successors(f)
                    .iter()
                    .filter(|t| keep.contains(t))
                    .map(move |&t| (self.world_name(f), self.world_name(t)))
            })
            .collect();
        let valuation: Vec<(String, BTreeSet<String>)> = self
            .valuation()
            .into_iter()
            .map(|(p, ws)| {
                let ws = ws
                    .into_iter()
                    .filter(|w| worlds.contains(&w.as_str()))
                    .collect();
                (p, ws)
            })
            .collect();
        KripkeModel::new(worlds, edges, valuation).expect("restriction of a valid model")
    }
}

impl fmt::Debug for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(&str, &str)> = self
            .edges()
            .map(|(a, b)| (self.world_name(a), self.world_name(b)))
            .collect();
        f.debug_struct("KripkeModel")
            .field("worlds", &self.worlds)
            .field("edges", &edges)
            .field("valuation", &self.valuation())
            .finish()
    }
}

/// A model together with a distinguished world.
///
/// Successor pointed models share the underlying model through the [`Arc`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedModel {
    model: Arc<KripkeModel>,
    point: u32,
}

impl PointedModel {
    pub fn new(model: Arc<KripkeModel>, point: &str) -> Result<Self, ModelError> {
        let point = model
            .world_index(point)
            .ok_or_else(|| ModelError::UnknownPoint(point.to_string()))?;
        Ok(PointedModel { model, point })
    }

    /// Points at a world index; panics if out of range.
    pub fn at(model: Arc<KripkeModel>, point: u32) -> Self {
        assert!((point as usize) < model.world_count(), "point out of range");
        PointedModel { model, point }
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn model_arc(&self) -> &Arc<KripkeModel> {
        &self.model
    }

    pub fn point(&self) -> u32 {
        self.point
    }

    pub fn point_name(&self) -> &str {
        self.model.world_name(self.point)
    }

    pub fn signature(&self) -> &[String] {
        self.model.signature()
    }

    /// The same model pointed at `w`.
    pub fn repoint(&self, w: u32) -> Self {
        PointedModel::at(self.model.clone(), w)
    }

    pub fn has_successor(&self) -> bool {
        !self.model.successors(self.point).is_empty()
    }

    /// `{(M, v) | point R v}`.
    pub fn successors(&self) -> ModelSet {
        self.successor_iter().collect()
    }

    pub fn successor_iter(&self) -> impl Iterator<Item = PointedModel> + '_ {
        self.model
            .successors(self.point)
            .iter()
            .map(|&v| self.repoint(v))
    }

    pub fn is_successor(&self, other: &PointedModel) -> bool {
        *self.model == *other.model && self.model.has_edge(self.point, other.point)
    }

    /// The submodel generated by the point.
    pub fn generated(&self) -> PointedModel {
        let keep = self.model.reachable_from(self.point);
        let sub = Arc::new(self.model.restrict(&keep));
        PointedModel::new(sub, self.point_name()).expect("point survives restriction")
    }
}

impl fmt::Debug for PointedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.model, self.point_name())
    }
}

/// Successor choice function `f` with `f(p)` a successor of `p`.
pub type ChoiceMap = BTreeMap<PointedModel, PointedModel>;

/// A finite set of pointed models, deduplicated by structural identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelSet(BTreeSet<PointedModel>);

impl ModelSet {
    pub fn new() -> Self {
        ModelSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> alloc::collections::btree_set::Iter<'_, PointedModel> {
        self.0.iter()
    }

    pub fn contains(&self, p: &PointedModel) -> bool {
        self.0.contains(p)
    }

    pub fn insert(&mut self, p: PointedModel) -> bool {
        self.0.insert(p)
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &ModelSet) -> ModelSet {
        ModelSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersects(&self, other: &ModelSet) -> bool {
        self.0.intersection(&other.0).next().is_some()
    }

    /// The `i`-th member in set order.
    pub fn get(&self, i: usize) -> Option<&PointedModel> {
        self.0.iter().nth(i)
    }

    /// `◇A`: all successors of all members.
    pub fn diamond_all(&self) -> ModelSet {
        self.0.iter().flat_map(|p| p.successor_iter()).collect()
    }

    /// `◇_f A = f(A)`; `f` must be total on the set and pick successors.
    pub fn diamond_choice(&self, f: &ChoiceMap) -> Result<ModelSet, ModelError> {
        let mut out = ModelSet::new();
        for p in &self.0 {
            let q = f
                .get(p)
                .ok_or_else(|| ModelError::PartialChoice(p.point_name().to_string()))?;
            if !p.is_successor(q) {
                return Err(ModelError::NotASuccessor {
                    from: p.point_name().to_string(),
                    to: q.point_name().to_string(),
                });
            }
            out.insert(q.clone());
        }
        Ok(out)
    }

    /// Common signature of the members, `None` for the empty set.
    pub fn signature(&self) -> Result<Option<&[String]>, ModelError> {
        let mut sig: Option<&[String]> = None;
        for p in &self.0 {
            match sig {
                None => sig = Some(p.signature()),
                Some(s) if s != p.signature() => return Err(ModelError::SignatureMismatch),
                Some(_) => {}
            }
        }
        Ok(sig)
    }
}

impl FromIterator<PointedModel> for ModelSet {
    fn from_iter<I: IntoIterator<Item = PointedModel>>(iter: I) -> Self {
        ModelSet(iter.into_iter().collect())
    }
}

impl IntoIterator for ModelSet {
    type Item = PointedModel;
    type IntoIter = alloc::collections::btree_set::IntoIter<PointedModel>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a ModelSet {
    type Item = &'a PointedModel;
    type IntoIter = alloc::collections::btree_set::Iter<'a, PointedModel>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Root name for [`join`]: `_root`, or `_root<i>` for the least `i` not already taken.
fn fresh_root(mut taken: impl FnMut(&str) -> bool) -> String {
    let base = "_root";
    if !taken(base) {
        return base.to_string();
    }
    (1u32..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken(n))
        .expect("unbounded counter")
}

/// `⊎A`: a fresh root with an edge to the point of every member, over the
/// union of the member models. The root satisfies no proposition.
///
/// Members may share worlds, but a shared world must carry the same labels and
/// the same successors in every member.
pub fn join<'a, I>(members: I) -> Result<PointedModel, ModelError>
where
    I: IntoIterator<Item = &'a PointedModel>,
{
    let members: Vec<&PointedModel> = members.into_iter().collect();
    let mut signature: Option<&[String]> = None;
    for p in &members {
        match signature {
            None => signature = Some(p.signature()),
            Some(s) if s != p.signature() => return Err(ModelError::SignatureMismatch),
            Some(_) => {}
        }
    }
    let signature: Vec<String> = signature.map(<[String]>::to_vec).unwrap_or_default();

    // world name -> (true propositions, successor names)
    let mut worlds: BTreeMap<String, (Vec<String>, BTreeSet<String>)> = BTreeMap::new();
    let mut seen_models: Vec<&KripkeModel> = Vec::new();
    for p in &members {
        let m = p.model();
        if seen_models.contains(&m) {
            continue;
        }
        seen_models.push(m);
        for w in 0..m.world_count() as u32 {
            let labels: Vec<String> = m
                .labels(w)
                .iter()
                .map(|&i| m.signature()[i as usize].clone())
                .collect();
            let succ: BTreeSet<String> = m
                .successors(w)
                .iter()
                .map(|&v| m.world_name(v).to_string())
                .collect();
            match worlds.get(m.world_name(w)) {
                Some(existing) if *existing != (labels.clone(), succ.clone()) => {
                    return Err(ModelError::JoinConflict(m.world_name(w).to_string()));
                }
                Some(_) => {}
                None => {
                    worlds.insert(m.world_name(w).to_string(), (labels, succ));
                }
            }
        }
    }

    let root = fresh_root(|n| worlds.contains_key(n));
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut valuation: BTreeMap<String, BTreeSet<String>> =
        signature.iter().map(|p| (p.clone(), BTreeSet::new())).collect();
    for (w, (labels, succ)) in &worlds {
        for v in succ {
            edges.push((w.clone(), v.clone()));
        }
        for l in labels {
            valuation
                .get_mut(l)
                .expect("label within signature")
                .insert(w.clone());
        }
    }
    for p in &members {
        edges.push((root.clone(), p.point_name().to_string()));
    }
    let names = worlds.keys().cloned().chain(core::iter::once(root.clone()));
    let model = KripkeModel::new(names, edges, valuation)?;
    PointedModel::new(Arc::new(model), &root)
}
