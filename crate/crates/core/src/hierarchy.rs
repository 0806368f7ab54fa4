//! Hereditarily finite sets, the levels `Vₙ` of the cumulative hierarchy, the
//! membership frames built on them and the model families `𝕍ₙ` and `𝔼ₙ`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;

use crate::kripke::{join, KripkeModel, ModelSet, PointedModel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("level {n} exceeds the enumeration ceiling {max}")]
    LevelTooLarge { n: usize, max: usize },
    #[error("tower({0}) is too large to represent")]
    TowerTooLarge(u32),
    #[error("malformed set literal at offset {0}")]
    Malformed(usize),
}

/// Largest level enumerated by default (`|V₄| = 16`).
pub const DEFAULT_LEVEL_CEILING: usize = 4;
/// Largest level enumerated at all (`|V₅| = 65536`).
pub const EXTENDED_LEVEL_CEILING: usize = 5;

/// A hereditarily finite set with a canonical representation: elements are
/// kept sorted and duplicate-free, so equality is extensional equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HfSet(Arc<[HfSet]>);

impl HfSet {
    pub fn empty() -> Self {
        HfSet(Arc::from(Vec::new()))
    }

    pub fn from_elements<I: IntoIterator<Item = HfSet>>(elements: I) -> Self {
        let mut v: Vec<HfSet> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        HfSet(Arc::from(v))
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    /// The von Neumann rank.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|x| x.rank() + 1).max().unwrap_or(0)
    }

    /// `{self} ∪ TC(self)`, sorted.
    pub fn closure(&self) -> Vec<HfSet> {
        let mut out = alloc::vec![self.clone()];
        let mut i = 0;
        while i < out.len() {
            let next: Vec<HfSet> = out[i].0.iter().cloned().collect();
            for x in next {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            i += 1;
        }
        out.sort();
        out
    }

    /// `(M_a, a)`: the membership frame generated by this set. Worlds are
    /// named by their brace encoding and `x → y` whenever `y ∈ x`.
    pub fn model(&self) -> PointedModel {
        let worlds = self.closure();
        let names: Vec<String> = worlds.iter().map(|w| alloc::format!("{w}")).collect();
        let mut edges = Vec::new();
        for (i, x) in worlds.iter().enumerate() {
            for y in x.elements() {
                let j = worlds.binary_search(y).expect("closure is transitive");
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
        let model = KripkeModel::frame(&names, edges).expect("closure is a valid frame");
        PointedModel::new(Arc::new(model), &alloc::format!("{self}")).expect("self is a world")
    }

    /// Recovers `a` from a pointed model that is structurally `(M_a, a)`
    /// restricted to the part generated by its point.
    pub fn decode(p: &PointedModel) -> Option<HfSet> {
        let a: HfSet = p.point_name().parse().ok()?;
        if p.generated() == a.model() {
            Some(a)
        } else {
            None
        }
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HfSet {
    type Err = HierarchyError;

    /// Parses nested braces; whitespace and element order are irrelevant.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn set(b: &[u8], pos: &mut usize) -> Result<HfSet, HierarchyError> {
            skip(b, pos);
            if b.get(*pos) != Some(&b'{') {
                return Err(HierarchyError::Malformed(*pos));
            }
            *pos += 1;
            let mut elems = Vec::new();
            skip(b, pos);
            if b.get(*pos) == Some(&b'}') {
                *pos += 1;
                return Ok(HfSet::empty());
            }
            loop {
                elems.push(set(b, pos)?);
                skip(b, pos);
                match b.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b'}') => {
                        *pos += 1;
                        return Ok(HfSet::from_elements(elems));
                    }
                    _ => return Err(HierarchyError::Malformed(*pos)),
                }
            }
        }
        fn skip(b: &[u8], pos: &mut usize) {
            while b.get(*pos).is_some_and(u8::is_ascii_whitespace) {
                *pos += 1;
            }
        }
        let b = s.as_bytes();
        let mut pos = 0;
        let out = set(b, &mut pos)?;
        skip(b, &mut pos);
        if pos != b.len() {
            return Err(HierarchyError::Malformed(pos));
        }
        Ok(out)
    }
}

/// `tower(0) = 1`, `tower(n + 1) = 2^tower(n)`; representable up to `n = 5`.
pub fn tower(n: u32) -> Result<BigUint, HierarchyError> {
    if n > 5 {
        return Err(HierarchyError::TowerTooLarge(n));
    }
    let mut t = BigUint::from(1u32);
    for _ in 0..n {
        let exp = usize::try_from(&t).map_err(|_| HierarchyError::TowerTooLarge(n))?;
        t = BigUint::from(1u32) << exp;
    }
    Ok(t)
}

fn level_unchecked(n: usize) -> Vec<HfSet> {
    let mut level: Vec<HfSet> = Vec::new();
    for _ in 0..n {
        let count = 1usize << level.len();
        let mut next: Vec<HfSet> = (0..count)
            .map(|mask| {
                HfSet::from_elements(
                    level
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, x)| x.clone()),
                )
            })
            .collect();
        next.sort();
        level = next;
    }
    level
}

/// `Vₙ` for `n ≤ 4`, sorted.
pub fn v_level(n: usize) -> Result<Vec<HfSet>, HierarchyError> {
    if n > DEFAULT_LEVEL_CEILING {
        return Err(HierarchyError::LevelTooLarge {
            n,
            max: DEFAULT_LEVEL_CEILING,
        });
    }
    Ok(level_unchecked(n))
}

/// `Vₙ` for `n ≤ 5`.
pub fn v_level_extended(n: usize) -> Result<Vec<HfSet>, HierarchyError> {
    if n > EXTENDED_LEVEL_CEILING {
        return Err(HierarchyError::LevelTooLarge {
            n,
            max: EXTENDED_LEVEL_CEILING,
        });
    }
    Ok(level_unchecked(n))
}

/// The frame `Fₙ = (Vₙ, ∋)`, with worlds named by brace encodings.
pub fn frame(n: usize) -> Result<KripkeModel, HierarchyError> {
    let level = v_level(n)?;
    let names: Vec<String> = level.iter().map(|x| alloc::format!("{x}")).collect();
    let mut edges = Vec::new();
    for (i, x) in level.iter().enumerate() {
        for y in x.elements() {
            let j = level.binary_search(y).expect("levels are transitive");
            edges.push((names[i].clone(), names[j].clone()));
        }
    }
    Ok(KripkeModel::frame(&names, edges).expect("valid frame"))
}

/// `𝕍ₙ = {⊎{(M_a, a)} | a ∈ Vₙ₊₁}` for `n ≤ 4`.
pub fn vv_set(n: usize) -> Result<ModelSet, HierarchyError> {
    if n > EXTENDED_LEVEL_CEILING - 1 {
        return Err(HierarchyError::LevelTooLarge {
            n,
            max: EXTENDED_LEVEL_CEILING - 1,
        });
    }
    Ok(level_unchecked(n + 1)
        .iter()
        .map(|a| join([&a.model()]).expect("single member join"))
        .collect())
}

/// Largest `n` accepted by [`ee_set`].
pub const EE_CEILING: usize = 3;

/// `𝔼ₙ = {⊎{(M_a, a), (M_b, b)} | a ≠ b ∈ Vₙ₊₁}` (unordered pairs) for `n ≤ 3`.
pub fn ee_set(n: usize) -> Result<ModelSet, HierarchyError> {
    if n > EE_CEILING {
        return Err(HierarchyError::LevelTooLarge { n, max: EE_CEILING });
    }
    let level = level_unchecked(n + 1);
    let models: Vec<PointedModel> = level.iter().map(HfSet::model).collect();
    let mut out = ModelSet::new();
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            out.insert(join([&models[i], &models[j]]).expect("generated submodels agree"));
        }
    }
    Ok(out)
}
