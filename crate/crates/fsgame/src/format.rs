//! JSON file formats for models, positions and verdicts.
//!
//! Struct fields are declared in alphabetical order and maps are ordered, so
//! every document is written with sorted keys.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use fsgame_core::game::{extract_formula, GamePosition, Solution, Verdict};
use fsgame_core::logic::ml_sizes;
use fsgame_core::{KripkeModel, ModelSet, PointedModel};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A pointed model: `{"edges": [[u, v], …], "point": w, "valuation": {p: [w, …]}, "worlds": [w, …]}`.
///
/// Written with every array sorted, so equal models print identically.
/// The signature is the set of valuation keys, so a proposition that holds
/// nowhere is written with an empty list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    pub point: String,
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeSet<String>>,
    pub worlds: Vec<String>,
}

impl ModelJson {
    pub fn from_pointed(p: &PointedModel) -> Self {
        let m = p.model();
        let mut edges: Vec<(String, String)> = m
            .edges()
            .map(|(a, b)| (m.world_name(a).to_string(), m.world_name(b).to_string()))
            .collect();
        edges.sort();
        let mut worlds = m.worlds().to_vec();
        worlds.sort();
        ModelJson {
            edges,
            point: p.point_name().to_string(),
            valuation: m.valuation(),
            worlds,
        }
    }

    pub fn to_pointed(&self) -> Result<PointedModel, CliError> {
        let model = KripkeModel::new(&self.worlds, self.edges.clone(), self.valuation.clone())
            .map_err(|e| CliError::Input(e.to_string()))?;
        PointedModel::new(Arc::new(model), &self.point).map_err(|e| CliError::Input(e.to_string()))
    }
}

/// A file holding one model or an array of models.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(ModelJson),
    Many(Vec<ModelJson>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionJson {
    pub k: u32,
    pub left: Vec<ModelJson>,
    pub m: u32,
    pub right: Vec<ModelJson>,
}

impl PositionJson {
    pub fn from_position(pos: &GamePosition) -> Self {
        PositionJson {
            k: pos.k,
            left: pos.left.iter().map(ModelJson::from_pointed).collect(),
            m: pos.m,
            right: pos.right.iter().map(ModelJson::from_pointed).collect(),
        }
    }

    pub fn to_position(&self) -> Result<GamePosition, CliError> {
        Ok(GamePosition::new(self.m, self.k, to_set(&self.left)?, to_set(&self.right)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub cs: Option<u32>,
    pub formula: Option<String>,
    pub ms: Option<u32>,
    pub nodes: u64,
    pub winner: String,
}

impl VerdictJson {
    pub fn from_solution(sol: &Solution) -> Result<Self, CliError> {
        Ok(match &sol.verdict {
            Verdict::SpoilerWins(s) => {
                let f = extract_formula(s).map_err(|e| CliError::Internal(e.to_string()))?;
                let sz = ml_sizes(&f);
                VerdictJson {
                    cs: Some(sz.cs),
                    formula: Some(f.to_string()),
                    ms: Some(sz.ms),
                    nodes: sol.nodes,
                    winner: "S".into(),
                }
            }
            Verdict::DuplicatorWins => VerdictJson {
                cs: None,
                formula: None,
                ms: None,
                nodes: sol.nodes,
                winner: "D".into(),
            },
        })
    }
}

fn to_set(models: &[ModelJson]) -> Result<ModelSet, CliError> {
    models.iter().map(ModelJson::to_pointed).collect()
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Reads a model file; an array must hold exactly one model.
pub fn read_model(path: &Path) -> Result<PointedModel, CliError> {
    match parse_json::<OneOrMany>(path, &read_text(path)?)? {
        OneOrMany::One(m) => m.to_pointed(),
        OneOrMany::Many(v) if v.len() == 1 => v[0].to_pointed(),
        OneOrMany::Many(v) => Err(CliError::Input(format!(
            "{}: expected one model, found {}",
            path.display(),
            v.len()
        ))),
    }
}

/// Reads a file holding one model or an array of models as a set.
pub fn read_model_set(path: &Path) -> Result<ModelSet, CliError> {
    match parse_json::<OneOrMany>(path, &read_text(path)?)? {
        OneOrMany::One(m) => Ok([m.to_pointed()?].into_iter().collect()),
        OneOrMany::Many(v) => to_set(&v),
    }
}

pub fn read_position(path: &Path) -> Result<GamePosition, CliError> {
    parse_json::<PositionJson>(path, &read_text(path)?)?.to_position()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}
