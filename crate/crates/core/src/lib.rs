//! Formula-size games for basic modal logic.
//!
//! Kripke models and model sets, modal and first-order formulas, bounded
//! bisimulation, a solver for the formula-size game, the hereditarily finite
//! set hierarchy used for lower bounds, and graph-coloring Duplicator
//! strategies.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bisim;
pub mod game;
pub mod graphs;
pub mod hierarchy;
pub mod kripke;
pub mod logic;

pub use kripke::{join, ChoiceMap, KripkeModel, ModelError, ModelSet, PointedModel};
