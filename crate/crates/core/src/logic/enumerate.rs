//! Exhaustive enumeration of NNF formulas under size bounds.
//!
//! Formulas are stored in an arena where every node refers to earlier nodes,
//! so each formula of the enumeration is built once and shared by all the
//! larger formulas that contain it. Levels are grouped by exact `(ms, cs)`.

use alloc::string::String;
use alloc::vec::Vec;

use super::ml::{Literal, MlFormula};

/// One arena entry; child indices always point to earlier entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Lit(Literal),
    Diamond(u32),
    Box(u32),
    And(u32, u32),
    Or(u32, u32),
}

/// Whether `And`/`Or` children are taken in both orders or only sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commutativity {
    /// Every syntax tree, `p & q` and `q & p` both included.
    AllOrders,
    /// Children of `And`/`Or` in non-decreasing arena order only.
    Sorted,
}

#[derive(Debug, Clone)]
pub struct FormulaEnumeration {
    nodes: Vec<Node>,
    sizes: Vec<(u32, u32)>,
    /// `levels[ms][cs]` is the arena range of formulas with exactly that size.
    levels: Vec<Vec<(u32, u32)>>,
}

impl FormulaEnumeration {
    pub fn new(ms_bound: u32, cs_bound: u32, signature: &[String], mode: Commutativity) -> Self {
        let mut e = FormulaEnumeration {
            nodes: Vec::new(),
            sizes: Vec::new(),
            levels: alloc::vec![alloc::vec![(0, 0); cs_bound as usize + 1]; ms_bound as usize + 1],
        };
        for total in 0..=ms_bound + cs_bound {
            for ms in 0..=ms_bound.min(total) {
                let cs = total - ms;
                if cs > cs_bound {
                    continue;
                }
                let start = e.nodes.len() as u32;
                e.fill_level(ms, cs, signature, mode);
                e.levels[ms as usize][cs as usize] = (start, e.nodes.len() as u32);
            }
        }
        e
    }

    fn push(&mut self, node: Node, ms: u32, cs: u32) {
        self.nodes.push(node);
        self.sizes.push((ms, cs));
    }

    fn fill_level(&mut self, ms: u32, cs: u32, signature: &[String], mode: Commutativity) {
        if ms == 0 && cs == 0 {
            for lit in Literal::all(signature) {
                self.push(Node::Lit(lit), 0, 0);
            }
            return;
        }
        if ms > 0 {
            let (a, b) = self.levels[ms as usize - 1][cs as usize];
            for i in a..b {
                self.push(Node::Diamond(i), ms, cs);
            }
            for i in a..b {
                self.push(Node::Box(i), ms, cs);
            }
        }
        if cs > 0 {
            for binary in 0..2 {
                for m1 in 0..=ms {
                    for c1 in 0..cs {
                        let (m2, c2) = (ms - m1, cs - 1 - c1);
                        let (a1, b1) = self.levels[m1 as usize][c1 as usize];
                        let (a2, b2) = self.levels[m2 as usize][c2 as usize];
                        for i in a1..b1 {
                            for j in a2..b2 {
                                if mode == Commutativity::Sorted && i > j {
                                    continue;
                                }
                                let node = if binary == 0 { Node::And(i, j) } else { Node::Or(i, j) };
                                self.push(node, ms, cs);
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: u32) -> &Node {
        &self.nodes[i as usize]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// `(ms, cs)` of entry `i`.
    pub fn size_of(&self, i: u32) -> (u32, u32) {
        self.sizes[i as usize]
    }

    /// Builds the syntax tree of entry `i`.
    pub fn formula(&self, i: u32) -> MlFormula {
        match &self.nodes[i as usize] {
            Node::Lit(l) => l.to_formula(),
            Node::Diamond(a) => MlFormula::diamond(self.formula(*a)),
            Node::Box(a) => MlFormula::boxed(self.formula(*a)),
            Node::And(a, b) => MlFormula::and(self.formula(*a), self.formula(*b)),
            Node::Or(a, b) => MlFormula::or(self.formula(*a), self.formula(*b)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = MlFormula> + '_ {
        (0..self.nodes.len() as u32).map(move |i| self.formula(i))
    }
}

/// Every NNF formula with `ms ≤ ms_bound` and `cs ≤ cs_bound` over `signature`,
/// with `⊤` and `⊥` as extra atoms.
pub fn enumerate_ml(ms_bound: u32, cs_bound: u32, signature: &[String]) -> FormulaEnumeration {
    FormulaEnumeration::new(ms_bound, cs_bound, signature, Commutativity::AllOrders)
}

/// Like [`enumerate_ml`] but with commutative children sorted, one
/// representative per `And`/`Or` swap class.
pub fn enumerate_ml_sorted(ms_bound: u32, cs_bound: u32, signature: &[String]) -> FormulaEnumeration {
    FormulaEnumeration::new(ms_bound, cs_bound, signature, Commutativity::Sorted)
}
