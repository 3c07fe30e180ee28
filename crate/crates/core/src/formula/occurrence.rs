use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{Formula, Relation, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

/// One variable occurrence inside an atom. Binder occurrences have no `OccRef`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccRef {
    pub atom: usize,
    pub side: Side,
    pub var: Var,
}

impl OccRef {
    /// Dense slot in `0..2k`: left occurrence of atom `i` is `2i`, right is `2i+1`.
    pub fn slot(&self) -> usize {
        2 * self.atom + usize::from(self.side == Side::Right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomOccurrence {
    pub position: usize,
    pub rel: Relation,
    pub left: OccRef,
    pub right: OccRef,
}

impl AtomOccurrence {
    pub fn occurrences(&self) -> [&OccRef; 2] {
        [&self.left, &self.right]
    }

    pub fn shares_variable(&self, var: &Var) -> bool {
        self.left.var == *var || self.right.var == *var
    }
}

/// Atoms in left-to-right concrete-syntax order, positions `0..k`.
pub fn atomic_sequence(f: &Formula) -> Vec<AtomOccurrence> {
    let mut atoms = Vec::new();
    f.for_each_atom(&mut |rel, l, r| {
        let position = atoms.len();
        atoms.push(AtomOccurrence {
            position,
            rel,
            left: OccRef {
                atom: position,
                side: Side::Left,
                var: l.clone(),
            },
            right: OccRef {
                atom: position,
                side: Side::Right,
                var: r.clone(),
            },
        });
    });
    atoms
}

/// Number of variable occurrences, i.e. twice the atom count.
pub fn occurrence_count(f: &Formula) -> usize {
    2 * f.atom_count()
}

/// Undirected multigraph on the formula's variables, one edge per atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarGraph {
    pub nodes: BTreeSet<Var>,
    /// `(left, right, relation)` in atom order; self-loops and parallel edges kept.
    pub edges: Vec<(Var, Var, Relation)>,
}

impl VarGraph {
    pub fn from_edges(edges: impl IntoIterator<Item = (Var, Var, Relation)>) -> Self {
        let edges: Vec<_> = edges.into_iter().collect();
        let nodes = edges.iter().flat_map(|(a, b, _)| [a.clone(), b.clone()]).collect();
        VarGraph { nodes, edges }
    }
}

pub fn build_var_graph(f: &Formula) -> VarGraph {
    let mut edges = Vec::new();
    f.for_each_atom(&mut |rel, l, r| edges.push((l.clone(), r.clone(), rel)));
    VarGraph::from_edges(edges)
}
