//! Quine stratification decided directly on variables, independent of any
//! occurrence indexing.
//!
//! Each atom is a weighted constraint edge: `x in y` asks `t(y) = t(x) + 1`,
//! `x = y` asks `t(y) = t(x)`. Components are labelled by breadth-first search
//! from their first-occurring variable, then every atom is re-checked. The
//! first violated atom closes a walk through the BFS tree whose weights sum to
//! a nonzero value, which certifies that no assignment exists.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::formula::{atomic_sequence, AtomOccurrence, Formula, Relation, Var};

/// Variable types, normalized so each connected component has minimum 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TypeAssignment(pub BTreeMap<Var, i64>);

impl TypeAssignment {
    pub fn get(&self, v: &Var) -> Option<i64> {
        self.0.get(v).copied()
    }

    /// Re-scans every atom of `f` against the assignment.
    pub fn satisfies(&self, f: &Formula) -> bool {
        let mut ok = true;
        f.for_each_atom(&mut |rel, l, r| {
            ok &= match (self.get(l), self.get(r)) {
                (Some(a), Some(b)) => b - a == edge_weight(rel),
                _ => false,
            };
        });
        ok
    }
}

/// One traversal of an atom's edge, from one of its variables to the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkStep {
    pub atom: usize,
    pub from: Var,
    pub to: Var,
    /// `+1` going from element to container of a membership atom, `-1` the
    /// other way, `0` across an equality.
    pub weight: i64,
}

/// Closed walk in the constraint graph with nonzero total weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub steps: Vec<WalkStep>,
    pub net_weight: i64,
}

impl CycleWitness {
    /// Checks the certificate against `f`: every step follows an atom in the
    /// right direction with the right weight, the walk is closed, and the
    /// weights sum to the stated nonzero total.
    pub fn certifies(&self, f: &Formula) -> bool {
        let atoms = atomic_sequence(f);
        let Some(first) = self.steps.first() else {
            return false;
        };
        let mut at = &first.from;
        let mut sum = 0;
        for step in &self.steps {
            let Some(atom) = atoms.get(step.atom) else {
                return false;
            };
            if step.from != *at || step_weight(atom, &step.from, &step.to) != Some(step.weight) {
                return false;
            }
            sum += step.weight;
            at = &step.to;
        }
        *at == first.from && sum == self.net_weight && sum != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stratification {
    Stratified(TypeAssignment),
    Unstratified(CycleWitness),
}

impl Stratification {
    pub fn is_stratified(&self) -> bool {
        matches!(self, Stratification::Stratified(_))
    }
}

fn edge_weight(rel: Relation) -> i64 {
    match rel {
        Relation::Member => 1,
        Relation::Equal => 0,
    }
}

fn step_weight(atom: &AtomOccurrence, from: &Var, to: &Var) -> Option<i64> {
    let w = edge_weight(atom.rel);
    if atom.left.var == *from && atom.right.var == *to {
        Some(w)
    } else if atom.right.var == *from && atom.left.var == *to {
        Some(-w)
    } else {
        None
    }
}

pub fn stratify(f: &Formula) -> Stratification {
    let atoms = atomic_sequence(f);
    let vars = f.variables();
    let id = |v: &Var| vars.iter().position(|u| u == v).expect("atom variable is listed");

    // adjacency: (atom, neighbour, weight towards neighbour)
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); vars.len()];
    for a in &atoms {
        let (l, r, w) = (id(&a.left.var), id(&a.right.var), edge_weight(a.rel));
        adj[l].push((a.position, r, w));
        adj[r].push((a.position, l, -w));
    }

    let mut label: Vec<Option<i64>> = vec![None; vars.len()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; vars.len()];
    let mut component = vec![0usize; vars.len()];
    let mut n_components = 0;
    for root in 0..vars.len() {
        if label[root].is_some() {
            continue;
        }
        label[root] = Some(0);
        component[root] = n_components;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let lu = label[u].unwrap();
            for &(atom, v, w) in &adj[u] {
                if label[v].is_none() {
                    label[v] = Some(lu + w);
                    parent[v] = Some((atom, u));
                    component[v] = n_components;
                    queue.push_back(v);
                }
            }
        }
        n_components += 1;
    }
    let label: Vec<i64> = label.into_iter().map(Option::unwrap).collect();

    for a in &atoms {
        let (l, r) = (id(&a.left.var), id(&a.right.var));
        if label[r] - label[l] != edge_weight(a.rel) {
            return Stratification::Unstratified(witness(a, l, r, &vars, &label, &parent));
        }
    }

    let mut min = vec![i64::MAX; n_components];
    for (v, &c) in component.iter().enumerate() {
        min[c] = min[c].min(label[v]);
    }
    let types = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), label[i] - min[component[i]]))
        .collect();
    Stratification::Stratified(TypeAssignment(types))
}

pub fn is_stratified(f: &Formula) -> bool {
    stratify(f).is_stratified()
}

fn ancestors(mut v: usize, parent: &[Option<(usize, usize)>]) -> Vec<usize> {
    let mut chain = vec![v];
    while let Some((_, p)) = parent[v] {
        chain.push(p);
        v = p;
    }
    chain
}

fn witness(
    bad: &AtomOccurrence,
    l: usize,
    r: usize,
    vars: &[Var],
    label: &[i64],
    parent: &[Option<(usize, usize)>],
) -> CycleWitness {
    let up_l = ancestors(l, parent);
    let up_r = ancestors(r, parent);
    let lca = *up_r.iter().find(|v| up_l.contains(v)).expect("same component");
    let tree_step = |child: usize| {
        let (atom, p) = parent[child].unwrap();
        (atom, child, p)
    };

    let mut steps = Vec::new();
    // lca down to l
    for &v in up_l
        .iter()
        .take_while(|&&v| v != lca)
        .copied()
        .collect::<Vec<_>>()
        .iter()
        .rev()
    {
        let (atom, child, p) = tree_step(v);
        steps.push(WalkStep {
            atom,
            from: vars[p].clone(),
            to: vars[child].clone(),
            weight: label[child] - label[p],
        });
    }
    steps.push(WalkStep {
        atom: bad.position,
        from: vars[l].clone(),
        to: vars[r].clone(),
        weight: edge_weight(bad.rel),
    });
    // r up to lca
    for &v in up_r.iter().take_while(|&&v| v != lca) {
        let (atom, child, p) = tree_step(v);
        steps.push(WalkStep {
            atom,
            from: vars[child].clone(),
            to: vars[p].clone(),
            weight: label[p] - label[child],
        });
    }

    let mut net_weight: i64 = steps.iter().map(|s| s.weight).sum();
    if net_weight < 0 {
        steps.reverse();
        for s in &mut steps {
            std::mem::swap(&mut s.from, &mut s.to);
            s.weight = -s.weight;
        }
        net_weight = -net_weight;
    }
    CycleWitness { steps, net_weight }
}
