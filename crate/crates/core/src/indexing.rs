//! Occurrence indexings and their ranges.
//!
//! Both indexing procedures share one schedule: after the first atom, the next
//! atom to index is the leftmost unindexed atom sharing a variable with the
//! atoms indexed so far, or the leftmost unindexed atom when none does. They
//! differ only in how the chosen atom is seeded and how the index crosses the
//! atom, which is what [`SeedRule`] captures.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{atomic_sequence, AtomOccurrence, Formula, OccRef, Relation, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexingError {
    #[error("formula has no atoms")]
    EmptyFormula,
    #[error("formula has {atoms} atoms; brute force is limited to {limit}")]
    SizeLimit { atoms: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Canonical,
    Acyclic,
    Arbitrary,
}

/// A map from every variable occurrence of a formula to a natural number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceIndexing {
    pub origin: Origin,
    atoms: Vec<AtomOccurrence>,
    /// By occurrence slot (see [`OccRef::slot`]).
    indices: Vec<u32>,
    /// Atom positions in the order they were indexed.
    schedule: Vec<usize>,
}

impl OccurrenceIndexing {
    /// An indexing given explicitly, slot by slot.
    pub fn arbitrary(f: &Formula, indices: Vec<u32>) -> Option<Self> {
        let atoms = atomic_sequence(f);
        (indices.len() == 2 * atoms.len()).then(|| OccurrenceIndexing {
            origin: Origin::Arbitrary,
            schedule: (0..atoms.len()).collect(),
            atoms,
            indices,
        })
    }

    pub fn atoms(&self) -> &[AtomOccurrence] {
        &self.atoms
    }

    pub fn get(&self, occ: &OccRef) -> Option<u32> {
        let atom = self.atoms.get(occ.atom)?;
        let stored = if occ.side == crate::formula::Side::Left {
            &atom.left
        } else {
            &atom.right
        };
        (stored == occ).then(|| self.indices[occ.slot()])
    }

    /// Indices in occurrence order: left then right of atom 0, atom 1, ...
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn schedule(&self) -> &[usize] {
        &self.schedule
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccRef, u32)> + '_ {
        self.atoms
            .iter()
            .flat_map(|a| [&a.left, &a.right])
            .zip(self.indices.iter().copied())
    }

    pub fn atom_indices(&self, position: usize) -> (u32, u32) {
        (self.indices[2 * position], self.indices[2 * position + 1])
    }

    /// Whether every membership atom steps up by one and every equality
    /// atom copies its index.
    pub fn respects_stratification_rules(&self) -> bool {
        self.atoms.iter().all(|a| {
            let (l, r) = self.atom_indices(a.position);
            match a.rel {
                Relation::Member => r == l + 1,
                Relation::Equal => l == r,
            }
        })
    }
}

/// Per-variable count of distinct indices, and their sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RngSummary {
    pub rng: BTreeMap<Var, usize>,
    pub total: usize,
    pub var_count: usize,
}

impl RngSummary {
    /// All occurrences of each variable carry one index.
    pub fn is_functional(&self) -> bool {
        self.total == self.var_count
    }
}

pub fn rng_summary(pi: &OccurrenceIndexing) -> RngSummary {
    let mut seen: BTreeMap<Var, BTreeSet<u32>> = BTreeMap::new();
    for (occ, idx) in pi.iter() {
        seen.entry(occ.var.clone()).or_default().insert(idx);
    }
    let rng: BTreeMap<Var, usize> = seen.into_iter().map(|(v, s)| (v, s.len())).collect();
    RngSummary {
        total: rng.values().sum(),
        var_count: rng.len(),
        rng,
    }
}

/// Decides the `(left, right)` indices of the atom chosen next, given the
/// highest index each of its variables has received so far (`None` when
/// the variable has not been seen).
pub(crate) trait SeedRule {
    fn seed(&self, atom: &AtomOccurrence, left_high: Option<u32>, right_high: Option<u32>) -> (u32, u32);
}

pub(crate) fn run_schedule(
    f: &Formula,
    origin: Origin,
    rule: &impl SeedRule,
) -> Result<OccurrenceIndexing, IndexingError> {
    let atoms = atomic_sequence(f);
    if atoms.is_empty() {
        return Err(IndexingError::EmptyFormula);
    }
    let mut indices = vec![0u32; 2 * atoms.len()];
    let mut done = vec![false; atoms.len()];
    let mut highest: HashMap<&Var, u32> = HashMap::new();
    let mut schedule = Vec::with_capacity(atoms.len());

    while schedule.len() < atoms.len() {
        let next = atoms
            .iter()
            .filter(|a| !done[a.position])
            .find(|a| highest.contains_key(&a.left.var) || highest.contains_key(&a.right.var))
            .or_else(|| atoms.iter().find(|a| !done[a.position]))
            .expect("an unindexed atom remains");

        let lh = highest.get(&next.left.var).copied();
        let rh = highest.get(&next.right.var).copied();
        let (l, r) = rule.seed(next, lh, rh);
        indices[next.left.slot()] = l;
        indices[next.right.slot()] = r;
        for (var, idx) in [(&next.left.var, l), (&next.right.var, r)] {
            let h = highest.entry(var).or_insert(idx);
            *h = (*h).max(idx);
        }
        done[next.position] = true;
        schedule.push(next.position);
    }

    Ok(OccurrenceIndexing {
        origin,
        atoms,
        indices,
        schedule,
    })
}
