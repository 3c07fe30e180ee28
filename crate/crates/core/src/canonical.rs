//! Canonical indexing of variable occurrences.
//!
//! The first occurrence gets `|φ|` (the occurrence count). Inside an atom the
//! index crosses by the stratification rules: the container of `x in y` sits
//! one above the element, both sides of `x = y` are equal. Each later atom is
//! seeded from the highest index its first variable has received so far, or
//! from its second variable's when the first is new; an atom with two new
//! variables starts again at `|φ|`.
//!
//! Summing the number of distinct indices per variable gives `Σ rng`; the
//! formula is stratified exactly when that sum equals the variable count.

use std::fmt;

use serde::Serialize;

use crate::formula::{atomic_sequence, occurrence_count, render_with, AtomOccurrence, Formula, Relation};
use crate::indexing::{rng_summary, run_schedule, IndexingError, OccurrenceIndexing, Origin, RngSummary, SeedRule};

/// Largest atom count accepted by [`minimal_rng_bruteforce`].
pub const BRUTE_FORCE_MAX_ATOMS: usize = 3;

struct CanonicalRule {
    start: u32,
}

fn step(rel: Relation) -> u32 {
    match rel {
        Relation::Member => 1,
        Relation::Equal => 0,
    }
}

impl SeedRule for CanonicalRule {
    fn seed(&self, atom: &AtomOccurrence, left_high: Option<u32>, right_high: Option<u32>) -> (u32, u32) {
        let d = step(atom.rel);
        match (left_high, right_high) {
            (Some(l), _) => (l, l + d),
            (None, Some(r)) => (r.checked_sub(d).expect("canonical indices stay positive"), r),
            (None, None) => (self.start, self.start + d),
        }
    }
}

pub fn canonical_index(f: &Formula) -> Result<OccurrenceIndexing, IndexingError> {
    let start = u32::try_from(occurrence_count(f)).expect("formula size fits u32");
    run_schedule(f, Origin::Canonical, &CanonicalRule { start })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalVerdict {
    pub stratified: bool,
    pub summary: RngSummary,
}

pub fn canonical_verdict(f: &Formula) -> Result<CanonicalVerdict, IndexingError> {
    let summary = rng_summary(&canonical_index(f)?);
    Ok(CanonicalVerdict {
        stratified: summary.is_functional(),
        summary,
    })
}

/// The formula with every occurrence `x` of index `n` written `j^n'f(x)`,
/// together with the setlike bound `2|φ|` the permutation `f` must meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhfTransform {
    pub text: String,
    pub setlike_bound: usize,
}

impl fmt::Display for PhfTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f {}-setlike: {}", self.setlike_bound, self.text)
    }
}

pub fn phf_transform(f: &Formula, pi: &OccurrenceIndexing) -> PhfTransform {
    let text = render_with(f, &mut |pos, rel, l, r| {
        let (li, ri) = pi.atom_indices(pos);
        format!("j^{li}'f({l}) {} j^{ri}'f({r})", rel.symbol())
    });
    PhfTransform {
        text,
        setlike_bound: 2 * occurrence_count(f),
    }
}

/// Minimum of `Σ rng` over every indexing with indices in `0..=index_bound`
/// that follows the stratification rules inside each atom.
pub fn minimal_rng_bruteforce(f: &Formula, index_bound: u32) -> Result<usize, IndexingError> {
    let atoms = atomic_sequence(f);
    if atoms.len() > BRUTE_FORCE_MAX_ATOMS {
        return Err(IndexingError::SizeLimit {
            atoms: atoms.len(),
            limit: BRUTE_FORCE_MAX_ATOMS,
        });
    }
    if atoms.is_empty() {
        return Err(IndexingError::EmptyFormula);
    }
    let vars = f.variables();
    let occ_var: Vec<usize> = atoms
        .iter()
        .flat_map(|a| [&a.left.var, &a.right.var])
        .map(|v| vars.iter().position(|u| u == v).unwrap())
        .collect();

    let mut indices = vec![0u32; occ_var.len()];
    let mut best = usize::MAX;
    search(&atoms, 0, index_bound, &occ_var, vars.len(), &mut indices, &mut best);
    Ok(best)
}

fn search(
    atoms: &[AtomOccurrence],
    i: usize,
    bound: u32,
    occ_var: &[usize],
    n_vars: usize,
    indices: &mut [u32],
    best: &mut usize,
) {
    if i == atoms.len() {
        let mut per_var: Vec<Vec<u32>> = vec![Vec::new(); n_vars];
        for (slot, &v) in occ_var.iter().enumerate() {
            if !per_var[v].contains(&indices[slot]) {
                per_var[v].push(indices[slot]);
            }
        }
        *best = (*best).min(per_var.iter().map(Vec::len).sum());
        return;
    }
    let d = step(atoms[i].rel);
    let Some(top) = bound.checked_sub(d) else {
        return;
    };
    for base in 0..=top {
        indices[2 * i] = base;
        indices[2 * i + 1] = base + d;
        search(atoms, i + 1, bound, occ_var, n_vars, indices, best);
    }
}

/// [`minimal_rng_bruteforce`] with the default bound `2|φ|`.
pub fn minimal_rng(f: &Formula) -> Result<usize, IndexingError> {
    minimal_rng_bruteforce(f, 2 * occurrence_count(f) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn idx(text: &str) -> Vec<u32> {
        canonical_index(&parse(text).unwrap()).unwrap().indices().to_vec()
    }

    #[test]
    fn worked_three_cycle() {
        assert_eq!(idx("x in y & y in z & z in x"), [6, 7, 7, 8, 8, 9]);
        let v = canonical_verdict(&parse("x in y & y in z & z in x").unwrap()).unwrap();
        assert!(!v.stratified);
        assert_eq!(v.summary.total, 4);
        assert_eq!(v.summary.var_count, 3);
    }

    #[test]
    fn equality_copies_index() {
        assert_eq!(idx("x = x"), [2, 2]);
        let v = canonical_verdict(&parse("x = x").unwrap()).unwrap();
        assert_eq!((v.summary.total, v.summary.var_count), (1, 1));
        assert!(v.stratified);
    }

    #[test]
    fn backward_seed_through_second_variable() {
        // z is new in `z in y`, so y seeds it from below
        assert_eq!(idx("x in y & z in y & x = z"), [6, 7, 6, 7, 6, 6]);
        let v = canonical_verdict(&parse("x in y & z in y & x = z").unwrap()).unwrap();
        assert!(v.stratified);
        assert_eq!(v.summary.total, 3);
    }

    #[test]
    fn single_atom() {
        assert_eq!(idx("x in y"), [2, 3]);
        assert!(canonical_verdict(&parse("x in y").unwrap()).unwrap().stratified);
    }

    #[test]
    fn connected_atoms_are_scheduled_before_disconnected_ones() {
        let pi = canonical_index(&parse("x in y & a in b & y in a").unwrap()).unwrap();
        assert_eq!(pi.schedule(), [0, 2, 1]);
        assert_eq!(pi.indices(), [6, 7, 8, 9, 7, 8]);
    }

    #[test]
    fn new_component_restarts_at_occurrence_count() {
        assert_eq!(idx("x in y & a in b"), [4, 5, 4, 5]);
    }

    #[test]
    fn binders_do_not_count_toward_the_start() {
        assert_eq!(
            canonical_index(&parse("ex x. (all y. x in y)").unwrap())
                .unwrap()
                .indices(),
            [2, 3]
        );
    }

    #[test]
    fn phf_single_atom() {
        let f = parse("x in y").unwrap();
        let t = phf_transform(&f, &canonical_index(&f).unwrap());
        assert_eq!(t.text, "j^2'f(x) in j^3'f(y)");
        assert_eq!(t.setlike_bound, 4);
        assert_eq!(t.to_string(), "f 4-setlike: j^2'f(x) in j^3'f(y)");
    }

    #[test]
    fn phf_three_cycle() {
        let f = parse("x in y & y in z & z in x").unwrap();
        let t = phf_transform(&f, &canonical_index(&f).unwrap());
        assert_eq!(
            t.text,
            "j^6'f(x) in j^7'f(y) & j^7'f(y) in j^8'f(z) & j^8'f(z) in j^9'f(x)"
        );
        assert_eq!(t.setlike_bound, 12);
    }

    #[test]
    fn phf_equality_and_structure() {
        let f = parse("x = x").unwrap();
        assert_eq!(
            phf_transform(&f, &canonical_index(&f).unwrap()).text,
            "j^2'f(x) = j^2'f(x)"
        );
        let g = parse("all z:V. (z in x <-> ~z in y)").unwrap();
        let t = phf_transform(&g, &canonical_index(&g).unwrap());
        assert_eq!(t.text, "all z:V. j^4'f(z) in j^5'f(x) <-> ~j^4'f(z) in j^5'f(y)");
    }

    #[test]
    fn brute_force_minimum() {
        assert_eq!(minimal_rng(&parse("x in y").unwrap()).unwrap(), 2);
        assert_eq!(minimal_rng(&parse("x in y & y in z & z in x").unwrap()).unwrap(), 4);
        assert_eq!(minimal_rng(&parse("x in y & z in y & x = z").unwrap()).unwrap(), 3);
        assert_eq!(minimal_rng(&parse("x in x").unwrap()).unwrap(), 2);
    }

    #[test]
    fn brute_force_guard() {
        let f = parse("a in b & b in c & c in d & d in e").unwrap();
        assert_eq!(minimal_rng(&f), Err(IndexingError::SizeLimit { atoms: 4, limit: 3 }));
    }
}
