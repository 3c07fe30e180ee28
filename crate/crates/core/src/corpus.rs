//! Exhaustive corpus of atom conjunctions and the cross-check of both
//! indexing procedures against their direct oracles.
//!
//! Variables are canonical (`v0`, `v1`, ...) and appear in first-use order,
//! so each formula stands for its whole alpha-equivalence class.

use serde::Serialize;
use thiserror::Error;

use crate::acyclic::{acyclic_verdict, graph_acyclic};
use crate::canonical::{canonical_index, minimal_rng, BRUTE_FORCE_MAX_ATOMS};
use crate::formula::{build_var_graph, render, Formula, Relation, Var};
use crate::indexing::rng_summary;
use crate::stratify::is_stratified;

/// Largest atom count [`compare`] accepts.
pub const MAX_CORPUS_ATOMS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus bounds must be positive (got max_atoms={max_atoms}, max_vars={max_vars})")]
    EmptyBounds { max_atoms: usize, max_vars: usize },
    #[error("corpus of {max_atoms} atoms exceeds the limit {limit}")]
    SizeLimit { max_atoms: usize, limit: usize },
}

/// Every conjunction of `1..=max_atoms` atoms over at most `max_vars`
/// canonical variables, by atom count, then variable pattern, then relations.
pub fn enumerate(max_atoms: usize, max_vars: usize) -> Vec<Formula> {
    let names: Vec<Var> = (0..max_vars).map(|i| Var::new(format!("v{i}"))).collect();
    let mut out = Vec::new();
    for m in 1..=max_atoms {
        let mut pattern = Vec::with_capacity(2 * m);
        growth_strings(2 * m, max_vars, &mut pattern, &mut |p| {
            for mask in 0..(1u32 << m) {
                let atoms = (0..m).map(|i| {
                    let rel = if mask >> (m - 1 - i) & 1 == 0 {
                        Relation::Member
                    } else {
                        Relation::Equal
                    };
                    Formula::atom(rel, names[p[2 * i]].clone(), names[p[2 * i + 1]].clone())
                });
                out.push(Formula::conjunction(atoms).expect("at least one atom"));
            }
        });
    }
    out
}

/// Restricted growth strings of length `len` with at most `k` distinct values.
fn growth_strings(len: usize, k: usize, prefix: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if prefix.len() == len {
        emit(prefix);
        return;
    }
    let fresh = prefix.iter().max().map_or(0, |m| m + 1);
    for v in 0..=fresh.min(k - 1) {
        prefix.push(v);
        growth_strings(len, k, prefix, emit);
        prefix.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub formula: String,
    pub indexing: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub formula: String,
    pub indices: Vec<u32>,
    pub bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityMismatch {
    pub formula: String,
    pub canonical: usize,
    pub minimum: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub checked: usize,
    pub mismatches: Vec<MinimalityMismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub max_atoms: usize,
    pub max_vars: usize,
    pub formulas: usize,
    pub stratified: usize,
    pub acyclic: usize,
    pub canonical_disagreements: Vec<Disagreement>,
    pub acyclic_disagreements: Vec<Disagreement>,
    /// Formulas whose variable graph is acyclic but which are unstratified.
    pub acyclic_unstratified: Vec<String>,
    /// Canonical indices outside `1..2|φ|`.
    pub index_bound_violations: Vec<BoundViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimality: Option<MinimalityReport>,
}

impl CompareReport {
    pub fn is_clean(&self) -> bool {
        self.canonical_disagreements.is_empty()
            && self.acyclic_disagreements.is_empty()
            && self.acyclic_unstratified.is_empty()
            && self.index_bound_violations.is_empty()
            && self.minimality.as_ref().is_none_or(|m| m.mismatches.is_empty())
    }
}

fn check_bounds(max_atoms: usize, max_vars: usize) -> Result<(), CorpusError> {
    if max_atoms == 0 || max_vars == 0 {
        return Err(CorpusError::EmptyBounds { max_atoms, max_vars });
    }
    if max_atoms > MAX_CORPUS_ATOMS {
        return Err(CorpusError::SizeLimit {
            max_atoms,
            limit: MAX_CORPUS_ATOMS,
        });
    }
    Ok(())
}

/// Cross-checks every corpus formula. With `minimality`, formulas of at most
/// [`BRUTE_FORCE_MAX_ATOMS`] atoms also have their canonical `Σ rng` compared
/// with the brute-force minimum.
pub fn compare(max_atoms: usize, max_vars: usize, minimality: bool) -> Result<CompareReport, CorpusError> {
    check_bounds(max_atoms, max_vars)?;
    let corpus = enumerate(max_atoms, max_vars);
    let mut report = CompareReport {
        max_atoms,
        max_vars,
        formulas: corpus.len(),
        stratified: 0,
        acyclic: 0,
        canonical_disagreements: Vec::new(),
        acyclic_disagreements: Vec::new(),
        acyclic_unstratified: Vec::new(),
        index_bound_violations: Vec::new(),
        minimality: minimality.then_some(MinimalityReport {
            checked: 0,
            mismatches: Vec::new(),
        }),
    };

    for f in &corpus {
        let oracle = is_stratified(f);
        let graph = graph_acyclic(&build_var_graph(f));
        report.stratified += usize::from(oracle);
        report.acyclic += usize::from(graph);

        let pi = canonical_index(f).expect("corpus formulas have atoms");
        let summary = rng_summary(&pi);
        if summary.is_functional() != oracle {
            report.canonical_disagreements.push(Disagreement {
                formula: render(f),
                indexing: summary.is_functional(),
                oracle,
            });
        }
        let bound = 2 * 2 * f.atom_count() as u32;
        if pi.indices().iter().any(|&i| i < 1 || i >= bound) {
            report.index_bound_violations.push(BoundViolation {
                formula: render(f),
                indices: pi.indices().to_vec(),
                bound,
            });
        }

        let acyclic = acyclic_verdict(f).expect("corpus formulas have atoms").acyclic;
        if acyclic != graph {
            report.acyclic_disagreements.push(Disagreement {
                formula: render(f),
                indexing: acyclic,
                oracle: graph,
            });
        }
        if graph && !oracle {
            report.acyclic_unstratified.push(render(f));
        }

        if let Some(m) = report.minimality.as_mut() {
            if f.atom_count() <= BRUTE_FORCE_MAX_ATOMS {
                m.checked += 1;
                let minimum = minimal_rng(f).expect("within the brute-force limit");
                if minimum != summary.total {
                    m.mismatches.push(MinimalityMismatch {
                        formula: render(f),
                        canonical: summary.total,
                        minimum,
                    });
                }
            }
        }
    }
    Ok(report)
}
