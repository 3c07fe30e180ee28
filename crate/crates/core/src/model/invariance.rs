//! Invariance of comprehension instances under constrained permutations.
//!
//! For a class `C = {y : φ}` and a permutation `f`, the f-reading of
//! `∀y (y ∈ C ↔ φ)` is `∀y (f(y) ∈ C ↔ φ^f)`. A violation is an element `y`
//! where the two sides disagree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, Var};

use super::digraph::{ClassSubset, Digraph};
use super::eval::{defined_class, Frame};
use super::permutation::{enumerate_permutations, sample_permutations, Level, Permutation};
use super::ModelError;

/// Key used for the defined class in level maps.
pub const CLASS_KEY: &str = "_class";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub witness: usize,
    /// `f(y) ∈ C`
    pub expected: bool,
    /// `φ^f(y)`
    pub got: bool,
}

/// Checks the f-reading of the comprehension for every `y`, returning the
/// least violating element. `class` must be the class `phi` defines.
pub fn comprehension_invariant(
    d: &Digraph,
    phi: &Formula,
    class_var: &Var,
    params: &BTreeMap<Var, usize>,
    class: &ClassSubset,
    f: &Permutation,
) -> Result<Option<Violation>, ModelError> {
    let actual = defined_class(d, phi, class_var, params)?;
    if actual != *class {
        return Err(ModelError::Precondition(format!(
            "given class {class:?} is not the class {actual:?} defined by the formula"
        )));
    }
    if f.len() != d.len() {
        return Err(ModelError::InvalidPermutation(f.image().to_vec()));
    }
    let frame = Frame::new(d, phi, class_var, params)?;
    Ok(violations(d, &frame, class, f).into_iter().next())
}

fn violations(d: &Digraph, frame: &Frame, class: &ClassSubset, f: &Permutation) -> Vec<Violation> {
    let mut env = frame.compiled.environment();
    frame.load(&mut env);
    d.elements()
        .filter_map(|y| {
            env[0] = y;
            let expected = class.contains(&f.apply(y));
            let got = frame.compiled.eval(d, &mut env, f);
            (expected != got).then_some(Violation {
                witness: y,
                expected,
                got,
            })
        })
        .collect()
}

/// Parameter values and the permutation level demanded of each parameter
/// (on its extension) and of the defined class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub params: BTreeMap<Var, usize>,
    pub param_levels: BTreeMap<Var, Level>,
    pub class_level: Option<Level>,
}

impl Constraints {
    pub fn class_level(&self) -> Level {
        self.class_level.unwrap_or(Level::Zero)
    }

    fn resolve(&self, d: &Digraph, class: &ClassSubset) -> Result<Vec<(ClassSubset, Level)>, ModelError> {
        let mut out = Vec::new();
        for (name, &level) in &self.param_levels {
            let &element = self
                .params
                .get(name)
                .ok_or_else(|| ModelError::UnknownParameter(name.clone()))?;
            out.push((d.extension(element)?.clone(), level));
        }
        out.push((class.clone(), self.class_level()));
        Ok(out)
    }

    fn level_map(&self) -> BTreeMap<String, u8> {
        let mut levels: BTreeMap<String, u8> = self
            .params
            .keys()
            .map(|p| {
                (
                    p.to_string(),
                    self.param_levels.get(p).copied().unwrap_or(Level::Zero).into(),
                )
            })
            .collect();
        levels.insert(CLASS_KEY.into(), self.class_level().into());
        levels
    }
}

/// JSON constraint file: `{"params": {"A": 4}, "levels": {"A": 1, "_class": 2}}`.
/// A parameter may also be given as its member list, `{"A": [2, 3]}`, which
/// names the element with exactly that extension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
    #[serde(default)]
    pub levels: BTreeMap<String, Level>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Element(usize),
    Extension(Vec<usize>),
}

impl ConstraintFile {
    pub fn resolve(&self, d: &Digraph) -> Result<Constraints, ModelError> {
        let mut c = Constraints::default();
        for (name, value) in &self.params {
            let element = match value {
                ParamValue::Element(e) => {
                    d.extension(*e)?;
                    *e
                }
                ParamValue::Extension(members) => {
                    let set: ClassSubset = members.iter().copied().collect();
                    d.element_with_extension(&set).ok_or_else(|| {
                        ModelError::InvalidModel(format!("no element has extension {set:?} (parameter `{name}`)"))
                    })?
                }
            };
            c.params.insert(Var::new(name.as_str()), element);
        }
        for (name, &level) in &self.levels {
            if name == CLASS_KEY {
                c.class_level = Some(level);
            } else if c.params.contains_key(&Var::new(name.as_str())) {
                c.param_levels.insert(Var::new(name.as_str()), level);
            } else {
                return Err(ModelError::UnknownParameter(Var::new(name.as_str())));
            }
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Invariant,
    Violated,
    Vacuous,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Invariant => 0,
            Verdict::Violated => 1,
            Verdict::Vacuous => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub permutation: Permutation,
    pub witness: usize,
    pub expected: bool,
    pub got: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub draws: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub levels: BTreeMap<String, u8>,
    pub class: ClassSubset,
    pub permutations_tested: usize,
    pub violations: Vec<ViolationRecord>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Sampling>,
}

impl InvarianceReport {
    /// Violating permutations, each once, in order.
    pub fn violating_permutations(&self) -> Vec<&Permutation> {
        let mut out: Vec<&Permutation> = self.violations.iter().map(|v| &v.permutation).collect();
        out.dedup();
        out
    }

    pub fn has_violation(&self, f: &Permutation, witness: usize) -> bool {
        self.violations
            .iter()
            .any(|v| v.permutation == *f && v.witness == witness)
    }
}

fn survey(
    d: &Digraph,
    phi: &Formula,
    class_var: &Var,
    constraints: &Constraints,
    class: ClassSubset,
    perms: impl IntoIterator<Item = Permutation>,
    sampling: Option<Sampling>,
) -> Result<InvarianceReport, ModelError> {
    let frame = Frame::new(d, phi, class_var, &constraints.params)?;
    let mut tested = 0;
    let mut found = Vec::new();
    for f in perms {
        tested += 1;
        found.extend(violations(d, &frame, &class, &f).into_iter().map(|v| ViolationRecord {
            permutation: f.clone(),
            witness: v.witness,
            expected: v.expected,
            got: v.got,
        }));
    }
    found.sort_by(|a, b| (&a.permutation, a.witness).cmp(&(&b.permutation, b.witness)));
    let verdict = if tested == 0 {
        Verdict::Vacuous
    } else if found.is_empty() {
        Verdict::Invariant
    } else {
        Verdict::Violated
    };
    Ok(InvarianceReport {
        levels: constraints.level_map(),
        class,
        permutations_tested: tested,
        violations: found,
        verdict,
        sampling,
    })
}

/// Runs [`comprehension_invariant`] over every permutation meeting the
/// constraints.
pub fn invariance_survey(
    d: &Digraph,
    phi: &Formula,
    class_var: &Var,
    constraints: &Constraints,
    limit: usize,
) -> Result<InvarianceReport, ModelError> {
    let class = defined_class(d, phi, class_var, &constraints.params)?;
    let perms = enumerate_permutations(d, constraints.resolve(d, &class)?, limit)?;
    survey(d, phi, class_var, constraints, class, perms, None)
}

/// Like [`invariance_survey`], over a seeded random sample of permutations
/// instead of all of them.
pub fn invariance_survey_sampled(
    d: &Digraph,
    phi: &Formula,
    class_var: &Var,
    constraints: &Constraints,
    draws: usize,
    seed: u64,
) -> Result<InvarianceReport, ModelError> {
    let class = defined_class(d, phi, class_var, &constraints.params)?;
    let perms = sample_permutations(d, &constraints.resolve(d, &class)?, draws, seed);
    survey(
        d,
        phi,
        class_var,
        constraints,
        class,
        perms,
        Some(Sampling { seed, draws }),
    )
}
