//! Curated fixtures for the paradox counterexamples and the stratified
//! comprehension instances. Element 0 is always the empty element.
//!
//! Pair terms `{a, b}` are spelled out as `all t. (t in p <-> t = a | t = b)`.

use crate::formula::{parse, Formula, Var};

use super::digraph::Digraph;
use super::invariance::{invariance_survey, Constraints, InvarianceReport, Verdict};
use super::permutation::{Level, Permutation};
use super::ModelError;

pub const DEMO_NAMES: [&str; 9] = [
    "russell",
    "lesniewski",
    "burali-forti",
    "complement",
    "boolean-union",
    "sheffer",
    "set-union",
    "relative-product",
    "intersection-relation",
];

/// A demo fixture before its survey runs.
#[derive(Clone, Debug)]
pub struct DemoSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub digraph: Digraph,
    pub formula: Formula,
    pub class_var: Var,
    pub constraints: Constraints,
    pub expected: Verdict,
    /// For counterexample demos: the swap and the element it breaks at.
    pub counterexample: Option<(Permutation, usize)>,
}

#[derive(Clone, Debug)]
pub struct DemoRun {
    pub spec: DemoSpec,
    pub report: InvarianceReport,
}

impl DemoRun {
    /// The report agrees with the expected verdict, and a counterexample demo
    /// lists its designated permutation and witness.
    pub fn confirms(&self) -> bool {
        self.report.verdict == self.spec.expected
            && self
                .spec
                .counterexample
                .as_ref()
                .is_none_or(|(f, w)| self.report.has_violation(f, *w))
    }
}

fn named(exts: &[&[usize]], names: &[&str]) -> Digraph {
    Digraph::from_extensions(exts)
        .and_then(|d| d.with_names(names.iter().enumerate().map(|(i, n)| (i, n.to_string()))))
        .expect("fixture is well formed")
}

fn formula(text: &str) -> Formula {
    parse(text).expect("fixture formula parses")
}

fn constraints(params: &[(&str, usize, Level)], class: Level) -> Constraints {
    Constraints {
        params: params.iter().map(|(p, e, _)| (Var::from(*p), *e)).collect(),
        param_levels: params.iter().map(|(p, _, l)| (Var::from(*p), *l)).collect(),
        class_level: Some(class),
    }
}

/// Five elements used by the Boolean demos:
/// ∅, {∅}, {{∅}}, {∅, {∅}}, {{∅}, {∅, {∅}}}.
fn boolean_fixture() -> Digraph {
    named(
        &[&[], &[0], &[1], &[0, 1], &[2, 3]],
        &["empty", "{0}", "{1}", "{0,1}", "{2,3}"],
    )
}

pub fn demo_spec(name: &str) -> Result<DemoSpec, ModelError> {
    let y = Var::from("y");
    let spec = match name {
        "russell" => DemoSpec {
            name: "russell",
            summary:
                "{y : y ∉ y} with ∅ and {∅} swapped; the swap fixes the class yet {∅} becomes an f-member of itself",
            digraph: named(&[&[], &[0]], &["empty", "{empty}"]),
            formula: formula("~y in y"),
            class_var: y,
            constraints: constraints(&[], Level::One),
            expected: Verdict::Violated,
            counterexample: Some((Permutation::swap(2, 0, 1), 1)),
        },
        "lesniewski" => DemoSpec {
            name: "lesniewski",
            summary: "singletons that are not members of their sole member, with {∅} and {{{∅}}} swapped",
            // the fifth element {{{{∅}}}} makes the lift of the swap total
            digraph: named(&[&[], &[0], &[1], &[2], &[3]], &["empty", "{0}", "{1}", "{2}", "{3}"]),
            formula: formula("ex x. (all t. (t in y <-> t = x)) & ~y in x"),
            class_var: y,
            constraints: constraints(&[], Level::Two),
            expected: Verdict::Violated,
            counterexample: Some((Permutation::swap(5, 1, 3), 3)),
        },
        "burali-forti" => DemoSpec {
            name: "burali-forti",
            summary: "von Neumann ordinals with ∅ and {∅} swapped; {∅} becomes an f-member of itself",
            digraph: named(&[&[], &[0], &[0, 1], &[1]], &["0", "1", "2", "{1}"]),
            formula: formula(
                "~y in y \
                 & (all u. (u in y -> ~u in u & (all v. (v in u -> v in y)))) \
                 & (all u. (u in y -> (all v. (v in u -> (all w. (w in v -> w in u)))))) \
                 & (all u. (all v. (u in y & v in y -> u in v | u = v | v in u)))",
            ),
            class_var: y,
            constraints: constraints(&[], Level::One),
            expected: Verdict::Violated,
            counterexample: Some((Permutation::swap(4, 0, 1), 1)),
        },
        "complement" => DemoSpec {
            name: "complement",
            summary: "absolute complement of a, under every permutation",
            digraph: boolean_fixture(),
            formula: formula("~y in a"),
            class_var: y,
            constraints: constraints(&[("a", 3, Level::Zero)], Level::Zero),
            expected: Verdict::Invariant,
            counterexample: None,
        },
        "boolean-union" => DemoSpec {
            name: "boolean-union",
            summary: "a ∪ b, under every permutation",
            digraph: boolean_fixture(),
            formula: formula("y in a | y in b"),
            class_var: y,
            constraints: constraints(&[("a", 3, Level::Zero), ("b", 4, Level::Zero)], Level::Zero),
            expected: Verdict::Invariant,
            counterexample: None,
        },
        "sheffer" => DemoSpec {
            name: "sheffer",
            summary: "Sheffer stroke a ↑ b, under every permutation",
            digraph: boolean_fixture(),
            formula: formula("~(y in a & y in b)"),
            class_var: y,
            constraints: constraints(&[("a", 3, Level::Zero), ("b", 2, Level::Zero)], Level::Zero),
            expected: Verdict::Invariant,
            counterexample: None,
        },
        "set-union" => DemoSpec {
            name: "set-union",
            summary: "⋃A, under every permutation fixing the members of A setwise",
            digraph: named(
                &[&[], &[0], &[1], &[0, 1], &[2, 3], &[0, 4]],
                &["empty", "{0}", "{1}", "{0,1}", "A={2,3}", "{0,4}"],
            ),
            formula: formula("ex z. (z in A & y in z)"),
            class_var: y,
            constraints: constraints(&[("A", 4, Level::One)], Level::Zero),
            expected: Verdict::Invariant,
            counterexample: None,
        },
        "relative-product" => DemoSpec {
            name: "relative-product",
            summary: "{{a,c} : {a,b} ∈ R, {b,c} ∈ S}, under permutations fixing R, S and the product setwise",
            digraph: named(
                &[&[], &[0], &[1], &[0, 1], &[1, 2], &[0, 2], &[3, 4]],
                &["empty", "{0}", "{1}", "{0,1}", "S={1,2}", "{0,2}", "R={3,4}"],
            ),
            formula: formula(
                "ex a. ex b. ex c. \
                 (ex p. (p in R & (all t. (t in p <-> t = a | t = b)))) \
                 & (ex q. (q in S & (all t. (t in q <-> t = b | t = c)))) \
                 & (all t. (t in y <-> t = a | t = c))",
            ),
            class_var: y,
            constraints: constraints(&[("R", 6, Level::One), ("S", 4, Level::One)], Level::One),
            expected: Verdict::Invariant,
            counterexample: None,
        },
        "intersection-relation" => DemoSpec {
            name: "intersection-relation",
            summary: "unordered pairs of intersecting elements, under every ultrapermutation of that class",
            digraph: named(
                &[&[], &[0], &[0, 1], &[1, 2], &[5], &[4], &[4, 5]],
                &["empty", "{0}", "{0,1}", "{1,2}", "{5}", "{4}", "{4,5}"],
            ),
            formula: formula("ex x. ex w. (all t. (t in y <-> t = x | t = w)) & (ex z. (z in x & z in w))"),
            class_var: y,
            constraints: constraints(&[], Level::Two),
            expected: Verdict::Invariant,
            counterexample: None,
        },
        other => return Err(ModelError::UnknownDemo(other.to_string())),
    };
    Ok(spec)
}

pub fn demo(name: &str, limit: usize) -> Result<DemoRun, ModelError> {
    let spec = demo_spec(name)?;
    let report = invariance_survey(&spec.digraph, &spec.formula, &spec.class_var, &spec.constraints, limit)?;
    Ok(DemoRun { spec, report })
}
