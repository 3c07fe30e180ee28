use std::fmt;

use serde::{Deserialize, Serialize};

/// A variable name. Never one of the grammar keywords.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_owned())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `x in y`
    #[serde(rename = "in")]
    Member,
    /// `x = y`
    #[serde(rename = "eq")]
    Equal,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Member => "in",
            Relation::Equal => "=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    All,
    Ex,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::All => "all",
            Quantifier::Ex => "ex",
        }
    }
}

/// Formula AST.
///
/// The serde representation is the JSON AST export: every node is an object
/// tagged by `"op"` (`atom`, `not`, `and`, `or`, `implies`, `iff`, `quant`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Formula {
    Atom {
        rel: Relation,
        left: Var,
        right: Var,
    },
    Not {
        arg: Box<Formula>,
    },
    And {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Or {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Implies {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Iff {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Quant {
        kind: Quantifier,
        var: Var,
        /// `:V` annotation; metadata only, the range is always the universe.
        bounded: bool,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(rel: Relation, left: impl Into<Var>, right: impl Into<Var>) -> Self {
        Formula::Atom {
            rel,
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn member(left: impl Into<Var>, right: impl Into<Var>) -> Self {
        Self::atom(Relation::Member, left, right)
    }

    pub fn equal(left: impl Into<Var>, right: impl Into<Var>) -> Self {
        Self::atom(Relation::Equal, left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(arg: Formula) -> Self {
        Formula::Not { arg: Box::new(arg) }
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::Iff {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn quant(kind: Quantifier, var: impl Into<Var>, bounded: bool, body: Formula) -> Self {
        Formula::Quant {
            kind,
            var: var.into(),
            bounded,
            body: Box::new(body),
        }
    }

    pub fn all(var: impl Into<Var>, body: Formula) -> Self {
        Self::quant(Quantifier::All, var, false, body)
    }

    pub fn ex(var: impl Into<Var>, body: Formula) -> Self {
        Self::quant(Quantifier::Ex, var, false, body)
    }

    /// Left-nested conjunction of the given formulas. `None` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Visits atoms in left-to-right concrete-syntax order.
    pub fn for_each_atom<'a>(&'a self, visit: &mut impl FnMut(Relation, &'a Var, &'a Var)) {
        match self {
            Formula::Atom { rel, left, right } => visit(*rel, left, right),
            Formula::Not { arg } => arg.for_each_atom(visit),
            Formula::And { left, right }
            | Formula::Or { left, right }
            | Formula::Implies { left, right }
            | Formula::Iff { left, right } => {
                left.for_each_atom(visit);
                right.for_each_atom(visit);
            }
            Formula::Quant { body, .. } => body.for_each_atom(visit),
        }
    }

    pub fn atom_count(&self) -> usize {
        let mut n = 0;
        self.for_each_atom(&mut |_, _, _| n += 1);
        n
    }

    /// Distinct variables occurring in atoms, in order of first occurrence.
    /// Binder-only variables are not included.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = Vec::<Var>::new();
        self.for_each_atom(&mut |_, l, r| {
            for v in [l, r] {
                if !seen.contains(v) {
                    seen.push(v.clone());
                }
            }
        });
        seen
    }

    /// Free variables in order of first occurrence.
    pub fn free_variables(&self) -> Vec<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            match f {
                Formula::Atom { left, right, .. } => {
                    for v in [left, right] {
                        if !bound.contains(v) && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
                Formula::Not { arg } => walk(arg, bound, out),
                Formula::And { left, right }
                | Formula::Or { left, right }
                | Formula::Implies { left, right }
                | Formula::Iff { left, right } => {
                    walk(left, bound, out);
                    walk(right, bound, out);
                }
                Formula::Quant { var, body, .. } => {
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render(self))
    }
}
