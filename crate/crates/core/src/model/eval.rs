//! First-order evaluation over a digraph under f-membership: the atom `u in w`
//! holds when `f(u) ∈ w`. With `f` the identity this is ordinary semantics.
//! Equality is element identity; quantifiers range over the whole universe.

use std::collections::BTreeMap;

use crate::formula::{Formula, Quantifier, Relation, Var};

use super::digraph::{ClassSubset, Digraph};
use super::permutation::Permutation;
use super::ModelError;

enum Node {
    Member(usize, usize),
    Equal(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    All(usize, Box<Node>),
    Ex(usize, Box<Node>),
}

/// A formula with variables resolved to environment slots. The first slots
/// hold the free variables in the order given to [`CompiledFormula::new`].
pub struct CompiledFormula {
    root: Node,
    slots: usize,
}

impl CompiledFormula {
    pub fn new(f: &Formula, free: &[Var]) -> Result<Self, ModelError> {
        let mut scope: Vec<(Var, usize)> = free.iter().cloned().zip(0..).collect();
        let mut slots = free.len();
        let root = compile(f, &mut scope, &mut slots)?;
        Ok(CompiledFormula { root, slots })
    }

    /// Environment with room for every slot; free slots start at 0.
    pub fn environment(&self) -> Vec<usize> {
        vec![0; self.slots]
    }

    pub fn eval(&self, d: &Digraph, env: &mut [usize], f: &Permutation) -> bool {
        run(&self.root, d, env, f)
    }
}

fn compile(f: &Formula, scope: &mut Vec<(Var, usize)>, slots: &mut usize) -> Result<Node, ModelError> {
    let lookup = |v: &Var, scope: &[(Var, usize)]| {
        scope
            .iter()
            .rev()
            .find(|(u, _)| u == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| ModelError::UnboundVariable(v.clone()))
    };
    let bin = |l: &Formula, r: &Formula, scope: &mut Vec<(Var, usize)>, slots: &mut usize| {
        Ok::<_, ModelError>((Box::new(compile(l, scope, slots)?), Box::new(compile(r, scope, slots)?)))
    };
    Ok(match f {
        Formula::Atom { rel, left, right } => {
            let (l, r) = (lookup(left, scope)?, lookup(right, scope)?);
            match rel {
                Relation::Member => Node::Member(l, r),
                Relation::Equal => Node::Equal(l, r),
            }
        }
        Formula::Not { arg } => Node::Not(Box::new(compile(arg, scope, slots)?)),
        Formula::And { left, right } => {
            let (l, r) = bin(left, right, scope, slots)?;
            Node::And(l, r)
        }
        Formula::Or { left, right } => {
            let (l, r) = bin(left, right, scope, slots)?;
            Node::Or(l, r)
        }
        Formula::Implies { left, right } => {
            let (l, r) = bin(left, right, scope, slots)?;
            Node::Implies(l, r)
        }
        Formula::Iff { left, right } => {
            let (l, r) = bin(left, right, scope, slots)?;
            Node::Iff(l, r)
        }
        Formula::Quant { kind, var, body, .. } => {
            let slot = *slots;
            *slots += 1;
            scope.push((var.clone(), slot));
            let body = Box::new(compile(body, scope, slots)?);
            scope.pop();
            match kind {
                Quantifier::All => Node::All(slot, body),
                Quantifier::Ex => Node::Ex(slot, body),
            }
        }
    })
}

fn run(node: &Node, d: &Digraph, env: &mut [usize], f: &Permutation) -> bool {
    match node {
        Node::Member(u, w) => d.contains(f.apply(env[*u]), env[*w]),
        Node::Equal(u, w) => env[*u] == env[*w],
        Node::Not(a) => !run(a, d, env, f),
        Node::And(a, b) => run(a, d, env, f) && run(b, d, env, f),
        Node::Or(a, b) => run(a, d, env, f) || run(b, d, env, f),
        Node::Implies(a, b) => !run(a, d, env, f) || run(b, d, env, f),
        Node::Iff(a, b) => run(a, d, env, f) == run(b, d, env, f),
        Node::All(slot, body) => d.elements().all(|e| {
            env[*slot] = e;
            run(body, d, env, f)
        }),
        Node::Ex(slot, body) => d.elements().any(|e| {
            env[*slot] = e;
            run(body, d, env, f)
        }),
    }
}

fn check_permutation(d: &Digraph, f: &Permutation) -> Result<(), ModelError> {
    if f.len() != d.len() {
        return Err(ModelError::InvalidPermutation(f.image().to_vec()));
    }
    Ok(())
}

/// Evaluates `phi` under `asg`, reading every `u in w` as `f(u) ∈ w`.
pub fn eval(d: &Digraph, phi: &Formula, asg: &BTreeMap<Var, usize>, f: &Permutation) -> Result<bool, ModelError> {
    check_permutation(d, f)?;
    let (vars, values): (Vec<Var>, Vec<usize>) = asg.iter().map(|(k, v)| (k.clone(), *v)).unzip();
    if let Some(&bad) = values.iter().find(|&&v| v >= d.len()) {
        return Err(ModelError::Range {
            element: bad,
            n: d.len(),
        });
    }
    let compiled = CompiledFormula::new(phi, &vars)?;
    let mut env = compiled.environment();
    env[..values.len()].copy_from_slice(&values);
    Ok(compiled.eval(d, &mut env, f))
}

/// `{y : phi(y, params)}` under ordinary membership.
pub fn defined_class(
    d: &Digraph,
    phi: &Formula,
    class_var: &Var,
    params: &BTreeMap<Var, usize>,
) -> Result<ClassSubset, ModelError> {
    let frame = Frame::new(d, phi, class_var, params)?;
    let id = Permutation::identity(d.len());
    let mut env = frame.compiled.environment();
    frame.load(&mut env);
    Ok(d.elements()
        .filter(|&y| {
            env[0] = y;
            frame.compiled.eval(d, &mut env, &id)
        })
        .collect())
}

/// A comprehension body compiled with the class variable in slot 0 and the
/// parameters after it.
pub(crate) struct Frame {
    pub compiled: CompiledFormula,
    values: Vec<usize>,
}

impl Frame {
    pub fn new(d: &Digraph, phi: &Formula, class_var: &Var, params: &BTreeMap<Var, usize>) -> Result<Self, ModelError> {
        let mut free = vec![class_var.clone()];
        let mut values = vec![0];
        for (p, &v) in params {
            if p == class_var {
                continue;
            }
            if v >= d.len() {
                return Err(ModelError::Range { element: v, n: d.len() });
            }
            free.push(p.clone());
            values.push(v);
        }
        Ok(Frame {
            compiled: CompiledFormula::new(phi, &free)?,
            values,
        })
    }

    pub fn load(&self, env: &mut [usize]) {
        env[..self.values.len()].copy_from_slice(&self.values);
    }
}
