#![allow(dead_code)]

use std::collections::BTreeMap;

use nfstrat::formula::{Formula, Quantifier, Relation, Var};
use nfstrat::model::{Digraph, Permutation};
use rand::Rng;

/// Random extensional digraph on `n` elements, by rejection. With
/// `involution`, the edge set is closed under a random involution, which
/// then is an automorphism whenever the result is extensional.
pub fn random_extensional(rng: &mut impl Rng, n: usize, involution: bool) -> Digraph {
    loop {
        let sigma = if involution {
            random_involution(rng, n)
        } else {
            Permutation::identity(n)
        };
        let mut edges = Vec::new();
        for y in 0..n {
            for x in 0..n {
                if rng.gen_bool(0.35) {
                    edges.push((y, x));
                    edges.push((sigma.apply(y), sigma.apply(x)));
                }
            }
        }
        let d = Digraph::new(n, edges).unwrap();
        if d.is_extensional() {
            return d;
        }
    }
}

fn random_involution(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    let mut free: Vec<usize> = (0..n).collect();
    while free.len() >= 2 && rng.gen_bool(0.7) {
        let a = free.swap_remove(rng.gen_range(0..free.len()));
        let b = free.swap_remove(rng.gen_range(0..free.len()));
        image.swap(a, b);
    }
    Permutation::new(image).unwrap()
}

pub const POOL: [&str; 4] = ["a", "b", "c", "d"];

/// Random formula over [`POOL`], quantifiers included.
pub fn random_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let (l, r) = (pick(rng), pick(rng));
        return if rng.gen_bool(0.7) {
            Formula::member(l, r)
        } else {
            Formula::equal(l, r)
        };
    }
    match rng.gen_range(0..6) {
        0 => Formula::not(random_formula(rng, depth - 1)),
        1 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        2 => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        3 => Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        4 => Formula::iff(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        _ => {
            let v = pick(rng);
            let body = random_formula(rng, depth - 1);
            if rng.gen_bool(0.5) {
                Formula::all(v, body)
            } else {
                Formula::ex(v, body)
            }
        }
    }
}

fn pick(rng: &mut impl Rng) -> &'static str {
    POOL[rng.gen_range(0..POOL.len())]
}

/// Textbook evaluation by recursion on the syntax tree, with an explicit
/// variable map and `u in w` read as `f(u) ∈ w`.
pub fn naive_eval(d: &Digraph, f: &Formula, env: &BTreeMap<Var, usize>, perm: &Permutation) -> bool {
    match f {
        Formula::Atom { rel, left, right } => {
            let (u, w) = (env[left], env[right]);
            match rel {
                Relation::Member => d.contains(perm.apply(u), w),
                Relation::Equal => u == w,
            }
        }
        Formula::Not { arg } => !naive_eval(d, arg, env, perm),
        Formula::And { left, right } => naive_eval(d, left, env, perm) && naive_eval(d, right, env, perm),
        Formula::Or { left, right } => naive_eval(d, left, env, perm) || naive_eval(d, right, env, perm),
        Formula::Implies { left, right } => !naive_eval(d, left, env, perm) || naive_eval(d, right, env, perm),
        Formula::Iff { left, right } => naive_eval(d, left, env, perm) == naive_eval(d, right, env, perm),
        Formula::Quant { kind, var, body, .. } => {
            let mut inner = env.clone();
            let mut values = (0..d.len()).map(|e| {
                inner.insert(var.clone(), e);
                naive_eval(d, body, &inner, perm)
            });
            match kind {
                Quantifier::All => values.all(|b| b),
                Quantifier::Ex => values.any(|b| b),
            }
        }
    }
}

pub fn assignment(values: &[usize]) -> BTreeMap<Var, usize> {
    POOL.iter().zip(values).map(|(v, &e)| (Var::from(*v), e)).collect()
}
