use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::digraph::{ClassSubset, Digraph};
use super::ModelError;

/// Default ceiling on universe size for exhaustive permutation search (8! = 40320).
pub const DEFAULT_PERMUTATION_LIMIT: usize = 8;

/// A bijection of `0..n`, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, ModelError> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(ModelError::InvalidPermutation(image));
            }
        }
        Ok(Permutation(image))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation(image)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// Cycle notation, fixed points omitted; `id` for the identity.
    pub fn cycles(&self) -> String {
        let mut seen = vec![false; self.len()];
        let mut out = String::new();
        for start in 0..self.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            let parts: Vec<String> = cycle.iter().map(usize::to_string).collect();
            out.push_str(&format!("({})", parts.join(" ")));
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }

    /// Advances to the lexicographically next permutation; false after the last.
    fn advance(&mut self) -> bool {
        let v = &mut self.0;
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = ModelError;
    fn try_from(v: Vec<usize>) -> Result<Self, ModelError> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles())
    }
}

/// `f``X`, the pointwise image.
pub fn image_class(f: &Permutation, x: &ClassSubset) -> ClassSubset {
    x.iter().map(|&y| f.apply(y)).collect()
}

/// `f` maps `X` onto itself.
pub fn permutes(f: &Permutation, x: &ClassSubset) -> bool {
    x.iter().all(|&y| x.contains(&f.apply(y)))
}

/// Why `j'f` is not a permutation of the digraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JLiftFailure {
    /// Two elements share an extension, so images are not unique.
    NonExtensional { first: usize, second: usize },
    /// No element has extension `f``ext(element)`.
    Undefined { element: usize },
}

/// The lift `x ↦ f``x`: the permutation `g` with `ext(g(x)) = f``ext(x)`.
pub fn j_lift(d: &Digraph, f: &Permutation) -> Result<Permutation, JLiftFailure> {
    if let Some((first, second)) = d.duplicate_extension() {
        return Err(JLiftFailure::NonExtensional { first, second });
    }
    let by_ext: HashMap<&ClassSubset, usize> = d.extensions().iter().enumerate().map(|(x, e)| (e, x)).collect();
    let mut image = Vec::with_capacity(d.len());
    for (x, ext) in d.extensions().iter().enumerate() {
        match by_ext.get(&image_class(f, ext)) {
            Some(&g) => image.push(g),
            None => return Err(JLiftFailure::Undefined { element: x }),
        }
    }
    // distinct extensions have distinct images, so `image` is injective
    Ok(Permutation(image))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Level {
    /// Any bijection of the universe.
    Zero,
    /// Also fixes the class setwise.
    One,
    /// Also the lift fixes the class setwise.
    Two,
}

impl TryFrom<u8> for Level {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(Level::Zero),
            1 => Ok(Level::One),
            2 => Ok(Level::Two),
            _ => Err(format!("permutation level must be 0, 1 or 2, got {v}")),
        }
    }
}

impl From<Level> for u8 {
    fn from(l: Level) -> u8 {
        l as u8
    }
}

pub fn permute_level(d: &Digraph, f: &Permutation, x: &ClassSubset, level: Level) -> bool {
    match level {
        Level::Zero => true,
        Level::One => permutes(f, x),
        Level::Two => permutes(f, x) && j_lift(d, f).is_ok_and(|g| permutes(&g, x)),
    }
}

/// Lexicographic walk over all permutations of the universe, yielding those
/// meeting every `(class, level)` constraint.
pub struct PermutationStream<'d> {
    digraph: &'d Digraph,
    constraints: Vec<(ClassSubset, Level)>,
    next: Option<Permutation>,
    rejected: usize,
}

impl PermutationStream<'_> {
    /// Permutations skipped so far for failing a constraint.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    fn accepts(&self, f: &Permutation) -> bool {
        self.constraints
            .iter()
            .all(|(x, l)| permute_level(self.digraph, f, x, *l))
    }
}

impl Iterator for PermutationStream<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        loop {
            let current = self.next.take()?;
            let mut following = current.clone();
            if following.advance() {
                self.next = Some(following);
            }
            if self.accepts(&current) {
                return Some(current);
            }
            self.rejected += 1;
        }
    }
}

pub fn enumerate_permutations(
    d: &Digraph,
    constraints: Vec<(ClassSubset, Level)>,
    limit: usize,
) -> Result<PermutationStream<'_>, ModelError> {
    if d.len() > limit {
        return Err(ModelError::SizeLimit { n: d.len(), limit });
    }
    Ok(PermutationStream {
        digraph: d,
        constraints,
        next: Some(Permutation::identity(d.len())),
        rejected: 0,
    })
}

/// `draws` uniformly random permutations from a seeded generator, keeping
/// those that meet the constraints, sorted and deduplicated.
pub fn sample_permutations(
    d: &Digraph,
    constraints: &[(ClassSubset, Level)],
    draws: usize,
    seed: u64,
) -> Vec<Permutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Permutation> = (0..draws)
        .map(|_| {
            let mut image: Vec<usize> = (0..d.len()).collect();
            image.shuffle(&mut rng);
            Permutation(image)
        })
        .filter(|f| constraints.iter().all(|(x, l)| permute_level(d, f, x, *l)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// All `f` with `y ∈ x ⟺ f(y) ∈ f(x)`, in lexicographic order.
pub fn automorphisms(d: &Digraph, limit: usize) -> Result<Vec<Permutation>, ModelError> {
    if d.len() > limit {
        return Err(ModelError::SizeLimit { n: d.len(), limit });
    }
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(d.len());
    let mut used = vec![false; d.len()];
    extend_automorphism(d, &mut image, &mut used, &mut out);
    Ok(out)
}

fn extend_automorphism(d: &Digraph, image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    let x = image.len();
    if x == d.len() {
        out.push(Permutation(image.clone()));
        return;
    }
    for fx in 0..d.len() {
        if used[fx] {
            continue;
        }
        let consistent = d.contains(x, x) == d.contains(fx, fx)
            && (0..x).all(|y| {
                let fy = image[y];
                d.contains(y, x) == d.contains(fy, fx) && d.contains(x, y) == d.contains(fx, fy)
            });
        if consistent {
            used[fx] = true;
            image.push(fx);
            extend_automorphism(d, image, used, out);
            image.pop();
            used[fx] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> ClassSubset {
        xs.iter().copied().collect()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
        assert!(Permutation::new(vec![1, 0]).is_ok());
        assert!(serde_json::from_str::<Permutation>("[0,0]").is_err());
    }

    #[test]
    fn image_and_permutes() {
        let id = Permutation::identity(2);
        let sw = Permutation::swap(2, 0, 1);
        assert_eq!(image_class(&id, &set(&[0])), set(&[0]));
        assert_eq!(image_class(&sw, &set(&[0])), set(&[1]));
        assert_eq!(image_class(&sw, &set(&[0, 1])), set(&[0, 1]));
        assert!(permutes(&id, &set(&[0])));
        assert!(!permutes(&sw, &set(&[0])));
        assert!(permutes(&sw, &set(&[0, 1])));
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(Permutation::identity(3).to_string(), "id");
        assert_eq!(Permutation::swap(4, 1, 3).to_string(), "(1 3)");
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().to_string(), "(0 1 2)");
    }

    #[test]
    fn j_lift_of_identity() {
        let d = Digraph::from_extensions(&[&[], &[0], &[0, 1]]).unwrap();
        assert_eq!(j_lift(&d, &Permutation::identity(3)), Ok(Permutation::identity(3)));
    }

    #[test]
    fn j_lift_undefined() {
        // a = ∅, b = {a}; swapping them sends ext(b) = {a} to {b}, which nothing realizes
        let d = Digraph::from_extensions(&[&[], &[0]]).unwrap();
        assert_eq!(
            j_lift(&d, &Permutation::swap(2, 0, 1)),
            Err(JLiftFailure::Undefined { element: 1 })
        );
    }

    #[test]
    fn j_lift_of_automorphism_is_itself() {
        let d = Digraph::from_extensions(&[&[1], &[0]]).unwrap();
        let sw = Permutation::swap(2, 0, 1);
        assert_eq!(j_lift(&d, &sw), Ok(sw));
    }

    #[test]
    fn j_lift_non_extensional() {
        let d = Digraph::from_extensions(&[&[], &[0], &[0]]).unwrap();
        assert_eq!(
            j_lift(&d, &Permutation::identity(3)),
            Err(JLiftFailure::NonExtensional { first: 1, second: 2 })
        );
    }

    #[test]
    fn levels() {
        let russell = Digraph::from_extensions(&[&[], &[0]]).unwrap();
        let sw = Permutation::swap(2, 0, 1);
        let r = set(&[0, 1]);
        assert!(permute_level(&russell, &sw, &set(&[0]), Level::Zero));
        assert!(permute_level(&russell, &sw, &r, Level::One));
        assert!(!permute_level(&russell, &sw, &r, Level::Two));

        let two_cycle = Digraph::from_extensions(&[&[1], &[0]]).unwrap();
        assert!(permute_level(&two_cycle, &sw, &r, Level::Two));
    }

    #[test]
    fn enumeration_counts() {
        let d = Digraph::new(3, []).unwrap();
        let all: Vec<_> = enumerate_permutations(&d, vec![], 8).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));

        let russell = Digraph::from_extensions(&[&[], &[0]]).unwrap();
        let both: Vec<_> = enumerate_permutations(&russell, vec![(set(&[0, 1]), Level::One)], 8)
            .unwrap()
            .collect();
        assert_eq!(both.len(), 2);

        let mut stream = enumerate_permutations(&russell, vec![(set(&[0, 1]), Level::Two)], 8).unwrap();
        let only: Vec<_> = stream.by_ref().collect();
        assert_eq!(only, vec![Permutation::identity(2)]);
        assert_eq!(stream.rejected(), 1);
    }

    #[test]
    fn enumeration_size_limit() {
        let d = Digraph::new(9, []).unwrap();
        assert!(matches!(
            enumerate_permutations(&d, vec![], 8),
            Err(ModelError::SizeLimit { n: 9, limit: 8 })
        ));
        assert!(enumerate_permutations(&d, vec![], 9).is_ok());
    }

    #[test]
    fn automorphism_examples() {
        let chain = Digraph::from_extensions(&[&[], &[0], &[1]]).unwrap();
        assert_eq!(automorphisms(&chain, 8).unwrap(), vec![Permutation::identity(3)]);

        let two_cycle = Digraph::from_extensions(&[&[1], &[0]]).unwrap();
        assert_eq!(
            automorphisms(&two_cycle, 8).unwrap(),
            vec![Permutation::identity(2), Permutation::swap(2, 0, 1)]
        );

        let empty = Digraph::new(2, []).unwrap();
        assert_eq!(automorphisms(&empty, 8).unwrap().len(), 2);
    }

    #[test]
    fn sampling_is_reproducible() {
        let d = Digraph::new(10, []).unwrap();
        let a = sample_permutations(&d, &[], 50, 7);
        let b = sample_permutations(&d, &[], 50, 7);
        assert_eq!(a, b);
        assert!(!a.is_empty());
        let fixed = sample_permutations(&d, &[(set(&[0]), Level::One)], 200, 7);
        assert!(fixed.iter().all(|f| f.apply(0) == 0));
    }
}
