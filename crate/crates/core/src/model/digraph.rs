use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ModelError;

/// A subset of the universe `0..n`, standing for a class.
pub type ClassSubset = BTreeSet<usize>;

/// Finite membership structure: `(y, x)` in the relation means `y ∈ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    /// `member[y * n + x]` iff `y ∈ x`
    member: Vec<bool>,
    extensions: Vec<ClassSubset>,
    names: BTreeMap<usize, String>,
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ModelError> {
        let mut member = vec![false; n * n];
        let mut extensions = vec![ClassSubset::new(); n];
        for (y, x) in edges {
            for e in [y, x] {
                if e >= n {
                    return Err(ModelError::Range { element: e, n });
                }
            }
            member[y * n + x] = true;
            extensions[x].insert(y);
        }
        Ok(Digraph {
            n,
            member,
            extensions,
            names: BTreeMap::new(),
        })
    }

    /// Builds from the member sets of each element in turn.
    pub fn from_extensions(exts: &[&[usize]]) -> Result<Self, ModelError> {
        let edges = exts
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (y, x)));
        Self::new(exts.len(), edges)
    }

    pub fn with_names(mut self, names: impl IntoIterator<Item = (usize, String)>) -> Result<Self, ModelError> {
        for (e, name) in names {
            if e >= self.n {
                return Err(ModelError::Range { element: e, n: self.n });
            }
            self.names.insert(e, name);
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn contains(&self, y: usize, x: usize) -> bool {
        self.member[y * self.n + x]
    }

    pub fn extension(&self, x: usize) -> Result<&ClassSubset, ModelError> {
        self.extensions
            .get(x)
            .ok_or(ModelError::Range { element: x, n: self.n })
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for &y in &self.extensions[x] {
                out.push((y, x));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn name(&self, x: usize) -> Option<&str> {
        self.names.get(&x).map(String::as_str)
    }

    pub fn label(&self, x: usize) -> String {
        match self.name(x) {
            Some(n) => format!("{x}:{n}"),
            None => x.to_string(),
        }
    }

    /// The first pair of distinct elements with equal extensions, if any.
    pub fn duplicate_extension(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<&ClassSubset, usize> = HashMap::new();
        for x in 0..self.n {
            if let Some(&first) = seen.get(&self.extensions[x]) {
                return Some((first, x));
            }
            seen.insert(&self.extensions[x], x);
        }
        None
    }

    pub fn is_extensional(&self) -> bool {
        self.duplicate_extension().is_none()
    }

    /// The element whose extension is exactly `set`.
    pub fn element_with_extension(&self, set: &ClassSubset) -> Option<usize> {
        self.extensions.iter().position(|e| e == set)
    }

    pub(crate) fn extensions(&self) -> &[ClassSubset] {
        &self.extensions
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            n: self.n,
            edges: self.edges().into_iter().map(|(y, x)| [y, x]).collect(),
            names: self.names.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }
}

/// JSON model file: `{"n": 3, "edges": [[0, 1]], "names": {"0": "empty"}}`,
/// where `[y, x]` encodes `y ∈ x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub names: BTreeMap<String, String>,
}

impl TryFrom<ModelFile> for Digraph {
    type Error = ModelError;

    fn try_from(file: ModelFile) -> Result<Self, ModelError> {
        let d = Digraph::new(file.n, file.edges.iter().map(|&[y, x]| (y, x)))?;
        let names = file
            .names
            .into_iter()
            .map(|(k, v)| {
                k.parse::<usize>()
                    .map(|e| (e, v))
                    .map_err(|_| ModelError::InvalidModel(format!("name key `{k}` is not an element")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        d.with_names(names)
    }
}
