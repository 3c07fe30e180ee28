//! Acyclic indexing, and the direct acyclicity check on the variable graph.
//!
//! Acyclic indexing ignores the difference between `in` and `=`: whichever
//! side of an atom is indexed first with `n`, the other side gets `n + 1`.
//! The first variable gets 1. A later atom is seeded at the variable whose
//! highest index so far is larger (new variables count as 0, ties go to the
//! first variable), and that occurrence reuses that highest index.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::formula::{AtomOccurrence, Formula, Var, VarGraph};
use crate::indexing::{rng_summary, run_schedule, IndexingError, OccurrenceIndexing, Origin, RngSummary, SeedRule};

struct AcyclicRule;

impl SeedRule for AcyclicRule {
    fn seed(&self, _atom: &AtomOccurrence, left_high: Option<u32>, right_high: Option<u32>) -> (u32, u32) {
        match (left_high.unwrap_or(0), right_high.unwrap_or(0)) {
            (0, 0) => (1, 2),
            (l, r) if l >= r => (l, l + 1),
            (_, r) => (r + 1, r),
        }
    }
}

pub fn acyclic_index(f: &Formula) -> Result<OccurrenceIndexing, IndexingError> {
    run_schedule(f, Origin::Acyclic, &AcyclicRule)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicVerdict {
    pub acyclic: bool,
    pub summary: RngSummary,
}

pub fn acyclic_verdict(f: &Formula) -> Result<AcyclicVerdict, IndexingError> {
    let summary = rng_summary(&acyclic_index(f)?);
    Ok(AcyclicVerdict {
        acyclic: summary.is_functional(),
        summary,
    })
}

/// True iff the multigraph has no cycle. Self-loops and parallel edges are
/// cycles; a DFS skips only the very edge it arrived by.
pub fn graph_acyclic(g: &VarGraph) -> bool {
    let ids: BTreeMap<&Var, usize> = g.nodes.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ids.len()];
    for (e, (a, b, _)) in g.edges.iter().enumerate() {
        let (a, b) = (ids[a], ids[b]);
        if a == b {
            return false;
        }
        adj[a].push((b, e));
        adj[b].push((a, e));
    }

    let mut visited = vec![false; ids.len()];
    for root in 0..ids.len() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, usize::MAX)];
        while let Some((u, via)) = stack.pop() {
            for &(v, e) in &adj[u] {
                if e == via {
                    continue;
                }
                if visited[v] {
                    return false;
                }
                visited[v] = true;
                stack.push((v, e));
            }
        }
    }
    true
}

/// Graphviz text: nodes sorted, edges in atom order labelled `position:rel`.
pub fn to_dot(g: &VarGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in &g.nodes {
        writeln!(out, "  \"{v}\";").unwrap();
    }
    for (i, (a, b, rel)) in g.edges.iter().enumerate() {
        writeln!(out, "  \"{a}\" -- \"{b}\" [label=\"{i}:{}\"];", rel.symbol()).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{build_var_graph, parse, Relation};

    fn idx(text: &str) -> Vec<u32> {
        acyclic_index(&parse(text).unwrap()).unwrap().indices().to_vec()
    }

    #[test]
    fn worked_square() {
        let text = "x in y & z in y & k in x & k in z";
        assert_eq!(idx(text), [1, 2, 3, 2, 2, 1, 4, 3]);
        let v = acyclic_verdict(&parse(text).unwrap()).unwrap();
        assert!(!v.acyclic);
        assert_eq!((v.summary.total, v.summary.var_count), (5, 4));
        assert_eq!(v.summary.rng[&Var::from("k")], 2);
    }

    #[test]
    fn paths() {
        assert_eq!(idx("x in y"), [1, 2]);
        assert_eq!(idx("x in y & y in z"), [1, 2, 2, 3]);
        assert!(acyclic_verdict(&parse("x in y & y in z").unwrap()).unwrap().acyclic);
    }

    #[test]
    fn equality_also_steps() {
        assert_eq!(idx("x = y & y = z"), [1, 2, 2, 3]);
    }

    #[test]
    fn self_loop_is_cyclic() {
        assert_eq!(idx("x in x"), [1, 2]);
        assert!(!acyclic_verdict(&parse("x in x").unwrap()).unwrap().acyclic);
    }

    #[test]
    fn graph_oracle() {
        let square = build_var_graph(&parse("x in y & z in y & k in x & k in z").unwrap());
        assert!(!graph_acyclic(&square));
        assert!(graph_acyclic(&build_var_graph(&parse("x in y").unwrap())));
        assert!(!graph_acyclic(&build_var_graph(&parse("x in y & x in y").unwrap())));
        assert!(!graph_acyclic(&build_var_graph(&parse("x = x").unwrap())));
        assert!(graph_acyclic(&build_var_graph(
            &parse("x in y & a in b & y = a").unwrap()
        )));
    }

    #[test]
    fn parallel_edges_grow_range() {
        let v = acyclic_verdict(&parse("x in y & x in y").unwrap()).unwrap();
        assert!(!v.acyclic);
    }

    #[test]
    fn dot_output() {
        let g = build_var_graph(&parse("x in y & z = y").unwrap());
        assert_eq!(
            to_dot(&g),
            "graph G {\n  \"x\";\n  \"y\";\n  \"z\";\n  \"x\" -- \"y\" [label=\"0:in\"];\n  \"z\" -- \"y\" [label=\"1:=\"];\n}\n"
        );
        let single = VarGraph::from_edges([(Var::from("b"), Var::from("a"), Relation::Member)]);
        assert!(to_dot(&single).starts_with("graph G {\n  \"a\";\n  \"b\";\n"));
        let square = build_var_graph(&parse("x in y & z in y & k in x & k in z").unwrap());
        assert_eq!(to_dot(&square).lines().count(), 10);
    }
}
