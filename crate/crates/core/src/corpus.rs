//! Small named graphs used by tests, benches and the CLI.

use crate::graph::Graph;

type EdgeList = &'static [(&'static str, &'static str, &'static str)];

const ENTRIES: &[(&str, &[&str], EdgeList)] = &[
    ("a2", &["v1", "v2"], &[("e1", "v1", "v2")]),
    ("a3", &["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]),
    ("loop", &["v"], &[("c", "v", "v")]),
    ("cycle2", &["v1", "v2"], &[("f1", "v1", "v2"), ("f2", "v2", "v1")]),
    (
        "cycle3",
        &["v1", "v2", "v3"],
        &[("f1", "v1", "v2"), ("f2", "v2", "v3"), ("f3", "v3", "v1")],
    ),
    ("parallel", &["v1", "v2"], &[("e1", "v1", "v2"), ("e2", "v1", "v2")]),
    ("sink_loop", &["v1", "v2"], &[("c", "v2", "v2")]),
    (
        "tree5",
        &["v1", "v2", "v3", "v4", "v5"],
        &[("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v2", "v4"), ("e4", "v3", "v5")],
    ),
    (
        "fed_cycle",
        &["v1", "v2", "v3", "v4"],
        &[("e1", "v1", "v2"), ("e2", "v2", "v3"), ("f1", "v3", "v4"), ("f2", "v4", "v3")],
    ),
    ("toeplitz", &["v1", "v2"], &[("c", "v1", "v1"), ("e", "v1", "v2")]),
    ("rose2", &["v"], &[("c1", "v", "v"), ("c2", "v", "v")]),
];

/// Graphs in which no cycle has an exit.
pub const NO_EXIT: &[&str] = &[
    "a2", "a3", "loop", "cycle2", "cycle3", "parallel", "sink_loop", "tree5", "fed_cycle",
];

/// Graphs with an exit from some cycle.
pub const WITH_EXIT: &[&str] = &["toeplitz", "rose2"];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _, _)| *n)
}

pub fn get(name: &str) -> Option<Graph> {
    ENTRIES.iter().find(|(n, _, _)| *n == name).map(|(_, vs, es)| {
        Graph::new(vs.iter().copied(), es.iter().copied()).expect("corpus graphs are well formed")
    })
}
