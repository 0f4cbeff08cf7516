//! Finite directed multigraphs: paths, simple cycles, exits and the path
//! index sets used by the block decomposition.
//!
//! Vertices and edges are stored sorted by identifier, so index order and
//! identifier order coincide. Every "minimal id" or "lexicographic" rule in
//! this crate is therefore a comparison of indices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("empty identifier")]
    EmptyId,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    NoSuchVertex(String),
    #[error("unknown edge `{0}`")]
    NoSuchEdge(String),
    #[error("edges do not compose into a path at position {0}")]
    NotComposable(usize),
    #[error("possibly infinite enumeration of paths into `{0}`; supply a length bound")]
    PossiblyInfinite(String),
    #[error("malformed graph json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: VertexId,
    pub range: VertexId,
}

/// A finite directed multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

/// On-disk shape of a graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, source, range)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(GraphError::Empty);
        }
        if names.iter().any(String::is_empty) {
            return Err(GraphError::EmptyId);
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let vertex_index: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), VertexId(i)))
            .collect();

        let mut raw: Vec<(String, String, String)> = edges
            .into_iter()
            .map(|(e, s, r)| (e.into(), s.into(), r.into()))
            .collect();
        raw.sort();
        let mut edge_list = Vec::with_capacity(raw.len());
        for (i, (id, s, r)) in raw.iter().enumerate() {
            if id.is_empty() {
                return Err(GraphError::EmptyId);
            }
            if i > 0 && raw[i - 1].0 == *id {
                return Err(GraphError::DuplicateEdge(id.clone()));
            }
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex {
                        edge: id.clone(),
                        vertex: v.clone(),
                    })
            };
            edge_list.push(Edge {
                id: id.clone(),
                source: lookup(s)?,
                range: lookup(r)?,
            });
        }
        let edge_index = edge_list
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), EdgeId(i)))
            .collect();
        let mut out_edges = vec![Vec::new(); names.len()];
        let mut in_edges = vec![Vec::new(); names.len()];
        for (i, e) in edge_list.iter().enumerate() {
            out_edges[e.source.0].push(EdgeId(i));
            in_edges[e.range.0].push(EdgeId(i));
        }
        Ok(Graph {
            vertices: names,
            edges: edge_list,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
        })
    }

    pub fn from_spec(spec: GraphSpec) -> Result<Self, GraphError> {
        Graph::new(
            spec.vertices,
            spec.edges.into_iter().map(|e| (e.id, e.src, e.dst)),
        )
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let spec: GraphSpec =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::from_spec(spec)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    src: self.vertex_name(e.source).to_owned(),
                    dst: self.vertex_name(e.range).to_owned(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].range
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].id
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::NoSuchVertex(name.to_owned()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::NoSuchEdge(name.to_owned()))
    }

    /// Edges emitted by `v`, in id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    /// Edges received by `v`, in id order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges[v.0].is_empty()
    }

    /// Regular vertices are exactly the non-sinks, since every vertex of a
    /// finite graph emits finitely many edges.
    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.is_sink(v)
    }

    pub fn sinks(&self) -> BTreeSet<VertexId> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    /// Builds a path from edge names; `base` is required only for the empty path.
    pub fn path_from_names(&self, base: &str, edges: &[&str]) -> Result<Path, GraphError> {
        let base = self.vertex(base)?;
        let edges = edges
            .iter()
            .map(|e| self.edge_by_name(e))
            .collect::<Result<Vec<_>, _>>()?;
        Path::new(self, base, edges)
    }

    /// Every path of length at most `max_len`, sorted by [`Path::order_key`].
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = self.vertices().map(Path::empty).collect();
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for &e in self.out_edges(p.range(self)) {
                    next.push(p.extended(e));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        out
    }

    /// All simple cycles, rotated so the base is the smallest vertex on the
    /// cycle, sorted by base then edge sequence. Parallel edges give distinct
    /// cycles.
    pub fn simple_cycles(&self) -> Vec<Cycle> {
        let mut found = Vec::new();
        for start in self.vertices() {
            let mut on_path = vec![false; self.vertex_count()];
            on_path[start.0] = true;
            let mut edges = Vec::new();
            self.cycle_search(start, start, &mut on_path, &mut edges, &mut found);
        }
        found.sort_by(|a: &Cycle, b: &Cycle| {
            (a.base(), &a.path.edges).cmp(&(b.base(), &b.path.edges))
        });
        found
    }

    fn cycle_search(
        &self,
        start: VertexId,
        at: VertexId,
        on_path: &mut [bool],
        edges: &mut Vec<EdgeId>,
        found: &mut Vec<Cycle>,
    ) {
        for &e in self.out_edges(at) {
            let next = self.range(e);
            if next == start {
                edges.push(e);
                found.push(Cycle {
                    path: Path {
                        base: start,
                        edges: edges.clone(),
                    },
                });
                edges.pop();
            } else if next > start && !on_path[next.0] {
                on_path[next.0] = true;
                edges.push(e);
                self.cycle_search(start, next, on_path, edges, found);
                edges.pop();
                on_path[next.0] = false;
            }
        }
    }

    /// True iff some vertex of `c` emits an edge outside `c`.
    pub fn has_exit(&self, c: &Cycle) -> bool {
        c.path.edges.iter().any(|&ce| {
            self.out_edges(self.source(ce))
                .iter()
                .any(|e| !c.path.edges.contains(e))
        })
    }

    /// No cycle of the graph has an exit. Vacuous for acyclic graphs.
    pub fn no_exit_condition(&self) -> bool {
        self.simple_cycles().iter().all(|c| !self.has_exit(c))
    }

    /// Paths ending at the sink `v`, including the empty path, sorted by
    /// length then edge ids.
    ///
    /// Without a bound the enumeration requires `v` to be a sink of a graph
    /// with no exits, which keeps it finite. With `Some(bound)` it returns the
    /// paths of length at most `bound` regardless.
    pub fn paths_into(&self, v: VertexId, bound: Option<usize>) -> Result<Vec<Path>, GraphError> {
        if bound.is_none() && !(self.is_sink(v) && self.no_exit_condition()) {
            return Err(GraphError::PossiblyInfinite(self.vertex_name(v).to_owned()));
        }
        Ok(self.backward_paths(v, bound, |_| false))
    }

    /// Paths ending at `c.base()` that do not contain the full cycle `c` as a
    /// contiguous sub-path, sorted as in [`Graph::paths_into`].
    pub fn paths_into_cycle(&self, c: &Cycle, bound: Option<usize>) -> Result<Vec<Path>, GraphError> {
        if bound.is_none() && !self.no_exit_condition() {
            return Err(GraphError::PossiblyInfinite(
                self.vertex_name(c.base()).to_owned(),
            ));
        }
        let cycle = &c.path.edges;
        // Prepending edges can only create a new occurrence at the front.
        Ok(self.backward_paths(c.base(), bound, |edges| edges.starts_with(cycle)))
    }

    fn backward_paths<F>(&self, end: VertexId, bound: Option<usize>, reject: F) -> Vec<Path>
    where
        F: Fn(&[EdgeId]) -> bool,
    {
        let mut out = vec![Path::empty(end)];
        let mut stack = vec![Path::empty(end)];
        while let Some(p) = stack.pop() {
            if bound.is_some_and(|b| p.len() >= b) {
                continue;
            }
            for &e in self.in_edges(p.source()) {
                let mut edges = Vec::with_capacity(p.len() + 1);
                edges.push(e);
                edges.extend_from_slice(&p.edges);
                if reject(&edges) {
                    continue;
                }
                let q = Path {
                    base: self.source(e),
                    edges,
                };
                out.push(q.clone());
                stack.push(q);
            }
        }
        out.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        out
    }
}

/// A path in a graph. `base` is the source vertex; it carries the path's
/// position when the edge list is empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    base: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn new(g: &Graph, base: VertexId, edges: Vec<EdgeId>) -> Result<Self, GraphError> {
        if base.0 >= g.vertex_count() {
            return Err(GraphError::NoSuchVertex(format!("#{}", base.0)));
        }
        if let Some(&e) = edges.iter().find(|e| e.0 >= g.edge_count()) {
            return Err(GraphError::NoSuchEdge(format!("#{}", e.0)));
        }
        if let Some(&first) = edges.first() {
            if g.source(first) != base {
                return Err(GraphError::NotComposable(0));
            }
        }
        for (k, w) in edges.windows(2).enumerate() {
            if g.range(w[0]) != g.source(w[1]) {
                return Err(GraphError::NotComposable(k + 1));
            }
        }
        Ok(Path { base, edges })
    }

    pub fn empty(v: VertexId) -> Self {
        Path {
            base: v,
            edges: Vec::new(),
        }
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Self {
        Path {
            base: g.source(e),
            edges: vec![e],
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn source(&self) -> VertexId {
        self.base
    }

    pub fn range(&self, g: &Graph) -> VertexId {
        self.edges.last().map_or(self.base, |&e| g.range(e))
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// `self` followed by `e`; the caller guarantees `s(e) = r(self)`.
    pub fn extended(&self, e: EdgeId) -> Path {
        let mut edges = self.edges.clone();
        edges.push(e);
        Path {
            base: self.base,
            edges,
        }
    }

    /// Concatenation; the caller guarantees `r(self) = s(other)`.
    pub fn concat(&self, other: &Path) -> Path {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path {
            base: self.base,
            edges,
        }
    }

    /// `self` with its last edge removed. Panics on the empty path.
    pub fn without_last(&self, g: &Graph) -> Path {
        let mut edges = self.edges.clone();
        let e = edges.pop().expect("empty path has no last edge");
        Path {
            base: if edges.is_empty() { g.source(e) } else { self.base },
            edges,
        }
    }

    /// If `self` is a prefix of `other` (same source, leading edges equal),
    /// returns the remaining suffix of `other`.
    pub fn strip_prefix_of(&self, g: &Graph, other: &Path) -> Option<Path> {
        if self.base != other.base || !other.edges.starts_with(&self.edges) {
            return None;
        }
        let rest = other.edges[self.edges.len()..].to_vec();
        Some(Path {
            base: self.range(g),
            edges: rest,
        })
    }

    /// Whether `needle` occurs as a contiguous run of edges.
    pub fn contains_subpath(&self, needle: &[EdgeId]) -> bool {
        needle.is_empty() || self.edges.windows(needle.len()).any(|w| w == needle)
    }

    /// Deterministic order: length, then edge ids, then base.
    pub fn order_key(&self) -> (usize, &[EdgeId], VertexId) {
        (self.edges.len(), &self.edges, self.base)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph: g }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str(self.graph.vertex_name(self.path.base));
        }
        let names: Vec<&str> = self
            .path
            .edges
            .iter()
            .map(|&e| self.graph.edge_name(e))
            .collect();
        f.write_str(&names.join("·"))
    }
}

/// A simple closed path rotated so its base is its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    path: Path,
}

impl Cycle {
    /// Builds a cycle from a closed simple path, rotating it to canonical form.
    pub fn from_path(g: &Graph, path: &Path) -> Option<Cycle> {
        if path.is_empty() || path.range(g) != path.source() {
            return None;
        }
        let verts: Vec<VertexId> = path.edges.iter().map(|&e| g.source(e)).collect();
        let distinct: BTreeSet<_> = verts.iter().collect();
        if distinct.len() != verts.len() {
            return None;
        }
        let k = (0..verts.len()).min_by_key(|&i| verts[i])?;
        let mut edges = path.edges[k..].to_vec();
        edges.extend_from_slice(&path.edges[..k]);
        Some(Cycle {
            path: Path {
                base: verts[k],
                edges,
            },
        })
    }

    pub fn base(&self) -> VertexId {
        self.path.base
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `c^k`, the cycle traversed `k` times from its base.
    pub fn power(&self, k: usize) -> Path {
        Path {
            base: self.path.base,
            edges: self.path.edges.repeat(k),
        }
    }

    /// Writes a path ending at the base as `q · c^w` with `q` free of the
    /// full cycle, stripping trailing copies of the cycle.
    pub fn split_trailing_powers(&self, g: &Graph, p: &Path) -> (Path, usize) {
        let mut edges = p.edges.clone();
        let mut w = 0;
        while edges.len() >= self.len() && edges.ends_with(&self.path.edges) {
            edges.truncate(edges.len() - self.len());
            w += 1;
        }
        let base = match edges.first() {
            Some(&e) => g.source(e),
            None => self.path.base,
        };
        (Path { base, edges }, w)
    }
}
