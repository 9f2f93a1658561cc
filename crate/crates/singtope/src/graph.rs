//! Weighted trees, their textual formats, and the two plumbing moves.
//!
//! A [`WeightedGraph`] is always a simple connected tree whose vertices are
//! indexed `0..n` without gaps. Three input formats are accepted by
//! [`WeightedGraph::parse`]: a line-oriented text format, a JSON document,
//! and a star shorthand (`star center=-2 arms=[-2,-2|-3]`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("malformed graph syntax at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("vertex {id} has weight {weight}; weights must be negative")]
    NonNegativeWeight { id: usize, weight: i64 },
    #[error("vertex ids must cover 0..{expected} without gaps (saw {saw})")]
    BadVertexIds { expected: usize, saw: usize },
    #[error("vertex {id} declared twice")]
    DuplicateVertex { id: usize },
    #[error("edge {u}-{v} references an unknown vertex")]
    UnknownEndpoint { u: usize, v: usize },
    #[error("edge {u}-{v} is a self-loop")]
    SelfLoop { u: usize, v: usize },
    #[error("edge {u}-{v} declared twice")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph contains a cycle; only trees are supported")]
    Cyclic,
    #[error("no edge {u}-{v} to blow up")]
    NoSuchEdge { u: usize, v: usize },
    #[error("contraction of vertex {vertex} would {reason}")]
    InvalidContraction { vertex: usize, reason: String },
    #[error("graph has {vertices} vertices; general canonicalization is capped at {cap}")]
    TooLargeForCanonicalForm { vertices: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub weight: i64,
    #[serde(default)]
    pub genus: u32,
}

impl Vertex {
    pub fn new(id: usize, weight: i64) -> Self {
        Vertex { id, weight, genus: 0 }
    }

    pub fn with_genus(id: usize, weight: i64, genus: u32) -> Self {
        Vertex { id, weight, genus }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

/// A simple connected weighted tree. Vertex `i` of [`Self::vertices`] has
/// id `i`; edges are stored as ordered pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphWire", into = "GraphWire")]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl TryFrom<GraphWire> for WeightedGraph {
    type Error = GraphError;

    fn try_from(wire: GraphWire) -> Result<Self, GraphError> {
        WeightedGraph::new(wire.vertices, wire.edges)
    }
}

impl From<WeightedGraph> for GraphWire {
    fn from(g: WeightedGraph) -> GraphWire {
        GraphWire { vertices: g.vertices, edges: g.edges }
    }
}

impl WeightedGraph {
    /// Validates and builds a graph. Vertices may arrive in any order but
    /// their ids must cover `0..n` exactly once; every weight must be
    /// negative; the edge set must describe a simple connected tree.
    pub fn new(mut vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = vertices.len();
        vertices.sort_by_key(|v| v.id);
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                if i > 0 && vertices[i - 1].id == v.id {
                    return Err(GraphError::DuplicateVertex { id: v.id });
                }
                return Err(GraphError::BadVertexIds { expected: n, saw: v.id });
            }
            if v.weight >= 0 {
                return Err(GraphError::NonNegativeWeight { id: v.id, weight: v.weight });
            }
        }

        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(GraphError::UnknownEndpoint { u: a, v: b });
            }
            if a == b {
                return Err(GraphError::SelfLoop { u: a, v: b });
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge { u: w[0].0, v: w[0].1 });
            }
        }

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }

        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        if reached != n {
            return Err(GraphError::Disconnected);
        }
        if normalized.len() != n - 1 {
            return Err(GraphError::Cyclic);
        }

        Ok(WeightedGraph { vertices, edges: normalized, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.vertices[v].weight
    }

    pub fn genus(&self, v: usize) -> u32 {
        self.vertices[v].genus
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Number of incident edges of `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn max_abs_weight(&self) -> i64 {
        self.vertices.iter().map(|v| v.weight.abs()).max().unwrap_or(1)
    }

    /// Parses any of the three supported formats, chosen by inspection:
    /// JSON documents start with `{`, the star shorthand with `star` or
    /// `center=`, everything else is treated as the line format.
    pub fn parse(input: &str) -> Result<Self, GraphError> {
        let trimmed = input.trim_start();
        if trimmed.starts_with('{') {
            return serde_json::from_str(input).map_err(|e| GraphError::Malformed {
                line: e.line(),
                reason: e.to_string(),
            });
        }
        if trimmed.starts_with("star") || trimmed.starts_with("center=") {
            return Self::parse_star(trimmed);
        }
        Self::parse_text(input)
    }

    /// Line format:
    ///
    /// ```text
    /// vertices: 4
    /// v 0 -2
    /// v 1 -2 genus=1
    /// e 0 1
    /// ```
    ///
    /// Blank lines and `#` comments are skipped.
    pub fn parse_text(input: &str) -> Result<Self, GraphError> {
        let mut declared: Option<usize> = None;
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();

        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |reason: &str| GraphError::Malformed {
                line: line_no,
                reason: reason.to_string(),
            };
            if declared.is_none() {
                let rest = line
                    .strip_prefix("vertices:")
                    .ok_or_else(|| malformed("expected `vertices: <count>` header"))?;
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| malformed("vertex count is not a number"))?;
                declared = Some(n);
                continue;
            }
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("v") => {
                    let id: usize = fields
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed("vertex line needs `v <id> <weight>`"))?;
                    let weight: i64 = fields
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed("vertex line needs an integer weight"))?;
                    let mut genus = 0u32;
                    if let Some(extra) = fields.next() {
                        genus = extra
                            .strip_prefix("genus=")
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| malformed("trailing vertex field must be `genus=<g>`"))?;
                    }
                    if fields.next().is_some() {
                        return Err(malformed("unexpected trailing fields on vertex line"));
                    }
                    vertices.push(Vertex::with_genus(id, weight, genus));
                }
                Some("e") => {
                    let u: usize = fields
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed("edge line needs `e <id> <id>`"))?;
                    let v: usize = fields
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed("edge line needs two vertex ids"))?;
                    if fields.next().is_some() {
                        return Err(malformed("unexpected trailing fields on edge line"));
                    }
                    edges.push((u, v));
                }
                _ => return Err(malformed("expected a `v` or `e` line")),
            }
        }

        let declared = declared.ok_or(GraphError::Malformed {
            line: 1,
            reason: "missing `vertices: <count>` header".to_string(),
        })?;
        if vertices.len() != declared {
            return Err(GraphError::Malformed {
                line: 1,
                reason: format!("header declares {declared} vertices, found {}", vertices.len()),
            });
        }
        Self::new(vertices, edges)
    }

    /// Star shorthand: `star center=<w> arms=[-2,-2|-3|-2]`. The leading
    /// `star` keyword is optional; `arms=[]` yields a single vertex. The
    /// center gets id 0, arms are numbered outward in declaration order.
    pub fn parse_star(input: &str) -> Result<Self, GraphError> {
        let malformed = |reason: &str| GraphError::Malformed { line: 1, reason: reason.to_string() };
        let body = input.trim().strip_prefix("star").unwrap_or(input.trim()).trim();
        let rest = body
            .strip_prefix("center=")
            .ok_or_else(|| malformed("star shorthand must start with `center=<weight>`"))?;
        let (center_tok, rest) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| malformed("expected `arms=[...]` after the center weight"))?;
        let center_weight: i64 = center_tok
            .trim()
            .parse()
            .map_err(|_| malformed("center weight is not an integer"))?;
        let arms_body = rest
            .trim()
            .strip_prefix("arms=[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| malformed("expected `arms=[...]`"))?;

        let mut vertices = vec![Vertex::new(0, center_weight)];
        let mut edges = Vec::new();
        if !arms_body.trim().is_empty() {
            for arm in arms_body.split('|') {
                let mut prev = 0usize;
                for tok in arm.split(',') {
                    let weight: i64 = tok
                        .trim()
                        .parse()
                        .map_err(|_| malformed("arm weights must be integers"))?;
                    let id = vertices.len();
                    vertices.push(Vertex::new(id, weight));
                    edges.push((prev, id));
                    prev = id;
                }
            }
        }
        Self::new(vertices, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertex_count());
        for v in &self.vertices {
            if v.genus == 0 {
                out.push_str(&format!("v {} {}\n", v.id, v.weight));
            } else {
                out.push_str(&format!("v {} {} genus={}\n", v.id, v.weight, v.genus));
            }
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    /// Graphviz output. Vertex labels carry the weight, with the genus
    /// appended as `[g]` when nonzero; vertices and edges appear in id order
    /// so the output is stable.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph singtope {\n  node [shape=circle];\n");
        for v in &self.vertices {
            let label = if v.genus == 0 {
                format!("{}", v.weight)
            } else {
                format!("{} [{}]", v.weight, v.genus)
            };
            out.push_str(&format!("  v{} [label=\"{}\"];\n", v.id, label));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  v{u} -- v{v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// A star decomposition: a designated center plus the arms hanging off it,
/// each arm listed center-outward by vertex id.
///
/// Bamboos (paths) are star-shaped too; their designated center is the end
/// vertex with the smallest id. None of the classification logic depends on
/// that choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarDecomposition {
    pub center: usize,
    pub arms: Vec<Vec<usize>>,
}

impl StarDecomposition {
    pub fn arm_weights(&self, g: &WeightedGraph, arm: usize) -> Vec<i64> {
        self.arms[arm].iter().map(|&v| g.weight(v)).collect()
    }
}

/// `Some` iff the tree has at most one vertex of valence ≥ 3.
pub fn star_decomposition(g: &WeightedGraph) -> Option<StarDecomposition> {
    let n = g.vertex_count();
    let branch_points: Vec<usize> = (0..n).filter(|&v| g.valence(v) >= 3).collect();
    let center = match branch_points.len() {
        0 => (0..n).filter(|&v| g.valence(v) <= 1).min()?,
        1 => branch_points[0],
        _ => return None,
    };

    let mut arms = Vec::new();
    for &first in g.neighbors(center) {
        let mut arm = vec![first];
        let mut prev = center;
        let mut cur = first;
        while let Some(&next) = g.neighbors(cur).iter().find(|&&u| u != prev) {
            arm.push(next);
            prev = cur;
            cur = next;
        }
        arms.push(arm);
    }
    arms.sort_by_key(|arm| arm[0]);
    Some(StarDecomposition { center, arms })
}

fn remove_vertex(g: &WeightedGraph, victim: usize, weight_bump: &[usize], extra_edge: Option<(usize, usize)>) -> Result<WeightedGraph, GraphError> {
    let remap = |v: usize| if v > victim { v - 1 } else { v };
    let mut vertices = Vec::with_capacity(g.vertex_count() - 1);
    for v in g.vertices() {
        if v.id == victim {
            continue;
        }
        let mut w = v.weight;
        if weight_bump.contains(&v.id) {
            w += 1;
        }
        if w >= 0 {
            return Err(GraphError::InvalidContraction {
                vertex: victim,
                reason: format!("push the weight of vertex {} to {w}", v.id),
            });
        }
        vertices.push(Vertex::with_genus(remap(v.id), w, v.genus));
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| u != victim && v != victim)
        .map(|&(u, v)| (remap(u), remap(v)))
        .collect();
    if let Some((a, b)) = extra_edge {
        edges.push((remap(a), remap(b)));
    }
    WeightedGraph::new(vertices, edges)
}

fn contract(g: &WeightedGraph, v: usize) -> Result<WeightedGraph, GraphError> {
    match *g.neighbors(v) {
        [a] => remove_vertex(g, v, &[a], None),
        [a, b] => {
            if g.has_edge(a, b) {
                return Err(GraphError::InvalidContraction {
                    vertex: v,
                    reason: format!("create a multi-edge between {a} and {b}"),
                });
            }
            remove_vertex(g, v, &[a, b], Some((a, b)))
        }
        _ => Err(GraphError::InvalidContraction {
            vertex: v,
            reason: "contract a vertex of valence > 2".to_string(),
        }),
    }
}

fn contraction_candidates(g: &WeightedGraph) -> Vec<usize> {
    if g.vertex_count() == 1 {
        return Vec::new();
    }
    (0..g.vertex_count())
        .filter(|&v| g.weight(v) == -1 && g.genus(v) == 0 && g.valence(v) <= 2)
        .collect()
}

/// Repeatedly contracts genus-0 vertices of weight −1 and valence ≤ 2 until
/// none remain, always picking the lowest-id candidate. The result is
/// independent of the contraction order (up to isomorphism); see
/// [`blow_down_choosing`] to exercise other orders.
pub fn blow_down(g: &WeightedGraph) -> Result<WeightedGraph, GraphError> {
    blow_down_choosing(g, |candidates| candidates[0])
}

/// Blow-down with an explicit choice function, called with the non-empty
/// candidate list at every round.
pub fn blow_down_choosing(
    g: &WeightedGraph,
    mut choose: impl FnMut(&[usize]) -> usize,
) -> Result<WeightedGraph, GraphError> {
    let mut work = g.clone();
    loop {
        let candidates = contraction_candidates(&work);
        if candidates.is_empty() {
            return Ok(work);
        }
        let v = choose(&candidates);
        debug_assert!(candidates.contains(&v));
        work = contract(&work, v)?;
    }
}

/// Inserts a new weight −1, genus-0 vertex in the middle of the edge
/// `{u, v}` and lowers the weights of `u` and `v` by one. The new vertex
/// gets the next free id.
pub fn blow_up_edge(g: &WeightedGraph, u: usize, v: usize) -> Result<WeightedGraph, GraphError> {
    if !g.has_edge(u, v) {
        return Err(GraphError::NoSuchEdge { u, v });
    }
    let fresh = g.vertex_count();
    let mut vertices = g.vertices().to_vec();
    for w in &mut vertices {
        if w.id == u || w.id == v {
            w.weight -= 1;
        }
    }
    vertices.push(Vertex::new(fresh, -1));
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&e| e != (u.min(v), u.max(v)))
        .collect();
    edges.push((u, fresh));
    edges.push((v, fresh));
    WeightedGraph::new(vertices, edges)
}
