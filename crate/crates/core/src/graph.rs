//! Finite connected graphs in Serre form.
//!
//! A graph is given by an ordered vertex list and an ordered list of positive
//! directed edges `E+`; every positive edge `x` has an implicit reversal `x~`
//! with `o(x~) = t(x)`, so the full edge set is `E = E+ ⊔ E+~` and the
//! reversal involution is fixed-point-free by construction (a loop's two
//! directions are distinct edges). File order fixes every basis ordering
//! downstream.

use std::fmt;
use thiserror::Error;

pub type VertexId = usize;

/// A directed edge: indices `0..m` are the positive edges in file order,
/// indices `m..2m` their reversals in the same order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct PosEdge {
    name: String,
    origin: VertexId,
    terminus: VertexId,
}

impl PosEdge {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn terminus(&self) -> VertexId {
        self.terminus
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, col {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: duplicate vertex id `{name}`")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: duplicate edge name `{name}`")]
    DuplicateEdge { line: usize, name: String },
    #[error("line {line}: edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { line: usize, edge: String, vertex: String },
    #[error("line {line}: edge name `{name}` ends with `~`, which is reserved for reversals")]
    ReservedEdgeName { line: usize, name: String },
    #[error("missing `vertices:` line")]
    MissingVertices,
    #[error("line {line}: repeated `vertices:` line")]
    RepeatedVertices { line: usize },
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("graph is disconnected: vertex `{unreachable}` is not reachable from `{root}`")]
    Disconnected { root: String, unreachable: String },
    #[error("edge endpoint index {index} out of range (have {vertices} vertices)")]
    EndpointOutOfRange { index: usize, vertices: usize },
}

/// A finite connected directed multigraph with edge involution and chosen
/// orientation. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    pos_edges: Vec<PosEdge>,
    out_adj: Vec<Vec<EdgeId>>, // per vertex, all x in E with o(x) = v, in E order
}

impl Graph {
    /// Builds and validates a graph from vertex names and positive edges
    /// given as `(name, origin index, terminus index)`.
    pub fn build(
        vertices: Vec<String>,
        edges: Vec<(String, usize, usize)>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(GraphError::DuplicateVertex { line: 0, name: v.clone() });
            }
        }
        let n = vertices.len();
        let mut pos_edges = Vec::with_capacity(edges.len());
        for (i, (name, o, t)) in edges.iter().enumerate() {
            if name.ends_with('~') {
                return Err(GraphError::ReservedEdgeName { line: 0, name: name.clone() });
            }
            if edges[..i].iter().any(|(other, _, _)| other == name) {
                return Err(GraphError::DuplicateEdge { line: 0, name: name.clone() });
            }
            for ix in [*o, *t] {
                if ix >= n {
                    return Err(GraphError::EndpointOutOfRange { index: ix, vertices: n });
                }
            }
            pos_edges.push(PosEdge { name: name.clone(), origin: *o, terminus: *t });
        }

        let m = pos_edges.len();
        let mut out_adj = vec![Vec::new(); n];
        for e in 0..2 * m {
            let id = EdgeId(e);
            let o = if e < m { pos_edges[e].origin } else { pos_edges[e - m].terminus };
            out_adj[o].push(id);
        }

        let g = Graph { vertices, pos_edges, out_adj };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out_adj[v] {
                let w = self.terminus(e);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            None => Ok(()),
            Some(v) => Err(GraphError::Disconnected {
                root: self.vertices[0].clone(),
                unreachable: self.vertices[v].clone(),
            }),
        }
    }

    /// Parses the line-oriented graph file format:
    ///
    /// ```text
    /// # comment
    /// vertices: v1 v2
    /// edge a: v1 -> v2
    /// ```
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertices: Option<Vec<String>> = None;
        let mut vertices_line = 0;
        let mut edges: Vec<(String, String, String, usize)> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vertices:") {
                if vertices.is_some() {
                    return Err(GraphError::RepeatedVertices { line: lineno });
                }
                vertices = Some(rest.split_whitespace().map(str::to_owned).collect());
                vertices_line = lineno;
                continue;
            }
            if let Some(rest) = line.strip_prefix("edge") {
                if !rest.starts_with([' ', '\t']) {
                    return Err(syntax(lineno, raw, line, "expected `edge <name>: <u> -> <v>`"));
                }
                let Some((name_part, arrow_part)) = rest.split_once(':') else {
                    return Err(syntax(lineno, raw, line, "missing `:` after edge name"));
                };
                let name = name_part.trim();
                if name.is_empty() || name.split_whitespace().count() != 1 {
                    return Err(syntax(lineno, raw, name_part, "edge name must be one token"));
                }
                let Some((u_part, v_part)) = arrow_part.split_once("->") else {
                    return Err(syntax(lineno, raw, arrow_part, "missing `->` between endpoints"));
                };
                let u = u_part.trim();
                let v = v_part.trim();
                if u.is_empty() || u.split_whitespace().count() != 1 {
                    return Err(syntax(lineno, raw, u_part, "origin must be one vertex id"));
                }
                if v.is_empty() || v.split_whitespace().count() != 1 {
                    return Err(syntax(lineno, raw, v_part, "terminus must be one vertex id"));
                }
                edges.push((name.to_owned(), u.to_owned(), v.to_owned(), lineno));
                continue;
            }
            return Err(syntax(lineno, raw, line, "unrecognized line"));
        }

        let vertices = vertices.ok_or(GraphError::MissingVertices)?;
        if vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(GraphError::DuplicateVertex { line: vertices_line, name: v.clone() });
            }
        }

        let index_of = |name: &str| vertices.iter().position(|v| v == name);
        let mut resolved = Vec::with_capacity(edges.len());
        for (name, u, v, lineno) in &edges {
            if name.ends_with('~') {
                return Err(GraphError::ReservedEdgeName { line: *lineno, name: name.clone() });
            }
            if resolved.iter().any(|(other, _, _): &(String, usize, usize)| other == name) {
                return Err(GraphError::DuplicateEdge { line: *lineno, name: name.clone() });
            }
            let ui = index_of(u).ok_or_else(|| GraphError::UnknownVertex {
                line: *lineno,
                edge: name.clone(),
                vertex: u.clone(),
            })?;
            let vi = index_of(v).ok_or_else(|| GraphError::UnknownVertex {
                line: *lineno,
                edge: name.clone(),
                vertex: v.clone(),
            })?;
            resolved.push((name.clone(), ui, vi));
        }
        Self::build(vertices, resolved)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of positive (geometric) edges.
    pub fn pos_edge_count(&self) -> usize {
        self.pos_edges.len()
    }

    /// Number of directed edges, `2 * pos_edge_count`.
    pub fn edge_count(&self) -> usize {
        2 * self.pos_edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn pos_edges(&self) -> &[PosEdge] {
        &self.pos_edges
    }

    /// All directed edges in canonical order: `E+` then the reversals.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn is_positive(&self, e: EdgeId) -> bool {
        e.0 < self.pos_edges.len()
    }

    /// The reversal involution `x -> x~`.
    pub fn bar(&self, e: EdgeId) -> EdgeId {
        let m = self.pos_edges.len();
        if e.0 < m {
            EdgeId(e.0 + m)
        } else {
            EdgeId(e.0 - m)
        }
    }

    /// Index of the underlying positive edge.
    pub fn pos_index(&self, e: EdgeId) -> usize {
        let m = self.pos_edges.len();
        if e.0 < m {
            e.0
        } else {
            e.0 - m
        }
    }

    pub fn origin(&self, e: EdgeId) -> VertexId {
        let m = self.pos_edges.len();
        if e.0 < m {
            self.pos_edges[e.0].origin
        } else {
            self.pos_edges[e.0 - m].terminus
        }
    }

    pub fn terminus(&self, e: EdgeId) -> VertexId {
        self.origin(self.bar(e))
    }

    pub fn edge_name(&self, e: EdgeId) -> String {
        let m = self.pos_edges.len();
        if e.0 < m {
            self.pos_edges[e.0].name.clone()
        } else {
            format!("{}~", self.pos_edges[e.0 - m].name)
        }
    }

    /// Resolves `a` or `a~` to a directed edge.
    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        if let Some(base) = name.strip_suffix('~') {
            let i = self.pos_edges.iter().position(|e| e.name == base)?;
            Some(EdgeId(i + self.pos_edges.len()))
        } else {
            self.pos_edges.iter().position(|e| e.name == name).map(EdgeId)
        }
    }

    /// Directed edges originating at `v`, in canonical edge order. A loop at
    /// `v` contributes both of its directions.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    pub fn outdegree(&self, v: VertexId) -> usize {
        self.out_adj[v].len()
    }

    /// `|V| - |E+|` (vertices minus geometric edges).
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.pos_edges.len() as i64
    }

    pub fn min_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Canonical text form; `parse` of this is the identity.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::from("vertices:");
        for v in &self.vertices {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        for e in &self.pos_edges {
            out.push_str(&format!(
                "edge {}: {} -> {}\n",
                e.name, self.vertices[e.origin], self.vertices[e.terminus]
            ));
        }
        out
    }

    /// Canonical JSON form for tooling.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.pos_edges.iter().map(|e| serde_json::json!({
                "name": e.name,
                "o": self.vertices[e.origin],
                "t": self.vertices[e.terminus],
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices, {} positive edges, chi = {}",
            self.vertex_count(),
            self.pos_edge_count(),
            self.euler_characteristic()
        )
    }
}

fn syntax(line: usize, raw: &str, at: &str, message: &str) -> GraphError {
    let col = raw.find(at.trim()).map_or(1, |p| p + 1);
    GraphError::Syntax { line, col, message: message.to_owned() }
}
