//! Embedded planar graphs given by rotation systems.
//!
//! A graph is stored as one cyclic neighbour list per vertex (the
//! combinatorial embedding). Faces are the orbits of the next-edge walk:
//! arriving along `u -> v`, the walk leaves `v` along the neighbour that
//! follows `u` in the rotation of `v`. Graphs parsed from a plain edge
//! list carry no embedding and reject face queries.
//!
//! Two text formats are supported:
//!
//! ```text
//! planar <n>
//! 0: 1 4
//! 1: 2 0
//! ...
//! ```
//!
//! one line per vertex with its cyclic neighbour order, and
//!
//! ```text
//! graph <n>
//! 0 1
//! 1 2
//! ```
//!
//! one line per edge. Lines starting with `#` are comments.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("vertex id out of range: {id} (vertex count {n})")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate neighbour {1} in rotation of vertex {0}")]
    DuplicateNeighbor(u32, u32),
    #[error("asymmetric rotation: {0} lists {1} but not vice versa")]
    Asymmetric(u32, u32),
    #[error("connected embedded graph required")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("graph carries no embedding; face operations unavailable")]
    EmbeddingFree,
    #[error("rotation system is not planar: V - E + F = {0} (expected 2)")]
    EulerCheckFailed(i64),
}

/// Degrees of all vertices together with the maximum and minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub max: usize,
    pub min: usize,
}

/// One face of an embedded graph: the cyclic sequence of directed edge
/// traversals of its boundary walk. An edge with the same face on both
/// sides appears twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<(u32, u32)>,
}

impl Face {
    /// Boundary length: the number of edge traversals.
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    /// Vertices visited by the walk, one entry per traversal target.
    pub fn visit_sequence(&self) -> Vec<u32> {
        self.walk.iter().map(|&(_, v)| v).collect()
    }

    /// True if the given undirected edge lies on this face; counts
    /// traversals, so a bridge reports 2.
    pub fn incidences(&self, u: u32, v: u32) -> usize {
        self.walk
            .iter()
            .filter(|&&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
            .count()
    }
}

/// A simple graph with an optional combinatorial embedding.
///
/// The neighbour list of each vertex is a cyclic order; for
/// embedding-free graphs it is just a sorted adjacency list. Rotations
/// are canonicalized to start at the smallest neighbour, which makes
/// the serialized form unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    rotation: Vec<Vec<u32>>,
    embedded: bool,
}

impl Graph {
    /// Build an embedded graph from per-vertex cyclic neighbour lists.
    pub fn from_rotations(rotation: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let g = Graph {
            rotation,
            embedded: true,
        };
        g.validate()?;
        Ok(g.canonicalized())
    }

    /// Build an embedding-free graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut rotation = vec![Vec::new(); n];
        for &(u, v) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(GraphError::VertexOutOfRange {
                        id: id as usize,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if rotation[u as usize].contains(&v) {
                return Err(GraphError::DuplicateNeighbor(u, v));
            }
            rotation[u as usize].push(v);
            rotation[v as usize].push(u);
        }
        for r in &mut rotation {
            r.sort_unstable();
        }
        let g = Graph {
            rotation,
            embedded: false,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.rotation.len();
        for (v, neigh) in self.rotation.iter().enumerate() {
            let mut seen = vec![];
            for &u in neigh {
                if u as usize >= n {
                    return Err(GraphError::VertexOutOfRange { id: u as usize, n });
                }
                if u as usize == v {
                    return Err(GraphError::SelfLoop(v as u32));
                }
                if seen.contains(&u) {
                    return Err(GraphError::DuplicateNeighbor(v as u32, u));
                }
                seen.push(u);
            }
        }
        for (v, neigh) in self.rotation.iter().enumerate() {
            for &u in neigh {
                if !self.rotation[u as usize].contains(&(v as u32)) {
                    return Err(GraphError::Asymmetric(v as u32, u));
                }
            }
        }
        Ok(())
    }

    fn canonicalized(mut self) -> Self {
        for r in &mut self.rotation {
            if let Some(pos) = r.iter().enumerate().min_by_key(|&(_, &u)| u).map(|(i, _)| i) {
                r.rotate_left(pos);
            }
        }
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: u32) -> usize {
        self.rotation[v as usize].len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.rotation[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.rotation[u as usize].contains(&v)
    }

    pub fn is_embedded(&self) -> bool {
        self.embedded
    }

    /// Undirected edges as (u, v) with u < v, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = vec![];
        for (v, neigh) in self.rotation.iter().enumerate() {
            for &u in neigh {
                if (v as u32) < u {
                    out.push((v as u32, u));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let degrees: Vec<usize> = self.rotation.iter().map(|r| r.len()).collect();
        let max = degrees.iter().copied().max().unwrap_or(0);
        let min = degrees.iter().copied().min().unwrap_or(0);
        DegreeProfile { degrees, max, min }
    }

    pub fn max_degree(&self) -> usize {
        self.degree_profile().max
    }

    /// Length of a shortest cycle, or `None` for forests.
    ///
    /// BFS from every vertex; whenever a non-tree edge closes two BFS
    /// paths the candidate length is recorded. The minimum over all
    /// roots is the exact girth.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![u32::MAX; n];
        for root in 0..n as u32 {
            for d in dist.iter_mut() {
                *d = usize::MAX;
            }
            dist[root as usize] = 0;
            parent[root as usize] = u32::MAX;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                if 2 * dist[v as usize] + 1 >= best {
                    continue;
                }
                for &u in self.neighbors(v) {
                    if dist[u as usize] == usize::MAX {
                        dist[u as usize] = dist[v as usize] + 1;
                        parent[u as usize] = v;
                        queue.push_back(u);
                    } else if parent[v as usize] != u {
                        best = best.min(dist[v as usize] + dist[u as usize] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Vertices at distance exactly 1 or 2 from `v`, sorted.
    pub fn ball2(&self, v: u32) -> Vec<u32> {
        let mut out = vec![];
        for &u in self.neighbors(v) {
            out.push(u);
            for &w in self.neighbors(u) {
                if w != v {
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Trace all faces of the embedding.
    ///
    /// Requires a connected embedded graph; fails the Euler check
    /// V - E + F = 2 when the rotation system does not describe a
    /// sphere embedding. A single isolated vertex yields one face with
    /// an empty walk.
    pub fn trace_faces(&self) -> Result<Vec<Face>, GraphError> {
        if !self.embedded {
            return Err(GraphError::EmbeddingFree);
        }
        let n = self.vertex_count();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if n == 1 {
            return Ok(vec![Face { walk: vec![] }]);
        }
        // position of u within the rotation of v
        let pos = |v: u32, u: u32| -> usize {
            self.rotation[v as usize]
                .iter()
                .position(|&x| x == u)
                .expect("symmetric rotation")
        };
        // directed edge (v, slot) -> visited
        let mut offset = vec![0usize; n + 1];
        for v in 0..n {
            offset[v + 1] = offset[v] + self.rotation[v].len();
        }
        let mut visited = vec![false; offset[n]];
        let mut faces = vec![];
        for v in 0..n as u32 {
            for slot in 0..self.rotation[v as usize].len() {
                if visited[offset[v as usize] + slot] {
                    continue;
                }
                let mut walk = vec![];
                let (mut a, mut sa) = (v, slot);
                loop {
                    visited[offset[a as usize] + sa] = true;
                    let b = self.rotation[a as usize][sa];
                    walk.push((a, b));
                    let next_slot = (pos(b, a) + 1) % self.rotation[b as usize].len();
                    a = b;
                    sa = next_slot;
                    if (a, sa) == (v, slot) {
                        break;
                    }
                }
                faces.push(Face { walk });
            }
        }
        let euler =
            n as i64 - self.edge_count() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(GraphError::EulerCheckFailed(euler));
        }
        Ok(faces)
    }

    /// Parse either text format; see the module docs.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (first_no, first) = lines.next().ok_or(GraphError::Malformed {
            line: 1,
            msg: "empty input".into(),
        })?;
        let mut head = first.split_whitespace();
        let kind = head.next().unwrap_or("");
        let n: usize = head
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(GraphError::Malformed {
                line: first_no,
                msg: "expected '<planar|graph> <n>'".into(),
            })?;
        if head.next().is_some() {
            return Err(GraphError::Malformed {
                line: first_no,
                msg: "trailing tokens after header".into(),
            });
        }
        match kind {
            "planar" => {
                let mut rotation = vec![Vec::new(); n];
                for (line, l) in lines {
                    let (id, rest) = l.split_once(':').ok_or(GraphError::Malformed {
                        line,
                        msg: "expected '<v>: <neighbours>'".into(),
                    })?;
                    let v: usize =
                        id.trim().parse().map_err(|_| GraphError::Malformed {
                            line,
                            msg: format!("bad vertex id '{}'", id.trim()),
                        })?;
                    if v >= n {
                        return Err(GraphError::VertexOutOfRange { id: v, n });
                    }
                    let mut neigh = vec![];
                    for tok in rest.split_whitespace() {
                        let u: usize =
                            tok.parse().map_err(|_| GraphError::Malformed {
                                line,
                                msg: format!("bad neighbour id '{tok}'"),
                            })?;
                        if u >= n {
                            return Err(GraphError::VertexOutOfRange { id: u, n });
                        }
                        neigh.push(u as u32);
                    }
                    rotation[v] = neigh;
                }
                Graph::from_rotations(rotation)
            }
            "graph" => {
                let mut edges = vec![];
                for (line, l) in lines {
                    let mut it = l.split_whitespace();
                    let (u, v) = match (it.next(), it.next(), it.next()) {
                        (Some(a), Some(b), None) => {
                            let parse = |s: &str| -> Result<usize, GraphError> {
                                s.parse().map_err(|_| GraphError::Malformed {
                                    line,
                                    msg: format!("bad vertex id '{s}'"),
                                })
                            };
                            (parse(a)?, parse(b)?)
                        }
                        _ => {
                            return Err(GraphError::Malformed {
                                line,
                                msg: "expected '<u> <v>'".into(),
                            })
                        }
                    };
                    for id in [u, v] {
                        if id >= n {
                            return Err(GraphError::VertexOutOfRange { id, n });
                        }
                    }
                    edges.push((u as u32, v as u32));
                }
                Graph::from_edges(n, &edges)
            }
            other => Err(GraphError::Malformed {
                line: first_no,
                msg: format!("unknown header '{other}' (expected 'planar' or 'graph')"),
            }),
        }
    }

    /// Serialize to the canonical text form; embedded graphs use the
    /// rotation format, embedding-free graphs the edge-list format.
    /// `parse` of the output reproduces the graph exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if self.embedded {
            let _ = writeln!(out, "planar {}", self.vertex_count());
            for (v, neigh) in self.rotation.iter().enumerate() {
                let list: Vec<String> = neigh.iter().map(|u| u.to_string()).collect();
                let _ = writeln!(out, "{}: {}", v, list.join(" "));
            }
        } else {
            let _ = writeln!(out, "graph {}", self.vertex_count());
            for (u, v) in self.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        out
    }
}
