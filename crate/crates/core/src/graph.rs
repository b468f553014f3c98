//! Labeled simple graphs and the structural operations used by the counting
//! engines: contraction, gluing at a vertex, gluing along an edge, bridging.
//!
//! Every constructor returns a graph in canonical form: edges are stored with
//! the smaller endpoint first and the edge list is sorted, so two equal graphs
//! compare equal field by field and serialize identically.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Vertex label. Valid labels of a graph with `n` vertices are `0..n`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid family size: {family} requires n >= {min}, got {n}")]
    InvalidFamilySize {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error("invalid parent array: parents[{index}] = {parent} is not < {index}")]
    InvalidParentArray { index: usize, parent: usize },
    #[error("edge {0} is not present in the graph")]
    EdgeNotPresent(Edge),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: VertexId, n: usize },
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("vertex subset must be nonempty and inside the graph")]
    InvalidSubset,
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Undirected edge with its endpoints normalized so that `lo() < hi()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Builds an edge from two distinct endpoints, in either order.
    pub fn new(a: VertexId, b: VertexId) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(GraphError::Loop(a)),
        }
    }

    pub fn lo(&self) -> VertexId {
        self.lo
    }

    pub fn hi(&self) -> VertexId {
        self.hi
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Standard graph families with a deterministic labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `K_n`: every pair of the `n` vertices adjacent.
    Complete,
    /// `C_n`: vertex `i` adjacent to `i ± 1 (mod n)`, `n >= 3`.
    Cycle,
    /// Path with `n` edges on `n + 1` vertices.
    Path,
    /// `n` isolated vertices.
    Empty,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Empty => "empty",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Finite simple undirected graph on the vertex labels `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        LabeledGraph {
            n,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from an edge list, normalizing order and merging
    /// duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            let e = Edge::new(a, b)?;
            if e.hi >= n {
                return Err(GraphError::InvalidVertex { vertex: e.hi, n });
            }
            list.push(e);
        }
        Ok(Self::from_normalized(n, list))
    }

    fn from_normalized(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        LabeledGraph { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Adjacency lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.lo].push(e.hi);
            adj[e.hi].push(e.lo);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// True when the whole graph is connected. The 0-vertex graph counts as
    /// connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let all: Vec<VertexId> = (0..self.n).collect();
        self.is_connected_subset(&all).unwrap_or(false)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    fn check_edge(&self, e: Edge) -> Result<(), GraphError> {
        if self.has_edge(e) {
            Ok(())
        } else {
            Err(GraphError::EdgeNotPresent(e))
        }
    }

    /// Whether the subgraph induced by `subset` is connected. Singletons are
    /// connected; repeated entries are ignored.
    pub fn is_connected_subset(&self, subset: &[VertexId]) -> Result<bool, GraphError> {
        if subset.is_empty() {
            return Err(GraphError::InvalidSubset);
        }
        let mut inside = vec![false; self.n];
        for &v in subset {
            if v >= self.n {
                return Err(GraphError::InvalidSubset);
            }
            inside[v] = true;
        }
        let adj = self.adjacency();
        let size = inside.iter().filter(|&&b| b).count();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([subset[0]]);
        seen[subset[0]] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(reached == size)
    }

    /// Maps every edge through `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Self, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::InvalidPermutation(self.n));
        }
        let mut hit = vec![false; self.n];
        for &p in perm {
            if p >= self.n || hit[p] {
                return Err(GraphError::InvalidPermutation(self.n));
            }
            hit[p] = true;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.lo], perm[e.hi]).expect("bijection keeps endpoints distinct"))
            .collect();
        Ok(Self::from_normalized(self.n, edges))
    }

    /// `G/k`: removes `k`, merges its endpoints into the smaller label and
    /// compacts the labels above the removed one. Parallel edges are merged.
    pub fn contract(&self, k: Edge) -> Result<Self, GraphError> {
        Ok(self.contract_with_map(k)?.0)
    }

    /// Like [`contract`](Self::contract), additionally returning where each
    /// old vertex ended up.
    pub fn contract_with_map(&self, k: Edge) -> Result<(Self, Vec<VertexId>), GraphError> {
        self.check_edge(k)?;
        let map: Vec<VertexId> = (0..self.n)
            .map(|v| match v.cmp(&k.hi) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => k.lo,
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&e| e != k)
            .map(|e| Edge::new(map[e.lo], map[e.hi]).expect("only k collapses to a loop"))
            .collect();
        Ok((Self::from_normalized(self.n - 1, edges), map))
    }

    /// Disjoint union of `self` and `other`, with `other`'s vertices mapped
    /// through `other_map` (which must stay inside `0..n`).
    fn union_mapped(&self, other: &Self, other_map: &[VertexId], n: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| Edge::new(other_map[e.lo], other_map[e.hi]).expect("injective on edges")),
        );
        Self::from_normalized(n, edges)
    }

    /// Labels for `other`'s vertices when `fixed` of them are identified with
    /// given vertices of `self`; the rest get `self.n..` in ascending order.
    fn attach_map(&self, other: &Self, fixed: &[(VertexId, VertexId)]) -> Vec<VertexId> {
        let mut map = vec![usize::MAX; other.n];
        for &(theirs, ours) in fixed {
            map[theirs] = ours;
        }
        let mut next = self.n;
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        map
    }

    /// One-vertex union: `vh` of `other` is identified with `vg` of `self`.
    pub fn glue_at_vertex(
        &self,
        other: &Self,
        vg: VertexId,
        vh: VertexId,
    ) -> Result<Self, GraphError> {
        self.check_vertex(vg)?;
        other.check_vertex(vh)?;
        let map = self.attach_map(other, &[(vh, vg)]);
        Ok(self.union_mapped(other, &map, self.n + other.n - 1))
    }

    /// Two-vertex, one-edge union: `eh` of `other` is identified with `eg` of
    /// `self`, smaller endpoint to smaller endpoint.
    pub fn glue_at_edge(&self, other: &Self, eg: Edge, eh: Edge) -> Result<Self, GraphError> {
        Ok(self.glue_at_edge_with_map(other, eg, eh)?.0)
    }

    /// Like [`glue_at_edge`](Self::glue_at_edge), additionally returning the
    /// labels `other`'s vertices received.
    pub fn glue_at_edge_with_map(
        &self,
        other: &Self,
        eg: Edge,
        eh: Edge,
    ) -> Result<(Self, Vec<VertexId>), GraphError> {
        self.check_edge(eg)?;
        other.check_edge(eh)?;
        let map = self.attach_map(other, &[(eh.lo, eg.lo), (eh.hi, eg.hi)]);
        let glued = self.union_mapped(other, &map, self.n + other.n - 2);
        Ok((glued, map))
    }

    /// Disjoint union plus the new edge `(vg, image of vh)`.
    pub fn bridge(&self, other: &Self, vg: VertexId, vh: VertexId) -> Result<Self, GraphError> {
        self.check_vertex(vg)?;
        other.check_vertex(vh)?;
        let map = self.attach_map(other, &[]);
        let mut g = self.union_mapped(other, &map, self.n + other.n);
        g.edges
            .push(Edge::new(vg, map[vh]).expect("bridge joins distinct vertices"));
        g.edges.sort_unstable();
        Ok(g)
    }

    /// Parses the edge-list text format: a header line `n m` followed by `m`
    /// lines `u v` with `u < v < n`.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let parse_err = |line: usize, message: &str| GraphError::Parse {
            line,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let (n, m) = parse_pair(header).ok_or_else(|| parse_err(1, "expected `n m`"))?;
        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines.by_ref() {
            if edges.len() == m {
                if body.trim().is_empty() {
                    continue;
                }
                return Err(parse_err(line, "more edges than declared"));
            }
            let (u, v) = parse_pair(body).ok_or_else(|| parse_err(line, "expected `u v`"))?;
            if u == v {
                return Err(parse_err(line, "loop"));
            }
            if u > v {
                return Err(parse_err(line, "endpoints must satisfy u < v"));
            }
            if v >= n {
                return Err(parse_err(line, "vertex label out of range"));
            }
            edges.push(Edge { lo: u, hi: v });
        }
        if edges.len() != m {
            return Err(parse_err(edges.len() + 2, "fewer edges than declared"));
        }
        let g = Self::from_normalized(n, edges);
        if g.edges.len() != m {
            return Err(parse_err(1, "duplicate edge"));
        }
        Ok(g)
    }

    /// Writes the edge-list text format, newline-terminated.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.lo, e.hi));
        }
        out
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Builds one of the standard families. For [`Family::Path`], `n` is the
/// number of edges.
pub fn make_standard(family: Family, n: usize) -> Result<LabeledGraph, GraphError> {
    let edges: Vec<(usize, usize)> = match family {
        Family::Complete => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        Family::Cycle => {
            if n < 3 {
                return Err(GraphError::InvalidFamilySize {
                    family: "cycle",
                    min: 3,
                    n,
                });
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        Family::Path => (0..n).map(|i| (i, i + 1)).collect(),
        Family::Empty => Vec::new(),
    };
    let vertices = if family == Family::Path { n + 1 } else { n };
    LabeledGraph::from_edges(vertices, edges)
}

/// Tree from a parent array: vertex `i >= 1` hangs from `parents[i] < i`.
/// Entry 0 is ignored.
pub fn make_tree(parents: &[usize]) -> Result<LabeledGraph, GraphError> {
    let mut edges = Vec::with_capacity(parents.len().saturating_sub(1));
    for (i, &p) in parents.iter().enumerate().skip(1) {
        if p >= i {
            return Err(GraphError::InvalidParentArray {
                index: i,
                parent: p,
            });
        }
        edges.push((p, i));
    }
    LabeledGraph::from_edges(parents.len(), edges)
}
