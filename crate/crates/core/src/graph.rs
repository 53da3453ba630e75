//! Simple undirected graphs, their elements, and total weightings over them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex id {id} out of range for a graph on {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown edge {0}-{1}")]
    UnknownEdge(usize, usize),
    #[error("vertex {0} lies on both sides of a bipartite split")]
    OverlappingSides(usize),
    #[error("no weight defined for element {0}")]
    UndefinedWeight(Element),
    #[error("weight given for element {0} which is not in the graph")]
    ForeignElement(Element),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically; an
/// edge's position in that order is its *edge index*.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    // edge indices incident to each vertex, in neighbor order
    incident: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            for id in [u, v] {
                if id >= n {
                    return Err(GraphError::VertexOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, edges))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
            index.insert((u, v), i);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        for (v, list) in adj.iter().enumerate() {
            incident[v] = list.iter().map(|&(_, e)| e).collect();
        }
        let adj = adj
            .into_iter()
            .map(|l| l.into_iter().map(|(w, _)| w).collect())
            .collect();
        Graph {
            n,
            edges,
            adj,
            incident,
            index,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Edges in lexicographic order, each as `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edge indices incident to `v`, ordered like [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Number of elements (vertices plus edges).
    pub fn element_count(&self) -> usize {
        self.n + self.edges.len()
    }

    /// All elements: vertices ascending, then edges in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.vertices()
            .map(Element::Vertex)
            .chain(self.edges.iter().map(|&(u, v)| Element::Edge(u, v)))
    }

    pub fn contains_element(&self, z: Element) -> bool {
        match z {
            Element::Vertex(v) => v < self.n,
            Element::Edge(u, v) => self.has_edge(u, v),
        }
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::new(self.n, &edges).expect("a permutation preserves simplicity")
    }

    /// Serializes to the edge-list text format read by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Parses the edge-list format: a header line `n m` followed by `m` lines
/// `u v`. Blank lines are skipped and `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashMap::new();
    let perr = |line: usize, msg: String| GraphError::Parse { line, msg };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(perr(
                line_no,
                format!("expected two integers, found {content:?}"),
            ));
        }
        let a: usize = fields[0].parse().map_err(|_| {
            perr(
                line_no,
                format!("not a non-negative integer: {:?}", fields[0]),
            )
        })?;
        let b: usize = fields[1].parse().map_err(|_| {
            perr(
                line_no,
                format!("not a non-negative integer: {:?}", fields[1]),
            )
        })?;
        let Some((n, m)) = header else {
            header = Some((a, b));
            continue;
        };
        if edges.len() == m {
            return Err(perr(line_no, format!("more than the declared {m} edges")));
        }
        for id in [a, b] {
            if id >= n {
                return Err(perr(
                    line_no,
                    format!("vertex id {id} out of range (n = {n})"),
                ));
            }
        }
        if a == b {
            return Err(perr(line_no, format!("self-loop at vertex {a}")));
        }
        let key = (a.min(b), a.max(b));
        if let Some(first) = seen.insert(key, line_no) {
            return Err(perr(
                line_no,
                format!("duplicate edge {}-{} (first on line {first})", key.0, key.1),
            ));
        }
        edges.push(key);
    }

    let (n, m) = header.ok_or_else(|| perr(0, "missing header line \"n m\"".to_string()))?;
    if edges.len() != m {
        return Err(perr(
            text.lines().count(),
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    Graph::new(n, &edges)
}

/// A vertex or an edge. Edge endpoints are stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Vertex(usize),
    Edge(usize, usize),
}

impl Element {
    pub fn edge(u: usize, v: usize) -> Self {
        Element::Edge(u.min(v), u.max(v))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "{v}"),
            Element::Edge(u, v) => write!(f, "{u}-{v}"),
        }
    }
}

impl FromStr for Element {
    type Err = String;

    /// `"v"` for a vertex, `"u-v"` for an edge.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("invalid element key {s:?}");
        match s.split_once('-') {
            Some((u, v)) => {
                let u: usize = u.trim().parse().map_err(|_| bad())?;
                let v: usize = v.trim().parse().map_err(|_| bad())?;
                if u == v {
                    return Err(bad());
                }
                Ok(Element::edge(u, v))
            }
            None => s.trim().parse().map(Element::Vertex).map_err(|_| bad()),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A value for every vertex and every edge of one graph.
///
/// Edge values are indexed by edge index, so a weighting is only meaningful
/// together with the graph it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalWeighting {
    pub vertex: Vec<Rational>,
    pub edge: Vec<Rational>,
}

/// The base weighting `w0` the solver corrects.
pub type BaseWeighting = TotalWeighting;

impl TotalWeighting {
    pub fn constant(g: &Graph, c: &Rational) -> Self {
        TotalWeighting {
            vertex: vec![c.clone(); g.n()],
            edge: vec![c.clone(); g.m()],
        }
    }

    pub fn zero(g: &Graph) -> Self {
        Self::constant(g, &Rational::zero())
    }

    /// Builds a weighting from an element-keyed map, which must cover every
    /// element of `g` and nothing else.
    pub fn from_elements(g: &Graph, map: &BTreeMap<Element, Rational>) -> Result<Self, GraphError> {
        if let Some(z) = map.keys().find(|z| !g.contains_element(**z)) {
            return Err(GraphError::ForeignElement(*z));
        }
        let lookup = |z: Element| map.get(&z).cloned().ok_or(GraphError::UndefinedWeight(z));
        let vertex = g
            .vertices()
            .map(|v| lookup(Element::Vertex(v)))
            .collect::<Result<_, _>>()?;
        let edge = g
            .edges()
            .iter()
            .map(|&(u, v)| lookup(Element::Edge(u, v)))
            .collect::<Result<_, _>>()?;
        Ok(TotalWeighting { vertex, edge })
    }

    pub fn to_elements(&self, g: &Graph) -> BTreeMap<Element, Rational> {
        g.elements()
            .zip(self.values())
            .map(|(z, w)| (z, w.clone()))
            .collect()
    }

    /// Values in element order (vertices, then edges).
    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.vertex.iter().chain(self.edge.iter())
    }

    pub fn get(&self, g: &Graph, z: Element) -> Option<&Rational> {
        match z {
            Element::Vertex(v) => self.vertex.get(v),
            Element::Edge(u, v) => g.edge_index(u, v).and_then(|e| self.edge.get(e)),
        }
    }

    /// Checks the weighting has exactly one value per element of `g`.
    pub fn check_shape(&self, g: &Graph) -> Result<(), GraphError> {
        if self.vertex.len() < g.n() {
            return Err(GraphError::UndefinedWeight(Element::Vertex(
                self.vertex.len(),
            )));
        }
        if self.edge.len() < g.m() {
            let (u, v) = g.edge(self.edge.len());
            return Err(GraphError::UndefinedWeight(Element::Edge(u, v)));
        }
        if self.vertex.len() > g.n() {
            return Err(GraphError::ForeignElement(Element::Vertex(g.n())));
        }
        if self.edge.len() > g.m() {
            return Err(GraphError::ForeignElement(Element::Edge(
                usize::MAX,
                usize::MAX,
            )));
        }
        Ok(())
    }

    /// Translates every vertex value by `t`; edges are untouched.
    pub fn shift_vertices(&self, t: &Rational) -> Self {
        TotalWeighting {
            vertex: self.vertex.iter().map(|x| x + t).collect(),
            edge: self.edge.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TotalWeighting {
            vertex: self.vertex.iter().map(|x| x * c).collect(),
            edge: self.edge.iter().map(|x| x * c).collect(),
        }
    }
}

/// `w(v)` plus the sum of `w` over the edges incident to `v`.
pub fn weighted_degree(g: &Graph, w: &TotalWeighting, v: usize) -> Result<Rational, GraphError> {
    g.check_vertex(v)?;
    let mut sigma = w
        .vertex
        .get(v)
        .cloned()
        .ok_or(GraphError::UndefinedWeight(Element::Vertex(v)))?;
    for &e in g.incident_edges(v) {
        let (a, b) = g.edge(e);
        let we = w
            .edge
            .get(e)
            .ok_or(GraphError::UndefinedWeight(Element::Edge(a, b)))?;
        sigma += we;
    }
    Ok(sigma)
}

/// A subgraph with vertices renumbered `0..k`; `to_parent[i]` is the id of
/// local vertex `i` in the parent graph.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub to_parent: Vec<usize>,
}

impl Subgraph {
    pub fn to_local(&self) -> HashMap<usize, usize> {
        self.to_parent
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i))
            .collect()
    }
}

fn sorted_members(g: &Graph, xs: &[usize]) -> Result<Vec<usize>, GraphError> {
    let mut out = xs.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&x| x >= g.n()) {
        return Err(GraphError::UnknownVertex(bad));
    }
    Ok(out)
}

/// `G[X]`: the subgraph induced by `xs`. Local ids follow ascending parent ids.
pub fn induced(g: &Graph, xs: &[usize]) -> Result<Subgraph, GraphError> {
    let members = sorted_members(g, xs)?;
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        if local[u] != usize::MAX && local[v] != usize::MAX {
            edges.push((local[u], local[v]));
        }
    }
    edges.sort_unstable();
    Ok(Subgraph {
        graph: Graph::from_sorted(members.len(), edges),
        to_parent: members,
    })
}

/// `G[X, Y]`: vertex set `X ∪ Y` and exactly the edges of `g` with one end in
/// each side.
pub fn bipartite_between(g: &Graph, xs: &[usize], ys: &[usize]) -> Result<Subgraph, GraphError> {
    let xs = sorted_members(g, xs)?;
    let ys = sorted_members(g, ys)?;
    let mut side = vec![0u8; g.n()];
    for &x in &xs {
        side[x] = 1;
    }
    for &y in &ys {
        if side[y] == 1 {
            return Err(GraphError::OverlappingSides(y));
        }
        side[y] = 2;
    }
    let mut members: Vec<usize> = xs.iter().chain(ys.iter()).copied().collect();
    members.sort_unstable();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        if side[u] != 0 && side[v] != 0 && side[u] != side[v] {
            edges.push((local[u], local[v]));
        }
    }
    edges.sort_unstable();
    Ok(Subgraph {
        graph: Graph::from_sorted(members.len(), edges),
        to_parent: members,
    })
}

/// `Z_v`: the vertex itself followed by its incident edges.
pub fn closed_star(g: &Graph, v: usize) -> Result<Vec<Element>, GraphError> {
    g.check_vertex(v)?;
    let mut out = Vec::with_capacity(g.degree(v) + 1);
    out.push(Element::Vertex(v));
    out.extend(g.neighbors(v).iter().map(|&u| Element::edge(u, v)));
    Ok(out)
}
