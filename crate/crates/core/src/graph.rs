//! Simple undirected graphs with dense vertex indices, Eulerian predicates
//! and the small induced-subgraph classification used by the reduction
//! planner.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

/// Sorted set of vertex indices. Used for neighbourhoods, independent sets
/// and bag contents.
pub type VertexSet = BTreeSet<Vertex>;

/// An undirected edge, stored with the smaller endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert!(a != b, "self-loop edge ({a},{b})");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn other(&self, v: Vertex) -> Vertex {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(Vertex, usize),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Edge),
    #[error("induced set too large ({0} > 6)")]
    SetTooLarge(usize),
}

/// Immutable simple graph with adjacency sets. Vertices are `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.m, self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![VertexSet::new(); n],
            m: 0,
        }
    }

    pub fn from_edge_list(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if a >= n {
                return Err(GraphError::VertexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange(b, n));
            }
            if g.adj[a].contains(&b) {
                return Err(GraphError::DuplicateEdge(Edge::new(a, b)));
            }
            g.adj[a].insert(b);
            g.adj[b].insert(a);
            g.m += 1;
        }
        Ok(g)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edge_list(n, &edges).unwrap()
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbours(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && a < self.n() && b < self.n() && self.adj[a].contains(&b)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| {
            nb.iter()
                .filter(move |&&w| w > u)
                .map(move |&w| Edge(u, w))
        })
    }

    /// Hajos bound for this vertex count.
    pub fn hajos_bound(&self) -> usize {
        self.n().saturating_sub(1) / 2
    }

    /// Copy with one edge added. Panics on existing edge or loop.
    pub fn with_edge(&self, a: Vertex, b: Vertex) -> Graph {
        let mut g = self.clone();
        assert!(a != b && !g.adj[a].contains(&b));
        g.adj[a].insert(b);
        g.adj[b].insert(a);
        g.m += 1;
        g
    }

    /// Copy with one edge removed. Panics if absent.
    pub fn without_edge(&self, a: Vertex, b: Vertex) -> Graph {
        let mut g = self.clone();
        assert!(g.adj[a].remove(&b));
        assert!(g.adj[b].remove(&a));
        g.m -= 1;
        g
    }

    /// Copy with an edge toggled.
    pub fn with_edge_toggled(&self, a: Vertex, b: Vertex) -> Graph {
        if self.has_edge(a, b) {
            self.without_edge(a, b)
        } else {
            self.with_edge(a, b)
        }
    }

    /// Delete the given vertices and compact indices. Returns the new graph
    /// together with the map `old index -> new index` (`None` for deleted).
    pub fn delete_vertices(&self, del: &VertexSet) -> (Graph, Vec<Option<Vertex>>) {
        let mut map = vec![None; self.n()];
        let mut next = 0;
        for v in 0..self.n() {
            if !del.contains(&v) {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut g = Graph::empty(next);
        for e in self.edges() {
            if let (Some(a), Some(b)) = (map[e.0], map[e.1]) {
                g.adj[a].insert(b);
                g.adj[b].insert(a);
                g.m += 1;
            }
        }
        (g, map)
    }

    /// Connected components as sorted vertex sets, ordered by minimum vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Shortest path from `a` to `b` avoiding `forbidden` vertices
    /// (endpoints may not be forbidden). Ties broken towards smaller
    /// predecessor indices. Returns the full vertex sequence.
    pub fn bfs_path_avoiding(
        &self,
        a: Vertex,
        b: Vertex,
        forbidden: &VertexSet,
    ) -> Option<Vec<Vertex>> {
        if forbidden.contains(&a) || forbidden.contains(&b) {
            return None;
        }
        let mut pred: Vec<Option<Vertex>> = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        seen[a] = true;
        let mut frontier = vec![a];
        while !frontier.is_empty() && !seen[b] {
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in &self.adj[v] {
                    if !seen[w] && !forbidden.contains(&w) {
                        seen[w] = true;
                        pred[w] = Some(v);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        if !seen[b] {
            return None;
        }
        let mut path = vec![b];
        let mut cur = b;
        while let Some(p) = pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Every vertex has even degree. This is the decomposability criterion;
/// connectivity is not required.
pub fn is_even_graph(g: &Graph) -> bool {
    (0..g.n()).all(|v| g.degree(v) % 2 == 0)
}

/// `N(u) ∩ N(v)`, excluding `u` and `v` themselves.
pub fn common_neighbourhood(g: &Graph, u: Vertex, v: Vertex) -> VertexSet {
    assert!(u != v);
    g.neighbours(u)
        .intersection(g.neighbours(v))
        .copied()
        .filter(|&w| w != u && w != v)
        .collect()
}

/// Isomorphism type of a small induced subgraph, as used by the planner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphClassTag {
    Empty,
    HasDeg3Vertex,
    IndepTriple,
    C5,
    K3P2,
    P3P2,
    P5,
    SingleEdge,
    TwoEdgesPath,
    TwoEdgesMatching,
    PathPlusEdge,
    Triangle,
    C4,
    Other,
}

/// Classification result: the tag plus a witness labelling. The witness
/// lists the vertices realizing the tagged structure; for path shapes it is
/// in path order, for cycles in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGraphClass {
    pub tag: GraphClassTag,
    pub witness: Vec<Vertex>,
}

/// Classify the subgraph induced by `s` (|s| <= 6).
///
/// Tags describe the exact shape of the induced subgraph where one applies;
/// `HasDeg3Vertex` fires for any shape with a vertex of induced degree >= 3,
/// and everything else falls through to `Other`.
pub fn classify_induced(g: &Graph, s: &VertexSet) -> Result<SmallGraphClass, GraphError> {
    if s.len() > 6 {
        return Err(GraphError::SetTooLarge(s.len()));
    }
    let vs: Vec<Vertex> = s.iter().copied().collect();
    let k = vs.len();
    let deg_in = |v: Vertex| -> usize { vs.iter().filter(|&&w| g.has_edge(v, w)).count() };
    let edges: Vec<(Vertex, Vertex)> = {
        let mut e = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if g.has_edge(vs[i], vs[j]) {
                    e.push((vs[i], vs[j]));
                }
            }
        }
        e
    };

    // A vertex of induced degree >= 3 dominates every other tag.
    if let Some(&v) = vs.iter().find(|&&v| deg_in(v) >= 3) {
        let mut w = vec![v];
        w.extend(vs.iter().copied().filter(|&x| x != v && g.has_edge(v, x)));
        return Ok(SmallGraphClass {
            tag: GraphClassTag::HasDeg3Vertex,
            witness: w,
        });
    }

    if edges.is_empty() {
        let tag = if k == 3 {
            GraphClassTag::IndepTriple
        } else {
            GraphClassTag::Empty
        };
        return Ok(SmallGraphClass {
            tag,
            witness: vs.clone(),
        });
    }

    // All induced degrees are now 1 or 2 (or 0 on isolated members).
    let isolated: Vec<Vertex> = vs.iter().copied().filter(|&v| deg_in(v) == 0).collect();
    let shape = component_shapes(g, &vs);

    let tag_witness: Option<(GraphClassTag, Vec<Vertex>)> = match (k, shape.as_slice()) {
        // exact 5-vertex shapes of the planner dispatch
        (5, [Shape::Cycle(c)]) if c.len() == 5 => Some((GraphClassTag::C5, c.clone())),
        (5, [Shape::Cycle(c), Shape::Path(p)]) if c.len() == 3 && p.len() == 2 => {
            let mut w = c.clone();
            w.extend(p);
            Some((GraphClassTag::K3P2, w))
        }
        (5, [Shape::Path(p), Shape::Cycle(c)]) if c.len() == 3 && p.len() == 2 => {
            let mut w = c.clone();
            w.extend(p);
            Some((GraphClassTag::K3P2, w))
        }
        (5, [Shape::Path(a), Shape::Path(b)]) if a.len() == 3 && b.len() == 2 => {
            let mut w = a.clone();
            w.extend(b);
            Some((GraphClassTag::P3P2, w))
        }
        (5, [Shape::Path(a), Shape::Path(b)]) if a.len() == 2 && b.len() == 3 => {
            let mut w = b.clone();
            w.extend(a);
            Some((GraphClassTag::P3P2, w))
        }
        (5, [Shape::Path(p)]) if p.len() == 5 => Some((GraphClassTag::P5, p.clone())),
        _ => None,
    };
    if let Some((tag, witness)) = tag_witness {
        return Ok(SmallGraphClass { tag, witness });
    }

    // shapes keyed by edge structure, isolated vertices ignored
    let non_iso: Vec<&Shape> = shape.iter().filter(|s| s.order() >= 2).collect();
    let (tag, witness): (GraphClassTag, Vec<Vertex>) = match non_iso.as_slice() {
        [Shape::Path(p)] if p.len() == 2 => (GraphClassTag::SingleEdge, p.clone()),
        [Shape::Path(p)] if p.len() == 3 => (GraphClassTag::TwoEdgesPath, p.clone()),
        [Shape::Path(a), Shape::Path(b)] if a.len() == 2 && b.len() == 2 => {
            let mut w = a.clone();
            w.extend(b.iter());
            (GraphClassTag::TwoEdgesMatching, w)
        }
        [Shape::Path(p)] if p.len() == 4 => (GraphClassTag::PathPlusEdge, p.clone()),
        [Shape::Cycle(c)] if c.len() == 3 => (GraphClassTag::Triangle, c.clone()),
        [Shape::Cycle(c)] if c.len() == 4 => (GraphClassTag::C4, c.clone()),
        _ => (GraphClassTag::Other, vs.clone()),
    };
    let mut witness = witness;
    let extra: Vec<Vertex> = isolated
        .iter()
        .copied()
        .filter(|v| !witness.contains(v))
        .collect();
    witness.extend(extra);
    Ok(SmallGraphClass { tag, witness })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Path(Vec<Vertex>),
    Cycle(Vec<Vertex>),
}

impl Shape {
    fn order(&self) -> usize {
        match self {
            Shape::Path(p) => p.len(),
            Shape::Cycle(c) => c.len(),
        }
    }
}

/// Decompose the induced subgraph (max degree <= 2) into path/cycle shapes,
/// ordered by smallest vertex. Isolated vertices become length-1 paths.
fn component_shapes(g: &Graph, vs: &[Vertex]) -> Vec<Shape> {
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let nb = |v: Vertex| -> Vec<Vertex> {
        vs.iter()
            .copied()
            .filter(|&w| w != v && g.has_edge(v, w))
            .collect()
    };
    let mut shapes = Vec::new();
    for &v in vs {
        if seen.contains(&v) {
            continue;
        }
        // collect component
        let mut comp = vec![v];
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(x) = stack.pop() {
            for w in nb(x) {
                if seen.insert(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        let degs: Vec<usize> = comp.iter().map(|&x| nb(x).len()).collect();
        if comp.len() == 1 {
            shapes.push(Shape::Path(comp));
        } else if degs.iter().all(|&d| d == 2) {
            // cycle: traverse from smallest vertex towards its smaller neighbour
            let start = comp[0];
            let mut order = vec![start];
            let first = nb(start).into_iter().min().unwrap();
            let mut prev = start;
            let mut cur = first;
            while cur != start {
                order.push(cur);
                let next = nb(cur).into_iter().find(|&w| w != prev).unwrap();
                prev = cur;
                cur = next;
            }
            shapes.push(Shape::Cycle(order));
        } else {
            // path: start from the smaller endpoint
            let mut ends: Vec<Vertex> = comp.iter().copied().filter(|&x| nb(x).len() == 1).collect();
            ends.sort_unstable();
            let start = ends[0];
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = nb(cur).into_iter().find(|&w| w != prev);
                match next {
                    Some(w) => {
                        order.push(w);
                        prev = cur;
                        cur = w;
                    }
                    None => break,
                }
            }
            shapes.push(Shape::Path(order));
        }
    }
    shapes
}

/// Parse the plain edge-list format: first line `n`, then one `u v` pair per
/// line, whitespace separated, 0-based. Blank lines and `#` comments allowed.
pub fn parse_edge_list(text: &str) -> Result<Graph, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or("empty input")?
        .parse()
        .map_err(|e| format!("bad vertex count: {e}"))?;
    let mut edges = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .ok_or("missing endpoint")?
            .parse()
            .map_err(|e| format!("bad vertex: {e}"))?;
        let v: usize = it
            .next()
            .ok_or_else(|| format!("missing second endpoint in {line:?}"))?
            .parse()
            .map_err(|e| format!("bad vertex: {e}"))?;
        if it.next().is_some() {
            return Err(format!("trailing tokens in {line:?}"));
        }
        edges.push((u, v));
    }
    Graph::from_edge_list(n, &edges).map_err(|e| e.to_string())
}

/// Render a graph in the edge-list format.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.0, e.1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_triangle() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn from_edge_list_k5() {
        let g = Graph::complete(5);
        assert_eq!(g.m(), 10);
    }

    #[test]
    fn from_edge_list_rejects_self_loop() {
        assert_eq!(
            Graph::from_edge_list(2, &[(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
    }

    #[test]
    fn from_edge_list_rejects_duplicate() {
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(Edge(0, 1))
        );
    }

    #[test]
    fn from_edge_list_rejects_out_of_range() {
        assert_eq!(
            Graph::from_edge_list(2, &[(0, 5)]).unwrap_err(),
            GraphError::VertexOutOfRange(5, 2)
        );
    }

    #[test]
    fn even_graph_predicate() {
        assert!(is_even_graph(&Graph::cycle(3)));
        let path = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_even_graph(&path));
        let two_triangles =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(is_even_graph(&two_triangles));
    }

    #[test]
    fn common_neighbourhood_k4() {
        let g = Graph::complete(4);
        let n = common_neighbourhood(&g, 0, 1);
        assert_eq!(n, VertexSet::from([2, 3]));
    }

    #[test]
    fn common_neighbourhood_disjoint_triangles() {
        let g =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(common_neighbourhood(&g, 0, 3).is_empty());
    }

    #[test]
    fn common_neighbourhood_octahedron() {
        // K_{2,2,2}: parts {0,1},{2,3},{4,5}; non-adjacent pairs are the parts.
        let mut edges = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                if i / 2 != j / 2 {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edge_list(6, &edges).unwrap();
        let n = common_neighbourhood(&g, 0, 1);
        assert_eq!(n, VertexSet::from([2, 3, 4, 5]));
        assert_eq!(
            common_neighbourhood(&g, 0, 1),
            common_neighbourhood(&g, 1, 0)
        );
    }

    #[test]
    fn classify_indep_triple() {
        let g = Graph::cycle(6);
        let c = classify_induced(&g, &VertexSet::from([0, 2, 4])).unwrap();
        assert_eq!(c.tag, GraphClassTag::IndepTriple);
        assert_eq!(c.witness, vec![0, 2, 4]);
    }

    #[test]
    fn classify_c5() {
        let g = Graph::cycle(5);
        let c = classify_induced(&g, &VertexSet::from([0, 1, 2, 3, 4])).unwrap();
        assert_eq!(c.tag, GraphClassTag::C5);
    }

    #[test]
    fn classify_k3_p2() {
        let g =
            Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let c = classify_induced(&g, &VertexSet::from([0, 1, 2, 3, 4])).unwrap();
        assert_eq!(c.tag, GraphClassTag::K3P2);
    }

    #[test]
    fn classify_shapes_on_four() {
        let m = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        let c = classify_induced(&m, &VertexSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(c.tag, GraphClassTag::TwoEdgesMatching);

        let p4 = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = classify_induced(&p4, &VertexSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(c.tag, GraphClassTag::PathPlusEdge);

        let c4 = Graph::cycle(4);
        let c = classify_induced(&c4, &VertexSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(c.tag, GraphClassTag::C4);

        let star = Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let c = classify_induced(&star, &VertexSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(c.tag, GraphClassTag::HasDeg3Vertex);
        assert_eq!(c.witness[0], 0);
    }

    #[test]
    fn classify_rejects_large_sets() {
        let g = Graph::complete(8);
        let s: VertexSet = (0..7).collect();
        assert_eq!(
            classify_induced(&g, &s).unwrap_err(),
            GraphError::SetTooLarge(7)
        );
    }

    #[test]
    fn classify_is_label_invariant() {
        // same structure embedded at two different label sets gets one tag
        let g1 = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let g2 = Graph::from_edge_list(5, &[(4, 2), (2, 0), (0, 4), (1, 3)]).unwrap();
        let t1 = classify_induced(&g1, &(0..5).collect()).unwrap().tag;
        let t2 = classify_induced(&g2, &(0..5).collect()).unwrap().tag;
        assert_eq!(t1, t2);
    }

    #[test]
    fn degree_sum_is_twice_m() {
        let g = Graph::complete(6);
        let sum: usize = (0..6).map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.m());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::complete(4);
        let text = write_edge_list(&g);
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(g, h);
    }
}
