//! Legal colourings: edge colourings whose every colour class is one cycle,
//! with colours drawn from `{1..⌊(n−1)/2⌋}`. Conversion to explicit cycle
//! decompositions and the recolouring primitives used by the lifts.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex, VertexSet};

pub type Colour = u32;

/// Edge→colour map on a graph with `n` vertices. Plain data; use
/// [`verify_legal`] to check the legality invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalColouring {
    pub graph_n: usize,
    pub assignment: BTreeMap<Edge, Colour>,
}

impl LegalColouring {
    pub fn new(graph_n: usize) -> LegalColouring {
        LegalColouring {
            graph_n,
            assignment: BTreeMap::new(),
        }
    }

    /// `⌊(n−1)/2⌋`, the largest colour id a legal colouring may use.
    pub fn bound(&self) -> Colour {
        (self.graph_n.saturating_sub(1) / 2) as Colour
    }

    pub fn colour_of(&self, a: Vertex, b: Vertex) -> Option<Colour> {
        self.assignment.get(&Edge::new(a, b)).copied()
    }

    /// Colour classes, keyed by colour id, each a sorted edge list.
    pub fn classes(&self) -> BTreeMap<Colour, Vec<Edge>> {
        let mut m: BTreeMap<Colour, Vec<Edge>> = BTreeMap::new();
        for (&e, &c) in &self.assignment {
            m.entry(c).or_default().push(e);
        }
        m
    }

    pub fn colours_used(&self) -> usize {
        self.assignment.values().collect::<BTreeSet<_>>().len()
    }

    /// Renumber colours to `1..=t` in order of first appearance on the
    /// smallest edge, so nested lifts never collide on the fresh id.
    pub fn renormalized(&self) -> LegalColouring {
        let mut map: BTreeMap<Colour, Colour> = BTreeMap::new();
        let mut next: Colour = 1;
        for &c in self.assignment.values() {
            map.entry(c).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
        }
        LegalColouring {
            graph_n: self.graph_n,
            assignment: self
                .assignment
                .iter()
                .map(|(&e, c)| (e, map[c]))
                .collect(),
        }
    }
}

/// Explicit list of vertex cycles partitioning the edge set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDecomposition {
    pub n: usize,
    pub cycles: Vec<Vec<Vertex>>,
}

impl CycleDecomposition {
    /// Canonical form: each cycle rotated to start at its minimum vertex and
    /// oriented towards the smaller neighbour; cycles sorted.
    pub fn canonical(mut self) -> CycleDecomposition {
        for c in &mut self.cycles {
            *c = canonical_cycle(c);
        }
        self.cycles.sort();
        self
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for c in &self.cycles {
            for i in 0..c.len() {
                out.push(Edge::new(c[i], c[(i + 1) % c.len()]));
            }
        }
        out
    }
}

pub fn canonical_cycle(c: &[Vertex]) -> Vec<Vertex> {
    let k = c.len();
    let (pos, _) = c.iter().enumerate().min_by_key(|&(_, v)| v).unwrap();
    let succ = c[(pos + 1) % k];
    let pred = c[(pos + k - 1) % k];
    let mut out = Vec::with_capacity(k);
    if succ <= pred {
        for i in 0..k {
            out.push(c[(pos + i) % k]);
        }
    } else {
        for i in 0..k {
            out.push(c[(pos + k - i) % k]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotACycle(Colour),
    ColourOutOfRange(Colour),
    UncolouredEdge(Edge),
    UnknownEdge(Edge),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("colour class {0} is empty")]
    EmptyClass(Colour),
    #[error("vertices are not on the cycle of colour {0}")]
    VerticesNotOnCycle(Colour),
    #[error("{{x1,x2,x3,y}} is not a clique")]
    NotAClique,
    #[error("colour class {0} is not two cycles sharing one vertex")]
    ClassNotTwoCycles(Colour),
    #[error("no free colour within the bound")]
    NoFreeColour,
    #[error("decomposition has {0} cycles, exceeding the bound {1}")]
    TooManyCycles(usize, usize),
    #[error("recolouring invariant breach: {0}")]
    InternalInvariantBreach(String),
}

/// Check that `c` assigns exactly the edges of `g` colours within the bound
/// and that every colour class is the edge set of one simple cycle.
pub fn verify_legal(g: &Graph, c: &LegalColouring) -> Verdict {
    let mut violations = Vec::new();
    let bound = c.bound();
    for e in g.edges() {
        if !c.assignment.contains_key(&e) {
            violations.push(Violation::UncolouredEdge(e));
        }
    }
    for (&e, &col) in &c.assignment {
        if !g.has_edge(e.0, e.1) {
            violations.push(Violation::UnknownEdge(e));
        }
        if col == 0 || col > bound {
            if !violations.contains(&Violation::ColourOutOfRange(col)) {
                violations.push(Violation::ColourOutOfRange(col));
            }
        }
    }
    for (col, edges) in c.classes() {
        if trace_single_cycle(&edges).is_none() {
            violations.push(Violation::NotACycle(col));
        }
    }
    Verdict {
        ok: violations.is_empty(),
        violations,
    }
}

/// If `edges` is the edge set of exactly one simple cycle, return its
/// canonical traversal.
fn trace_single_cycle(edges: &[Edge]) -> Option<Vec<Vertex>> {
    if edges.len() < 3 {
        return None;
    }
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.0).or_default().push(e.1);
        adj.entry(e.1).or_default().push(e.0);
    }
    if adj.values().any(|nb| nb.len() != 2) {
        return None;
    }
    let &start = adj.keys().next().unwrap();
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let nb = &adj[&cur];
        let next = if nb[0] != prev { nb[0] } else { nb[1] };
        if next == start {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
        if order.len() > edges.len() {
            return None;
        }
    }
    if order.len() != adj.len() || order.len() != edges.len() {
        return None; // more than one component
    }
    Some(canonical_cycle(&order))
}

/// The unique cycle traversal of a nonempty colour class, in canonical
/// orientation.
pub fn colour_class_cycle(c: &LegalColouring, i: Colour) -> Result<Vec<Vertex>, ColouringError> {
    let edges: Vec<Edge> = c
        .assignment
        .iter()
        .filter(|(_, &col)| col == i)
        .map(|(&e, _)| e)
        .collect();
    if edges.is_empty() {
        return Err(ColouringError::EmptyClass(i));
    }
    trace_single_cycle(&edges).ok_or(ColouringError::InternalInvariantBreach(format!(
        "class {i} is not a single cycle"
    )))
}

/// Outcome of the `C_{ab}` arc search on a monochromatic cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcSearch {
    /// Exactly one of the two a–b arcs avoids the forbidden set; the path is
    /// returned as a vertex sequence from `a` to `b`.
    Unique(Vec<Vertex>),
    BothQualify,
    Neither,
}

/// The `C_{ab}` primitive: of the two a–b arcs of the cycle of colour `i`,
/// return the unique one avoiding `forbidden ∖ {a,b}` if it exists.
pub fn path_along_cycle(
    c: &LegalColouring,
    i: Colour,
    a: Vertex,
    b: Vertex,
    forbidden: &VertexSet,
) -> Result<ArcSearch, ColouringError> {
    let cyc = colour_class_cycle(c, i)?;
    let pa = cyc.iter().position(|&v| v == a);
    let pb = cyc.iter().position(|&v| v == b);
    let (pa, pb) = match (pa, pb) {
        (Some(x), Some(y)) if x != y => (x, y),
        _ => return Err(ColouringError::VerticesNotOnCycle(i)),
    };
    let k = cyc.len();
    let arc = |from: usize, to: usize| -> Vec<Vertex> {
        let mut p = Vec::new();
        let mut j = from;
        loop {
            p.push(cyc[j]);
            if j == to {
                break;
            }
            j = (j + 1) % k;
        }
        p
    };
    let arc1 = arc(pa, pb);
    let mut arc2 = arc(pb, pa);
    arc2.reverse();
    let ok = |p: &[Vertex]| {
        p.iter()
            .all(|v| !forbidden.contains(v) || *v == a || *v == b)
    };
    Ok(match (ok(&arc1), ok(&arc2)) {
        (true, false) => ArcSearch::Unique(arc1),
        (false, true) => ArcSearch::Unique(arc2),
        (true, true) => ArcSearch::BothQualify,
        (false, false) => ArcSearch::Neither,
    })
}

/// Helper used by recolouring code: assign the colour `col` to every edge
/// along the vertex sequence `seq`.
pub(crate) fn assign_path(c: &mut LegalColouring, seq: &[Vertex], col: Colour) {
    for w in seq.windows(2) {
        c.assignment.insert(Edge::new(w[0], w[1]), col);
    }
}

/// Assign `col` along the closed cycle `seq` (last vertex joins the first).
pub(crate) fn assign_cycle(c: &mut LegalColouring, seq: &[Vertex], col: Colour) {
    assign_path(c, seq, col);
    c.assignment
        .insert(Edge::new(seq[seq.len() - 1], seq[0]), col);
}

/// Produce a legal colouring of `h` in which the triangle `x1x2x3` is not
/// monochromatic. `{x1,x2,x3,y}` must be a clique of `h` and `c` legal.
///
/// Tries the path-flip branch for each labelled pair first, then the
/// colour-elimination branch.
pub fn repair_mono_triangle(
    h: &Graph,
    c: &LegalColouring,
    x1: Vertex,
    x2: Vertex,
    x3: Vertex,
    y: Vertex,
) -> Result<LegalColouring, ColouringError> {
    let xs = [x1, x2, x3];
    for &a in &xs {
        for &b in &xs {
            if !h.has_edge(a, b) && a != b {
                return Err(ColouringError::NotAClique);
            }
        }
        if !h.has_edge(a, y) {
            return Err(ColouringError::NotAClique);
        }
    }
    let i = c.colour_of(x1, x2).unwrap();
    if c.colour_of(x2, x3) != Some(i) || c.colour_of(x3, x1) != Some(i) {
        return Ok(c.clone()); // already non-monochromatic
    }

    // Flip branch: an edge of colour j = c(y1 y) is adjacent to y2, and the
    // path of colour j from y to y2 along c^{-1}(j) − {y y1} avoids y3.
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for &y1 in &xs {
        for &y2 in &xs {
            if y1 != y2 {
                pairs.push((y1, y2));
            }
        }
    }
    pairs.sort_unstable();
    for (y1, y2) in pairs {
        let y3 = xs.iter().copied().find(|&v| v != y1 && v != y2).unwrap();
        let j = c.colour_of(y1, y).unwrap();
        let cyc = colour_class_cycle(c, j)?;
        if !cyc.contains(&y2) {
            continue;
        }
        // walk the cycle from y away from y1; the subpath up to y2 is P'
        let k = cyc.len();
        let py = cyc.iter().position(|&v| v == y).unwrap();
        let dir: isize = if cyc[(py + 1) % k] == y1 { -1 } else { 1 };
        let mut path = vec![y];
        let mut j_idx = py as isize;
        loop {
            j_idx = (j_idx + dir).rem_euclid(k as isize);
            let v = cyc[j_idx as usize];
            path.push(v);
            if v == y2 {
                break;
            }
            if v == y1 {
                // malformed walk; cannot happen on a legal class
                break;
            }
        }
        if *path.last().unwrap() != y2 || path.contains(&y3) {
            continue;
        }
        // flip: c'(y1y2) = j, c'(y1 y P' y2) = i
        let mut out = c.clone();
        out.assignment.insert(Edge::new(y1, y2), j);
        let mut flip_path = vec![y1];
        flip_path.extend(&path);
        assign_path(&mut out, &flip_path, i);
        return Ok(out);
    }

    // Elimination branch: colours of x1y, x2y, x3y are pairwise distinct and
    // their cycles avoid the other two triangle vertices.
    let mut out = c.clone();
    let j1 = c.colour_of(x1, y).unwrap();
    let j2 = c.colour_of(x2, y).unwrap();
    let j3 = c.colour_of(x3, y).unwrap();
    assign_path(&mut out, &[x1, x2, y], j1);
    assign_path(&mut out, &[x2, x3, y], j2);
    assign_path(&mut out, &[x3, x1, y], j3);
    let verdict = verify_legal(h, &out);
    if !verdict.ok {
        return Err(ColouringError::InternalInvariantBreach(format!(
            "triangle repair failed on both branches: {:?}",
            verdict.violations
        )));
    }
    Ok(out)
}

/// Split a colour class consisting of two edge-disjoint cycles meeting in
/// exactly one vertex: one of the two cycles is recoloured with an unused
/// colour within the bound.
pub fn split_two_cycle_class(
    graph_n: usize,
    assignment: &BTreeMap<Edge, Colour>,
    class: Colour,
) -> Result<LegalColouring, ColouringError> {
    let edges: Vec<Edge> = assignment
        .iter()
        .filter(|(_, &col)| col == class)
        .map(|(&e, _)| e)
        .collect();
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in &edges {
        adj.entry(e.0).or_default().push(e.1);
        adj.entry(e.1).or_default().push(e.0);
    }
    let mut hubs = adj.iter().filter(|(_, nb)| nb.len() == 4);
    let hub = match (hubs.next(), hubs.next()) {
        (Some((&h, _)), None) if adj.values().all(|nb| nb.len() == 2 || nb.len() == 4) => h,
        _ => return Err(ColouringError::ClassNotTwoCycles(class)),
    };
    // trace one cycle from the hub
    let mut first_cycle: BTreeSet<Edge> = BTreeSet::new();
    let start_next = adj[&hub].iter().copied().min().unwrap();
    first_cycle.insert(Edge::new(hub, start_next));
    let mut prev = hub;
    let mut cur = start_next;
    while cur != hub {
        let next = adj[&cur].iter().copied().find(|&w| w != prev).unwrap();
        first_cycle.insert(Edge::new(cur, next));
        prev = cur;
        cur = next;
    }
    if first_cycle.len() == edges.len() {
        return Err(ColouringError::ClassNotTwoCycles(class));
    }
    let bound = (graph_n.saturating_sub(1) / 2) as Colour;
    let used: BTreeSet<Colour> = assignment.values().copied().collect();
    let free = (1..=bound).find(|c| !used.contains(c));
    let free = free.ok_or(ColouringError::NoFreeColour)?;
    let mut out = LegalColouring {
        graph_n,
        assignment: assignment.clone(),
    };
    for (&e, col) in out.assignment.iter_mut() {
        if *col == class && !first_cycle.contains(&e) {
            *col = free;
        }
    }
    Ok(out)
}

/// View a legal colouring as an explicit cycle decomposition.
pub fn to_decomposition(c: &LegalColouring) -> CycleDecomposition {
    let mut cycles = Vec::new();
    for (col, _) in c.classes() {
        cycles.push(colour_class_cycle(c, col).expect("legal colouring"));
    }
    CycleDecomposition {
        n: c.graph_n,
        cycles,
    }
    .canonical()
}

/// View a cycle decomposition as a colouring; fails when the cycle count
/// exceeds the Hajos bound for `n`.
pub fn from_decomposition(
    d: &CycleDecomposition,
    n: usize,
) -> Result<LegalColouring, ColouringError> {
    let bound = n.saturating_sub(1) / 2;
    if d.cycles.len() > bound {
        return Err(ColouringError::TooManyCycles(d.cycles.len(), bound));
    }
    let mut c = LegalColouring::new(n);
    for (i, cyc) in d.cycles.iter().enumerate() {
        assign_cycle(&mut c, cyc, (i + 1) as Colour);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k5_two_hamiltonians() -> (Graph, LegalColouring) {
        let g = Graph::complete(5);
        let mut c = LegalColouring::new(5);
        assign_cycle(&mut c, &[0, 1, 2, 3, 4], 1);
        assign_cycle(&mut c, &[0, 2, 4, 1, 3], 2);
        (g, c)
    }

    #[test]
    fn verify_k5_hamiltonians() {
        let (g, c) = k5_two_hamiltonians();
        assert!(verify_legal(&g, &c).ok);
    }

    #[test]
    fn verify_flags_two_component_class() {
        let g =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let mut c = LegalColouring::new(6);
        assign_cycle(&mut c, &[0, 1, 2], 1);
        assign_cycle(&mut c, &[3, 4, 5], 1);
        let v = verify_legal(&g, &c);
        assert!(!v.ok);
        assert!(v.violations.contains(&Violation::NotACycle(1)));
    }

    #[test]
    fn verify_flags_colour_out_of_range() {
        let g = Graph::cycle(7);
        let mut c = LegalColouring::new(7);
        assign_cycle(&mut c, &(0..7).collect::<Vec<_>>(), 4);
        let v = verify_legal(&g, &c);
        assert!(!v.ok);
        assert!(v.violations.contains(&Violation::ColourOutOfRange(4)));
    }

    #[test]
    fn verify_flags_missing_and_unknown_edges() {
        let g = Graph::cycle(4);
        let mut c = LegalColouring::new(4);
        assign_cycle(&mut c, &[0, 1, 2], 1); // edge 0-2 is not in C4
        let v = verify_legal(&g, &c);
        assert!(v.violations.contains(&Violation::UnknownEdge(Edge(0, 2))));
        assert!(v
            .violations
            .iter()
            .any(|x| matches!(x, Violation::UncolouredEdge(_))));
    }

    #[test]
    fn class_cycle_triangle() {
        let mut c = LegalColouring::new(3);
        assign_cycle(&mut c, &[2, 0, 1], 1);
        assert_eq!(colour_class_cycle(&c, 1).unwrap(), vec![0, 1, 2]);
        assert_eq!(
            colour_class_cycle(&c, 2).unwrap_err(),
            ColouringError::EmptyClass(2)
        );
    }

    #[test]
    fn class_cycle_k5_class() {
        let (_, c) = k5_two_hamiltonians();
        let cyc = colour_class_cycle(&c, 2).unwrap();
        assert_eq!(cyc.len(), 5);
        assert_eq!(cyc[0], 0);
    }

    #[test]
    fn path_along_cycle_cases() {
        let mut c = LegalColouring::new(7);
        assign_cycle(&mut c, &[0, 1, 2, 3, 4, 5], 1);
        let p = path_along_cycle(&c, 1, 0, 2, &VertexSet::from([4])).unwrap();
        assert_eq!(p, ArcSearch::Unique(vec![0, 1, 2]));
        let p = path_along_cycle(&c, 1, 0, 2, &VertexSet::new()).unwrap();
        assert_eq!(p, ArcSearch::BothQualify);
        let p = path_along_cycle(&c, 1, 0, 3, &VertexSet::from([1, 5])).unwrap();
        assert_eq!(p, ArcSearch::Neither);
        assert!(path_along_cycle(&c, 1, 0, 6, &VertexSet::new()).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let (g, c) = k5_two_hamiltonians();
        let d = to_decomposition(&c);
        let c2 = from_decomposition(&d, 5).unwrap();
        assert!(verify_legal(&g, &c2).ok);
        assert_eq!(to_decomposition(&c2), d);
    }

    #[test]
    fn from_decomposition_too_many() {
        let d = CycleDecomposition {
            n: 6,
            cycles: vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 4, 5]],
        };
        assert_eq!(
            from_decomposition(&d, 6).unwrap_err(),
            ColouringError::TooManyCycles(3, 2)
        );
    }

    #[test]
    fn split_bowtie() {
        // bowtie: triangles 0-1-2 and 2-3-4 sharing vertex 2, all colour 1
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let mut c = LegalColouring::new(5);
        assign_cycle(&mut c, &[0, 1, 2], 1);
        assign_cycle(&mut c, &[2, 3, 4], 1);
        let out = split_two_cycle_class(5, &c.assignment, 1).unwrap();
        assert!(verify_legal(&g, &out).ok);
        assert_eq!(out.colours_used(), 2);
    }

    #[test]
    fn split_rejects_single_cycle() {
        let mut c = LegalColouring::new(5);
        assign_cycle(&mut c, &[0, 1, 2, 3, 4], 1);
        assert_eq!(
            split_two_cycle_class(5, &c.assignment, 1).unwrap_err(),
            ColouringError::ClassNotTwoCycles(1)
        );
    }

    #[test]
    fn split_without_free_colour() {
        // n = 5 gives bound 2, both colours in use
        let mut c = LegalColouring::new(5);
        assign_cycle(&mut c, &[0, 1, 2], 1);
        assign_cycle(&mut c, &[2, 3, 4], 1);
        assign_cycle(&mut c, &[0, 3, 1, 4], 2);
        // colour 1 still two triangles, but colour 2 occupies the only spare id
        let r = split_two_cycle_class(5, &c.assignment, 1);
        assert_eq!(r.unwrap_err(), ColouringError::NoFreeColour);
    }

    #[test]
    fn repair_leaves_non_mono_untouched() {
        let g = Graph::complete(5);
        let mut c = LegalColouring::new(5);
        assign_cycle(&mut c, &[0, 1, 2, 3, 4], 1);
        assign_cycle(&mut c, &[0, 2, 4, 1, 3], 2);
        let out = repair_mono_triangle(&g, &c, 0, 1, 2, 3).unwrap();
        assert_eq!(out, c);
    }

    #[test]
    fn repair_rejects_non_clique() {
        let g = Graph::cycle(4);
        let c = LegalColouring::new(4);
        assert_eq!(
            repair_mono_triangle(&g, &c, 0, 1, 2, 3).unwrap_err(),
            ColouringError::NotAClique
        );
    }

    #[test]
    fn renormalize_compacts_ids() {
        let mut c = LegalColouring::new(9);
        assign_cycle(&mut c, &[0, 1, 2], 4);
        assign_cycle(&mut c, &[3, 4, 5], 2);
        let r = c.renormalized();
        assert_eq!(r.colours_used(), 2);
        assert!(r.assignment.values().all(|&c| c <= 2));
    }

    #[test]
    fn canonical_cycle_orientation() {
        assert_eq!(canonical_cycle(&[2, 1, 0]), vec![0, 1, 2]);
        assert_eq!(canonical_cycle(&[3, 4, 0, 2]), vec![0, 2, 3, 4]);
    }
}
