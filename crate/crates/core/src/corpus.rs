//! Test-instance supply: exhaustive enumeration of small connected even
//! graphs (one per isomorphism class), random bounded-pathwidth even graphs,
//! and closed-form Hamilton decompositions of complete and complete
//! bipartite graphs.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_key, CanonKey};
use crate::colouring::CycleDecomposition;
use crate::graph::{is_even_graph, Edge, Graph, Vertex, VertexSet};
use crate::pathwidth::PathDecomposition;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum GeneratorSpec {
    Enumerate { n: usize },
    RandomPw { n: usize, k: usize, seed: u64, count: usize },
    CompleteOdd { k: usize },
    CompleteBipartite { k: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("enumeration supports n <= 10, got {0}")]
    TooLarge(usize),
    #[error("generator failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("pathwidth cap is 6, got {0}")]
    WidthCapExceeded(usize),
}

/// All non-isomorphic graphs on `n` labelled vertices, as canonical keys.
/// Grown level by level: every (n−1)-vertex graph is extended by one vertex
/// attached to every possible neighbour set, with canonical deduplication.
fn all_graphs(n: usize) -> Vec<CanonKey> {
    assert!(n <= 9, "all-graphs level limited to 9 vertices");
    let mut level: Vec<CanonKey> = vec![canonical_key(&Graph::empty(1))];
    for k in 2..=n {
        let mut seen: HashSet<CanonKey> = HashSet::new();
        for key in &level {
            let base = crate::canon::graph_from_key(key);
            for mask in 0u32..1 << (k - 1) {
                let mut edges: Vec<(Vertex, Vertex)> = base.edges().map(|e| (e.0, e.1)).collect();
                for b in 0..k - 1 {
                    if mask >> b & 1 == 1 {
                        edges.push((b, k - 1));
                    }
                }
                let g = Graph::from_edge_list(k, &edges).unwrap();
                seen.insert(canonical_key(&g));
            }
        }
        let mut next: Vec<CanonKey> = seen.into_iter().collect();
        next.sort_unstable();
        level = next;
    }
    level
}

/// Every connected even-degree simple graph on `n` vertices, one per
/// isomorphism class, in deterministic (canonical-key) order.
///
/// Uses the parity completion: deleting any vertex `v` of an even graph
/// leaves a graph whose odd-degree vertices are exactly `N(v)`, so every
/// candidate arises from an (n−1)-vertex graph by attaching one vertex to
/// all its odd-degree vertices.
pub fn enumerate_even_connected(n: usize) -> Result<Vec<Graph>, CorpusError> {
    if n > 10 {
        return Err(CorpusError::TooLarge(n));
    }
    if n < 3 {
        return Ok(Vec::new());
    }
    let mut seen: HashSet<CanonKey> = HashSet::new();
    for key in all_graphs(n - 1) {
        let base = crate::canon::graph_from_key(&key);
        let odd: Vec<Vertex> = (0..base.n()).filter(|&v| base.degree(v) % 2 == 1).collect();
        if odd.len() < 2 {
            continue;
        }
        // connectivity of the result needs every base component to meet N(v)
        let odd_set: VertexSet = odd.iter().copied().collect();
        if !base
            .components()
            .iter()
            .all(|c| c.iter().any(|v| odd_set.contains(v)))
        {
            continue;
        }
        let mut edges: Vec<(Vertex, Vertex)> = base.edges().map(|e| (e.0, e.1)).collect();
        for &v in &odd {
            edges.push((v, n - 1));
        }
        let g = Graph::from_edge_list(n, &edges).unwrap();
        debug_assert!(is_even_graph(&g) && g.is_connected());
        seen.insert(canonical_key(&g));
    }
    let mut keys: Vec<CanonKey> = seen.into_iter().collect();
    keys.sort_unstable();
    Ok(keys.iter().map(crate::canon::graph_from_key).collect())
}

/// Connected even graph of pathwidth at most `k`, generated along a random
/// smooth bag sequence and parity-repaired inside bags. Reproducible per
/// seed. Also returns the width-`k` certificate decomposition.
pub fn random_even_bounded_pw_with_certificate(
    n: usize,
    k: usize,
    seed: u64,
) -> Result<(Graph, PathDecomposition), CorpusError> {
    if k > 6 {
        return Err(CorpusError::WidthCapExceeded(k));
    }
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = k.min(n - 1);
    for _attempt in 0..200 {
        if let Some(out) = try_generate(n, width, &mut rng) {
            return Ok(out);
        }
    }
    Err(CorpusError::GenerationFailed(200))
}

pub fn random_even_bounded_pw(n: usize, k: usize, seed: u64) -> Result<Graph, CorpusError> {
    random_even_bounded_pw_with_certificate(n, k, seed).map(|(g, _)| g)
}

fn try_generate(n: usize, width: usize, rng: &mut ChaCha8Rng) -> Option<(Graph, PathDecomposition)> {
    // random vertex order: bag_1 holds the first width+1 vertices, then each
    // step drops a random member and introduces the next vertex
    let mut order: Vec<Vertex> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut bags: Vec<VertexSet> = Vec::new();
    let mut cur: Vec<Vertex> = order[..width + 1].to_vec();
    bags.push(cur.iter().copied().collect());
    for &v in &order[width + 1..] {
        let drop = rng.gen_range(0..cur.len());
        cur.remove(drop);
        cur.push(v);
        bags.push(cur.iter().copied().collect());
    }

    // interval of each vertex over the bag sequence
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![0usize; n];
    for (i, b) in bags.iter().enumerate() {
        for &v in b {
            lo[v] = lo[v].min(i);
            hi[v] = hi[v].max(i);
        }
    }
    let cohabit = |a: Vertex, b: Vertex| lo[a] <= hi[b] && lo[b] <= hi[a];

    // random subset of cohabiting pairs, then parity repair along the vertex
    // order (order-adjacent vertices always share a bag)
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if cohabit(i, j) && rng.gen_bool(0.62) {
                g = g.with_edge(i, j);
            }
        }
    }
    // parity repair: pair odd vertices up and toggle the edges of a
    // cohabitation path between them, which flips exactly the endpoint
    // parities and keeps every edge inside some bag
    let odd: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) % 2 == 1).collect();
    for pair in odd.chunks(2) {
        if let [a, b] = *pair {
            let path = cohab_path(n, a, b, &cohabit)?;
            for w in path.windows(2) {
                g = g.with_edge_toggled(w[0], w[1]);
            }
        }
    }
    debug_assert!(g.edges().all(|e| cohabit(e.0, e.1)));
    if !is_even_graph(&g) || !g.is_connected() || g.m() == 0 {
        return None;
    }
    let pd = PathDecomposition { bags };
    debug_assert!(pd.validate(&g).is_ok());
    Some((g, pd))
}

/// BFS in the cohabitation graph (vertices adjacent when their bag
/// intervals overlap).
fn cohab_path(
    n: usize,
    a: Vertex,
    b: Vertex,
    cohabit: &impl Fn(Vertex, Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[a] = true;
    let mut frontier = vec![a];
    while !frontier.is_empty() && !seen[b] {
        let mut next = Vec::new();
        for &v in &frontier {
            for w in 0..n {
                if !seen[w] && cohabit(v, w) && v != w {
                    seen[w] = true;
                    pred[w] = v;
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
    while cur != a {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// K_{2k+1} with its k-Hamiltonian-cycle decomposition by the standard
/// rotation construction: the zig-zag cycle through a hub, rotated k times.
pub fn walecki_decomposition(k: usize) -> (Graph, CycleDecomposition) {
    assert!(k >= 1);
    let n = 2 * k + 1;
    let g = Graph::complete(n);
    let hub = 2 * k;
    let m = 2 * k; // rim size
    let mut cycles = Vec::new();
    for j in 0..k {
        let mut cyc = vec![hub, j % m];
        // zig-zag: j+1, j-1, j+2, j-2, ...
        for step in 1..m {
            let offset = step.div_ceil(2);
            let v = if step % 2 == 1 {
                (j + offset) % m
            } else {
                (j + m - offset) % m
            };
            cyc.push(v);
        }
        cycles.push(cyc);
    }
    let d = CycleDecomposition { n, cycles }.canonical();
    (g, d)
}

/// K_{2k,2k} with its k-Hamiltonian-cycle decomposition: cycle j alternates
/// the two sides using index differences 2j and 2j+1.
pub fn bipartite_hamilton_decomposition(k: usize) -> (Graph, CycleDecomposition) {
    assert!(k >= 1);
    let side = 2 * k;
    let n = 2 * side;
    let mut edges = Vec::new();
    for a in 0..side {
        for b in 0..side {
            edges.push((a, side + b));
        }
    }
    let g = Graph::from_edge_list(n, &edges).unwrap();
    let mut cycles = Vec::new();
    for j in 0..k {
        let mut cyc = Vec::with_capacity(2 * side);
        for i in 0..side {
            cyc.push(i);
            cyc.push(side + (i + 2 * j) % side);
        }
        cycles.push(cyc);
    }
    let d = CycleDecomposition { n, cycles }.canonical();
    (g, d)
}

/// Brute-force enumeration over all labelled graphs, used as the exhaustive
/// cross-check for small n.
pub fn enumerate_even_connected_naive(n: usize) -> Vec<Graph> {
    assert!(n <= 6);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut seen: BTreeSet<CanonKey> = BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edge_list(n, &edges).unwrap();
        if g.m() > 0 && is_even_graph(&g) && g.is_connected() {
            seen.insert(canonical_key(&g));
        }
    }
    seen.iter().map(crate::canon::graph_from_key).collect()
}

/// The doubled collection for the small-cycle-double-cover check: every
/// cycle listed twice covers each edge exactly twice.
pub fn double_cover(d: &CycleDecomposition) -> Vec<Vec<Vertex>> {
    let mut out = d.cycles.clone();
    out.extend(d.cycles.iter().cloned());
    out
}

/// Multiset of edge coverage counts for a cycle collection.
pub fn coverage_counts(cycles: &[Vec<Vertex>]) -> std::collections::BTreeMap<Edge, usize> {
    let mut m = std::collections::BTreeMap::new();
    for c in cycles {
        for i in 0..c.len() {
            *m.entry(Edge::new(c[i], c[(i + 1) % c.len()])).or_insert(0) += 1;
        }
    }
    m
}
