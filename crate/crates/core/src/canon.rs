//! Canonical forms for small graphs: the lexicographically smallest
//! upper-triangle adjacency bit-string over all vertex relabellings,
//! computed by refined-partition backtracking. Used for isomorphism
//! rejection during enumeration.

use crate::graph::{Graph, Vertex};

/// Canonical key: `n` plus the minimal upper-triangle bit-string packed into
/// a u64 (supports n <= 11).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CanonKey {
    pub n: u8,
    pub bits: u64,
}

/// Capacity of the packed triangle: C(11, 2).
const PAIR_BITS: u32 = 55;

/// Bit position of pair (i, j), i < j, in column-major upper-triangle order,
/// packed so that the pair sequence reads most-significant first. All pairs
/// within `{0..k}` then occupy the top of the word, which makes prefix
/// pruning sound under integer comparison.
fn pair_bit(i: usize, j: usize) -> u32 {
    debug_assert!(i < j);
    PAIR_BITS - 1 - (j * (j - 1) / 2 + i) as u32
}

pub fn canonical_key(g: &Graph) -> CanonKey {
    let n = g.n();
    assert!(n <= 11, "canonical form limited to 11 vertices");
    if n <= 1 {
        return CanonKey { n: n as u8, bits: 0 };
    }

    // invariant used to seed the search: (degree, sorted neighbour degrees)
    let mut inv: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbours(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();

    let mut best: Option<u64> = None;
    let mut perm: Vec<Vertex> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(g, n, &mut perm, &mut used, 0u64, &mut best, &mut inv);
    CanonKey {
        n: n as u8,
        bits: best.unwrap(),
    }
}

/// Extend the partial relabelling; `bits` holds the adjacency bits among the
/// already-placed vertices. Prunes whenever the partial string exceeds the
/// best complete string on the decided prefix.
fn search(
    g: &Graph,
    n: usize,
    perm: &mut Vec<Vertex>,
    used: &mut [bool],
    bits: u64,
    best: &mut Option<u64>,
    inv: &[(usize, Vec<usize>)],
) {
    let k = perm.len();
    if k == n {
        if best.map_or(true, |b| bits < b) {
            *best = Some(bits);
        }
        return;
    }
    // candidates ordered by invariant so promising labellings come first
    let mut cands: Vec<Vertex> = (0..n).filter(|&v| !used[v]).collect();
    cands.sort_by(|&a, &b| inv[a].cmp(&inv[b]).then(a.cmp(&b)));
    for v in cands {
        let mut nb = bits;
        for (slot, &u) in perm.iter().enumerate() {
            if g.has_edge(u, v) {
                nb |= 1 << pair_bit(slot, k);
            }
        }
        // prefix comparison: all bits among the first k+1 labels are final
        // and occupy the top of the word
        if let Some(b) = *best {
            let decided = ((k + 1) * k / 2) as u32;
            let mask = ((1u64 << decided) - 1) << (PAIR_BITS - decided);
            if nb & mask > b & mask {
                continue;
            }
        }
        perm.push(v);
        used[v] = true;
        search(g, n, perm, used, nb, best, inv);
        used[v] = false;
        perm.pop();
    }
}

/// Rebuild a graph from a canonical key.
pub fn graph_from_key(key: &CanonKey) -> Graph {
    let n = key.n as usize;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if key.bits >> pair_bit(i, j) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_list(n, &edges).unwrap()
}

/// Reference implementation: minimum over all permutations, used to
/// cross-check the backtracking search on small graphs.
#[cfg(test)]
pub fn canonical_key_brute(g: &Graph) -> CanonKey {
    let n = g.n();
    assert!(n <= 8);
    let mut idx: Vec<Vertex> = (0..n).collect();
    let mut best = u64::MAX;
    permute(&mut idx, 0, &mut |p: &[Vertex]| {
        let mut bits = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(p[i], p[j]) {
                    bits |= 1 << pair_bit(i, j);
                }
            }
        }
        best = best.min(bits);
    });
    if n <= 1 {
        best = 0;
    }
    CanonKey {
        n: n as u8,
        bits: best,
    }
}

#[cfg(test)]
fn permute(idx: &mut Vec<Vertex>, k: usize, f: &mut impl FnMut(&[Vertex])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, f);
        idx.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force_on_small_graphs() {
        // every graph on 5 vertices
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| ((i + 1)..5).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edge_list(5, &edges).unwrap();
            assert_eq!(canonical_key(&g), canonical_key_brute(&g));
        }
    }

    #[test]
    fn isomorphic_graphs_agree() {
        let g1 = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let g2 = Graph::from_edge_list(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(canonical_key(&g1), canonical_key(&g2));
        let p4 = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_ne!(canonical_key(&g1), canonical_key(&p4));
    }

    #[test]
    fn key_round_trip() {
        let g = Graph::complete(6).without_edge(0, 1);
        let key = canonical_key(&g);
        let h = graph_from_key(&key);
        assert_eq!(canonical_key(&h), key);
        assert_eq!(h.m(), g.m());
    }
}
