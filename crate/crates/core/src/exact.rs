//! Exact minimum cycle decomposition by branch-and-bound over canonical
//! cycle enumerations. This is the base-case solver of the pipeline and the
//! independent oracle the lift tests validate against.

use std::time::Instant;

use thiserror::Error;

use crate::colouring::CycleDecomposition;
use crate::graph::{is_even_graph, Graph, Vertex};

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
    /// Optional cycle-count cap; search never explores more cycles than this.
    pub target: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_nodes: 10_000_000,
            max_millis: 60_000,
            target: None,
        }
    }
}

impl SearchBudget {
    pub fn with_target(mut self, k: usize) -> SearchBudget {
        self.target = Some(k);
        self
    }
}

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("search budget exhausted")]
    ResourceLimit { best: Option<CycleDecomposition> },
}

struct Search {
    n: usize,
    /// uncovered adjacency as bit rows (n <= 64 fast path is all we need)
    adj: Vec<u128>,
    deadline: Instant,
    max_millis: u64,
    nodes: u64,
    max_nodes: u64,
    best: Option<Vec<Vec<Vertex>>>,
    best_count: usize,
    /// stop as soon as a decomposition with <= stop_at cycles is found
    stop_at: Option<usize>,
    cur: Vec<Vec<Vertex>>,
    out_of_budget: bool,
}

impl Search {
    fn new(g: &Graph, budget: &SearchBudget, cap: usize, stop_at: Option<usize>) -> Search {
        let mut adj = vec![0u128; g.n()];
        for e in g.edges() {
            adj[e.0] |= 1 << e.1;
            adj[e.1] |= 1 << e.0;
        }
        Search {
            n: g.n(),
            adj,
            deadline: Instant::now(),
            max_millis: budget.max_millis,
            nodes: 0,
            max_nodes: budget.max_nodes,
            best: None,
            best_count: cap + 1,
            stop_at,
            cur: Vec::new(),
            out_of_budget: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.out_of_budget = true;
        } else if self.nodes % 4096 == 0
            && self.deadline.elapsed().as_millis() as u64 > self.max_millis
        {
            self.out_of_budget = true;
        }
        self.out_of_budget
    }

    fn done(&self) -> bool {
        if self.out_of_budget {
            return true;
        }
        match self.stop_at {
            Some(k) => self.best.is_some() && self.best_count <= k,
            None => false,
        }
    }

    /// ceil(max uncovered degree / 2): admissible lower bound on the number
    /// of cycles still needed.
    fn lower_bound(&self) -> usize {
        let md = self.adj.iter().map(|r| r.count_ones()).max().unwrap_or(0);
        (md as usize).div_ceil(2)
    }

    fn solve(&mut self) {
        if self.tick() {
            return;
        }
        let anchor = match (0..self.n).find(|&v| self.adj[v] != 0) {
            Some(v) => v,
            None => {
                // full decomposition
                self.best = Some(self.cur.clone());
                self.best_count = self.cur.len();
                return;
            }
        };
        if self.cur.len() + self.lower_bound() >= self.best_count {
            return;
        }
        let mut path = vec![anchor];
        let mut on_path = 1u128 << anchor;
        self.extend_cycle(anchor, anchor, &mut path, &mut on_path);
    }

    /// Enumerate simple cycles through `anchor` over uncovered edges in
    /// canonical order (neighbours ascending, closing considered after every
    /// extension so longer cycles are tried first at equal prefixes).
    fn extend_cycle(
        &mut self,
        anchor: Vertex,
        cur: Vertex,
        path: &mut Vec<Vertex>,
        on_path: &mut u128,
    ) {
        if self.done() {
            return;
        }
        let mut nbrs = self.adj[cur];
        while nbrs != 0 {
            let w = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if self.done() {
                return;
            }
            if w == anchor {
                // close the cycle; orientation canonicalized by requiring the
                // second vertex to be smaller than the last
                if path.len() >= 3 && path[1] < *path.last().unwrap() {
                    let cycle = path.clone();
                    self.cover(&cycle, false);
                    self.cur.push(cycle.clone());
                    self.solve();
                    self.cur.pop();
                    self.cover(&cycle, true);
                }
                continue;
            }
            // cycles through the anchor may only touch vertices above it,
            // otherwise the same cycle would be enumerated at a lower anchor
            if w < anchor || *on_path & (1 << w) != 0 {
                continue;
            }
            path.push(w);
            *on_path |= 1 << w;
            self.extend_cycle(anchor, w, path, on_path);
            *on_path &= !(1 << w);
            path.pop();
        }
    }

    fn cover(&mut self, cycle: &[Vertex], restore: bool) {
        for i in 0..cycle.len() {
            let a = cycle[i];
            let b = cycle[(i + 1) % cycle.len()];
            if restore {
                self.adj[a] |= 1 << b;
                self.adj[b] |= 1 << a;
            } else {
                self.adj[a] &= !(1 << b);
                self.adj[b] &= !(1 << a);
            }
        }
    }
}

fn solve_component(
    g: &Graph,
    budget: &SearchBudget,
    cap: usize,
    stop_at: Option<usize>,
) -> Result<Option<Vec<Vec<Vertex>>>, ExactError> {
    assert!(g.n() <= 128, "exact search limited to 128 vertices");
    let mut s = Search::new(g, budget, cap, stop_at);
    s.solve();
    if s.out_of_budget {
        return Err(ExactError::ResourceLimit {
            best: s.best.map(|cycles| {
                CycleDecomposition {
                    n: g.n(),
                    cycles,
                }
                .canonical()
            }),
        });
    }
    Ok(s.best)
}

/// A decomposition of `g` into the minimum possible number of cycles.
/// Components are solved independently and their counts summed.
pub fn min_cycle_decomposition(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<CycleDecomposition, ExactError> {
    assert!(is_even_graph(g), "exact solver requires an even graph");
    let mut cycles: Vec<Vec<Vertex>> = Vec::new();
    for comp in g.components() {
        if comp.len() < 3 {
            continue; // isolated vertices carry no edges in an even graph
        }
        let (sub, map) = restrict(g, &comp);
        let inv: Vec<Vertex> = comp.iter().copied().collect();
        let cap = g.m(); // any decomposition has at most m cycles
        let found = solve_component(&sub, budget, cap, None)?;
        let sol = found.expect("even graphs always decompose");
        for cyc in sol {
            cycles.push(cyc.into_iter().map(|v| inv[v]).collect());
        }
        let _ = map;
    }
    Ok(CycleDecomposition { n: g.n(), cycles }.canonical())
}

/// Any decomposition with at most `k` cycles, or `None` when provably none
/// exists.
pub fn decompose_within(
    g: &Graph,
    k: usize,
    budget: &SearchBudget,
) -> Result<Option<CycleDecomposition>, ExactError> {
    assert!(is_even_graph(g), "exact solver requires an even graph");
    let mut cycles: Vec<Vec<Vertex>> = Vec::new();
    let mut remaining = k;
    let comps: Vec<_> = g
        .components()
        .into_iter()
        .filter(|c| c.len() >= 3)
        .collect();
    for (i, comp) in comps.iter().enumerate() {
        let (sub, _) = restrict(g, comp);
        let inv: Vec<Vertex> = comp.iter().copied().collect();
        // later components need at least one cycle each
        let reserve = comps.len() - i - 1;
        if remaining <= reserve {
            return Ok(None);
        }
        let cap = remaining - reserve;
        let found = solve_component(&sub, budget, cap, Some(cap))?;
        match found {
            Some(sol) => {
                remaining -= sol.len();
                for cyc in sol {
                    cycles.push(cyc.into_iter().map(|v| inv[v]).collect());
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(CycleDecomposition { n: g.n(), cycles }.canonical()))
}

/// Does `g` satisfy the Hajos bound `⌊(n−1)/2⌋`?
pub fn hajos_check(g: &Graph, budget: &SearchBudget) -> Result<bool, ExactError> {
    let bound = g.hajos_bound();
    Ok(decompose_within(g, bound, budget)?.is_some())
}

fn restrict(g: &Graph, comp: &crate::graph::VertexSet) -> (Graph, Vec<Option<Vertex>>) {
    let del: crate::graph::VertexSet = (0..g.n()).filter(|v| !comp.contains(v)).collect();
    g.delete_vertices(&del)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{from_decomposition, verify_legal};

    #[test]
    fn k5_needs_two_cycles() {
        let g = Graph::complete(5);
        let d = min_cycle_decomposition(&g, &SearchBudget::default()).unwrap();
        assert_eq!(d.cycles.len(), 2);
        let c = from_decomposition(&d, 5).unwrap();
        assert!(verify_legal(&g, &c).ok);
    }

    #[test]
    fn bowtie_needs_two() {
        let g =
            Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let d = min_cycle_decomposition(&g, &SearchBudget::default()).unwrap();
        assert_eq!(d.cycles.len(), 2);
    }

    #[test]
    fn k7_needs_three() {
        let g = Graph::complete(7);
        let d = min_cycle_decomposition(&g, &SearchBudget::default()).unwrap();
        assert_eq!(d.cycles.len(), 3);
    }

    #[test]
    fn decompose_within_k5() {
        let g = Graph::complete(5);
        assert!(decompose_within(&g, 2, &SearchBudget::default())
            .unwrap()
            .is_some());
        assert!(decompose_within(&g, 1, &SearchBudget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn decompose_within_c6() {
        let g = Graph::cycle(6);
        let d = decompose_within(&g, 1, &SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(d.cycles[0].len(), 6);
    }

    #[test]
    fn hajos_check_small() {
        assert!(hajos_check(&Graph::cycle(3), &SearchBudget::default()).unwrap());
        // K_{4,4} decomposes into 2 Hamiltonian cycles, bound is 3
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in 4..8 {
                edges.push((a, b));
            }
        }
        let k44 = Graph::from_edge_list(8, &edges).unwrap();
        let d = min_cycle_decomposition(&k44, &SearchBudget::default()).unwrap();
        assert_eq!(d.cycles.len(), 2);
        assert!(hajos_check(&k44, &SearchBudget::default()).unwrap());
    }

    #[test]
    fn disconnected_counts_sum() {
        let g =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let d = min_cycle_decomposition(&g, &SearchBudget::default()).unwrap();
        assert_eq!(d.cycles.len(), 2);
    }

    #[test]
    fn determinism() {
        let g = Graph::complete(7);
        let d1 = min_cycle_decomposition(&g, &SearchBudget::default()).unwrap();
        let d2 = min_cycle_decomposition(&g, &SearchBudget::default()).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn budget_is_respected() {
        let g = Graph::complete(9);
        let tiny = SearchBudget {
            max_nodes: 50,
            max_millis: 60_000,
            target: None,
        };
        assert!(matches!(
            min_cycle_decomposition(&g, &tiny),
            Err(ExactError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn monotone_in_k() {
        let g = Graph::complete(7);
        for k in 3..=6 {
            assert!(decompose_within(&g, k, &SearchBudget::default())
                .unwrap()
                .is_some());
        }
        assert!(decompose_within(&g, 2, &SearchBudget::default())
            .unwrap()
            .is_none());
    }
}
