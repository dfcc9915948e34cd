//! Exact smooth path decompositions of width at most 6 and the boundary
//! machinery: unique leaving vertices v(s,t), per-vertex degree bounds, and
//! the degree-6 structure locator.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::SearchBudget;
use crate::graph::{Graph, Vertex, VertexSet};

/// Ordered bag sequence. Bags are sorted vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathwidthError {
    #[error("width cap is 6, got {0}")]
    WidthCapExceeded(usize),
    #[error("search budget exhausted")]
    ResourceLimit,
    #[error("decomposition is not smooth")]
    NotSmooth,
    #[error("invalid path decomposition: {0}")]
    Invalid(String),
}

impl PathDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }

    /// Bag interval `[s(v), t(v)]` of a vertex, if present anywhere.
    pub fn interval(&self, v: Vertex) -> Option<(usize, usize)> {
        let lo = self.bags.iter().position(|b| b.contains(&v))?;
        let hi = self.bags.iter().rposition(|b| b.contains(&v))?;
        Some((lo, hi))
    }

    /// Interval property, edge coverage, vertex coverage.
    pub fn validate(&self, g: &Graph) -> Result<(), PathwidthError> {
        if self.bags.is_empty() {
            return Err(PathwidthError::Invalid("no bags".into()));
        }
        for v in 0..g.n() {
            match self.interval(v) {
                None => {
                    return Err(PathwidthError::Invalid(format!("vertex {v} in no bag")));
                }
                Some((lo, hi)) => {
                    for i in lo..=hi {
                        if !self.bags[i].contains(&v) {
                            return Err(PathwidthError::Invalid(format!(
                                "vertex {v} has a gap at bag {i}"
                            )));
                        }
                    }
                }
            }
        }
        for e in g.edges() {
            if !self
                .bags
                .iter()
                .any(|b| b.contains(&e.0) && b.contains(&e.1))
            {
                return Err(PathwidthError::Invalid(format!("edge {e:?} in no bag")));
            }
        }
        Ok(())
    }

    /// All bags size width+1 and consecutive intersections size width.
    pub fn is_smooth(&self) -> bool {
        let k = self.width();
        self.bags.iter().all(|b| b.len() == k + 1)
            && self
                .bags
                .windows(2)
                .all(|w| w[0].intersection(&w[1]).count() == k)
    }
}

/// Width-`cap` path decomposition via branch-and-bound over vertex
/// orderings (a path decomposition of width k is an ordering whose every
/// prefix has at most k vertices with a neighbour outside the prefix).
pub fn find_path_decomposition(
    g: &Graph,
    cap: usize,
    budget: &SearchBudget,
) -> Result<Option<PathDecomposition>, PathwidthError> {
    if cap > 6 {
        return Err(PathwidthError::WidthCapExceeded(cap));
    }
    let n = g.n();
    if n == 0 {
        return Ok(Some(PathDecomposition {
            bags: vec![VertexSet::new()],
        }));
    }
    assert!(n <= 128, "pathwidth search limited to 128 vertices");
    if n <= cap + 1 {
        return Ok(Some(PathDecomposition {
            bags: vec![(0..n).collect()],
        }));
    }

    let adj: Vec<u128> = {
        let mut a = vec![0u128; n];
        for e in g.edges() {
            a[e.0] |= 1 << e.1;
            a[e.1] |= 1 << e.0;
        }
        a
    };
    let full: u128 = if n == 128 { !0 } else { (1 << n) - 1 };
    let boundary_size = |placed: u128| -> u32 {
        (0..n)
            .filter(|&v| placed >> v & 1 == 1 && adj[v] & !placed & full != 0)
            .count() as u32
    };

    let mut visited: HashSet<u128> = HashSet::new();
    let mut order: Vec<Vertex> = Vec::with_capacity(n);
    let mut nodes: u64 = 0;

    fn dfs(
        n: usize,
        cap: usize,
        adj: &[u128],
        full: u128,
        placed: u128,
        order: &mut Vec<Vertex>,
        visited: &mut HashSet<u128>,
        nodes: &mut u64,
        max_nodes: u64,
        boundary_size: &dyn Fn(u128) -> u32,
    ) -> Result<bool, PathwidthError> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(PathwidthError::ResourceLimit);
        }
        if order.len() == n {
            return Ok(true);
        }
        // dominance: a vertex whose neighbourhood is fully placed can always
        // be placed next
        let absorbed =
            (0..n).find(|&v| placed >> v & 1 == 0 && adj[v] & !placed & full == 0);
        let cands: Vec<Vertex> = match absorbed {
            Some(v) => vec![v],
            None => {
                let mut cs: Vec<(u32, Vertex)> = (0..n)
                    .filter(|&v| placed >> v & 1 == 0)
                    .map(|v| (boundary_size(placed | (1 << v)), v))
                    .filter(|&(b, _)| b as usize <= cap)
                    .collect();
                cs.sort_unstable();
                cs.into_iter().map(|(_, v)| v).collect()
            }
        };
        for v in cands {
            let np = placed | (1 << v);
            if boundary_size(np) as usize > cap {
                continue;
            }
            if !visited.insert(np) {
                continue;
            }
            order.push(v);
            if dfs(
                n,
                cap,
                adj,
                full,
                np,
                order,
                visited,
                nodes,
                max_nodes,
                boundary_size,
            )? {
                return Ok(true);
            }
            order.pop();
        }
        Ok(false)
    }

    let found = dfs(
        n,
        cap,
        &adj,
        full,
        0,
        &mut order,
        &mut visited,
        &mut nodes,
        budget.max_nodes,
        &boundary_size,
    )?;
    if !found {
        return Ok(None);
    }

    // bags from the ordering: B_i = {v_i} ∪ {earlier vertices with a
    // neighbour at or after v_i}
    let mut placed: u128 = 0;
    let mut bags = Vec::with_capacity(n);
    for &v in &order {
        let mut bag = VertexSet::from([v]);
        for u in 0..n {
            // u still has an unplaced neighbour (possibly v itself)
            if placed >> u & 1 == 1 && adj[u] & !placed & full != 0 {
                bag.insert(u);
            }
        }
        placed |= 1 << v;
        bags.push(bag);
    }
    let pd = PathDecomposition { bags };
    debug_assert!(pd.validate(g).is_ok());
    debug_assert!(pd.width() <= cap);
    Ok(Some(pd))
}

/// Smooth a valid decomposition of width k: every bag gets size k+1 and
/// consecutive bags intersect in exactly k vertices, giving n−k bags.
pub fn smooth(pd: &PathDecomposition, g: &Graph) -> PathDecomposition {
    let k = pd.width();
    let mut bags = pd.bags.clone();

    // drop bags contained in a neighbour
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i + 1 < bags.len() {
            if bags[i].is_subset(&bags[i + 1]) || bags[i + 1].is_subset(&bags[i]) {
                if bags[i].is_subset(&bags[i + 1]) {
                    bags.remove(i);
                } else {
                    bags.remove(i + 1);
                }
                changed = true;
            } else {
                i += 1;
            }
        }
    }

    // pad deficient bags from the nearer larger neighbour, lowest vertex first
    loop {
        let defect = bags.iter().position(|b| b.len() < k + 1);
        let i = match defect {
            Some(i) => i,
            None => break,
        };
        let donor = neighbour_donor(&bags, i);
        match donor {
            Some(j) => {
                let v = *bags[j].difference(&bags[i]).next().unwrap();
                bags[i].insert(v);
            }
            None => {
                // single undersized bag: pad with any absent vertex
                let v = (0..g.n()).find(|v| !bags[i].contains(v)).unwrap();
                bags[i].insert(v);
            }
        }
    }

    // split steps with symmetric difference larger than 2
    let mut i = 0;
    while i + 1 < bags.len() {
        let inter: usize = bags[i].intersection(&bags[i + 1]).count();
        if inter < k {
            let leave = *bags[i].difference(&bags[i + 1]).next().unwrap();
            let enter = *bags[i + 1].difference(&bags[i]).next().unwrap();
            let mut mid = bags[i].clone();
            mid.remove(&leave);
            mid.insert(enter);
            bags.insert(i + 1, mid);
        }
        i += 1;
    }

    // a split can reintroduce duplicate consecutive bags
    let mut j = 0;
    while j + 1 < bags.len() {
        if bags[j] == bags[j + 1] {
            bags.remove(j + 1);
        } else {
            j += 1;
        }
    }

    let out = PathDecomposition { bags };
    debug_assert!(out.validate(g).is_ok());
    debug_assert!(out.is_smooth(), "smoothing failed: {out:?}");
    debug_assert_eq!(out.bags.len(), g.n() - out.width());
    out
}

fn neighbour_donor(bags: &[VertexSet], i: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (j, b) in bags.iter().enumerate() {
        if b.difference(&bags[i]).next().is_some() && b.len() > bags[i].len() {
            let d = i.abs_diff(j);
            if best.map_or(true, |bj| d < i.abs_diff(bj)) {
                best = Some(j);
            }
        }
    }
    best
}

/// Boundary data of a smooth decomposition: the unique vertex leaving at
/// each path edge, plus the degree certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryReport {
    /// `leaving[s]` is v(s+1, s+2) in 1-based bag numbering: the unique
    /// vertex in bag s not in bag s+1.
    pub leaving: Vec<Vertex>,
    /// `entering[s]` is v(s+2, s+1): the unique vertex in bag s+1 not in s.
    pub entering: Vec<Vertex>,
    /// (vertex, degree, bound |P(v)| + k − 1) for every vertex.
    pub degree_certificates: Vec<(Vertex, usize, usize)>,
    /// (i, v(i, i+1), degree bound i + k − 1) for i = 1..⌊n/2⌋ from the left
    /// plus the mirrored entries from the right.
    pub low_degree_guarantees: Vec<(usize, Vertex, usize)>,
}

pub fn boundary_report(g: &Graph, pd: &PathDecomposition) -> Result<BoundaryReport, PathwidthError> {
    if !pd.is_smooth() {
        return Err(PathwidthError::NotSmooth);
    }
    let k = pd.width();
    let mut leaving = Vec::new();
    let mut entering = Vec::new();
    for w in pd.bags.windows(2) {
        let out: Vec<Vertex> = w[0].difference(&w[1]).copied().collect();
        let inn: Vec<Vertex> = w[1].difference(&w[0]).copied().collect();
        if out.len() != 1 || inn.len() != 1 {
            return Err(PathwidthError::NotSmooth);
        }
        leaving.push(out[0]);
        entering.push(inn[0]);
    }
    let mut degree_certificates = Vec::new();
    for v in 0..g.n() {
        let (lo, hi) = pd
            .interval(v)
            .ok_or_else(|| PathwidthError::Invalid(format!("vertex {v} missing")))?;
        degree_certificates.push((v, g.degree(v), (hi - lo + 1) + k - 1));
    }
    let mut low_degree_guarantees = Vec::new();
    let half = g.n() / 2;
    let nprime = pd.bags.len();
    for i in 1..=half.min(leaving.len()) {
        low_degree_guarantees.push((i, leaving[i - 1], i + k - 1));
        // v(n'+1−i, n'−i): the vertex of bag n'+1−i absent from bag n'−i
        low_degree_guarantees.push((i, entering[nprime - i - 1], i + k - 1));
    }
    Ok(BoundaryReport {
        leaving,
        entering,
        degree_certificates,
        low_degree_guarantees,
    })
}

/// One of the three degree-6 pair configurations, located at a path end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairCase {
    NonAdjacentCommon6,
    AdjacentCommon5,
    AdjacentCommon4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureLocation {
    pub u: Vertex,
    pub v: Vertex,
    pub w: Vertex,
    pub side: Side,
    pub case: PairCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocateOutcome {
    Found(StructureLocation),
    LowDegreeVertexFound(Vertex),
    Inconclusive,
}

/// Inspect the first three boundary vertices of each end of a smooth
/// width-6 decomposition: either all three have degree >= 6 and the first
/// two form one of the three pair configurations, or a low-degree vertex is
/// reported for the reduction rules.
pub fn locate_structure(g: &Graph, pd: &PathDecomposition) -> LocateOutcome {
    if pd.bags.len() < 4 {
        return LocateOutcome::Inconclusive;
    }
    let report = match boundary_report(g, pd) {
        Ok(r) => r,
        Err(_) => return LocateOutcome::Inconclusive,
    };
    let nprime = pd.bags.len();
    let candidates = [
        (
            Side::Left,
            [report.leaving[0], report.leaving[1], report.leaving[2]],
        ),
        (
            Side::Right,
            [
                report.entering[nprime - 2],
                report.entering[nprime - 3],
                report.entering[nprime - 4],
            ],
        ),
    ];
    for (side, [u, v, w]) in candidates {
        if let Some(&low) = [u, v, w].iter().find(|&&x| g.degree(x) < 6) {
            return LocateOutcome::LowDegreeVertexFound(low);
        }
        let common = crate::graph::common_neighbourhood(g, u, v);
        let case = if g.has_edge(u, v) {
            match common.len() {
                5 => Some(PairCase::AdjacentCommon5),
                4 => Some(PairCase::AdjacentCommon4),
                _ => None,
            }
        } else if common.len() == 6 && g.neighbours(u) == g.neighbours(v) {
            Some(PairCase::NonAdjacentCommon6)
        } else {
            None
        };
        if let Some(case) = case {
            return LocateOutcome::Found(StructureLocation { u, v, w, side, case });
        }
    }
    LocateOutcome::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        Graph::from_edge_list(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn p5_has_pathwidth_1() {
        let g = path_graph(5);
        let pd = find_path_decomposition(&g, 1, &SearchBudget::default())
            .unwrap()
            .unwrap();
        pd.validate(&g).unwrap();
        assert!(pd.width() <= 1);
    }

    #[test]
    fn k7_fits_width_6_k8_does_not() {
        let k7 = Graph::complete(7);
        let pd = find_path_decomposition(&k7, 6, &SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(pd.width(), 6);
        let k8 = Graph::complete(8);
        assert!(find_path_decomposition(&k8, 6, &SearchBudget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn width_cap_is_enforced() {
        let g = Graph::complete(3);
        assert_eq!(
            find_path_decomposition(&g, 7, &SearchBudget::default()).unwrap_err(),
            PathwidthError::WidthCapExceeded(7)
        );
    }

    #[test]
    fn smooth_c7() {
        let g = Graph::cycle(7);
        let pd = find_path_decomposition(&g, 2, &SearchBudget::default())
            .unwrap()
            .unwrap();
        let s = smooth(&pd, &g);
        assert!(s.is_smooth());
        assert_eq!(s.bags.len(), 7 - s.width());
        let report = boundary_report(&g, &s).unwrap();
        assert_eq!(report.leaving.len(), s.bags.len() - 1);
    }

    #[test]
    fn smooth_is_idempotent_on_smooth_input() {
        let g = Graph::cycle(6);
        let pd = find_path_decomposition(&g, 2, &SearchBudget::default())
            .unwrap()
            .unwrap();
        let s = smooth(&pd, &g);
        assert_eq!(smooth(&s, &g), s);
    }

    #[test]
    fn single_bag_has_empty_boundary() {
        let g = Graph::complete(7);
        let pd = PathDecomposition {
            bags: vec![(0..7).collect()],
        };
        let s = smooth(&pd, &g);
        assert_eq!(s.bags.len(), 1);
        let report = boundary_report(&g, &s).unwrap();
        assert!(report.leaving.is_empty());
    }

    #[test]
    fn duplicate_bag_removed() {
        let g = path_graph(5);
        let pd = PathDecomposition {
            bags: vec![
                VertexSet::from([0, 1]),
                VertexSet::from([1, 2]),
                VertexSet::from([1, 2]),
                VertexSet::from([2, 3]),
                VertexSet::from([3, 4]),
            ],
        };
        let s = smooth(&pd, &g);
        assert!(s.is_smooth());
        assert_eq!(s.bags.len(), 4);
    }

    #[test]
    fn degree_bound_holds() {
        let g = Graph::cycle(7);
        let pd = find_path_decomposition(&g, 2, &SearchBudget::default())
            .unwrap()
            .unwrap();
        let s = smooth(&pd, &g);
        let r = boundary_report(&g, &s).unwrap();
        for (_, deg, bound) in r.degree_certificates {
            assert!(deg <= bound);
        }
    }

    #[test]
    fn locate_structure_flags_low_degree() {
        let g = Graph::cycle(8);
        let pd = find_path_decomposition(&g, 2, &SearchBudget::default())
            .unwrap()
            .unwrap();
        let s = smooth(&pd, &g);
        match locate_structure(&g, &s) {
            LocateOutcome::LowDegreeVertexFound(v) => assert!(g.degree(v) < 6),
            other => panic!("expected low-degree report, got {other:?}"),
        }
    }
}
