//! Undirected simple graphs with bit-packed adjacency, plus the structural
//! queries the coloring algorithm relies on: connected components, induced
//! P5 detection, bounded clique search and dominating-structure search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Undirected simple graph on vertices `0..n`.
///
/// Immutable after construction. Optional labels record the original vertex
/// names (for instance the 1-indexed DIMACS ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureKind {
    Clique,
    PathP3,
}

/// A dominating set of a connected graph that induces a clique or a P3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominatingStructure {
    pub vertices: VertexSet,
    pub kind: StructureKind,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![VertexSet::empty(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self { adj, labels: None })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![VertexSet::empty(n); n],
            labels: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut s = VertexSet::full(n);
                s.remove(v);
                s
            })
            .collect();
        Self { adj, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Input(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Label of `v`; falls back to the 1-indexed id.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => (v + 1).to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n())
    }

    /// Closed neighborhood `N[v]`.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    /// Induced subgraph on `keep`, plus the map from new ids to old ids.
    /// Labels carry over when present.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (new, &old) in map.iter().enumerate() {
            index[old] = new;
        }
        let m = map.len();
        let adj = map
            .iter()
            .map(|&old| {
                VertexSet::from_iter_in(m, (&self.adj[old] & keep).iter().map(|w| index[w]))
            })
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| map.iter().map(|&old| l[old].clone()).collect());
        (Graph { adj, labels }, map)
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn component_of(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(self.n(), start);
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = self.empty_set();
            for v in &frontier {
                next.union_with(&self.adj[v]);
            }
            next.intersect_with(within);
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }

    /// Connected components, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let all = self.vertex_set();
        let mut left = all.clone();
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let comp = self.component_of(v, &all);
            left.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0, &self.vertex_set()).len() == self.n()
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| {
            let mut rest = set.clone();
            rest.remove(v);
            rest.is_subset(&self.adj[v])
        })
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| !self.adj[v].intersects(set))
    }

    /// True when `set` induces a path on exactly three vertices.
    pub fn induces_p3(&self, set: &VertexSet) -> bool {
        if set.len() != 3 {
            return false;
        }
        let degrees: Vec<usize> = set
            .iter()
            .map(|v| self.adj[v].intersection_len(set))
            .collect();
        let mut sorted = degrees;
        sorted.sort_unstable();
        sorted == [1, 1, 2]
    }

    /// Every vertex of `target` lies in `set` or has a neighbor in it.
    pub fn dominates(&self, set: &VertexSet, target: &VertexSet) -> bool {
        let mut covered = set.clone();
        for v in set {
            covered.union_with(&self.adj[v]);
        }
        target.is_subset(&covered)
    }

    /// Finds an induced path on five vertices, returned in path order.
    ///
    /// Grows induced paths vertex by vertex; a candidate extension must be
    /// adjacent to the current endpoint and to no earlier path vertex.
    pub fn find_induced_p5(&self) -> Option<[usize; 5]> {
        let n = self.n();
        let mut path = [0usize; 5];
        for start in 0..n {
            path[0] = start;
            // `blocked` = path vertices plus neighbors of all but the endpoint
            let blocked = VertexSet::singleton(n, start);
            if self.extend_induced_path(&mut path, 1, &blocked) {
                return Some(path);
            }
        }
        None
    }

    fn extend_induced_path(&self, path: &mut [usize; 5], len: usize, blocked: &VertexSet) -> bool {
        if len == 5 {
            return true;
        }
        let end = path[len - 1];
        let candidates = &self.adj[end] - blocked;
        for next in &candidates {
            path[len] = next;
            let mut blocked_next = blocked | &self.adj[end];
            blocked_next.insert(next);
            if self.extend_induced_path(path, len + 1, &blocked_next) {
                return true;
            }
        }
        false
    }

    /// Returns a clique on `k + 1` vertices if the graph has one.
    pub fn find_clique_exceeding(&self, k: usize) -> Option<VertexSet> {
        let target = k + 1;
        if target > self.n() {
            return None;
        }
        let mut current = Vec::with_capacity(target);
        self.grow_clique(&mut current, self.vertex_set(), target)
            .then(|| VertexSet::from_iter_in(self.n(), current))
    }

    fn grow_clique(&self, current: &mut Vec<usize>, candidates: VertexSet, target: usize) -> bool {
        if current.len() == target {
            return true;
        }
        if current.len() + candidates.len() < target {
            return false;
        }
        let mut rest = candidates;
        while let Some(v) = rest.first() {
            rest.remove(v);
            if current.len() + 1 + rest.len() < target {
                return false;
            }
            current.push(v);
            if self.grow_clique(current, &rest & &self.adj[v], target) {
                return true;
            }
            current.pop();
        }
        false
    }

    /// Finds a dominating clique or dominating induced P3 of a connected graph.
    ///
    /// Candidates are tried by increasing size: cliques of size 1 and 2, then
    /// cliques of size 3 before P3 triples, then larger cliques up to
    /// `max(3, max_clique)`. Within a size the lexicographically smallest set
    /// wins.
    pub fn find_dominating_structure(&self, max_clique: usize) -> Result<DominatingStructure> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Precondition(
                "empty graph has no dominating structure".into(),
            ));
        }
        let all = self.vertex_set();
        let bound = max_clique.max(3);
        for size in 1..=bound.min(n) {
            if let Some(c) = self.first_dominating_clique(size, &all) {
                return Ok(DominatingStructure {
                    vertices: c,
                    kind: StructureKind::Clique,
                });
            }
            if size == 3 {
                if let Some(p) = self.first_dominating_p3(&all) {
                    return Ok(DominatingStructure {
                        vertices: p,
                        kind: StructureKind::PathP3,
                    });
                }
            }
        }
        Err(Error::Precondition(
            "no dominating clique or P3 found; graph is not connected or not P5-free".into(),
        ))
    }

    fn first_dominating_clique(&self, size: usize, all: &VertexSet) -> Option<VertexSet> {
        let mut current = Vec::with_capacity(size);
        let mut covered = Vec::with_capacity(size + 1);
        covered.push(self.empty_set());
        self.search_dominating_clique(&mut current, &mut covered, all.clone(), size, all)
            .then(|| VertexSet::from_iter_in(self.n(), current))
    }

    fn search_dominating_clique(
        &self,
        current: &mut Vec<usize>,
        covered: &mut Vec<VertexSet>,
        candidates: VertexSet,
        size: usize,
        all: &VertexSet,
    ) -> bool {
        if current.len() == size {
            return covered.last().is_some_and(|c| all.is_subset(c));
        }
        let mut rest = candidates;
        while let Some(v) = rest.first() {
            rest.remove(v);
            if current.len() + 1 + rest.len() < size {
                return false;
            }
            let mut cov = covered.last().cloned().unwrap_or_default();
            cov.union_with(&self.adj[v]);
            cov.insert(v);
            current.push(v);
            covered.push(cov);
            if self.search_dominating_clique(current, covered, &rest & &self.adj[v], size, all) {
                return true;
            }
            current.pop();
            covered.pop();
        }
        false
    }

    fn first_dominating_p3(&self, all: &VertexSet) -> Option<VertexSet> {
        let n = self.n();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let edges = self.has_edge(a, b) as u8
                        + self.has_edge(a, c) as u8
                        + self.has_edge(b, c) as u8;
                    if edges != 2 {
                        continue;
                    }
                    let set = VertexSet::from_iter_in(n, [a, b, c]);
                    if self.dominates(&set, all) {
                        return Some(set);
                    }
                }
            }
        }
        None
    }

    /// Checks that `ds` is a valid dominating structure of this graph.
    pub fn is_dominating_structure(&self, ds: &DominatingStructure) -> bool {
        let shape = match ds.kind {
            StructureKind::Clique => !ds.vertices.is_empty() && self.is_clique(&ds.vertices),
            StructureKind::PathP3 => self.induces_p3(&ds.vertices),
        };
        shape && self.dominates(&ds.vertices, &self.vertex_set())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Every 5-subset in every vertex order, checking the exact edge pattern.
    fn brute_force_p5(g: &Graph) -> bool {
        let n = g.n();
        let mut idx = [0usize; 5];
        fn rec(g: &Graph, idx: &mut [usize; 5], depth: usize, start: usize) -> bool {
            if depth == 5 {
                let edges = (0..5)
                    .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                    .filter(|&(i, j)| g.has_edge(idx[i], idx[j]))
                    .count();
                if edges != 4 {
                    return false;
                }
                // four edges + connected + max degree 2 => path
                let set = VertexSet::from_iter_in(g.n(), idx.iter().copied());
                let (sub, _) = g.induced_subgraph(&set);
                return sub.is_connected() && (0..5).all(|v| sub.degree(v) <= 2);
            }
            for v in start..g.n() {
                idx[depth] = v;
                if rec(g, idx, depth + 1, v + 1) {
                    return true;
                }
            }
            false
        }
        n >= 5 && rec(g, &mut idx, 0, 0)
    }

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn build_examples() {
        let g = Graph::new(3, []).unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 0));
        let p5 = path(5);
        assert_eq!(
            p5.edges().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2), (2, 3), (3, 4)]
        );
        assert!(matches!(Graph::new(2, [(0, 0)]), Err(Error::Input(_))));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(Error::Input(_))));
        let dup = Graph::new(2, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn components() {
        assert_eq!(Graph::empty(3).connected_components().len(), 3);
        assert_eq!(path(5).connected_components(), vec![VertexSet::full(5)]);
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let comps = two.connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn p5_detection_examples() {
        assert_eq!(path(5).find_induced_p5(), Some([0, 1, 2, 3, 4]));
        assert_eq!(cycle(5).find_induced_p5(), None);
        assert_eq!(path(6).find_induced_p5(), Some([0, 1, 2, 3, 4]));
        assert!(cycle(7).find_induced_p5().is_some());
    }

    #[test]
    fn p5_detection_matches_enumeration() {
        for seed in 0..400u64 {
            let n = 5 + (seed % 5) as usize;
            let p = [0.2, 0.35, 0.5, 0.7][(seed % 4) as usize];
            let g = random_graph(n, p, seed);
            let found = g.find_induced_p5();
            assert_eq!(found.is_some(), brute_force_p5(&g), "seed {seed}");
            if let Some(w) = found {
                let set = VertexSet::from_iter_in(n, w);
                assert_eq!(set.len(), 5);
                for i in 0..5 {
                    for j in i + 1..5 {
                        assert_eq!(g.has_edge(w[i], w[j]), j == i + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn clique_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(k5.find_clique_exceeding(4), Some(VertexSet::full(5)));
        assert_eq!(cycle(5).find_clique_exceeding(2), None);
        assert_eq!(
            Graph::complete(3).find_clique_exceeding(2),
            Some(VertexSet::full(3))
        );
    }

    #[test]
    fn clique_search_matches_enumeration() {
        for seed in 0..300u64 {
            let n = 3 + (seed % 7) as usize;
            let g = random_graph(n, 0.6, seed);
            for k in 0..=4 {
                let brute = (0u32..1 << n).any(|mask| {
                    mask.count_ones() as usize == k + 1
                        && g.is_clique(&VertexSet::from_iter_in(
                            n,
                            (0..n).filter(|i| mask >> i & 1 == 1),
                        ))
                });
                let found = g.find_clique_exceeding(k);
                assert_eq!(found.is_some(), brute, "seed {seed} k {k}");
                if let Some(c) = found {
                    assert_eq!(c.len(), k + 1);
                    assert!(g.is_clique(&c));
                }
            }
        }
    }

    #[test]
    fn dominating_structure_examples() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let ds = star.find_dominating_structure(3).unwrap();
        assert_eq!(ds.kind, StructureKind::Clique);
        assert_eq!(ds.vertices.to_vec(), vec![0]);

        let c5 = cycle(5);
        let ds = c5.find_dominating_structure(3).unwrap();
        assert_eq!(ds.kind, StructureKind::PathP3);
        assert_eq!(ds.vertices.to_vec(), vec![0, 1, 2]);
        assert!(c5.is_dominating_structure(&ds));

        let single = Graph::empty(1);
        let ds = single.find_dominating_structure(1).unwrap();
        assert_eq!(ds.vertices.to_vec(), vec![0]);
    }

    #[test]
    fn dominating_structure_fails_on_long_path() {
        assert!(matches!(
            path(9).find_dominating_structure(3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            Graph::empty(2).find_dominating_structure(3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn induced_subgraph_maps_ids() {
        let g = cycle(6)
            .with_labels((10..16).map(|i| i.to_string()).collect())
            .unwrap();
        let keep = VertexSet::from_iter_in(6, [1, 2, 3, 5]);
        let (h, map) = g.induced_subgraph(&keep);
        assert_eq!(map, vec![1, 2, 3, 5]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(h.label(3), "15");
    }
}
