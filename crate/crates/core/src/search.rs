//! Exhaustive search for large Sperner partition systems.
//!
//! The Sperner condition is pairwise, so a system is exactly a clique in the
//! graph whose vertices are all k-partitions and whose edges join partitions
//! with mutually incomparable classes. The largest system is a maximum clique,
//! found here by branch and bound with greedy-colouring bounds over bit-set
//! adjacency rows.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{verify_sperner, ClassSet, Partition, PartitionSystem};

/// Every k-partition of `0..n` whose classes all have at least
/// `min_class_size` elements, in sorted canonical order.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub n: usize,
    pub k: usize,
    pub min_class_size: usize,
    pub partitions: Vec<Partition>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Index of a partition (in canonical form) within the set.
    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.binary_search(p).ok()
    }

    /// The first candidate of each class-size shape.
    pub fn shape_representatives(&self) -> Vec<usize> {
        let mut reps: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (i, p) in self.partitions.iter().enumerate() {
            reps.entry(p.class_sizes()).or_insert(i);
        }
        let mut out: Vec<usize> = reps.into_values().collect();
        out.sort_unstable();
        out
    }

    pub fn system_from(&self, vertices: &[usize]) -> PartitionSystem {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        PartitionSystem::new(
            self.n,
            self.k,
            vs.iter().map(|&v| self.partitions[v].clone()).collect(),
        )
    }
}

/// Enumerates candidates via restricted growth strings: element `i` joins an
/// already opened class or opens the next one, pruned whenever the remaining
/// elements cannot fill every class to `min_class_size`.
pub fn enumerate_partitions(n: usize, k: usize, min_class_size: usize) -> Result<CandidateSet> {
    let min_class_size = min_class_size.max(1);
    if k == 0 || n < k * min_class_size {
        return Err(Error::NoCandidates {
            n,
            k,
            min_class_size,
        });
    }
    if n > crate::model::MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "n = {n} exceeds {}",
            crate::model::MAX_ELEMENTS
        )));
    }

    struct Walk {
        n: usize,
        k: usize,
        min: usize,
        blocks: Vec<ClassSet>,
        out: Vec<Partition>,
    }

    impl Walk {
        fn deficit(&self) -> usize {
            let open: usize = self
                .blocks
                .iter()
                .map(|b| self.min.saturating_sub(b.len()))
                .sum();
            open + (self.k - self.blocks.len()) * self.min
        }

        fn go(&mut self, element: usize) {
            if element == self.n {
                if self.blocks.len() == self.k {
                    self.out
                        .push(Partition::from_classes(self.n, self.k, self.blocks.clone()));
                }
                return;
            }
            let remaining_after = self.n - element - 1;
            for b in 0..self.blocks.len() {
                self.blocks[b].insert(element);
                if self.deficit() <= remaining_after {
                    self.go(element + 1);
                }
                self.blocks[b] = ClassSet::from_bits(self.blocks[b].bits() & !(1u128 << element));
            }
            if self.blocks.len() < self.k {
                self.blocks.push(ClassSet::singleton(element));
                if self.deficit() <= remaining_after {
                    self.go(element + 1);
                }
                self.blocks.pop();
            }
        }
    }

    let mut walk = Walk {
        n,
        k,
        min: min_class_size,
        blocks: Vec::with_capacity(k),
        out: Vec::new(),
    };
    walk.go(0);
    let mut partitions = walk.out;
    partitions.sort();
    Ok(CandidateSet {
        n,
        k,
        min_class_size,
        partitions,
    })
}

/// Symmetric adjacency matrix stored as one bit-set row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityGraph {
    vertices: usize,
    words: usize,
    rows: Vec<u64>,
}

impl CompatibilityGraph {
    pub fn empty(vertices: usize) -> Self {
        let words = vertices.div_ceil(64).max(1);
        CompatibilityGraph {
            vertices,
            words,
            rows: vec![0; words * vertices],
        }
    }

    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = CompatibilityGraph::empty(vertices);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Ignores self-loops.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertices).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(u))
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(w * 64 + b)
        })
    })
}

/// Joins every pair of candidates whose classes are all mutually incomparable.
pub fn build_graph(c: &CandidateSet) -> CompatibilityGraph {
    let vertices = c.len();
    let words = vertices.div_ceil(64).max(1);
    let parts = &c.partitions;
    let mut rows = vec![0u64; words * vertices];
    rows.par_chunks_mut(words).enumerate().for_each(|(u, row)| {
        let pu = &parts[u];
        for (v, pv) in parts.iter().enumerate() {
            if u != v && pu.compatible_with(pv) {
                row[v / 64] |= 1 << (v % 64);
            }
        }
    });
    CompatibilityGraph {
        vertices,
        words,
        rows,
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Wall-clock limit; `None` searches to completion.
    pub time_budget: Option<Duration>,
    /// Stop as soon as a clique of this size is found.
    pub target: Option<usize>,
}

/// Result of [`max_clique`], in the graph's vertex numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// Sorted ascending.
    pub clique: Vec<usize>,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// Greedy-colouring bound on the whole graph (or on the union of root
    /// neighbourhoods when roots are fixed).
    pub root_bound: usize,
}

/// Result of a full search, mapped back onto partitions.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: PartitionSystem,
    pub size: usize,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub candidates: usize,
    pub edges: usize,
}

struct Solver {
    /// adjacency in the solver's internal (degeneracy) numbering
    adj: Vec<u64>,
    words: usize,
    to_graph: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    target: Option<usize>,
    stopped: bool,
}

impl Solver {
    fn new(g: &CompatibilityGraph, options: &SearchOptions, start: Instant) -> Self {
        let order = degeneracy_order(g);
        let words = g.vertices.div_ceil(64).max(1);
        let mut to_internal = vec![0; g.vertices];
        for (i, &v) in order.iter().enumerate() {
            to_internal[v] = i;
        }
        let mut adj = vec![0u64; words * g.vertices];
        for (i, &v) in order.iter().enumerate() {
            let row = &mut adj[i * words..(i + 1) * words];
            for u in g.neighbors(v) {
                let j = to_internal[u];
                row[j / 64] |= 1 << (j % 64);
            }
        }
        Solver {
            adj,
            words,
            to_graph: order,
            best: Vec::new(),
            nodes: 0,
            deadline: options.time_budget.map(|b| start + b),
            target: options.target,
            stopped: false,
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Greedy sequential colouring of `p`. Returns the vertices whose colour
    /// is at least `min_color`, in colour order, with their colours.
    fn color_sort(&self, p: &[u64], min_color: usize) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.to_vec();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        let mut q = vec![0u64; self.words];
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            q.copy_from_slice(&uncolored);
            while let Some(w) = q.iter().position(|&w| w != 0) {
                let v = w * 64 + q[w].trailing_zeros() as usize;
                q[w] &= q[w] - 1;
                uncolored[v / 64] &= !(1 << (v % 64));
                for (qw, aw) in q.iter_mut().zip(self.row(v)) {
                    *qw &= !aw;
                }
                if color >= min_color {
                    order.push(v);
                    colors.push(color);
                }
            }
        }
        (order, colors)
    }

    fn tick(&mut self) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.stopped = true;
                }
            }
        }
    }

    fn record(&mut self, current: &[usize]) {
        if current.len() > self.best.len() {
            self.best = current.to_vec();
            if self.target.is_some_and(|t| self.best.len() >= t) {
                self.stopped = true;
            }
        }
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut p: Vec<u64>) {
        self.tick();
        if self.stopped {
            return;
        }
        let min_color = (self.best.len() + 1).saturating_sub(current.len()).max(1);
        let (order, colors) = self.color_sort(&p, min_color);
        for idx in (0..order.len()).rev() {
            if self.stopped || current.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            current.push(v);
            let next: Vec<u64> = p.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                self.record(current);
            } else {
                self.expand(current, next);
            }
            current.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }

    fn full_set(&self, n: usize) -> Vec<u64> {
        let mut p = vec![0u64; self.words];
        for v in 0..n {
            p[v / 64] |= 1 << (v % 64);
        }
        p
    }
}

/// Smallest-last ordering, reversed so that the densest core comes first.
/// Ties break towards the lowest vertex index.
fn degeneracy_order(g: &CompatibilityGraph) -> Vec<usize> {
    let n = g.vertices;
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut sequence = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("vertices remain");
        removed[v] = true;
        sequence.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    sequence.reverse();
    sequence
}

/// Maximum clique by colouring branch and bound.
pub fn max_clique(g: &CompatibilityGraph, options: &SearchOptions) -> CliqueOutcome {
    max_clique_with_roots(g, None, options)
}

/// Like [`max_clique`], but when `roots` is given only cliques containing one
/// of the root vertices are explored.
pub fn max_clique_with_roots(
    g: &CompatibilityGraph,
    roots: Option<&[usize]>,
    options: &SearchOptions,
) -> CliqueOutcome {
    let start = Instant::now();
    let mut solver = Solver::new(g, options, start);
    let mut internal_of = vec![0; g.vertices];
    for (i, &v) in solver.to_graph.iter().enumerate() {
        internal_of[v] = i;
    }

    let root_bound;
    match roots {
        None => {
            let all = solver.full_set(g.vertices);
            let (_, colors) = solver.color_sort(&all, 1);
            root_bound = colors.last().copied().unwrap_or(0);
            solver.expand(&mut Vec::new(), all);
        }
        Some(roots) => {
            let mut bound = 0;
            for &r in roots {
                let ri = internal_of[r];
                let p: Vec<u64> = solver.row(ri).to_vec();
                let (_, colors) = solver.color_sort(&p, 1);
                bound = bound.max(1 + colors.last().copied().unwrap_or(0));
                if solver.stopped {
                    break;
                }
                let mut current = vec![ri];
                if p.iter().all(|&w| w == 0) {
                    solver.record(&current);
                } else {
                    solver.expand(&mut current, p);
                }
            }
            root_bound = bound;
        }
    }

    // an interrupted search is still optimal when it met the colouring bound
    let completed = !solver.stopped || solver.best.len() >= root_bound;
    let mut clique: Vec<usize> = solver.best.iter().map(|&i| solver.to_graph[i]).collect();
    clique.sort_unstable();
    CliqueOutcome {
        clique,
        proven_optimal: completed,
        nodes_explored: solver.nodes,
        elapsed: start.elapsed(),
        root_bound,
    }
}

/// Maximum clique size by Bron-Kerbosch with pivoting, for cross-checking.
pub fn tiny_oracle(g: &CompatibilityGraph) -> Result<usize> {
    const LIMIT: usize = 2000;
    if g.vertices > LIMIT {
        return Err(Error::GraphTooLarge(g.vertices));
    }
    fn bk(g: &CompatibilityGraph, size: usize, p: Vec<u64>, x: Vec<u64>, best: &mut usize) {
        let count = |s: &[u64]| s.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        let pc = count(&p);
        if pc == 0 {
            if count(&x) == 0 {
                *best = (*best).max(size);
            }
            return;
        }
        if size + pc <= *best {
            return;
        }
        let pivot = iter_bits(&p)
            .chain(iter_bits(&x))
            .max_by_key(|&u| {
                g.row(u)
                    .iter()
                    .zip(&p)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
            })
            .expect("p is nonempty");
        let branch: Vec<usize> = iter_bits(&p).filter(|&v| !g.adjacent(pivot, v)).collect();
        let (mut p, mut x) = (p, x);
        for v in branch {
            let row = g.row(v);
            let np = p.iter().zip(row).map(|(a, b)| a & b).collect();
            let nx = x.iter().zip(row).map(|(a, b)| a & b).collect();
            bk(g, size + 1, np, nx, best);
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }
    let words = g.vertices.div_ceil(64).max(1);
    let mut p = vec![0u64; words];
    for v in 0..g.vertices {
        p[v / 64] |= 1 << (v % 64);
    }
    let mut best = 0;
    bk(g, 0, p, vec![0; words], &mut best);
    Ok(best)
}

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    pub min_class_size: usize,
    pub options: SearchOptions,
    /// Fix the first clique vertex to one representative per class-size shape.
    pub symmetry: bool,
}

/// Enumerates candidates, builds the graph and finds a largest system.
/// The returned system always passes [`verify_sperner`].
pub fn search(n: usize, k: usize, config: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    let candidates = enumerate_partitions(n, k, config.min_class_size)?;
    let graph = build_graph(&candidates);
    let mut options = config.options.clone();
    if let Some(budget) = options.time_budget {
        options.time_budget = Some(budget.saturating_sub(start.elapsed()));
    }
    let roots = config.symmetry.then(|| candidates.shape_representatives());
    let outcome = max_clique_with_roots(&graph, roots.as_deref(), &options);
    let best = candidates
        .system_from(&outcome.clique)
        .with_name(format!("search ({n},{k})"));
    let report = verify_sperner(&best);
    if !report.valid {
        return Err(Error::ConstructionFailed(report.describe(&best).join("; ")));
    }
    Ok(SearchOutcome {
        size: best.len(),
        best,
        proven_optimal: outcome.proven_optimal,
        nodes_explored: outcome.nodes_explored,
        elapsed: start.elapsed(),
        candidates: candidates.len(),
        edges: graph.edge_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_count_with_singletons() {
        assert_eq!(enumerate_partitions(4, 2, 1).unwrap().len(), 7);
    }

    #[test]
    fn no_candidates_error() {
        assert!(matches!(
            enumerate_partitions(5, 3, 2),
            Err(Error::NoCandidates { .. })
        ));
    }

    #[test]
    fn candidates_sorted_and_distinct() {
        let c = enumerate_partitions(7, 3, 2).unwrap();
        assert!(c.partitions.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(c.len(), 105);
    }

    #[test]
    fn graph_adjacency_rules() {
        let p = Partition::from_lists(6, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let q = Partition::from_lists(6, &[vec![0, 3, 4], vec![1, 2, 5]]).unwrap();
        let r = Partition::from_lists(6, &[vec![0, 1], vec![2, 3, 4, 5]]).unwrap();
        let mut parts = vec![p, q, r];
        parts.sort();
        let c = CandidateSet {
            n: 6,
            k: 2,
            min_class_size: 1,
            partitions: parts.clone(),
        };
        let g = build_graph(&c);
        let idx = |x: &Partition| c.index_of(x).unwrap();
        let p = Partition::from_lists(6, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let q = Partition::from_lists(6, &[vec![0, 3, 4], vec![1, 2, 5]]).unwrap();
        let r = Partition::from_lists(6, &[vec![0, 1], vec![2, 3, 4, 5]]).unwrap();
        assert!(g.adjacent(idx(&p), idx(&q)));
        assert!(!g.adjacent(idx(&p), idx(&r)));
        assert!(!g.adjacent(idx(&p), idx(&p)));
    }

    #[test]
    fn trivial_graphs() {
        assert_eq!(tiny_oracle(&CompatibilityGraph::empty(0)).unwrap(), 0);
        assert_eq!(tiny_oracle(&CompatibilityGraph::empty(5)).unwrap(), 1);
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                edges.push((u, v));
            }
        }
        let k6 = CompatibilityGraph::from_edges(6, &edges);
        assert_eq!(tiny_oracle(&k6).unwrap(), 6);
        assert_eq!(max_clique(&k6, &SearchOptions::default()).clique.len(), 6);
        assert_eq!(
            max_clique(&CompatibilityGraph::empty(0), &SearchOptions::default())
                .clique
                .len(),
            0
        );
        assert!(matches!(
            tiny_oracle(&CompatibilityGraph::empty(2001)),
            Err(Error::GraphTooLarge(2001))
        ));
    }

    #[test]
    fn small_exact_values() {
        for (n, k, want) in [(5, 2, 4), (6, 3, 5), (7, 3, 5)] {
            let out = search(
                n,
                k,
                &SearchConfig {
                    min_class_size: 2,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(out.size, want, "({n},{k})");
            assert!(out.proven_optimal);
        }
    }

    #[test]
    fn target_stops_early() {
        let c = enumerate_partitions(7, 3, 2).unwrap();
        let g = build_graph(&c);
        let out = max_clique(
            &g,
            &SearchOptions {
                target: Some(3),
                time_budget: None,
            },
        );
        assert!(out.clique.len() >= 3);
        assert!(g.is_clique(&out.clique));
    }
}
