//! Named test graphs, exhaustive small-graph corpora, and deterministic
//! random graphs for verification sweeps.

use crate::graph::Graph;

fn vnames(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

fn enames(edges: Vec<(usize, usize)>) -> Vec<(String, usize, usize)> {
    edges.into_iter().enumerate().map(|(i, (u, v))| (format!("e{}", i + 1), u, v)).collect()
}

/// Two vertices joined by three parallel edges `a`, `b`, `c`.
pub fn theta() -> Graph {
    Graph::build(
        vnames(2),
        vec![("a".into(), 0, 1), ("b".into(), 0, 1), ("c".into(), 0, 1)],
    )
    .expect("theta graph is valid")
}

/// Complete graph on `n >= 1` vertices.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::build(vnames(n), enames(edges)).expect("complete graph is valid")
}

/// Complete bipartite graph with parts of size `p` and `q`.
pub fn complete_bipartite(p: usize, q: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..p {
        for j in 0..q {
            edges.push((i, p + j));
        }
    }
    Graph::build(vnames(p + q), enames(edges)).expect("complete bipartite graph is valid")
}

/// Path on `n >= 1` vertices (a tree; trivial homology).
pub fn path(n: usize) -> Graph {
    let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::build(vnames(n), enames(edges)).expect("path graph is valid")
}

/// Cycle on `n >= 1` vertices (`n = 1` is a single loop).
pub fn cycle(n: usize) -> Graph {
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::build(vnames(n), enames(edges)).expect("cycle graph is valid")
}

/// One vertex with `k` loops.
pub fn bouquet(k: usize) -> Graph {
    let edges = (0..k).map(|_| (0, 0)).collect();
    Graph::build(vnames(1), enames(edges)).expect("bouquet is valid")
}

/// Every connected multigraph (loops and parallel edges included) with at
/// most `max_vertices` labeled vertices and at most `max_geometric_edges`
/// positive edges, in deterministic order. Graphs not touching all their
/// declared vertices are disconnected and therefore excluded, so each
/// isomorphism type appears once per labeling, not once per vertex count.
pub fn connected_multigraphs(max_vertices: usize, max_geometric_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut counts = vec![0usize; slots.len()];
        multisets(&mut counts, 0, max_geometric_edges, &mut |counts| {
            let mut edges = Vec::new();
            for (slot, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    edges.push(slots[slot]);
                }
            }
            if let Ok(g) = Graph::build(vnames(n), enames(edges)) {
                out.push(g);
            }
        });
    }
    out
}

fn multisets(counts: &mut Vec<usize>, slot: usize, budget: usize, f: &mut impl FnMut(&[usize])) {
    if slot == counts.len() {
        f(counts);
        return;
    }
    for c in 0..=budget {
        counts[slot] = c;
        multisets(counts, slot + 1, budget - c, f);
    }
    counts[slot] = 0;
}

/// Tiny deterministic RNG (splitmix64); bit-stable across platforms.
#[derive(Clone, Debug)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// Random connected multigraph: a random spanning tree plus random extra
/// edges (loops and parallels allowed). Connected by construction.
pub fn random_connected_graph(
    rng: &mut SplitMix64,
    max_vertices: usize,
    max_extra_edges: usize,
) -> Graph {
    let n = 1 + rng.below(max_vertices as u64) as usize;
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.below(v as u64) as usize, v));
    }
    let extra = rng.below(max_extra_edges as u64 + 1) as usize;
    for _ in 0..extra {
        let u = rng.below(n as u64) as usize;
        let v = rng.below(n as u64) as usize;
        edges.push((u.min(v), u.max(v)));
    }
    Graph::build(vnames(n), enames(edges)).expect("spanning tree construction is connected")
}
