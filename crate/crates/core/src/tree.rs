//! Depth-bounded slices of the universal covering tree.
//!
//! Nodes are non-backtracking edge paths from a base vertex (the standard
//! concrete model of the universal cover); every non-base node is reached by
//! exactly one tree edge, so a node index doubles as a reference to the cone
//! of boundary points whose semi-geodesics start along that edge. Distributions
//! are evaluated on cones through the quotient labeling, which makes
//! deck-invariance automatic; what the slice adds is the ability to check the
//! finite-additivity relations cone by cone.

use crate::distributions::Distribution;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::coeff::GroupElement;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("slice would exceed the node cap of {cap} nodes")]
    NodeCapExceeded { cap: usize },
    #[error("refinement depth {requested} exceeds the slice depth {available}")]
    DepthExceedsSlice { requested: usize, available: usize },
    #[error("cones overlap: one is an ancestor of another")]
    OverlappingCones,
    #[error("cone refers to a node outside this slice")]
    ConeOutOfRange,
}

#[derive(Clone, Debug)]
struct TreeNode {
    parent: Option<usize>,
    /// Projection of the entering tree edge to the quotient graph; `None` for
    /// the base node.
    entering: Option<EdgeId>,
    vertex: VertexId,
    depth: usize,
    children: Vec<usize>,
}

/// A forward tree edge of the slice, identified by the node it enters.
/// References the cone of ends whose semi-geodesics start along that edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConeRef(usize);

impl ConeRef {
    pub fn node_index(self) -> usize {
        self.0
    }
}

/// The universal covering tree truncated at a fixed depth, rooted at a lift
/// of the base vertex. Node order is breadth-first with children in the
/// quotient's edge order, so slices are deterministic.
#[derive(Clone, Debug)]
pub struct CoverSlice {
    base: VertexId,
    depth: usize,
    nodes: Vec<TreeNode>,
}

/// Default cap on slice size; cones multiply like (degree − 1)^depth.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// Builds the depth-`k` slice at `base`. Children of the base are all edges
/// leaving it; children elsewhere are the non-backtracking continuations.
pub fn expand(g: &Graph, base: VertexId, depth: usize, cap: usize) -> Result<CoverSlice, TreeError> {
    assert!(base < g.vertex_count(), "base vertex out of range");
    let mut nodes = vec![TreeNode {
        parent: None,
        entering: None,
        vertex: base,
        depth: 0,
        children: Vec::new(),
    }];
    let mut frontier = vec![0usize];
    for d in 1..=depth {
        let mut next = Vec::new();
        for &p in &frontier {
            let back = nodes[p].entering.map(|e| g.bar(e));
            for &x in g.out_edges(nodes[p].vertex) {
                if Some(x) == back {
                    continue;
                }
                if nodes.len() >= cap {
                    return Err(TreeError::NodeCapExceeded { cap });
                }
                let idx = nodes.len();
                nodes.push(TreeNode {
                    parent: Some(p),
                    entering: Some(x),
                    vertex: g.terminus(x),
                    depth: d,
                    children: Vec::new(),
                });
                nodes[p].children.push(idx);
                next.push(idx);
            }
        }
        frontier = next;
    }
    Ok(CoverSlice { base, depth, nodes })
}

impl CoverSlice {
    pub fn base_vertex(&self) -> VertexId {
        self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes_at_depth(&self, d: usize) -> usize {
        self.nodes.iter().filter(|n| n.depth == d).count()
    }

    /// All cones (non-base nodes), in breadth-first order.
    pub fn cones(&self) -> impl Iterator<Item = ConeRef> + '_ {
        (1..self.nodes.len()).map(ConeRef)
    }

    /// The cones incident to the base node.
    pub fn base_cones(&self) -> Vec<ConeRef> {
        self.nodes[0].children.iter().map(|&i| ConeRef(i)).collect()
    }

    /// Child cones of `c`: the non-backtracking continuations one level down.
    pub fn children(&self, c: ConeRef) -> Vec<ConeRef> {
        self.nodes[c.0].children.iter().map(|&i| ConeRef(i)).collect()
    }

    pub fn cone_depth(&self, c: ConeRef) -> usize {
        self.nodes[c.0].depth
    }

    /// Projection of the cone's tree edge to the quotient graph.
    pub fn cone_edge(&self, c: ConeRef) -> EdgeId {
        self.nodes[c.0].entering.expect("cones are non-base nodes")
    }

    /// Quotient vertex under the cone's tip.
    pub fn cone_vertex(&self, c: ConeRef) -> VertexId {
        self.nodes[c.0].vertex
    }

    fn check_cone(&self, c: ConeRef) -> Result<(), TreeError> {
        if c.0 == 0 || c.0 >= self.nodes.len() {
            return Err(TreeError::ConeOutOfRange);
        }
        Ok(())
    }

    /// Mass of the cone under `dist`: the label of the projected edge. Equal
    /// cones over the same quotient edge automatically get equal mass.
    pub fn cone_measure(&self, dist: &Distribution, c: ConeRef) -> GroupElement {
        dist.lambda(self.cone_edge(c)).clone()
    }

    /// Checks the additivity relations of a labeling against this slice:
    /// every interior cone equals the sum of its children, the base cones sum
    /// to `σ`, and each base-incident edge pair sums to `σ` (the cone and its
    /// reversed complement cover the whole boundary).
    pub fn check_additivity(&self, g: &Graph, dist: &Distribution) -> AdditivityReport {
        let m = dist.group();
        let mut interior_failures = Vec::new();
        let mut interior_checked = 0usize;
        for c in self.cones() {
            if self.cone_depth(c) >= self.depth {
                continue; // horizon: children unknown
            }
            interior_checked += 1;
            let mut sum = m.zero();
            for child in self.children(c) {
                sum = m.add(&sum, &self.cone_measure(dist, child));
            }
            if sum != self.cone_measure(dist, c) {
                interior_failures.push(c);
            }
        }

        let mut base_sum = m.zero();
        for c in self.base_cones() {
            base_sum = m.add(&base_sum, &self.cone_measure(dist, c));
        }
        let base_sum_ok = self.depth == 0 || base_sum == *dist.sigma();

        let mut base_pair_failures = Vec::new();
        let mut base_pair_checked = 0usize;
        for c in self.base_cones() {
            let x = self.cone_edge(c);
            base_pair_checked += 1;
            let pair = m.add(dist.lambda(x), dist.lambda(g.bar(x)));
            if pair != *dist.sigma() {
                base_pair_failures.push(x);
            }
        }

        AdditivityReport {
            base_sum_ok,
            interior_checked,
            interior_failures,
            base_pair_checked,
            base_pair_failures,
            degenerate_graph: g.min_degree() <= 1,
        }
    }

    /// Sum of the cone masses of a clopen set.
    pub fn measure_clopen(&self, dist: &Distribution, s: &ClopenSet) -> GroupElement {
        let m = dist.group();
        let mut sum = m.zero();
        for &c in &s.cones {
            sum = m.add(&sum, &self.cone_measure(dist, c));
        }
        sum
    }

    /// Replaces every cone by its descendant cones at exactly `target_depth`
    /// (cones already at that depth stay). Branches that die out before the
    /// target depth contain no ends and are dropped. Measure is preserved for
    /// any labeling satisfying the additivity relations.
    pub fn refine(&self, s: &ClopenSet, target_depth: usize) -> Result<ClopenSet, TreeError> {
        if target_depth > self.depth {
            return Err(TreeError::DepthExceedsSlice {
                requested: target_depth,
                available: self.depth,
            });
        }
        let mut cones = Vec::new();
        for &c in &s.cones {
            if self.cone_depth(c) > target_depth {
                return Err(TreeError::DepthExceedsSlice {
                    requested: target_depth,
                    available: self.cone_depth(c),
                });
            }
            let mut frontier = vec![c];
            while let Some(&first) = frontier.first() {
                if self.cone_depth(first) == target_depth {
                    break;
                }
                frontier = frontier.iter().flat_map(|&d| self.children(d)).collect();
            }
            cones.extend(frontier);
        }
        ClopenSet::new(self, cones)
    }

    /// The complementary clopen set within the slice horizon: the maximal
    /// cones disjoint from every cone of `s`. Measures add up to `σ` for any
    /// labeling satisfying the additivity relations.
    pub fn complement(&self, s: &ClopenSet) -> ClopenSet {
        let mut in_s = vec![false; self.nodes.len()];
        for &c in &s.cones {
            in_s[c.0] = true;
        }
        // Mark ancestors of members: their cones meet `s`.
        let mut has_member_below = vec![false; self.nodes.len()];
        for &c in &s.cones {
            let mut cur = self.nodes[c.0].parent;
            while let Some(p) = cur {
                has_member_below[p] = true;
                cur = self.nodes[p].parent;
            }
        }
        let mut cones = Vec::new();
        let mut stack: Vec<usize> = self.nodes[0].children.clone();
        while let Some(i) = stack.pop() {
            if in_s[i] {
                continue;
            }
            if has_member_below[i] {
                stack.extend(&self.nodes[i].children);
            } else {
                cones.push(ConeRef(i));
            }
        }
        cones.sort();
        ClopenSet { cones }
    }

    /// DOT rendering of the slice, with cone masses as edge labels when a
    /// distribution is given.
    pub fn to_dot(&self, g: &Graph, dist: Option<&Distribution>) -> String {
        let mut out = String::from("digraph slice {\n  rankdir=TB;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "  n{} [label=\"{}\"];\n",
                i,
                g.vertex_name(n.vertex)
            ));
        }
        for c in self.cones() {
            let n = &self.nodes[c.0];
            let e = self.cone_edge(c);
            let label = match dist {
                Some(d) => format!("{}={}", g.edge_name(e), d.lambda(e)),
                None => g.edge_name(e),
            };
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                n.parent.expect("cone has a parent"),
                c.0,
                label
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Report of [`CoverSlice::check_additivity`].
#[derive(Clone, Debug)]
pub struct AdditivityReport {
    /// Base relation: the cones at the base partition the boundary, so their
    /// masses sum to `σ`.
    pub base_sum_ok: bool,
    pub interior_checked: usize,
    /// Interior cones whose mass differs from the sum of their children
    /// (childless interior cones must have mass 0 — their cone is empty).
    pub interior_failures: Vec<ConeRef>,
    pub base_pair_checked: usize,
    /// Base-incident edges whose pair `λ(x) + λ(x~)` misses `σ`.
    pub base_pair_failures: Vec<EdgeId>,
    /// Min degree <= 1: some cones upstairs are empty; flagged, not failed.
    pub degenerate_graph: bool,
}

impl AdditivityReport {
    pub fn all_pass(&self) -> bool {
        self.base_sum_ok && self.interior_failures.is_empty() && self.base_pair_failures.is_empty()
    }
}

/// A finite disjoint union of cones in one slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClopenSet {
    cones: Vec<ConeRef>,
}

impl ClopenSet {
    /// Validates pairwise disjointness: no cone may be an ancestor of (or
    /// equal to) another.
    pub fn new(slice: &CoverSlice, mut cones: Vec<ConeRef>) -> Result<Self, TreeError> {
        for &c in &cones {
            slice.check_cone(c)?;
        }
        cones.sort();
        for (i, &c) in cones.iter().enumerate() {
            if i > 0 && cones[i - 1] == c {
                return Err(TreeError::OverlappingCones);
            }
        }
        let set: std::collections::BTreeSet<usize> = cones.iter().map(|c| c.0).collect();
        for &c in &cones {
            let mut cur = slice.nodes[c.0].parent;
            while let Some(p) = cur {
                if set.contains(&p) {
                    return Err(TreeError::OverlappingCones);
                }
                cur = slice.nodes[p].parent;
            }
        }
        Ok(ClopenSet { cones })
    }

    pub fn cones(&self) -> &[ConeRef] {
        &self.cones
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoefficientGroup;
    use crate::distributions::{from_cycle, validate, Distribution};
    use crate::generators;
    use crate::homology::Chain;

    fn theta_slice(depth: usize) -> (Graph, CoverSlice) {
        let g = generators::theta();
        let s = expand(&g, 0, depth, DEFAULT_NODE_CAP).unwrap();
        (g, s)
    }

    use crate::graph::Graph;

    fn paper_distribution(g: &Graph) -> Distribution {
        let alpha = Chain::from_named(
            g,
            &CoefficientGroup::integers(),
            &[("a".into(), 1), ("b".into(), 2), ("c".into(), -3)],
        )
        .unwrap();
        from_cycle(g, &alpha).unwrap()
    }

    #[test]
    fn theta_node_counts() {
        let (_, s) = theta_slice(2);
        assert_eq!(s.nodes_at_depth(0), 1);
        assert_eq!(s.nodes_at_depth(1), 3);
        assert_eq!(s.nodes_at_depth(2), 6);
        assert_eq!(s.node_count(), 10);
    }

    #[test]
    fn single_loop_cover_is_a_line() {
        let g = generators::bouquet(1);
        let s = expand(&g, 0, 3, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(s.nodes_at_depth(0), 1);
        for d in 1..=3 {
            assert_eq!(s.nodes_at_depth(d), 2);
        }
    }

    #[test]
    fn depth_zero_is_one_node() {
        let g = generators::complete(4);
        let s = expand(&g, 0, 0, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(s.node_count(), 1);
        assert_eq!(s.base_cones().len(), 0);
    }

    #[test]
    fn node_cap_is_enforced() {
        let g = generators::complete(6);
        assert!(matches!(
            expand(&g, 0, 10, 100),
            Err(TreeError::NodeCapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn covering_property() {
        // At every non-leaf node, parent-reversal plus child edges hit the
        // star of the projected vertex exactly once each.
        let g = generators::complete(4);
        let s = expand(&g, 0, 3, DEFAULT_NODE_CAP).unwrap();
        for c in s.cones() {
            if s.cone_depth(c) >= s.depth() {
                continue;
            }
            let mut incident: Vec<EdgeId> = s
                .children(c)
                .iter()
                .map(|&ch| s.cone_edge(ch))
                .collect();
            incident.push(g.bar(s.cone_edge(c)));
            incident.sort();
            let mut star = g.out_edges(s.cone_vertex(c)).to_vec();
            star.sort();
            assert_eq!(incident, star);
        }
    }

    #[test]
    fn paper_example_cone_masses() {
        let (g, s) = theta_slice(3);
        let d = paper_distribution(&g);
        let a = g.edge_by_name("a").unwrap();
        let abar = g.edge_by_name("a~").unwrap();
        let one = CoefficientGroup::integers().from_int(1);
        let minus_one = CoefficientGroup::integers().from_int(-1);
        let mut seen_a = 0;
        let mut seen_abar = 0;
        for c in s.cones() {
            if s.cone_edge(c) == a {
                assert_eq!(s.cone_measure(&d, c), one);
                seen_a += 1;
            }
            if s.cone_edge(c) == abar {
                assert_eq!(s.cone_measure(&d, c), minus_one);
                seen_abar += 1;
            }
        }
        assert!(seen_a > 0 && seen_abar > 0);

        let zero = Distribution::zero(&g, &CoefficientGroup::integers());
        for c in s.cones().take(5) {
            assert!(s.cone_measure(&zero, c).is_zero());
        }
    }

    #[test]
    fn additivity_for_paper_example() {
        let (g, s) = theta_slice(5);
        let d = paper_distribution(&g);
        let report = s.check_additivity(&g, &d);
        assert!(report.all_pass(), "{report:?}");
        assert!(!report.degenerate_graph);
        assert!(report.interior_checked > 0);
    }

    #[test]
    fn additivity_for_k6_uniform_mod_three() {
        let g = generators::complete(6);
        let z3: CoefficientGroup = "Z/3".parse().unwrap();
        let ones = vec![z3.from_int(1); g.edge_count()];
        let d = Distribution::new(&g, z3.clone(), ones, z3.from_int(2)).unwrap();
        assert!(validate(&g, &d).all_pass());
        let s = expand(&g, 0, 3, DEFAULT_NODE_CAP).unwrap();
        let report = s.check_additivity(&g, &d);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn additivity_detects_single_mutation() {
        let (g, s) = theta_slice(4);
        let d = paper_distribution(&g);
        let m = CoefficientGroup::integers();
        let mut lambda = d.lambda_all().to_vec();
        lambda[0] = m.add(&lambda[0], &m.from_int(1)); // flip lambda(a)
        let mutated = Distribution::new(&g, m, lambda, d.sigma().clone()).unwrap();
        let report = s.check_additivity(&g, &mutated);
        assert!(!report.all_pass());
    }

    #[test]
    fn zero_distribution_passes_trivially() {
        let g = generators::cycle(4);
        let s = expand(&g, 0, 4, DEFAULT_NODE_CAP).unwrap();
        let d = Distribution::zero(&g, &"Z/3".parse().unwrap());
        assert!(s.check_additivity(&g, &d).all_pass());
    }

    #[test]
    fn clopen_algebra() {
        let (g, s) = theta_slice(3);
        let d = paper_distribution(&g);

        // all base cones = the whole boundary
        let full = ClopenSet::new(&s, s.base_cones()).unwrap();
        assert_eq!(s.measure_clopen(&d, &full), *d.sigma());

        // refinement preserves measure
        for target in 1..=3 {
            let refined = s.refine(&full, target).unwrap();
            assert_eq!(s.measure_clopen(&d, &refined), *d.sigma());
            for &c in refined.cones() {
                assert_eq!(s.cone_depth(c), target);
            }
        }

        // complement of one base cone
        let first = s.base_cones()[0];
        let single = ClopenSet::new(&s, vec![first]).unwrap();
        let comp = s.complement(&single);
        let m = d.group().clone();
        let total = m.add(
            &s.measure_clopen(&d, &single),
            &s.measure_clopen(&d, &comp),
        );
        assert_eq!(total, *d.sigma());
        // and the complement measure is sigma - lambda(edge)
        let expect = m.sub(d.sigma(), d.lambda(s.cone_edge(first)));
        assert_eq!(s.measure_clopen(&d, &comp), expect);
    }

    #[test]
    fn clopen_rejects_overlap_and_bad_depth() {
        let (_, s) = theta_slice(3);
        let base = s.base_cones()[0];
        let child = s.children(base)[0];
        assert!(matches!(
            ClopenSet::new(&s, vec![base, child]),
            Err(TreeError::OverlappingCones)
        ));
        assert!(matches!(
            ClopenSet::new(&s, vec![base, base]),
            Err(TreeError::OverlappingCones)
        ));
        let full = ClopenSet::new(&s, s.base_cones()).unwrap();
        assert!(matches!(
            s.refine(&full, 9),
            Err(TreeError::DepthExceedsSlice { .. })
        ));
    }

    #[test]
    fn complement_of_deep_cone() {
        let (g, s) = theta_slice(3);
        let d = paper_distribution(&g);
        let base = s.base_cones()[1];
        let deep = s.children(s.children(base)[0])[0];
        let set = ClopenSet::new(&s, vec![deep]).unwrap();
        let comp = s.complement(&set);
        // disjointness sanity and measure complement
        let m = d.group().clone();
        let total = m.add(&s.measure_clopen(&d, &set), &s.measure_clopen(&d, &comp));
        assert_eq!(total, *d.sigma());
        // union must refine to exactly the full depth-3 family
        let mut all: Vec<ConeRef> = Vec::new();
        all.extend(s.refine(&set, 3).unwrap().cones());
        all.extend(s.refine(&comp, 3).unwrap().cones());
        all.sort();
        let full: Vec<ConeRef> = s.cones().filter(|&c| s.cone_depth(c) == 3).collect();
        assert_eq!(all, full);
    }

    #[test]
    fn degenerate_leaf_cones_must_vanish() {
        // path graph: leaf vertices upstairs, empty cones
        let g = generators::path(2);
        let s = expand(&g, 0, 3, DEFAULT_NODE_CAP).unwrap();
        let m: CoefficientGroup = "Z/2".parse().unwrap();
        let zero = Distribution::zero(&g, &m);
        let report = s.check_additivity(&g, &zero);
        assert!(report.all_pass());
        assert!(report.degenerate_graph);

        // a labeling with nonzero mass on an empty cone must fail
        let mut lambda = zero.lambda_all().to_vec();
        lambda[0] = m.from_int(1);
        lambda[1] = m.from_int(1);
        let bad = Distribution::new(&g, m.clone(), lambda, m.zero()).unwrap();
        let report = s.check_additivity(&g, &bad);
        assert!(!report.all_pass());
    }

    #[test]
    fn dot_dump_mentions_masses() {
        let (g, s) = theta_slice(1);
        let d = paper_distribution(&g);
        let dot = s.to_dot(&g, Some(&d));
        assert!(dot.contains("digraph slice"));
        assert!(dot.contains("a=1"));
        assert!(dot.contains("label=\"v2\""));
    }
}
