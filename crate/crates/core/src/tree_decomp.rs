//! Tree decompositions: validation, exact computation for tiny graphs,
//! and the transform into nice form consumed by the treewidth DP.

use crate::error::Error;
use crate::graph::Graph;
use crate::vset::VertexSet;
use std::fmt;

/// A tree decomposition: one bag per node, plus undirected tree edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

/// First violated property, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    /// The node/edge structure is not a tree.
    NotATree(String),
    /// (T1) some vertex appears in no bag.
    VertexNotCovered(usize),
    /// (T2) some edge has no bag containing both endpoints.
    EdgeNotCovered(usize, usize),
    /// (T3) the bags containing some vertex do not induce a connected
    /// subtree; the witness node is a bag outside the connected part.
    DisconnectedOccurrence { vertex: usize, node: usize },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree(why) => write!(f, "not a tree: {why}"),
            TdViolation::VertexNotCovered(v) => {
                write!(f, "T1 violated: vertex {v} in no bag")
            }
            TdViolation::EdgeNotCovered(u, v) => {
                write!(f, "T2 violated: edge ({u}, {v}) in no bag")
            }
            TdViolation::DisconnectedOccurrence { vertex, node } => write!(
                f,
                "T3 violated: occurrences of vertex {vertex} are disconnected (node {node})"
            ),
        }
    }
}

/// Checks (T1)-(T3) of the tree-decomposition definition.
/// Returns the width (max bag size - 1; -1 if every bag is empty).
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<i64, TdViolation> {
    let n_nodes = td.bags.len();
    if n_nodes == 0 {
        return Err(TdViolation::NotATree("no nodes".into()));
    }
    if td.edges.len() + 1 != n_nodes {
        return Err(TdViolation::NotATree(format!(
            "{} nodes need {} edges, found {}",
            n_nodes,
            n_nodes - 1,
            td.edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); n_nodes];
    for &(a, b) in &td.edges {
        if a >= n_nodes || b >= n_nodes || a == b {
            return Err(TdViolation::NotATree(format!("bad edge ({a}, {b})")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    // connected + |E| = |V| - 1 implies acyclic
    let mut seen = vec![false; n_nodes];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if let Some(lost) = seen.iter().position(|&s| !s) {
        return Err(TdViolation::NotATree(format!("node {lost} unreachable")));
    }

    // (T1)
    let mut covered = VertexSet::new();
    for bag in &td.bags {
        covered.union_with(bag);
    }
    for v in g.vertices() {
        if !covered.contains(v) {
            return Err(TdViolation::VertexNotCovered(v));
        }
    }
    // (T2)
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            return Err(TdViolation::EdgeNotCovered(u, v));
        }
    }
    // (T3): the occurrence set of each vertex induces a connected subtree
    for v in g.vertices() {
        let occ: Vec<usize> = (0..n_nodes).filter(|&t| td.bags[t].contains(v)).collect();
        let mut reached = vec![false; n_nodes];
        let mut stack = vec![occ[0]];
        reached[occ[0]] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !reached[y] && td.bags[y].contains(v) {
                    reached[y] = true;
                    stack.push(y);
                }
            }
        }
        if let Some(&node) = occ.iter().find(|&&t| !reached[t]) {
            return Err(TdViolation::DisconnectedOccurrence { vertex: v, node });
        }
    }
    Ok(td.bags.iter().map(|b| b.len() as i64).max().unwrap() - 1)
}

/// Default vertex-count cap for [`exact_td_small`].
pub const EXACT_TD_CAP: usize = 15;

/// A minimum-width tree decomposition, found by dynamic programming over
/// elimination orderings (2^n subsets). Deterministic: ties break toward
/// the smallest vertex.
pub fn exact_td_small(g: &Graph) -> Result<TreeDecomposition, Error> {
    exact_td_small_capped(g, EXACT_TD_CAP)
}

pub fn exact_td_small_capped(g: &Graph, cap: usize) -> Result<TreeDecomposition, Error> {
    let n = g.n();
    if n > cap || n > 25 {
        return Err(Error::SizeGuard {
            what: "exact_td_small",
            limit: cap.min(25),
            actual: n,
        });
    }
    if n == 0 {
        return Ok(TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: Vec::new(),
        });
    }
    // q(R, v): vertices outside R+{v} reachable from v through R
    let reach_count = |rest: u32, v: usize| -> i64 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0i64;
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u).iter() {
                if seen >> w & 1 == 1 {
                    continue;
                }
                seen |= 1 << w;
                if rest >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out += 1;
                }
            }
        }
        out
    };
    let full: u32 = (1u32 << n) - 1;
    let mut f = vec![i64::MAX; 1usize << n];
    let mut choice = vec![usize::MAX; 1usize << n];
    f[0] = -1;
    for s in 1..=full {
        for v in 0..n {
            if s >> v & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let w = f[rest as usize].max(reach_count(rest, v));
            if w < f[s as usize] {
                f[s as usize] = w;
                choice[s as usize] = v;
            }
        }
    }
    // choice[S] is eliminated last within S; unwind to get the order
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize];
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();

    // fill-in along the order; bag of v = {v} + higher fill-neighbors
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut fill: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut bags = Vec::with_capacity(n);
    for &v in &order {
        let higher: VertexSet = fill[v].iter().filter(|&u| pos[u] > pos[v]).collect();
        for a in higher.iter() {
            for b in higher.iter() {
                if a < b {
                    fill[a].insert(b);
                    fill[b].insert(a);
                }
            }
        }
        let mut bag = higher;
        bag.insert(v);
        bags.push(bag);
    }
    let mut edges = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let next = bags[i].iter().filter(|&u| u != v).map(|u| pos[u]).min();
        match next {
            Some(j) => edges.push((i, j)),
            None if i + 1 < n => edges.push((i, i + 1)),
            None => {}
        }
    }
    let td = TreeDecomposition { bags, edges };
    let width = validate_td(g, &td)
        .map_err(|v| Error::Inconsistency(format!("exact_td_small built invalid td: {v}")))?;
    if width != f[full as usize] {
        return Err(Error::Inconsistency(format!(
            "exact_td_small width {} differs from DP optimum {}",
            width, f[full as usize]
        )));
    }
    Ok(td)
}

/// Node kinds of a nice tree decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: VertexSet,
    pub children: Vec<usize>,
}

/// A rooted nice tree decomposition: leaf/introduce/forget/join nodes,
/// empty bags at the root and every leaf.
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> i64 {
        self.nodes
            .iter()
            .map(|x| x.bag.len() as i64)
            .max()
            .unwrap_or(0)
            - 1
    }

    /// Node indices ordered so that children precede parents.
    pub fn bottom_up(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            order.push(x);
            stack.extend(&self.nodes[x].children);
        }
        order.reverse();
        order
    }

    /// View as a plain tree decomposition (for validation or emission).
    pub fn as_td(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (x, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((x, c));
            }
        }
        TreeDecomposition {
            bags: self.nodes.iter().map(|x| x.bag.clone()).collect(),
            edges,
        }
    }
}

/// Structural check of the nice-node constraints plus (T1)-(T3).
/// Returns the width.
pub fn validate_nice(g: &Graph, ntd: &NiceTreeDecomposition) -> Result<i64, Error> {
    let bad = |why: String| Err(Error::InvalidDecomposition(why));
    if ntd.nodes.is_empty() {
        return bad("nice decomposition has no nodes".into());
    }
    if !ntd.nodes[ntd.root].bag.is_empty() {
        return bad("root bag not empty".into());
    }
    for (x, node) in ntd.nodes.iter().enumerate() {
        match node.kind {
            NodeKind::Leaf => {
                if !node.children.is_empty() || !node.bag.is_empty() {
                    return bad(format!("leaf node {x} malformed"));
                }
            }
            NodeKind::Introduce(v) => {
                let [c] = node.children[..] else {
                    return bad(format!("introduce node {x} needs one child"));
                };
                let mut want = ntd.nodes[c].bag.clone();
                if want.contains(v) {
                    return bad(format!("introduce node {x}: child already has {v}"));
                }
                want.insert(v);
                if node.bag != want {
                    return bad(format!("introduce node {x} does not add exactly {v}"));
                }
            }
            NodeKind::Forget(v) => {
                let [c] = node.children[..] else {
                    return bad(format!("forget node {x} needs one child"));
                };
                let mut want = ntd.nodes[c].bag.clone();
                if !want.contains(v) {
                    return bad(format!("forget node {x}: child lacks {v}"));
                }
                want.remove(v);
                if node.bag != want {
                    return bad(format!("forget node {x} does not drop exactly {v}"));
                }
            }
            NodeKind::Join => {
                let [a, b] = node.children[..] else {
                    return bad(format!("join node {x} needs two children"));
                };
                if ntd.nodes[a].bag != node.bag || ntd.nodes[b].bag != node.bag {
                    return bad(format!("join node {x} children bags differ"));
                }
            }
        }
    }
    validate_td(g, &ntd.as_td())
        .map_err(|v| Error::InvalidDecomposition(format!("underlying td invalid: {v}")))
}

/// Transforms a valid tree decomposition into a nice one of the same
/// width. Adjacent bags in containment are contracted first; between
/// adjacent bags a forget-then-introduce chain is inserted (ascending
/// vertex order); nodes with several children are binarized by join
/// chains; introduce chains are appended above leaves and a forget chain
/// below the root so both end at empty bags.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition, Error> {
    validate_td(g, td)
        .map_err(|v| Error::InvalidDecomposition(format!("make_nice input: {v}")))?;
    if g.n() == 0 {
        return Ok(NiceTreeDecomposition {
            nodes: vec![NiceNode {
                kind: NodeKind::Leaf,
                bag: VertexSet::new(),
                children: Vec::new(),
            }],
            root: 0,
        });
    }
    let (bags, tree_adj) = contract_redundant(td);

    fn add(nodes: &mut Vec<NiceNode>, kind: NodeKind, bag: VertexSet, children: Vec<usize>) -> usize {
        nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        nodes.len() - 1
    }
    // chain from a built subtree topped with bag `from` to bag `to`
    fn chain(nodes: &mut Vec<NiceNode>, mut top: usize, from: &VertexSet, to: &VertexSet) -> usize {
        let mut cur = from.clone();
        for v in from.difference(to).iter() {
            cur.remove(v);
            top = add(nodes, NodeKind::Forget(v), cur.clone(), vec![top]);
        }
        for v in to.difference(from).iter() {
            cur.insert(v);
            top = add(nodes, NodeKind::Introduce(v), cur.clone(), vec![top]);
        }
        top
    }
    let mut nodes: Vec<NiceNode> = Vec::new();

    // post-order traversal with an explicit stack; children built first
    let root_orig = 0usize;
    let mut built: Vec<Option<usize>> = vec![None; bags.len()];
    let mut stack: Vec<(usize, usize, bool)> = vec![(root_orig, usize::MAX, false)];
    while let Some((x, parent, expanded)) = stack.pop() {
        if !expanded {
            stack.push((x, parent, true));
            for &y in &tree_adj[x] {
                if y != parent {
                    stack.push((y, x, false));
                }
            }
            continue;
        }
        let kids: Vec<usize> = tree_adj[x]
            .iter()
            .copied()
            .filter(|&y| y != parent)
            .collect();
        let top = if kids.is_empty() {
            let leaf = add(&mut nodes, NodeKind::Leaf, VertexSet::new(), Vec::new());
            chain(&mut nodes, leaf, &VertexSet::new(), &bags[x])
        } else {
            let mut tops: Vec<usize> = kids
                .iter()
                .map(|&y| {
                    let sub = built[y].expect("child built before parent");
                    chain(&mut nodes, sub, &bags[y], &bags[x])
                })
                .collect();
            let mut cur = tops.remove(0);
            for other in tops {
                cur = add(&mut nodes, NodeKind::Join, bags[x].clone(), vec![cur, other]);
            }
            cur
        };
        built[x] = Some(top);
    }
    let top = built[root_orig].expect("root built");
    let root = chain(&mut nodes, top, &bags[root_orig], &VertexSet::new());
    let ntd = NiceTreeDecomposition { nodes, root };
    debug_assert!(validate_nice(g, &ntd).is_ok());
    Ok(ntd)
}

/// Contracts tree edges whose bags are in containment; afterwards the
/// tree has at most n nodes, which make_nice needs for its node-count
/// bound. Returns bags + adjacency of the contracted tree.
fn contract_redundant(td: &TreeDecomposition) -> (Vec<VertexSet>, Vec<Vec<usize>>) {
    let n_nodes = td.bags.len();
    let bags = td.bags.clone();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut alive = vec![true; n_nodes];
    loop {
        let mut contracted = false;
        for x in 0..n_nodes {
            if !alive[x] {
                continue;
            }
            let Some(&y) = adj[x].iter().find(|&&y| bags[x].is_subset_of(&bags[y])) else {
                continue;
            };
            // merge x into y
            let neighbors = std::mem::take(&mut adj[x]);
            for z in neighbors {
                if z == y {
                    continue;
                }
                adj[z].retain(|&w| w != x);
                adj[z].push(y);
                adj[y].push(z);
            }
            adj[y].retain(|&w| w != x);
            alive[x] = false;
            contracted = true;
        }
        if !contracted {
            break;
        }
    }
    // renumber survivors
    let mut map = vec![usize::MAX; n_nodes];
    let mut next = 0;
    for x in 0..n_nodes {
        if alive[x] {
            map[x] = next;
            next += 1;
        }
    }
    let new_bags: Vec<VertexSet> = (0..n_nodes)
        .filter(|&x| alive[x])
        .map(|x| bags[x].clone())
        .collect();
    let mut new_adj = vec![Vec::new(); new_bags.len()];
    for x in 0..n_nodes {
        if alive[x] {
            for &y in &adj[x] {
                new_adj[map[x]].push(map[y]);
            }
        }
    }
    (new_bags, new_adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, forest_shape, ForestShape, Graph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path_td() -> TreeDecomposition {
        TreeDecomposition {
            bags: vec![[0, 1].into(), [1, 2].into()],
            edges: vec![(0, 1)],
        }
    }

    #[test]
    fn validate_accepts_path_decomposition() {
        let g = build::path(3);
        assert_eq!(validate_td(&g, &path_td()), Ok(1));
    }

    #[test]
    fn validate_reports_t2_with_witness() {
        let g = build::path(3);
        let td = TreeDecomposition {
            bags: vec![[0].into(), [1, 2].into()],
            edges: vec![(0, 1)],
        };
        assert_eq!(validate_td(&g, &td), Err(TdViolation::EdgeNotCovered(0, 1)));
    }

    #[test]
    fn validate_reports_t3_with_witness() {
        let g = Graph::new(3);
        let td = TreeDecomposition {
            bags: vec![[1].into(), [0, 2].into(), [1].into()],
            edges: vec![(0, 1), (1, 2)],
        };
        match validate_td(&g, &td) {
            Err(TdViolation::DisconnectedOccurrence { vertex: 1, .. }) => {}
            other => panic!("expected T3 violation for vertex 1, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_non_trees() {
        let g = build::path(2);
        let td = TreeDecomposition {
            bags: vec![[0, 1].into(), [0, 1].into()],
            edges: vec![],
        };
        assert!(matches!(validate_td(&g, &td), Err(TdViolation::NotATree(_))));
    }

    #[test]
    fn exact_td_trees_have_width_one() {
        for g in [build::path(6), build::star(4)] {
            assert_ne!(forest_shape(&g), ForestShape::NotForest);
            let td = exact_td_small(&g).unwrap();
            assert_eq!(validate_td(&g, &td), Ok(1));
        }
    }

    #[test]
    fn exact_td_complete_graph() {
        let g = build::complete(5);
        let td = exact_td_small(&g).unwrap();
        assert_eq!(validate_td(&g, &td), Ok(4));
    }

    #[test]
    fn exact_td_c5_needs_width_two() {
        // independent lower bound: C_5 is not a forest, so treewidth >= 2
        let g = build::cycle(5);
        assert_eq!(forest_shape(&g), ForestShape::NotForest);
        let td = exact_td_small(&g).unwrap();
        assert_eq!(validate_td(&g, &td), Ok(2));
    }

    #[test]
    fn exact_td_guard() {
        assert!(matches!(
            exact_td_small(&Graph::new(16)),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn make_nice_single_bag_triangle() {
        let g = build::complete(3);
        let td = TreeDecomposition {
            bags: vec![[0, 1, 2].into()],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(validate_nice(&g, &ntd).unwrap(), 2);
        assert!(ntd.nodes[ntd.root].bag.is_empty());
    }

    #[test]
    fn make_nice_empty_graph() {
        let g = Graph::new(0);
        let td = TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(ntd.len(), 1);
        assert_eq!(ntd.nodes[0].kind, NodeKind::Leaf);
    }

    #[test]
    fn make_nice_path_bound() {
        let g = build::path(3);
        let ntd = make_nice(&g, &path_td()).unwrap();
        assert_eq!(validate_nice(&g, &ntd).unwrap(), 1);
        assert!(ntd.len() <= 4 * 2 * 3, "node count {} over bound", ntd.len());
    }

    #[test]
    fn make_nice_edgeless_graph() {
        let g = Graph::new(3);
        let td = exact_td_small(&g).unwrap();
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(validate_nice(&g, &ntd).unwrap(), 0);
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn nice_of_exact_keeps_width_on_random_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let p = [0.2, 0.4, 0.6][rng.gen_range(0..3)];
            let g = random_graph(&mut rng, n, p);
            let td = exact_td_small(&g).unwrap();
            let w = validate_td(&g, &td).unwrap();
            let ntd = make_nice(&g, &td).unwrap();
            assert_eq!(validate_nice(&g, &ntd).unwrap(), w);
            assert!(
                ntd.len() as i64 <= 4 * (w + 1) * n as i64,
                "n={n} w={w} nodes={}",
                ntd.len()
            );
            // every vertex is forgotten exactly once (top-down contiguity)
            for v in 0..n {
                let forgets = ntd
                    .nodes
                    .iter()
                    .filter(|x| x.kind == NodeKind::Forget(v))
                    .count();
                assert_eq!(forgets, 1, "vertex {v} must be forgotten exactly once");
            }
        }
    }
}
