//! Rooted branch decompositions, the outside-neighborhood equivalence
//! classes, module-width, and the per-node operator (bipartite class
//! graph plus bubble maps) consumed by the clique-width DP.

use crate::error::Error;
use crate::graph::Graph;
use crate::vset::VertexSet;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// A node of a rooted branch decomposition: internal nodes have exactly
/// two children (r = first, s = second), leaves carry one graph vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BdNode {
    pub children: Option<(usize, usize)>,
    pub leaf_vertex: Option<usize>,
}

/// Full binary rooted tree whose leaves are in bijection with V(G).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedBranchDecomposition {
    pub nodes: Vec<BdNode>,
    pub root: usize,
}

impl RootedBranchDecomposition {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node indices ordered so that children precede parents.
    pub fn bottom_up(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            order.push(x);
            if let Some((a, b)) = self.nodes[x].children {
                stack.push(a);
                stack.push(b);
            }
        }
        order.reverse();
        order
    }

    /// V_t for every node: the vertices on leaves below t.
    pub fn subtree_vertices(&self) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::new(); self.nodes.len()];
        for x in self.bottom_up() {
            match self.nodes[x].children {
                None => {
                    if let Some(v) = self.nodes[x].leaf_vertex {
                        out[x].insert(v);
                    }
                }
                Some((a, b)) => {
                    out[x] = out[a].union(&out[b]);
                }
            }
        }
        out
    }

    pub fn internal_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&x| self.nodes[x].children.is_some())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BdViolation {
    NotATree(String),
    /// Internal node without exactly two children.
    NotFullBinary(usize),
    LeafWithoutVertex(usize),
    InternalWithVertex(usize),
    /// Two leaves carry the same vertex.
    DuplicateLeaf(usize),
    VertexUnmapped(usize),
    LeafVertexOutOfRange { node: usize, vertex: usize },
    /// n = 0 admits no branch decomposition.
    EmptyGraph,
}

impl fmt::Display for BdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BdViolation::NotATree(why) => write!(f, "not a tree: {why}"),
            BdViolation::NotFullBinary(x) => write!(f, "node {x} is not binary"),
            BdViolation::LeafWithoutVertex(x) => write!(f, "leaf {x} carries no vertex"),
            BdViolation::InternalWithVertex(x) => {
                write!(f, "internal node {x} carries a vertex")
            }
            BdViolation::DuplicateLeaf(v) => {
                write!(f, "vertex {v} appears on two leaves")
            }
            BdViolation::VertexUnmapped(v) => write!(f, "vertex {v} has no leaf"),
            BdViolation::LeafVertexOutOfRange { node, vertex } => {
                write!(f, "leaf {node} carries out-of-range vertex {vertex}")
            }
            BdViolation::EmptyGraph => write!(f, "graph has no vertices"),
        }
    }
}

/// Checks that `bd` is a full binary rooted tree with a total
/// leaf-vertex bijection onto V(g).
pub fn validate_bd(g: &Graph, bd: &RootedBranchDecomposition) -> Result<(), BdViolation> {
    if g.n() == 0 {
        return Err(BdViolation::EmptyGraph);
    }
    let n_nodes = bd.nodes.len();
    if bd.root >= n_nodes {
        return Err(BdViolation::NotATree("root out of range".into()));
    }
    let mut seen = vec![false; n_nodes];
    let mut stack = vec![bd.root];
    seen[bd.root] = true;
    let mut mapped = vec![false; g.n()];
    while let Some(x) = stack.pop() {
        match bd.nodes[x].children {
            Some((a, b)) => {
                if bd.nodes[x].leaf_vertex.is_some() {
                    return Err(BdViolation::InternalWithVertex(x));
                }
                if a >= n_nodes || b >= n_nodes || a == b {
                    return Err(BdViolation::NotATree(format!("bad children of {x}")));
                }
                for y in [a, b] {
                    if seen[y] {
                        return Err(BdViolation::NotATree(format!(
                            "node {y} has two parents"
                        )));
                    }
                    seen[y] = true;
                    stack.push(y);
                }
            }
            None => match bd.nodes[x].leaf_vertex {
                None => return Err(BdViolation::LeafWithoutVertex(x)),
                Some(v) if v >= g.n() => {
                    return Err(BdViolation::LeafVertexOutOfRange { node: x, vertex: v })
                }
                Some(v) => {
                    if mapped[v] {
                        return Err(BdViolation::DuplicateLeaf(v));
                    }
                    mapped[v] = true;
                }
            },
        }
    }
    if let Some(lost) = seen.iter().position(|&s| !s) {
        return Err(BdViolation::NotATree(format!("node {lost} unreachable")));
    }
    if let Some(v) = mapped.iter().position(|&m| !m) {
        return Err(BdViolation::VertexUnmapped(v));
    }
    Ok(())
}

/// The partition V_t / ~_t: vertices grouped by outside-neighborhood
/// N(v) \ V_t, listed in ascending order of each class's minimum vertex
/// (the canonical class key).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeClasses {
    pub classes: Vec<VertexSet>,
}

impl NodeClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn key(&self, i: usize) -> usize {
        self.classes[i].min_elem().expect("classes are nonempty")
    }

    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(v))
    }
}

/// Classes of ~_t given the subtree vertex set V_t.
pub fn classes_for(g: &Graph, vt: &VertexSet) -> NodeClasses {
    let mut groups: BTreeMap<VertexSet, VertexSet> = BTreeMap::new();
    for v in vt.iter() {
        let outside = g.neighbors(v).difference(vt);
        groups.entry(outside).or_default().insert(v);
    }
    let mut classes: Vec<VertexSet> = groups.into_values().collect();
    classes.sort_by_key(|c| c.min_elem());
    NodeClasses { classes }
}

/// Classes of ~_t at node `t` of a validated decomposition.
pub fn classes_at(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    t: usize,
) -> Result<NodeClasses, Error> {
    if t >= bd.nodes.len() {
        return Err(Error::InvalidInput(format!("unknown node {t}")));
    }
    let vt = &bd.subtree_vertices()[t];
    Ok(classes_for(g, vt))
}

/// max over nodes of |V_t / ~_t|.
pub fn module_width(g: &Graph, bd: &RootedBranchDecomposition) -> usize {
    let vts = bd.subtree_vertices();
    (0..bd.nodes.len())
        .map(|t| classes_for(g, &vts[t]).count())
        .max()
        .unwrap_or(0)
}

/// Largest per-side class count the operator representation supports.
pub const OPERATOR_CLASS_CAP: usize = 64;

/// The operator of an internal node t with children r and s: the
/// bipartite class graph H_t (adjacency is all-or-nothing between an
/// r-class and an s-class because classes are outside-modules), and the
/// bubble maps sending each child class to the parent class containing
/// it.
#[derive(Clone, Debug)]
pub struct Operator {
    pub r_classes: NodeClasses,
    pub s_classes: NodeClasses,
    pub t_classes: NodeClasses,
    /// adj_rs[i]: bitmask over s-class indices adjacent to r-class i in H_t.
    pub adj_rs: Vec<u64>,
    /// adj_sr[j]: bitmask over r-class indices adjacent to s-class j.
    pub adj_sr: Vec<u64>,
    /// rho_r[i]: index of the t-class whose bubble contains r-class i.
    pub rho_r: Vec<usize>,
    pub rho_s: Vec<usize>,
}

impl Operator {
    /// Builds and consistency-checks the operator from the three class
    /// partitions. Exposed so synthetic configurations can be tested.
    pub fn assemble(
        g: &Graph,
        r_classes: NodeClasses,
        s_classes: NodeClasses,
        t_classes: NodeClasses,
    ) -> Result<Self, Error> {
        let (mr, ms) = (r_classes.count(), s_classes.count());
        if mr > OPERATOR_CLASS_CAP || ms > OPERATOR_CLASS_CAP {
            return Err(Error::SizeGuard {
                what: "operator classes",
                limit: OPERATOR_CLASS_CAP,
                actual: mr.max(ms),
            });
        }
        let mut adj_rs = vec![0u64; mr];
        let mut adj_sr = vec![0u64; ms];
        for (i, qr) in r_classes.classes.iter().enumerate() {
            for (j, qs) in s_classes.classes.iter().enumerate() {
                let mut pairs = qr
                    .iter()
                    .flat_map(|u| qs.iter().map(move |v| (u, v)));
                let first = pairs.next().map(|(u, v)| g.has_edge(u, v));
                let Some(full) = first else { continue };
                if pairs.any(|(u, v)| g.has_edge(u, v) != full) {
                    return Err(Error::Inconsistency(format!(
                        "cross adjacency between classes {i}/{j} not all-or-nothing"
                    )));
                }
                if full {
                    adj_rs[i] |= 1 << j;
                    adj_sr[j] |= 1 << i;
                }
            }
        }
        let place = |child: &VertexSet| -> Result<usize, Error> {
            let hits: Vec<usize> = t_classes
                .classes
                .iter()
                .enumerate()
                .filter(|(_, p)| child.is_subset_of(p))
                .map(|(k, _)| k)
                .collect();
            match hits[..] {
                [k] => Ok(k),
                _ => Err(Error::Inconsistency(
                    "child class does not refine the parent partition".into(),
                )),
            }
        };
        let rho_r = r_classes
            .classes
            .iter()
            .map(place)
            .collect::<Result<Vec<_>, _>>()?;
        let rho_s = s_classes
            .classes
            .iter()
            .map(place)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Operator {
            r_classes,
            s_classes,
            t_classes,
            adj_rs,
            adj_sr,
            rho_r,
            rho_s,
        })
    }

    pub fn h_has_edge(&self, r_idx: usize, s_idx: usize) -> bool {
        self.adj_rs[r_idx] >> s_idx & 1 == 1
    }
}

/// Operator of internal node `t`.
pub fn operator_at(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    t: usize,
) -> Result<Operator, Error> {
    let Some((r, s)) = bd.nodes.get(t).and_then(|x| x.children) else {
        return Err(Error::InvalidInput(format!("node {t} is not internal")));
    };
    let vts = bd.subtree_vertices();
    operator_for(g, &vts[r], &vts[s])
}

/// Operator from the child subtree vertex sets directly.
pub fn operator_for(g: &Graph, vr: &VertexSet, vs: &VertexSet) -> Result<Operator, Error> {
    let vt = vr.union(vs);
    Operator::assemble(
        g,
        classes_for(g, vr),
        classes_for(g, vs),
        classes_for(g, &vt),
    )
}

/// Left-deep caterpillar decomposition with leaves in the given order.
pub fn linear_bd(g: &Graph, order: &[usize]) -> Result<RootedBranchDecomposition, Error> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidInput(
            "branch decomposition needs n >= 1".into(),
        ));
    }
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return Err(Error::InvalidInput(
            "order is not a permutation of the vertices".into(),
        ));
    }
    let mut nodes: Vec<BdNode> = order
        .iter()
        .map(|&v| BdNode {
            children: None,
            leaf_vertex: Some(v),
        })
        .collect();
    let mut spine = 0usize; // leaf of order[0]
    for leaf in 1..n {
        nodes.push(BdNode {
            children: Some((spine, leaf)),
            leaf_vertex: None,
        });
        spine = nodes.len() - 1;
    }
    Ok(RootedBranchDecomposition {
        nodes,
        root: spine,
    })
}

/// Search-space marker for [`best_bd_small`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchSpace {
    /// All n! leaf orders of a linear decomposition (searched by a
    /// prefix-subset DP, which minimizes over exactly that space).
    LinearOrders,
}

#[derive(Clone, Debug)]
pub struct BdSearch {
    pub bd: RootedBranchDecomposition,
    pub width: usize,
    pub search: SearchSpace,
}

/// Vertex-count cap for [`best_bd_small`].
pub const BEST_BD_CAP: usize = 8;

/// A linear branch decomposition minimizing module-width over all leaf
/// orders. For a linear order, the spine node over prefix P has
/// |{N(v) \ P : v in P}| classes, so min over orders of max over
/// prefixes is a subset DP. Ties break toward the smallest vertex.
pub fn best_bd_small(g: &Graph) -> Result<BdSearch, Error> {
    let n = g.n();
    if n > BEST_BD_CAP {
        return Err(Error::SizeGuard {
            what: "best_bd_small",
            limit: BEST_BD_CAP,
            actual: n,
        });
    }
    if n == 0 {
        return Err(Error::InvalidInput(
            "branch decomposition needs n >= 1".into(),
        ));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u))
        .collect();
    let classes_of_prefix = |p: u32| -> usize {
        let mut outs: Vec<u32> = (0..n)
            .filter(|&v| p >> v & 1 == 1)
            .map(|v| adj[v] & !p)
            .collect();
        outs.sort_unstable();
        outs.dedup();
        outs.len()
    };
    let full: u32 = (1u32 << n) - 1;
    let size = 1usize << n;
    let mut f = vec![usize::MAX; size];
    let mut choice = vec![usize::MAX; size];
    f[0] = 0;
    for p in 1..=full {
        let here = classes_of_prefix(p);
        for v in 0..n {
            if p >> v & 1 == 0 {
                continue;
            }
            let w = f[(p & !(1 << v)) as usize].max(here);
            if w < f[p as usize] {
                f[p as usize] = w;
                choice[p as usize] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut p = full;
    while p != 0 {
        let v = choice[p as usize];
        order.push(v);
        p &= !(1 << v);
    }
    order.reverse();
    let bd = linear_bd(g, &order)?;
    let width = module_width(g, &bd);
    if width != f[full as usize] {
        return Err(Error::Inconsistency(format!(
            "best_bd_small width {} differs from DP optimum {}",
            width, f[full as usize]
        )));
    }
    Ok(BdSearch {
        bd,
        width,
        search: SearchSpace::LinearOrders,
    })
}

/// Uniformly random full binary shape over a random leaf order. Test and
/// harness plumbing.
pub fn random_bd(n: usize, rng: &mut impl Rng) -> RootedBranchDecomposition {
    assert!(n >= 1);
    let mut verts: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        verts.swap(i, j);
    }
    let mut nodes = Vec::new();
    let root = split(&verts, rng, &mut nodes);
    RootedBranchDecomposition { nodes, root }
}

fn split(verts: &[usize], rng: &mut impl Rng, nodes: &mut Vec<BdNode>) -> usize {
    if verts.len() == 1 {
        nodes.push(BdNode {
            children: None,
            leaf_vertex: Some(verts[0]),
        });
        return nodes.len() - 1;
    }
    let cut = rng.gen_range(1..verts.len());
    let a = split(&verts[..cut], rng, nodes);
    let b = split(&verts[cut..], rng, nodes);
    nodes.push(BdNode {
        children: Some((a, b)),
        leaf_vertex: None,
    });
    nodes.len() - 1
}
