//! Simple undirected graphs with dense vertex indices.

use crate::error::Error;
use crate::vset::VertexSet;

/// A simple undirected graph on vertices `0..n-1`.
///
/// Adjacency is symmetric, loop-free and duplicate-free by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::new(); n],
        }
    }

    /// Builds a graph, rejecting out-of-range endpoints, self-loops and
    /// duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) out of range for n = {}",
                u, v, self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        if self.adj[u].contains(v) {
            return Err(Error::InvalidInput(format!("duplicate edge ({u}, {v})")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    /// Open neighborhood N(v).
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    /// Edges as (u, v) with u < v, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Is `x` a clique (every pair adjacent)?
    pub fn is_clique(&self, x: &VertexSet) -> bool {
        x.iter().all(|u| {
            let mut rest = x.clone();
            rest.remove(u);
            rest.is_subset_of(&self.adj[u])
        })
    }

    /// Is `w` adjacent to every vertex of `x`? (`w` itself must not be in `x`.)
    pub fn is_complete_to(&self, w: usize, x: &VertexSet) -> bool {
        x.is_subset_of(&self.adj[w])
    }

    pub fn has_triangle(&self) -> bool {
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u && !self.adj[u].intersection(&self.adj[v]).is_empty() {
                    return true;
                }
            }
        }
        false
    }

    /// Subgraph induced by `s`, with vertices renumbered to `0..|s|-1`
    /// in ascending order of the original indices. Returns the subgraph
    /// and the member list (new index -> old index).
    pub fn induced(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let members = s.to_vec();
        let mut g = Graph::new(members.len());
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
        (g, members)
    }
}

/// Classification of a graph as a forest, per the structural checks the
/// gadget constructions rely on. A linear forest is also a caterpillar
/// forest; the most specific label wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForestShape {
    NotForest,
    LinearForest,
    CaterpillarForest,
    OtherForest,
}

pub fn forest_shape(g: &Graph) -> ForestShape {
    // Forest iff acyclic: m = n - #components.
    let comps = components(g);
    if g.edge_count() != g.n() - comps.len() {
        return ForestShape::NotForest;
    }
    let mut all_paths = true;
    let mut all_caterpillars = true;
    for comp in &comps {
        if !comp.iter().all(|v| g.degree(v) <= 2) {
            all_paths = false;
        }
        if !is_caterpillar_component(g, comp) {
            all_caterpillars = false;
        }
    }
    if all_paths {
        ForestShape::LinearForest
    } else if all_caterpillars {
        ForestShape::CaterpillarForest
    } else {
        ForestShape::OtherForest
    }
}

/// Connected components, each as a vertex set, ordered by smallest member.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let mut seen = VertexSet::new();
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = VertexSet::singleton(start);
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(u) = stack.pop() {
            for v in g.neighbors(u).iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    comp.insert(v);
                    stack.push(v);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// A tree component is a caterpillar iff deleting its leaves yields a path
/// (possibly empty). The leftover spine of a tree is automatically
/// connected, so it suffices that every spine vertex keeps degree <= 2
/// within the spine.
fn is_caterpillar_component(g: &Graph, comp: &VertexSet) -> bool {
    let spine: VertexSet = comp.iter().filter(|&v| g.degree(v) >= 2).collect();
    let ok = spine
        .iter()
        .all(|v| g.neighbors(v).intersection(&spine).len() <= 2);
    ok
}

/// Convenience builders used across tests.
pub mod build {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = path(n);
        g.add_edge(n - 1, 0).unwrap();
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).unwrap();
        }
        g
    }
}
