//! Maximal clique enumeration (Bron-Kerbosch with pivoting).

use crate::graph::Graph;
use crate::vset::VertexSet;

/// All inclusion-maximal cliques of `g`, each exactly once, sorted by
/// canonical vertex-set key. The graph on zero vertices has none.
pub fn maximal_cliques(g: &Graph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    if g.n() > 0 {
        bron_kerbosch(
            g,
            VertexSet::new(),
            VertexSet::full(g.n()),
            VertexSet::new(),
            &mut out,
        );
    }
    out.sort();
    out
}

fn bron_kerbosch(g: &Graph, r: VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    // pivot: vertex of P u X with the most neighbors in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| g.neighbors(u).intersection(&p).len())
        .unwrap();
    let todo = p.difference(g.neighbors(pivot));
    for v in todo.iter() {
        let nv = g.neighbors(v);
        let mut next_r = r.clone();
        next_r.insert(v);
        bron_kerbosch(g, next_r, p.intersection(nv), x.intersection(nv), out);
        p.remove(v);
        x.insert(v);
    }
}

/// Reference implementation: filter all vertex subsets for cliques with no
/// extending vertex. Exponential; used to cross-check `maximal_cliques`.
pub fn maximal_cliques_naive(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    assert!(n <= 20, "naive enumeration is for tiny graphs");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let s: VertexSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if !g.is_clique(&s) {
            continue;
        }
        let extendable = (0..n).any(|w| !s.contains(w) && g.is_complete_to(w, &s));
        if !extendable {
            out.push(s);
        }
    }
    out.sort();
    out
}
