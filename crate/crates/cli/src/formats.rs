//! Line-oriented text formats: graphs (`p cc`), tree decompositions
//! (`s td`), rooted branch decompositions (`s bd`), colorings, DIMACS
//! CNF, and per-vertex color lists. Vertices and node ids are 1-based in
//! files, 0-based in memory. Lines starting with `c` are comments.

use anyhow::{anyhow, bail, Context, Result};
use cliquecolor::branch_decomp::{BdNode, RootedBranchDecomposition};
use cliquecolor::gadgets::{CnfFormula, LabeledGadgetGraph};
use cliquecolor::tree_decomp::TreeDecomposition;
use cliquecolor::{Coloring, Graph, VertexSet};
use std::collections::BTreeSet;

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('c'))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| anyhow!("missing {what}"))?
        .parse()
        .map_err(|_| anyhow!("malformed {what}: {:?}", tok.unwrap()))
}

/// `p cc <n> <m>` (or `p tw <n> <m>`), then m edge lines `u v`, 1-based.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let header = lines.next().context("missing graph header")?;
    let mut toks = header.split_ascii_whitespace();
    let magic = toks.next();
    let kind = toks.next();
    if magic != Some("p") || !matches!(kind, Some("cc") | Some("tw")) {
        bail!("malformed header: expected `p cc <n> <m>`, got {header:?}");
    }
    let n: usize = parse_num(toks.next(), "vertex count")?;
    let m: usize = parse_num(toks.next(), "edge count")?;
    let mut g = Graph::new(n);
    let mut edges = 0usize;
    for line in lines {
        let mut toks = line.split_ascii_whitespace();
        let u: usize = parse_num(toks.next(), "edge endpoint")?;
        let v: usize = parse_num(toks.next(), "edge endpoint")?;
        if toks.next().is_some() {
            bail!("trailing tokens on edge line {line:?}");
        }
        if u == 0 || v == 0 || u > n || v > n {
            bail!("edge ({u}, {v}) out of range for n = {n}");
        }
        g.add_edge(u - 1, v - 1)
            .with_context(|| format!("edge line {line:?}"))?;
        edges += 1;
    }
    if edges != m {
        bail!("header declares {m} edges but {edges} were given");
    }
    Ok(g)
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("p cc {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

/// `s td <bags> <max-bag-size> <n>`, bag lines `b <id> <v...>`,
/// then tree edge lines `<i> <j>`.
pub fn parse_td(text: &str, g: &Graph) -> Result<TreeDecomposition> {
    let mut lines = content_lines(text);
    let header = lines.next().context("missing td header")?;
    let mut toks = header.split_ascii_whitespace();
    if (toks.next(), toks.next()) != (Some("s"), Some("td")) {
        bail!("malformed header: expected `s td ...`, got {header:?}");
    }
    let bags_n: usize = parse_num(toks.next(), "bag count")?;
    let max_bag: usize = parse_num(toks.next(), "max bag size")?;
    let n: usize = parse_num(toks.next(), "vertex count")?;
    if n != g.n() {
        bail!("td is for {n} vertices but the graph has {}", g.n());
    }
    let mut bags = vec![None::<VertexSet>; bags_n];
    let mut edges = Vec::new();
    for line in lines {
        let mut toks = line.split_ascii_whitespace().peekable();
        if toks.peek() == Some(&"b") {
            toks.next();
            let id: usize = parse_num(toks.next(), "bag id")?;
            if id == 0 || id > bags_n {
                bail!("bag id {id} out of range 1..={bags_n}");
            }
            if bags[id - 1].is_some() {
                bail!("bag {id} declared twice");
            }
            let mut bag = VertexSet::new();
            for tok in toks {
                let v: usize = parse_num(Some(tok), "bag vertex")?;
                if v == 0 || v > n {
                    bail!("bag {id} references vertex {v} outside 1..={n}");
                }
                bag.insert(v - 1);
            }
            bags[id - 1] = Some(bag);
        } else {
            let a: usize = parse_num(toks.next(), "tree edge endpoint")?;
            let b: usize = parse_num(toks.next(), "tree edge endpoint")?;
            if a == 0 || b == 0 || a > bags_n || b > bags_n {
                bail!("tree edge ({a}, {b}) out of range 1..={bags_n}");
            }
            edges.push((a - 1, b - 1));
        }
    }
    let bags: Vec<VertexSet> = bags.into_iter().map(Option::unwrap_or_default).collect();
    let actual_max = bags.iter().map(VertexSet::len).max().unwrap_or(0);
    if actual_max != max_bag {
        bail!("header declares max bag size {max_bag} but bags reach {actual_max}");
    }
    Ok(TreeDecomposition { bags, edges })
}

pub fn emit_td(td: &TreeDecomposition, n: usize) -> String {
    let max_bag = td.bags.iter().map(VertexSet::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), max_bag, n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag.iter() {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    let mut edges = td.edges.clone();
    for e in &mut edges {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    for (a, b) in edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// `s bd <nodes> <n>`, `root <i>`, leaf lines `leaf <i> <v>`, and edge
/// lines `edge <i> <j>`. Children are ordered by ascending node id: the
/// smaller-id child is r.
pub fn parse_bd(text: &str, g: &Graph) -> Result<RootedBranchDecomposition> {
    let mut lines = content_lines(text);
    let header = lines.next().context("missing bd header")?;
    let mut toks = header.split_ascii_whitespace();
    if (toks.next(), toks.next()) != (Some("s"), Some("bd")) {
        bail!("malformed header: expected `s bd ...`, got {header:?}");
    }
    let nodes_n: usize = parse_num(toks.next(), "node count")?;
    let n: usize = parse_num(toks.next(), "vertex count")?;
    if n != g.n() {
        bail!("bd is for {n} vertices but the graph has {}", g.n());
    }
    let mut root = None;
    let mut leaf_vertex = vec![None::<usize>; nodes_n];
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nodes_n];
    for line in lines {
        let mut toks = line.split_ascii_whitespace();
        match toks.next() {
            Some("root") => {
                let i: usize = parse_num(toks.next(), "root id")?;
                if i == 0 || i > nodes_n {
                    bail!("root id {i} out of range");
                }
                if root.replace(i - 1).is_some() {
                    bail!("root declared twice");
                }
            }
            Some("leaf") => {
                let i: usize = parse_num(toks.next(), "leaf id")?;
                let v: usize = parse_num(toks.next(), "leaf vertex")?;
                if i == 0 || i > nodes_n {
                    bail!("leaf id {i} out of range");
                }
                if v == 0 || v > n {
                    bail!("leaf vertex {v} out of range 1..={n}");
                }
                if leaf_vertex[i - 1].replace(v - 1).is_some() {
                    bail!("leaf {i} declared twice");
                }
            }
            Some("edge") => {
                let a: usize = parse_num(toks.next(), "edge endpoint")?;
                let b: usize = parse_num(toks.next(), "edge endpoint")?;
                if a == 0 || b == 0 || a > nodes_n || b > nodes_n || a == b {
                    bail!("bd edge ({a}, {b}) malformed");
                }
                adj[a - 1].insert(b - 1);
                adj[b - 1].insert(a - 1);
            }
            other => bail!("unrecognized bd line starting with {other:?}"),
        }
    }
    let root = root.context("missing root line")?;
    // orient away from the root; children sorted ascending (r = smaller)
    let mut nodes: Vec<BdNode> = (0..nodes_n)
        .map(|i| BdNode {
            children: None,
            leaf_vertex: leaf_vertex[i],
        })
        .collect();
    let mut seen = vec![false; nodes_n];
    seen[root] = true;
    let mut stack = vec![(root, usize::MAX)];
    while let Some((x, parent)) = stack.pop() {
        let kids: Vec<usize> = adj[x].iter().copied().filter(|&y| y != parent).collect();
        match kids[..] {
            [] => {}
            [a, b] => {
                nodes[x].children = Some((a, b));
                for y in [a, b] {
                    if seen[y] {
                        bail!("bd edges contain a cycle through node {}", y + 1);
                    }
                    seen[y] = true;
                    stack.push((y, x));
                }
            }
            _ => bail!(
                "node {} has {} children; the tree must be full binary",
                x + 1,
                kids.len()
            ),
        }
    }
    if let Some(lost) = seen.iter().position(|&s| !s) {
        bail!("node {} is unreachable from the root", lost + 1);
    }
    Ok(RootedBranchDecomposition { nodes, root })
}

pub fn emit_bd(bd: &RootedBranchDecomposition) -> String {
    let mut out = format!("s bd {} {}\n",
        bd.nodes.len(),
        bd.nodes.iter().filter(|x| x.leaf_vertex.is_some()).count()
    );
    out.push_str(&format!("root {}\n", bd.root + 1));
    for (i, node) in bd.nodes.iter().enumerate() {
        if let Some(v) = node.leaf_vertex {
            out.push_str(&format!("leaf {} {}\n", i + 1, v + 1));
        }
    }
    let mut edges = Vec::new();
    for (i, node) in bd.nodes.iter().enumerate() {
        if let Some((a, b)) = node.children {
            edges.push((i.min(a), i.max(a)));
            edges.push((i.min(b), i.max(b)));
        }
    }
    edges.sort_unstable();
    for (a, b) in edges {
        out.push_str(&format!("edge {} {}\n", a + 1, b + 1));
    }
    out
}

/// One `<vertex> <color>` line per vertex, 1-based; k is the largest
/// color mentioned.
pub fn parse_coloring(text: &str, g: &Graph) -> Result<Coloring> {
    let mut colors = vec![0u32; g.n()];
    let mut assigned = vec![false; g.n()];
    for line in content_lines(text) {
        let mut toks = line.split_ascii_whitespace();
        let v: usize = parse_num(toks.next(), "vertex")?;
        let c: u32 = parse_num(toks.next(), "color")?;
        if v == 0 || v > g.n() {
            bail!("vertex {v} out of range 1..={}", g.n());
        }
        if c == 0 {
            bail!("colors are 1-based; vertex {v} got color 0");
        }
        if std::mem::replace(&mut assigned[v - 1], true) {
            bail!("vertex {v} colored twice");
        }
        colors[v - 1] = c;
    }
    if let Some(v) = assigned.iter().position(|&a| !a) {
        bail!("vertex {} has no color", v + 1);
    }
    let k = colors.iter().copied().max().unwrap_or(1).max(1);
    Ok(Coloring::new(colors, k)?)
}

pub fn emit_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for v in 0..c.len() {
        out.push_str(&format!("{} {}\n", v + 1, c.color(v)));
    }
    out
}

/// DIMACS CNF: `p cnf <vars> <clauses>`, then zero-terminated clauses.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut lines = content_lines(text);
    let header = lines.next().context("missing cnf header")?;
    let mut toks = header.split_ascii_whitespace();
    if (toks.next(), toks.next()) != (Some("p"), Some("cnf")) {
        bail!("malformed header: expected `p cnf <vars> <clauses>`, got {header:?}");
    }
    let n: usize = parse_num(toks.next(), "variable count")?;
    let m: usize = parse_num(toks.next(), "clause count")?;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in lines {
        for tok in line.split_ascii_whitespace() {
            let lit: i32 = parse_num(Some(tok), "literal")?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        bail!("last clause is not zero-terminated");
    }
    if clauses.len() != m {
        bail!("header declares {m} clauses but {} were given", clauses.len());
    }
    Ok(CnfFormula::new(n, clauses)?)
}

/// One `<vertex> <c1> <c2> ...` line per vertex, 1-based.
pub fn parse_lists(text: &str, n: usize) -> Result<Vec<BTreeSet<u32>>> {
    let mut lists = vec![None::<BTreeSet<u32>>; n];
    for line in content_lines(text) {
        let mut toks = line.split_ascii_whitespace();
        let v: usize = parse_num(toks.next(), "vertex")?;
        if v == 0 || v > n {
            bail!("vertex {v} out of range 1..={n}");
        }
        let mut list = BTreeSet::new();
        for tok in toks {
            list.insert(parse_num::<u32>(Some(tok), "list color")?);
        }
        if lists[v - 1].replace(list).is_some() {
            bail!("vertex {v} listed twice");
        }
    }
    if let Some(v) = lists.iter().position(Option::is_none) {
        bail!("vertex {} has no list", v + 1);
    }
    Ok(lists.into_iter().map(Option::unwrap).collect())
}

pub fn emit_labels(g: &LabeledGadgetGraph) -> String {
    let mut out = String::new();
    for (&v, role) in &g.labels {
        out.push_str(&format!("label {} {}\n", v + 1, role));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cliquecolor::graph::build;

    #[test]
    fn graph_roundtrip_and_errors() {
        let g = parse_graph("c a path\np cc 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g, build::path(3));
        assert_eq!(emit_graph(&g), "p cc 3 2\n1 2\n2 3\n");
        assert!(parse_graph("p cc 2 1\n1 1\n").is_err(), "self-loop");
        assert!(parse_graph("p cc 2 2\n1 2\n1 2\n").is_err(), "duplicate");
        assert!(parse_graph("p cc 2 1\n1 3\n").is_err(), "out of range");
        assert!(parse_graph("p cc 2 2\n1 2\n").is_err(), "count mismatch");
        assert!(parse_graph("p xx 2 0\n").is_err(), "bad magic");
        assert!(parse_graph("p tw 2 1\n1 2\n").is_ok(), "tw header accepted");
    }

    #[test]
    fn td_roundtrip_and_errors() {
        let g = build::path(3);
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", &g).unwrap();
        assert_eq!(td.bags.len(), 2);
        assert_eq!(emit_td(&td, 3), "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
        assert!(parse_td("s td 1 1 3\nb 1 9\n", &g).is_err(), "vertex range");
        assert!(parse_td("s td 1 2 2\nb 1 1 2\n", &g).is_err(), "n mismatch");
    }

    #[test]
    fn bd_roundtrip_and_errors() {
        let g = build::complete(2);
        let text = "s bd 3 2\nroot 3\nleaf 1 1\nleaf 2 2\nedge 3 1\nedge 3 2\n";
        let bd = parse_bd(text, &g).unwrap();
        assert_eq!(bd.root, 2);
        assert_eq!(bd.nodes[2].children, Some((0, 1)));
        // emission normalizes each edge to ascending endpoints
        let canonical = "s bd 3 2\nroot 3\nleaf 1 1\nleaf 2 2\nedge 1 3\nedge 2 3\n";
        assert_eq!(emit_bd(&bd), canonical);
        assert_eq!(emit_bd(&parse_bd(canonical, &g).unwrap()), canonical);
        assert!(parse_bd("s bd 2 2\nroot 1\nleaf 1 1\nleaf 2 2\n", &g).is_err());
    }

    #[test]
    fn coloring_roundtrip() {
        let g = build::path(3);
        let c = parse_coloring("1 1\n2 2\n3 1\n", &g).unwrap();
        assert_eq!(c.colors(), &[1, 2, 1]);
        assert_eq!(emit_coloring(&c), "1 1\n2 2\n3 1\n");
        assert!(parse_coloring("1 1\n2 2\n", &g).is_err(), "missing vertex");
    }

    #[test]
    fn cnf_parsing() {
        let phi = parse_cnf("c tiny\np cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(phi.n_vars(), 3);
        assert_eq!(phi.clauses().len(), 2);
        assert!(parse_cnf("p cnf 1 1\n1\n").is_err(), "unterminated clause");
    }

    #[test]
    fn lists_parsing() {
        let lists = parse_lists("1 1 2\n2 3\n", 2).unwrap();
        assert_eq!(lists[0].len(), 2);
        assert!(parse_lists("1 1\n", 2).is_err(), "missing vertex list");
    }
}
