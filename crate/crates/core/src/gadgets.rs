//! Generators for the gadget graphs of the hardness reductions:
//! Mycielski graphs, the color-selection gadget H_q, the NAE-SAT gadget
//! G_phi, and the list-coloring gadget G'. They double as benchmark
//! generators and as executable checks of the structural claims the
//! constructions come with.

use crate::error::Error;
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// CNF formula with positive/negative literals as signed 1-based
/// variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, Error> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidInput(format!("clause {} is empty", i + 1)));
            }
            let mut seen = BTreeSet::new();
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > n_vars {
                    return Err(Error::InvalidInput(format!(
                        "literal {lit} out of range in clause {}",
                        i + 1
                    )));
                }
                if !seen.insert(var) {
                    return Err(Error::InvalidInput(format!(
                        "variable {var} repeats in clause {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// A clause is monotone iff all its literals share one polarity
    /// (all-positive or all-negative).
    pub fn is_monotone(&self, clause: usize) -> bool {
        let c = &self.clauses[clause];
        c.iter().all(|&l| l > 0) || c.iter().all(|&l| l < 0)
    }
}

/// Brute-force NAE satisfiability: some assignment gives every clause
/// both a true and a false literal.
pub fn nae_satisfiable(phi: &CnfFormula) -> bool {
    let n = phi.n_vars();
    assert!(n <= 20, "NAE brute force is for tiny formulas");
    (0u64..1 << n).any(|assign| {
        phi.clauses().iter().all(|clause| {
            let mut any_true = false;
            let mut any_false = false;
            for &lit in clause {
                let var = lit.unsigned_abs() as usize - 1;
                let val = assign >> var & 1 == 1;
                let sat = if lit > 0 { val } else { !val };
                any_true |= sat;
                any_false |= !sat;
            }
            any_true && any_false
        })
    })
}

/// A list-coloring instance: per-vertex allowed colors within 1..=q.
#[derive(Clone, Debug)]
pub struct ListColoringInstance {
    pub graph: Graph,
    pub lists: Vec<BTreeSet<u32>>,
    pub q: u32,
}

impl ListColoringInstance {
    pub fn new(graph: Graph, lists: Vec<BTreeSet<u32>>, q: u32) -> Result<Self, Error> {
        if lists.len() != graph.n() {
            return Err(Error::InvalidInput(
                "one list per vertex required".into(),
            ));
        }
        for (v, list) in lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidInput(format!("vertex {v} has an empty list")));
            }
            if list.iter().any(|&c| c == 0 || c > q) {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} has list values outside 1..={q}"
                )));
            }
        }
        Ok(ListColoringInstance { graph, lists, q })
    }
}

/// Brute-force list colorability (test oracle for the reduction).
pub fn list_colorable(inst: &ListColoringInstance) -> bool {
    let n = inst.graph.n();
    assert!(n <= 8, "list-coloring brute force is for tiny instances");
    let lists: Vec<Vec<u32>> = inst.lists.iter().map(|l| l.iter().copied().collect()).collect();
    let mut colors = vec![0u32; n];
    fn rec(g: &Graph, lists: &[Vec<u32>], colors: &mut Vec<u32>, v: usize) -> bool {
        if v == g.n() {
            return true;
        }
        'choice: for &c in &lists[v] {
            for u in g.neighbors(v).iter() {
                if u < v && colors[u] == c {
                    continue 'choice;
                }
            }
            colors[v] = c;
            if rec(g, lists, colors, v + 1) {
                return true;
            }
        }
        false
    }
    n == 0 || rec(&inst.graph, &lists, &mut colors, 0)
}

/// Vertex roles in the gadget graphs. Numbering inside a role is 1-based
/// to match the constructions' naming (v_1, x_1, y_{12}, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    /// Variable vertex v_i.
    Variable(usize),
    /// Clause endpoint a_i.
    ClauseA(usize),
    /// Clause endpoint b_i.
    ClauseB(usize),
    /// Inner path vertex of clause i, position within the path.
    ClausePath(usize, usize),
    HubU,
    HubV,
    /// Color-selection vertex x_i.
    X(usize),
    /// False twin y_{ij}.
    Y(usize, usize),
    /// Unnamed vertex of copy i of the Mycielski graph inside H_q.
    HqInternal(usize, usize),
    /// Copy of input vertex (1-based) in the list-coloring gadget.
    Original(usize),
    /// Pendant v_j forbidding color j at input vertex v (1-based).
    Pendant(usize, u32),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Variable(i) => write!(f, "var:{i}"),
            Role::ClauseA(i) => write!(f, "a:{i}"),
            Role::ClauseB(i) => write!(f, "b:{i}"),
            Role::ClausePath(i, p) => write!(f, "path:{i}:{p}"),
            Role::HubU => write!(f, "hub:u"),
            Role::HubV => write!(f, "hub:v"),
            Role::X(i) => write!(f, "x:{i}"),
            Role::Y(i, j) => write!(f, "y:{i}:{j}"),
            Role::HqInternal(i, p) => write!(f, "hq:{i}:{p}"),
            Role::Original(v) => write!(f, "orig:{v}"),
            Role::Pendant(v, c) => write!(f, "pendant:{v}:{c}"),
        }
    }
}

/// A gadget graph together with role labels on its designated vertices.
#[derive(Clone, Debug)]
pub struct LabeledGadgetGraph {
    pub graph: Graph,
    pub labels: BTreeMap<usize, Role>,
    /// Non-fatal construction notes (e.g. a non-triangle-free input to
    /// the list-coloring gadget, whose equivalence proof needs it).
    pub warnings: Vec<String>,
}

impl LabeledGadgetGraph {
    pub fn find(&self, role: &Role) -> Option<usize> {
        self.labels
            .iter()
            .find(|(_, r)| *r == role)
            .map(|(&v, _)| v)
    }
}

pub const MYCIELSKI_CAP: usize = 7;

/// The Mycielski graph M_p: M_2 = K_2; M_p adds a shadow u_i for every
/// vertex v_i (adjacent to N(v_i)) and a hub w adjacent to all shadows.
/// Vertex numbering: old vertices first, then shadows in order, then w.
pub fn mycielski(p: usize) -> Result<Graph, Error> {
    if !(2..=MYCIELSKI_CAP).contains(&p) {
        return Err(Error::SizeGuard {
            what: "mycielski",
            limit: MYCIELSKI_CAP,
            actual: p,
        });
    }
    let mut g = Graph::from_edges(2, &[(0, 1)])?;
    for _ in 3..=p {
        let n = g.n();
        let mut next = Graph::new(2 * n + 1);
        for (u, v) in g.edges() {
            next.add_edge(u, v)?;
        }
        for i in 0..n {
            for v in g.neighbors(i).iter() {
                next.add_edge(n + i, v)?;
            }
            next.add_edge(2 * n, n + i)?;
        }
        g = next;
    }
    Ok(g)
}

/// M_p with its lexicographically smallest edge deleted; returns the
/// graph and that edge's endpoints (x, y) with x < y.
pub fn mycielski_minus(p: usize) -> Result<(Graph, (usize, usize)), Error> {
    let m = mycielski(p)?;
    let (x, y) = m.edges()[0];
    let kept: Vec<(usize, usize)> = m
        .edges()
        .into_iter()
        .filter(|&e| e != (x, y))
        .collect();
    Ok((Graph::from_edges(m.n(), &kept)?, (x, y)))
}

pub const HQ_CAP: usize = 4;

/// The color-selection gadget H_q: q copies of M_{q+1} minus an edge
/// x_i y_i, with y_i replaced by q-1 false twins y_{ij}, joined by the
/// cross edges y_{ij} y_{ji}.
pub fn color_selection_gadget(q: usize) -> Result<LabeledGadgetGraph, Error> {
    if !(2..=HQ_CAP).contains(&q) {
        return Err(Error::SizeGuard {
            what: "color_selection_gadget",
            limit: HQ_CAP,
            actual: q,
        });
    }
    let (mp, (x, y)) = mycielski_minus(q + 1)?;
    let base_n = mp.n(); // 3 * 2^(q-1) - 1
    let block = base_n - 1 + (q - 1); // y removed, q-1 twins added
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut labels = BTreeMap::new();
    let mut y_twin = BTreeMap::new(); // (i, j) -> global vertex

    for copy in 1..=q {
        let offset = (copy - 1) * block;
        // local index inside the copy: M' order with y removed
        let local = |v: usize| offset + if v < y { v } else { v - 1 };
        for (u, v) in mp.edges() {
            if u != y && v != y {
                edges.insert((local(u), local(v)));
            }
        }
        labels.insert(local(x), Role::X(copy));
        let mut twin_slot = offset + base_n - 1;
        for j in 1..=q {
            if j == copy {
                continue;
            }
            for u in mp.neighbors(y).iter() {
                edges.insert(ord(local(u), twin_slot));
            }
            labels.insert(twin_slot, Role::Y(copy, j));
            y_twin.insert((copy, j), twin_slot);
            twin_slot += 1;
        }
        for v in 0..mp.n() {
            if v != y && v != x {
                labels.insert(local(v), Role::HqInternal(copy, v));
            }
        }
    }
    for i in 1..=q {
        for j in i + 1..=q {
            edges.insert(ord(y_twin[&(i, j)], y_twin[&(j, i)]));
        }
    }
    let graph = Graph::from_edges(q * block, &edges.into_iter().collect::<Vec<_>>())?;
    Ok(LabeledGadgetGraph {
        graph,
        labels,
        warnings: Vec::new(),
    })
}

fn ord(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The NAE-SAT gadget G_phi: variable vertices V', one path gadget per
/// clause (four path vertices for monotone clauses, three otherwise)
/// wired to the variable sets, which become cliques, plus two adjacent
/// hubs complete to V'.
pub fn naesat_gadget(phi: &CnfFormula) -> Result<LabeledGadgetGraph, Error> {
    let n = phi.n_vars();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut labels = BTreeMap::new();
    for i in 0..n {
        labels.insert(i, Role::Variable(i + 1));
    }
    let mut next = n;
    let mut fresh = |labels: &mut BTreeMap<usize, Role>, role: Role| {
        let v = next;
        labels.insert(v, role);
        next += 1;
        v
    };
    let clique_of = |edges: &mut BTreeSet<(usize, usize)>, vars: &[usize]| {
        for (i, &a) in vars.iter().enumerate() {
            for &b in &vars[i + 1..] {
                edges.insert(ord(a, b));
            }
        }
    };
    for (ci, clause) in phi.clauses().iter().enumerate() {
        let num = ci + 1;
        if phi.is_monotone(ci) {
            let vars: Vec<usize> = clause.iter().map(|l| l.unsigned_abs() as usize - 1).collect();
            let a = fresh(&mut labels, Role::ClauseA(num));
            let a2 = fresh(&mut labels, Role::ClausePath(num, 1));
            let b2 = fresh(&mut labels, Role::ClausePath(num, 2));
            let b = fresh(&mut labels, Role::ClauseB(num));
            edges.insert(ord(a, a2));
            edges.insert(ord(a2, b2));
            edges.insert(ord(b2, b));
            for &v in &vars {
                edges.insert(ord(a, v));
                edges.insert(ord(b, v));
            }
            clique_of(&mut edges, &vars);
        } else {
            let pos: Vec<usize> = clause
                .iter()
                .filter(|&&l| l > 0)
                .map(|&l| l as usize - 1)
                .collect();
            let neg: Vec<usize> = clause
                .iter()
                .filter(|&&l| l < 0)
                .map(|&l| -l as usize - 1)
                .collect();
            let a = fresh(&mut labels, Role::ClauseA(num));
            let mid = fresh(&mut labels, Role::ClausePath(num, 1));
            let b = fresh(&mut labels, Role::ClauseB(num));
            edges.insert(ord(a, mid));
            edges.insert(ord(mid, b));
            for &v in &pos {
                edges.insert(ord(a, v));
            }
            for &v in &neg {
                edges.insert(ord(b, v));
            }
            clique_of(&mut edges, &pos);
            clique_of(&mut edges, &neg);
        }
    }
    let u = fresh(&mut labels, Role::HubU);
    let v = fresh(&mut labels, Role::HubV);
    edges.insert(ord(u, v));
    for w in 0..n {
        edges.insert(ord(u, w));
        edges.insert(ord(v, w));
    }
    let graph = Graph::from_edges(next, &edges.into_iter().collect::<Vec<_>>())?;
    Ok(LabeledGadgetGraph {
        graph,
        labels,
        warnings: Vec::new(),
    })
}

/// The list-coloring gadget G': a copy of the input graph, a copy of
/// H_q, and per vertex one pendant for each missing list color, wired to
/// all x_l with l != j. Warns when the input is not triangle-free (the
/// reduction's equivalence is proved for triangle-free inputs).
pub fn listcol_gadget(inst: &ListColoringInstance) -> Result<LabeledGadgetGraph, Error> {
    let q = inst.q as usize;
    if !(2..=HQ_CAP).contains(&q) {
        return Err(Error::SizeGuard {
            what: "listcol_gadget",
            limit: HQ_CAP,
            actual: q,
        });
    }
    let mut warnings = Vec::new();
    if inst.graph.has_triangle() {
        warnings.push("input graph has a triangle; the reduction's equivalence is proved for triangle-free inputs".into());
    }
    let hq = color_selection_gadget(q)?;
    let n = inst.graph.n();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut labels = BTreeMap::new();
    for v in 0..n {
        labels.insert(v, Role::Original(v + 1));
    }
    for (u, v) in inst.graph.edges() {
        edges.insert((u, v));
    }
    for (u, v) in hq.graph.edges() {
        edges.insert((u + n, v + n));
    }
    for (&v, role) in &hq.labels {
        labels.insert(v + n, role.clone());
    }
    let x_of: BTreeMap<usize, usize> = (1..=q)
        .map(|i| {
            let v = hq.find(&Role::X(i)).expect("H_q has one x per copy");
            (i, v + n)
        })
        .collect();
    let mut next = n + hq.graph.n();
    for v in 0..n {
        for j in 1..=inst.q {
            if inst.lists[v].contains(&j) {
                continue;
            }
            let pendant = next;
            next += 1;
            labels.insert(pendant, Role::Pendant(v + 1, j));
            edges.insert(ord(v, pendant));
            for l in 1..=q {
                if l != j as usize {
                    edges.insert(ord(pendant, x_of[&l]));
                }
            }
        }
    }
    let graph = Graph::from_edges(next, &edges.into_iter().collect::<Vec<_>>())?;
    Ok(LabeledGadgetGraph {
        graph,
        labels,
        warnings,
    })
}

/// Named graph families for corpus generation.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardFamily {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    /// G(n, p) drawn from a seeded ChaCha8 stream: pairs (u, v) with
    /// u < v in ascending order, one Bernoulli draw each.
    Random { n: usize, p: f64, seed: u64 },
}

pub fn standard_graph(family: &StandardFamily) -> Result<Graph, Error> {
    match *family {
        StandardFamily::Cycle(n) => {
            if n < 3 {
                return Err(Error::InvalidInput("cycle needs n >= 3".into()));
            }
            Ok(crate::graph::build::cycle(n))
        }
        StandardFamily::Path(n) => {
            if n < 1 {
                return Err(Error::InvalidInput("path needs n >= 1".into()));
            }
            Ok(crate::graph::build::path(n))
        }
        StandardFamily::Complete(n) => {
            if n < 1 {
                return Err(Error::InvalidInput("complete graph needs n >= 1".into()));
            }
            Ok(crate::graph::build::complete(n))
        }
        StandardFamily::Random { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput("edge probability must be in [0, 1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            Ok(g)
        }
    }
}
