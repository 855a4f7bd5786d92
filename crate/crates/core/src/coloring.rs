//! Colorings, the clique-coloring verifier, and the brute-force solver
//! used as the correctness oracle by every other solver in the crate.

use crate::cliques::maximal_cliques;
use crate::error::Error;
use crate::graph::Graph;
use crate::vset::VertexSet;

/// A total map vertex -> color in {1..k}. Color classes may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    k: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, k: u32) -> Result<Self, Error> {
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::ColoringDomain(format!(
                "color {c} outside 1..={k}"
            )));
        }
        Ok(Coloring { colors, k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// The class of color `c` as a vertex set.
    pub fn class(&self, c: u32) -> VertexSet {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == c)
            .collect()
    }

    /// Same coloring viewed with `k + extra` colors (padding with empty
    /// classes).
    pub fn pad(&self, extra: u32) -> Coloring {
        Coloring {
            colors: self.colors.clone(),
            k: self.k + extra,
        }
    }
}

/// True iff no maximal clique of `g` is monochromatic under `c`.
///
/// A singleton maximal clique (isolated vertex) is monochromatic under any
/// coloring, so such graphs verify to false for every input.
pub fn is_clique_coloring(g: &Graph, c: &Coloring) -> Result<bool, Error> {
    if c.len() != g.n() {
        return Err(Error::ColoringDomain(format!(
            "coloring covers {} vertices, graph has {}",
            c.len(),
            g.n()
        )));
    }
    let cliques = maximal_cliques(g);
    Ok(colors_break_all(c.colors(), &cliques))
}

fn colors_break_all(colors: &[u32], cliques: &[VertexSet]) -> bool {
    cliques.iter().all(|x| {
        let mut it = x.iter();
        let first = colors[it.next().expect("maximal cliques are nonempty")];
        it.any(|v| colors[v] != first)
    })
}

/// Default vertex-count cap for [`brute_force_solve`].
pub const BRUTE_FORCE_CAP: usize = 12;

/// Exhaustive search for a clique coloring with `k` colors.
///
/// The lowest-indexed vertex is fixed to color 1 (classes are
/// interchangeable for existence), the rest is enumerated odometer-style
/// with the highest-indexed vertex cycling fastest; the first valid
/// coloring in that order is returned.
pub fn brute_force_solve(g: &Graph, k: u32) -> Result<Option<Coloring>, Error> {
    brute_force_solve_capped(g, k, BRUTE_FORCE_CAP)
}

pub fn brute_force_solve_capped(
    g: &Graph,
    k: u32,
    cap: usize,
) -> Result<Option<Coloring>, Error> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if g.n() > cap {
        return Err(Error::SizeGuard {
            what: "brute_force_solve",
            limit: cap,
            actual: g.n(),
        });
    }
    let n = g.n();
    if n == 0 {
        return Ok(Some(Coloring::new(Vec::new(), k)?));
    }
    let cliques = maximal_cliques(g);
    let mut colors = vec![1u32; n];
    loop {
        if colors_break_all(&colors, &cliques) {
            return Ok(Some(Coloring::new(colors, k)?));
        }
        // advance the odometer over vertices 1..n-1 (vertex 0 pinned to 1)
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(None);
            }
            i -= 1;
            if colors[i] < k {
                colors[i] += 1;
                break;
            }
            colors[i] = 1;
        }
    }
}

/// Backtracking search for a proper coloring with colors `1..=q`,
/// honoring pre-assigned pins. Exact but exponential; meant for the small
/// gadget graphs whose proper-coloring claims the test suites verify.
pub fn proper_coloring_search(
    g: &Graph,
    q: u32,
    pins: &[(usize, u32)],
) -> Option<Coloring> {
    let n = g.n();
    let mut colors = vec![0u32; n];
    for &(v, c) in pins {
        if c == 0 || c > q || colors[v] != 0 && colors[v] != c {
            return None;
        }
        colors[v] = c;
    }
    for &(v, c) in pins {
        for u in g.neighbors(v).iter() {
            if colors[u] == c {
                return None;
            }
        }
    }
    // order vertices by descending degree for earlier pruning
    let mut order: Vec<usize> = (0..n).filter(|&v| colors[v] == 0).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    if backtrack(g, q, &order, 0, &mut colors) {
        Some(Coloring::new(colors, q).unwrap())
    } else {
        None
    }
}

fn backtrack(g: &Graph, q: u32, order: &[usize], i: usize, colors: &mut [u32]) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    'colors: for c in 1..=q {
        for u in g.neighbors(v).iter() {
            if colors[u] == c {
                continue 'colors;
            }
        }
        colors[v] = c;
        if backtrack(g, q, order, i + 1, colors) {
            return true;
        }
        colors[v] = 0;
    }
    false
}

/// Calls `f` on every proper coloring of `g` with colors `1..=q`.
/// Exhaustive enumeration; only for tiny graphs.
pub fn for_each_proper_coloring<F: FnMut(&[u32])>(g: &Graph, q: u32, mut f: F) {
    let n = g.n();
    let mut colors = vec![0u32; n];
    enumerate(g, q, 0, &mut colors, &mut f);
}

fn enumerate<F: FnMut(&[u32])>(g: &Graph, q: u32, v: usize, colors: &mut Vec<u32>, f: &mut F) {
    if v == g.n() {
        f(colors);
        return;
    }
    'colors: for c in 1..=q {
        for u in g.neighbors(v).iter() {
            if u < v && colors[u] == c {
                continue 'colors;
            }
        }
        colors[v] = c;
        enumerate(g, q, v + 1, colors, f);
    }
    colors[v] = 0;
}

/// Smallest q with a proper q-coloring. Exponential; tiny graphs only.
pub fn chromatic_number(g: &Graph) -> u32 {
    if g.n() == 0 {
        return 0;
    }
    let mut q = 1;
    while proper_coloring_search(g, q, &[]).is_none() {
        q += 1;
    }
    q
}
