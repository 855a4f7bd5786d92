//! Clique coloring over a nice tree decomposition in O*(q^tw).
//!
//! Bottom-up DP with one boolean table entry per bag coloring. Table
//! semantics: A[t, gamma] = 1 iff some q-coloring of G_t restricts to
//! gamma on B_t and every monochromatic maximal clique of G_t lies
//! inside B_t. Leaf, introduce and join nodes follow the textbook rules;
//! at a forget node an oracle is built once and queried per (coloring,
//! color) pair with N(v) intersect gamma^{-1}(c).
//!
//! The forget oracle marks the sets Y inside N(v) with {v} u Y maximal
//! in G_t, not merely maximal in G[B_t]: a vertex forgotten below can
//! extend {v} u Y (all of N(v) lies in V_t at v's forget node), and
//! ignoring that direction returns wrong answers on odd cycles and
//! isolated vertices. The subset-lattice trick is unchanged: mark the
//! indicator, zeta-transform, then each query is a constant-time lookup.

use crate::coloring::Coloring;
use crate::error::Error;
use crate::graph::Graph;
use crate::oracle::SubsetOracle;
use crate::tree_decomp::{validate_nice, NiceTreeDecomposition, NodeKind};
use crate::vset::VertexSet;

/// Largest bag size the solver accepts (oracle tables are 2^{bag}).
pub const TW_BAG_CAP: usize = 27;
/// Largest per-node table size (q^{bag} entries).
pub const TW_TABLE_CAP: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TwStats {
    /// Table entries written, summed over all nodes.
    pub entries: u64,
    pub nodes: usize,
    pub max_bag: usize,
}

#[derive(Clone, Debug)]
pub struct TwOutcome {
    pub colorable: bool,
    pub coloring: Option<Coloring>,
    pub stats: TwStats,
}

/// Mixed-radix code of a bag coloring: bag vertices ascending, digit i is
/// (color - 1) of the i-th bag vertex, index = sum digit_i * q^i.
#[derive(Clone, Debug)]
pub struct BagCode {
    verts: Vec<usize>,
    q: u64,
}

impl BagCode {
    pub fn new(bag: &VertexSet, q: u32) -> Self {
        BagCode {
            verts: bag.to_vec(),
            q: q as u64,
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn table_size(&self) -> Result<u64, Error> {
        let mut size = 1u64;
        for _ in 0..self.verts.len() {
            size = size.checked_mul(self.q).ok_or(Error::Overflow("tw table size"))?;
            if size > TW_TABLE_CAP {
                return Err(Error::SizeGuard {
                    what: "tw table size",
                    limit: TW_TABLE_CAP as usize,
                    actual: size as usize,
                });
            }
        }
        Ok(size)
    }

    pub fn encode(&self, colors: &[u32]) -> u64 {
        debug_assert_eq!(colors.len(), self.verts.len());
        let mut idx = 0u64;
        for (i, &c) in colors.iter().enumerate() {
            debug_assert!(c >= 1 && c as u64 <= self.q);
            idx += (c as u64 - 1) * self.q.pow(i as u32);
        }
        idx
    }

    pub fn decode(&self, idx: u64) -> Vec<u32> {
        let mut out = vec![0; self.verts.len()];
        self.decode_into(idx, &mut out);
        out
    }

    pub fn decode_into(&self, mut idx: u64, out: &mut [u32]) {
        for slot in out.iter_mut().take(self.verts.len()) {
            *slot = (idx % self.q) as u32 + 1;
            idx /= self.q;
        }
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&u| u == v)
    }
}

/// Table rule at a leaf node: the empty coloring is feasible.
pub fn step_leaf() -> Vec<bool> {
    vec![true]
}

/// Table rule at an introduce node: A[t, gamma] = A[s, gamma restricted
/// to the child bag]. `pos` is the introduced vertex's position in the
/// ascending order of B_t.
pub fn step_introduce(child: &[bool], q: u32, pos: usize, table_len: u64) -> Vec<bool> {
    let q = q as u64;
    let stride = q.pow(pos as u32);
    (0..table_len)
        .map(|idx| {
            let low = idx % stride;
            let rest = idx / (stride * q);
            child[(low + rest * stride) as usize]
        })
        .collect()
}

/// Table rule at a join node: conjunction of the children's entries.
pub fn step_join(left: &[bool], right: &[bool]) -> Vec<bool> {
    debug_assert_eq!(left.len(), right.len());
    left.iter().zip(right).map(|(&a, &b)| a && b).collect()
}

/// Oracle built once per forget node: answers whether a set
/// S inside N(v) intersect B_t contains some Y with {v} u Y maximal
/// in G_t.
#[derive(Clone, Debug)]
pub struct ForgetOracle {
    /// N(v) intersect B_t, ascending; oracle bit j stands for dom[j].
    dom: Vec<usize>,
    oracle: SubsetOracle,
}

impl ForgetOracle {
    /// `vt` is the vertex set of G_t (everything introduced in the
    /// subtree); at v's forget node N(v) is contained in it.
    pub fn build(g: &Graph, v: usize, bag_t: &VertexSet, vt: &VertexSet) -> Result<Self, Error> {
        let dom: Vec<usize> = g.neighbors(v).intersection(bag_t).to_vec();
        let d = dom.len();
        if d > TW_BAG_CAP {
            return Err(Error::SizeGuard {
                what: "forget oracle",
                limit: TW_BAG_CAP,
                actual: d,
            });
        }
        let dom_mask = |s: &VertexSet| -> usize {
            dom.iter()
                .enumerate()
                .filter(|(_, &u)| s.contains(u))
                .fold(0usize, |m, (j, _)| m | 1 << j)
        };
        // extendable[Y]: some w in N(v) within G_t is complete to Y u {v}
        let mut extendable = vec![false; 1usize << d];
        for w in g.neighbors(v).intersection(vt).iter() {
            extendable[dom_mask(g.neighbors(w))] = true;
        }
        let mut bit = 1usize;
        while bit < extendable.len() {
            for m in 0..extendable.len() {
                if m & bit == 0 && extendable[m | bit] {
                    extendable[m] = true;
                }
            }
            bit <<= 1;
        }
        // clique[Y]: Y u {v} is a clique (Y is within N(v) already)
        let adj: Vec<usize> = dom.iter().map(|&u| dom_mask(g.neighbors(u))).collect();
        let mut marked = vec![0u64; 1usize << d];
        let mut clique = vec![false; 1usize << d];
        clique[0] = true;
        marked[0] = u64::from(!extendable[0]);
        for y in 1..1usize << d {
            let j = y.trailing_zeros() as usize;
            let rest = y & (y - 1);
            clique[y] = clique[rest] && rest & !adj[j] == 0;
            marked[y] = u64::from(clique[y] && !extendable[y]);
        }
        Ok(ForgetOracle {
            dom,
            oracle: SubsetOracle::from_counts(d, marked)?,
        })
    }

    pub fn domain(&self) -> &[usize] {
        &self.dom
    }

    /// True iff coloring v with c creates a monochromatic maximal clique
    /// of G_t escaping B_t. `color_of` maps a B_t vertex to its color.
    pub fn blocks(&self, c: u32, color_of: impl Fn(usize) -> u32) -> bool {
        let mask = self
            .dom
            .iter()
            .enumerate()
            .filter(|(_, &u)| color_of(u) == c)
            .fold(0usize, |m, (j, _)| m | 1 << j);
        self.blocks_mask(mask)
    }

    /// Mask-level query: bit j of `mask` selects `domain()[j]`.
    pub fn blocks_mask(&self, mask: usize) -> bool {
        self.oracle.contains_marked_subset(mask)
    }
}

fn same_color_mask(dom_pos: &[usize], colors: &[u32], c: u32) -> usize {
    dom_pos
        .iter()
        .enumerate()
        .filter(|(_, &p)| colors[p] == c)
        .fold(0usize, |m, (j, _)| m | 1 << j)
}

/// Table rule at a forget node: A[t, gamma] = 1 iff for some color c the
/// child entry with v -> c is set and the oracle query on
/// N(v) intersect gamma^{-1}(c) comes back empty.
pub fn step_forget(
    child: &[bool],
    q: u32,
    code_t: &BagCode,
    pos_in_child: usize,
    oracle: &ForgetOracle,
    table_len: u64,
) -> Vec<bool> {
    let qq = q as u64;
    let stride = qq.pow(pos_in_child as u32);
    // positions of the oracle's domain vertices within the bag code
    let dom_pos: Vec<usize> = oracle
        .domain()
        .iter()
        .map(|&u| code_t.position(u).expect("domain inside bag"))
        .collect();
    let mut out = vec![false; table_len as usize];
    let mut colors = vec![0u32; code_t.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let idx = idx as u64;
        code_t.decode_into(idx, &mut colors);
        let low = idx % stride;
        let high = idx / stride;
        for c in 1..=q {
            let child_idx = low + ((c as u64 - 1) + high * qq) * stride;
            if child[child_idx as usize]
                && !oracle.blocks_mask(same_color_mask(&dom_pos, &colors, c))
            {
                *slot = true;
                break;
            }
        }
    }
    out
}

/// Decides q-clique-colorability of `g` over the given nice tree
/// decomposition; optionally reconstructs a verifier-ready coloring.
pub fn solve_tw(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    q: u32,
    want_certificate: bool,
) -> Result<TwOutcome, Error> {
    if q == 0 {
        return Err(Error::InvalidInput("q must be at least 1".into()));
    }
    if q == 1 {
        // any nonempty graph has a maximal clique, necessarily monochromatic
        let colorable = g.n() == 0;
        return Ok(TwOutcome {
            colorable,
            coloring: colorable.then(|| Coloring::new(Vec::new(), 1).unwrap()),
            stats: TwStats::default(),
        });
    }
    validate_nice(g, ntd)?;
    let max_bag = ntd.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0);
    if max_bag > TW_BAG_CAP {
        return Err(Error::SizeGuard {
            what: "solve_tw bag size",
            limit: TW_BAG_CAP,
            actual: max_bag,
        });
    }

    let order = ntd.bottom_up();
    let n_nodes = ntd.nodes.len();
    let mut tables: Vec<Option<Vec<bool>>> = vec![None; n_nodes];
    let mut subtree: Vec<VertexSet> = vec![VertexSet::new(); n_nodes];
    let mut oracles: Vec<Option<ForgetOracle>> = vec![None; n_nodes];
    let mut stats = TwStats {
        entries: 0,
        nodes: n_nodes,
        max_bag,
    };

    for &x in &order {
        let node = &ntd.nodes[x];
        let code = BagCode::new(&node.bag, q);
        let table_len = code.table_size()?;
        let table = match node.kind {
            NodeKind::Leaf => step_leaf(),
            NodeKind::Introduce(v) => {
                let c = node.children[0];
                subtree[x] = subtree[c].clone();
                subtree[x].insert(v);
                let pos = code.position(v).expect("introduced vertex in bag");
                let child = tables[c].as_ref().expect("child table");
                step_introduce(child, q, pos, table_len)
            }
            NodeKind::Forget(v) => {
                let c = node.children[0];
                subtree[x] = subtree[c].clone();
                let oracle = ForgetOracle::build(g, v, &node.bag, &subtree[x])?;
                let child_code = BagCode::new(&ntd.nodes[c].bag, q);
                let pos = child_code.position(v).expect("forgotten vertex in child bag");
                let child = tables[c].as_ref().expect("child table");
                let t = step_forget(child, q, &code, pos, &oracle, table_len);
                oracles[x] = Some(oracle);
                t
            }
            NodeKind::Join => {
                let (a, b) = (node.children[0], node.children[1]);
                subtree[x] = subtree[a].union(&subtree[b]);
                let ta = tables[a].as_ref().expect("left table");
                let tb = tables[b].as_ref().expect("right table");
                step_join(ta, tb)
            }
        };
        stats.entries += table.len() as u64;
        tables[x] = Some(table);
        if !want_certificate {
            for &c in &ntd.nodes[x].children {
                tables[c] = None;
            }
        }
    }

    let colorable = tables[ntd.root].as_ref().expect("root table")[0];
    let coloring = if colorable && want_certificate {
        Some(reconstruct(g, ntd, q, &tables, &oracles)?)
    } else {
        None
    };
    Ok(TwOutcome {
        colorable,
        coloring,
        stats,
    })
}

/// Top-down walk through retained tables; at each forget node the
/// smallest accepted color is chosen.
fn reconstruct(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    q: u32,
    tables: &[Option<Vec<bool>>],
    oracles: &[Option<ForgetOracle>],
) -> Result<Coloring, Error> {
    if !tables[ntd.root].as_ref().expect("root table")[0] {
        return Err(Error::InvalidInput(
            "certificate requested on a no-instance".into(),
        ));
    }
    let mut colors = vec![0u32; g.n()];
    let mut stack: Vec<(usize, u64)> = vec![(ntd.root, 0)];
    let qq = q as u64;
    while let Some((x, idx)) = stack.pop() {
        let node = &ntd.nodes[x];
        match node.kind {
            NodeKind::Leaf => {}
            NodeKind::Introduce(v) => {
                let code = BagCode::new(&node.bag, q);
                let pos = code.position(v).expect("bag vertex") as u32;
                let stride = qq.pow(pos);
                let child_idx = idx % stride + idx / (stride * qq) * stride;
                stack.push((node.children[0], child_idx));
            }
            NodeKind::Forget(v) => {
                let c = node.children[0];
                let code = BagCode::new(&node.bag, q);
                let colors_here = code.decode(idx);
                let color_of = |u: usize| colors_here[code.position(u).expect("bag vertex")];
                let child_code = BagCode::new(&ntd.nodes[c].bag, q);
                let pos = child_code.position(v).expect("vertex in child bag") as u32;
                let stride = qq.pow(pos);
                let low = idx % stride;
                let high = idx / stride;
                let oracle = oracles[x].as_ref().expect("forget oracle retained");
                let child_table = tables[c].as_ref().expect("child table retained");
                let mut chosen = None;
                for color in 1..=q {
                    let child_idx = low + ((color as u64 - 1) + high * qq) * stride;
                    if child_table[child_idx as usize] && !oracle.blocks(color, color_of) {
                        chosen = Some((color, child_idx));
                        break;
                    }
                }
                let (color, child_idx) = chosen.ok_or_else(|| {
                    Error::Inconsistency("forget entry set but no color accepted".into())
                })?;
                colors[v] = color;
                stack.push((c, child_idx));
            }
            NodeKind::Join => {
                stack.push((node.children[0], idx));
                stack.push((node.children[1], idx));
            }
        }
    }
    Coloring::new(colors, q)
}
