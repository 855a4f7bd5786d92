//! Clique coloring parameterized by module-width: the XP dynamic program
//! over a rooted branch decomposition.
//!
//! A color class C at node t is summarized by its t-type: the set of
//! profiles of cliques that are potentially bad for C (maximal within the
//! equivalence classes they touch and fully inside C). A coloring is
//! summarized by its signature, the census of class types. Tables hold
//! the attained signatures per node; internal nodes combine child
//! signatures by distributing class merges over the merge skeleton, and
//! the root answer reads off the signature where all k classes have the
//! empty type.

use crate::branch_decomp::{validate_bd, Operator, RootedBranchDecomposition};
use crate::coloring::Coloring;
use crate::error::Error;
use crate::graph::Graph;
use crate::vset::VertexSet;
use std::collections::{BTreeMap, HashMap};

/// A profile (insiders, outsiders) at some node, as bitmasks over that
/// node's canonical class indices. Insiders are the classes a potentially
/// bad clique touches; outsiders are untouched classes holding a vertex
/// complete to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub insiders: u64,
    pub outsiders: u64,
}

impl Profile {
    pub fn new(insiders: u64, outsiders: u64) -> Self {
        debug_assert!(insiders != 0, "profiles have nonempty insiders");
        debug_assert_eq!(insiders & outsiders, 0, "profile sides are disjoint");
        Profile {
            insiders,
            outsiders,
        }
    }
}

/// Every profile over `class_count` classes: insiders nonempty, disjoint
/// from outsiders. There are 3^m - 2^m of them.
pub fn all_profiles(class_count: usize) -> Vec<Profile> {
    assert!(class_count <= 16, "profile enumeration is for small m");
    let full: u64 = (1 << class_count) - 1;
    let mut out = Vec::new();
    for ins in 1..=full {
        // submasks of the complement, including the empty one
        let comp = full & !ins;
        let mut outs = comp;
        loop {
            out.push(Profile::new(ins, outs));
            if outs == 0 {
                break;
            }
            outs = (outs - 1) & comp;
        }
    }
    out.sort();
    out
}

/// A t-type: canonical (sorted, duplicate-free) set of profiles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ColorClassType(Vec<Profile>);

impl ColorClassType {
    pub fn new(mut profiles: Vec<Profile>) -> Self {
        profiles.sort();
        profiles.dedup();
        ColorClassType(profiles)
    }

    /// The type of an empty (or bad-clique-free) color class.
    pub fn empty() -> Self {
        ColorClassType(Vec::new())
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A t-signature: counts per type, zero counts omitted, summing to k.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(Vec<(ColorClassType, u32)>);

impl Signature {
    pub fn new(pairs: Vec<(ColorClassType, u32)>, k: u32) -> Result<Self, Error> {
        let mut map: BTreeMap<ColorClassType, u32> = BTreeMap::new();
        for (ty, cnt) in pairs {
            if cnt > 0 {
                *map.entry(ty).or_insert(0) += cnt;
            }
        }
        let sig = Signature(map.into_iter().collect());
        if sig.total() != k {
            return Err(Error::InvalidInput(format!(
                "signature counts sum to {}, expected k = {k}",
                sig.total()
            )));
        }
        Ok(sig)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|(_, c)| c).sum()
    }

    pub fn entries(&self) -> &[(ColorClassType, u32)] {
        &self.0
    }

    pub fn count_of(&self, ty: &ColorClassType) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| t == ty)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    /// The root acceptance signature: k classes of the empty type.
    pub fn all_empty(k: u32) -> Self {
        Signature(vec![(ColorClassType::empty(), k)])
    }
}

// ---------------------------------------------------------------------
// potentially bad cliques and their profiles (reference implementations)
// ---------------------------------------------------------------------

/// Is X a potentially bad clique for C in G_t? True iff X is a nonempty
/// clique, X is inside C, and no vertex of V(classes touched by X)
/// outside X is complete to X.
pub fn is_pbc(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    t: usize,
    x: &VertexSet,
    c: &VertexSet,
) -> Result<bool, Error> {
    let vt = &bd.subtree_vertices()[t];
    let classes = crate::branch_decomp::classes_for(g, vt);
    Ok(is_pbc_for(g, &classes, x, c))
}

pub fn is_pbc_for(
    g: &Graph,
    classes: &crate::branch_decomp::NodeClasses,
    x: &VertexSet,
    c: &VertexSet,
) -> bool {
    if x.is_empty() || !x.is_subset_of(c) || !g.is_clique(x) {
        return false;
    }
    let mut touched = VertexSet::new();
    for cls in &classes.classes {
        if !cls.is_disjoint_from(x) {
            touched.union_with(cls);
        }
    }
    !touched
        .difference(x)
        .iter()
        .any(|w| g.is_complete_to(w, x))
}

/// The C-profile of a potentially bad clique X.
pub fn profile_of(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    t: usize,
    x: &VertexSet,
    c: &VertexSet,
) -> Result<Profile, Error> {
    let vt = &bd.subtree_vertices()[t];
    let classes = crate::branch_decomp::classes_for(g, vt);
    if !is_pbc_for(g, &classes, x, c) {
        return Err(Error::InvalidInput(format!(
            "{x:?} is not a potentially bad clique for {c:?}"
        )));
    }
    Ok(profile_for(g, &classes, x))
}

pub fn profile_for(
    g: &Graph,
    classes: &crate::branch_decomp::NodeClasses,
    x: &VertexSet,
) -> Profile {
    let mut ins = 0u64;
    let mut outs = 0u64;
    for (i, cls) in classes.classes.iter().enumerate() {
        if !cls.is_disjoint_from(x) {
            ins |= 1 << i;
        } else if cls.iter().any(|v| g.is_complete_to(v, x)) {
            outs |= 1 << i;
        }
    }
    Profile::new(ins, outs)
}

/// Largest |C| accepted by the exponential reference [`ctype_of`].
pub const CTYPE_CAP: usize = 20;

/// Reference implementation of the t-type of C: enumerate every nonempty
/// clique inside C and collect the profiles of the potentially bad ones.
pub fn ctype_of(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    t: usize,
    c: &VertexSet,
) -> Result<ColorClassType, Error> {
    let vt = &bd.subtree_vertices()[t];
    let classes = crate::branch_decomp::classes_for(g, vt);
    ctype_for(g, &classes, c)
}

pub fn ctype_for(
    g: &Graph,
    classes: &crate::branch_decomp::NodeClasses,
    c: &VertexSet,
) -> Result<ColorClassType, Error> {
    if c.len() > CTYPE_CAP {
        return Err(Error::SizeGuard {
            what: "ctype_of",
            limit: CTYPE_CAP,
            actual: c.len(),
        });
    }
    let members = c.to_vec();
    let mut profiles = Vec::new();
    let mut current = VertexSet::new();
    enumerate_cliques(g, &members, 0, &mut current, &mut |x| {
        if is_pbc_for(g, classes, x, c) {
            profiles.push(profile_for(g, classes, x));
        }
    });
    Ok(ColorClassType::new(profiles))
}

fn enumerate_cliques(
    g: &Graph,
    members: &[usize],
    from: usize,
    current: &mut VertexSet,
    f: &mut impl FnMut(&VertexSet),
) {
    for (i, &v) in members.iter().enumerate().skip(from) {
        if !current.is_subset_of(g.neighbors(v)) {
            continue;
        }
        current.insert(v);
        f(current);
        enumerate_cliques(g, members, i + 1, current, f);
        current.remove(v);
    }
}

// ---------------------------------------------------------------------
// merge machinery over an operator
// ---------------------------------------------------------------------

/// Which child of the internal node a profile lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    R,
    S,
}

/// Child classes (on both sides) sharing a bubble with the selection.
pub fn bubble_buddies(op: &Operator, sel_r: u64, sel_s: u64) -> (u64, u64) {
    let mut parents = 0u64;
    for i in 0..op.r_classes.count() {
        if sel_r >> i & 1 == 1 {
            parents |= 1 << op.rho_r[i];
        }
    }
    for j in 0..op.s_classes.count() {
        if sel_s >> j & 1 == 1 {
            parents |= 1 << op.rho_s[j];
        }
    }
    let mut bb_r = 0u64;
    for i in 0..op.r_classes.count() {
        if parents >> op.rho_r[i] & 1 == 1 {
            bb_r |= 1 << i;
        }
    }
    let mut bb_s = 0u64;
    for j in 0..op.s_classes.count() {
        if parents >> op.rho_s[j] & 1 == 1 {
            bb_s |= 1 << j;
        }
    }
    (bb_r, bb_s)
}

/// Are the two profiles compatible: insiders form a biclique of H_t that
/// stays maximal once the bubble-buddy outsiders are added to the graph.
pub fn compatible(op: &Operator, pr_r: Profile, pr_s: Profile) -> bool {
    for i in 0..op.r_classes.count() {
        if pr_r.insiders >> i & 1 == 1 && pr_s.insiders & !op.adj_rs[i] != 0 {
            return false;
        }
    }
    let (bb_r, bb_s) = bubble_buddies(op, pr_r.insiders, pr_s.insiders);
    for i in 0..op.r_classes.count() {
        if (pr_r.outsiders & bb_r) >> i & 1 == 1 && pr_s.insiders & !op.adj_rs[i] == 0 {
            return false;
        }
    }
    for j in 0..op.s_classes.count() {
        if (pr_s.outsiders & bb_s) >> j & 1 == 1 && pr_r.insiders & !op.adj_sr[j] == 0 {
            return false;
        }
    }
    true
}

/// Profile of the merged clique; callers must have checked
/// [`compatible`] first.
pub fn merge_profile(op: &Operator, pr_r: Profile, pr_s: Profile) -> Profile {
    debug_assert!(compatible(op, pr_r, pr_s));
    let (bb_r, bb_s) = bubble_buddies(op, pr_r.insiders, pr_s.insiders);
    let mut ins = 0u64;
    for i in 0..op.r_classes.count() {
        if pr_r.insiders >> i & 1 == 1 {
            ins |= 1 << op.rho_r[i];
        }
    }
    for j in 0..op.s_classes.count() {
        if pr_s.insiders >> j & 1 == 1 {
            ins |= 1 << op.rho_s[j];
        }
    }
    let mut outs = 0u64;
    for i in 0..op.r_classes.count() {
        if (pr_r.outsiders & !bb_r) >> i & 1 == 1 && pr_s.insiders & !op.adj_rs[i] == 0 {
            outs |= 1 << op.rho_r[i];
        }
    }
    for j in 0..op.s_classes.count() {
        if (pr_s.outsiders & !bb_s) >> j & 1 == 1 && pr_r.insiders & !op.adj_sr[j] == 0 {
            outs |= 1 << op.rho_s[j];
        }
    }
    Profile::new(ins, outs)
}

/// Does the clique survive alone: no bubble buddy of its insiders is
/// complete to them in H_t, and no outsider of its own profile is a
/// bubble buddy.
pub fn liftable(op: &Operator, side: Side, pr: Profile) -> bool {
    match side {
        Side::R => {
            let (bb_r, bb_s) = bubble_buddies(op, pr.insiders, 0);
            for j in 0..op.s_classes.count() {
                if bb_s >> j & 1 == 1 && pr.insiders & !op.adj_sr[j] == 0 {
                    return false;
                }
            }
            bb_r & pr.outsiders == 0
        }
        Side::S => {
            let (bb_r, bb_s) = bubble_buddies(op, 0, pr.insiders);
            for i in 0..op.r_classes.count() {
                if bb_r >> i & 1 == 1 && pr.insiders & !op.adj_rs[i] == 0 {
                    return false;
                }
            }
            bb_s & pr.outsiders == 0
        }
    }
}

/// Merge against the fictitious opposite profile (no insiders, every
/// opposite class an outsider). Callers must have checked [`liftable`].
pub fn lift_profile(op: &Operator, side: Side, pr: Profile) -> Profile {
    debug_assert!(liftable(op, side, pr));
    let (mine_count, opp_count, rho_mine, rho_opp, adj_opp): (
        usize,
        usize,
        &[usize],
        &[usize],
        &[u64],
    ) = match side {
        Side::R => (
            op.r_classes.count(),
            op.s_classes.count(),
            &op.rho_r,
            &op.rho_s,
            &op.adj_sr,
        ),
        Side::S => (
            op.s_classes.count(),
            op.r_classes.count(),
            &op.rho_s,
            &op.rho_r,
            &op.adj_rs,
        ),
    };
    let (bb_mine, bb_opp) = match side {
        Side::R => bubble_buddies(op, pr.insiders, 0),
        Side::S => {
            let (r, s) = bubble_buddies(op, 0, pr.insiders);
            (s, r)
        }
    };
    let mut ins = 0u64;
    let mut outs = 0u64;
    for (i, &parent) in rho_mine.iter().enumerate().take(mine_count) {
        if pr.insiders >> i & 1 == 1 {
            ins |= 1 << parent;
        }
        // opposite insiders are empty, so the completeness condition on
        // own-side outsiders is vacuous
        if (pr.outsiders & !bb_mine) >> i & 1 == 1 {
            outs |= 1 << parent;
        }
    }
    for j in 0..opp_count {
        if bb_opp >> j & 1 == 1 {
            continue;
        }
        if pr.insiders & !adj_opp[j] == 0 {
            outs |= 1 << rho_opp[j];
        }
    }
    Profile::new(ins, outs)
}

/// Merge type: merge profiles of all compatible pairs plus lift profiles
/// of all liftable profiles on either side, canonicalized.
pub fn merge_ctype(
    op: &Operator,
    tau_r: &ColorClassType,
    tau_s: &ColorClassType,
) -> ColorClassType {
    let mut profiles = Vec::new();
    for &pr in tau_r.profiles() {
        for &ps in tau_s.profiles() {
            if compatible(op, pr, ps) {
                profiles.push(merge_profile(op, pr, ps));
            }
        }
    }
    for &pr in tau_r.profiles() {
        if liftable(op, Side::R, pr) {
            profiles.push(lift_profile(op, Side::R, pr));
        }
    }
    for &ps in tau_s.profiles() {
        if liftable(op, Side::S, ps) {
            profiles.push(lift_profile(op, Side::S, ps));
        }
    }
    ColorClassType::new(profiles)
}

/// The merge skeleton restricted to the support of a signature pair:
/// left/right support types plus the label (merge type) of every pair.
#[derive(Clone, Debug)]
pub struct MergeSkeleton {
    pub left: Vec<ColorClassType>,
    pub right: Vec<ColorClassType>,
    /// label[i][j] = merge_ctype(left[i], right[j])
    pub label: Vec<Vec<ColorClassType>>,
}

/// Memoizes merge types per operator across signature pairs.
pub struct MergeCtx<'a> {
    op: &'a Operator,
    memo: HashMap<(ColorClassType, ColorClassType), ColorClassType>,
}

impl<'a> MergeCtx<'a> {
    pub fn new(op: &'a Operator) -> Self {
        MergeCtx {
            op,
            memo: HashMap::new(),
        }
    }

    pub fn merge(&mut self, tau_r: &ColorClassType, tau_s: &ColorClassType) -> ColorClassType {
        if let Some(hit) = self.memo.get(&(tau_r.clone(), tau_s.clone())) {
            return hit.clone();
        }
        let out = merge_ctype(self.op, tau_r, tau_s);
        self.memo
            .insert((tau_r.clone(), tau_s.clone()), out.clone());
        out
    }

    pub fn skeleton(&mut self, sig_r: &Signature, sig_s: &Signature) -> MergeSkeleton {
        let left: Vec<ColorClassType> =
            sig_r.entries().iter().map(|(t, _)| t.clone()).collect();
        let right: Vec<ColorClassType> =
            sig_s.entries().iter().map(|(t, _)| t.clone()).collect();
        let label = left
            .iter()
            .map(|tr| right.iter().map(|ts| self.merge(tr, ts)).collect())
            .collect();
        MergeSkeleton { left, right, label }
    }
}

/// Calls `f` with every nonnegative integer matrix (row-major) with the
/// given row and column sums. Deterministic order: rows filled top-down,
/// cells left-to-right, smallest feasible value first.
pub fn for_each_assignment(
    rows: &[u32],
    cols: &[u32],
    mut f: impl FnMut(&[u32]),
) -> Result<(), Error> {
    let total_r: u32 = rows.iter().sum();
    let total_c: u32 = cols.iter().sum();
    if total_r != total_c {
        return Err(Error::InvalidInput(format!(
            "assignment marginals disagree: rows sum to {total_r}, columns to {total_c}"
        )));
    }
    let mut matrix = vec![0u32; rows.len() * cols.len()];
    let mut col_rem: Vec<u32> = cols.to_vec();
    fill(rows, cols, 0, 0, rows.first().copied().unwrap_or(0), &mut col_rem, &mut matrix, &mut f);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn fill(
    rows: &[u32],
    cols: &[u32],
    i: usize,
    j: usize,
    row_left: u32,
    col_rem: &mut Vec<u32>,
    matrix: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if i == rows.len() {
        f(matrix);
        return;
    }
    if j == cols.len() {
        debug_assert_eq!(row_left, 0);
        let next_left = rows.get(i + 1).copied().unwrap_or(0);
        fill(rows, cols, i + 1, 0, next_left, col_rem, matrix, f);
        return;
    }
    let later: u32 = col_rem[j + 1..].iter().sum();
    let lo = row_left.saturating_sub(later);
    let hi = row_left.min(col_rem[j]);
    if lo > hi {
        return;
    }
    for x in lo..=hi {
        matrix[i * cols.len() + j] = x;
        col_rem[j] -= x;
        fill(rows, cols, i, j + 1, row_left - x, col_rem, matrix, f);
        col_rem[j] += x;
    }
    matrix[i * cols.len() + j] = 0;
}

/// Collecting wrapper around [`for_each_assignment`].
pub fn enumerate_assignments(rows: &[u32], cols: &[u32]) -> Result<Vec<Vec<u32>>, Error> {
    let mut out = Vec::new();
    for_each_assignment(rows, cols, |m| out.push(m.to_vec()))?;
    Ok(out)
}

// ---------------------------------------------------------------------
// the DP
// ---------------------------------------------------------------------

/// Default cap on attained signatures per node.
pub const CW_SIGNATURE_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
enum Witness {
    Leaf(usize),
    Merge {
        left: Signature,
        right: Signature,
        /// (left type, right type, merge count), nonzero counts only.
        assign: Vec<(ColorClassType, ColorClassType, u32)>,
    },
}

#[derive(Clone, Debug)]
pub struct CwOutcome {
    pub colorable: bool,
    pub coloring: Option<Coloring>,
    /// Largest attained-signature table over all nodes.
    pub max_table: usize,
}

pub fn solve_cw(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    k: u32,
    want_certificate: bool,
) -> Result<CwOutcome, Error> {
    solve_cw_capped(g, bd, k, want_certificate, CW_SIGNATURE_CAP)
}

pub fn solve_cw_capped(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    k: u32,
    want_certificate: bool,
    signature_cap: usize,
) -> Result<CwOutcome, Error> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    validate_bd(g, bd).map_err(|v| Error::InvalidDecomposition(v.to_string()))?;

    let vts = bd.subtree_vertices();
    let n_nodes = bd.nodes.len();
    let mut tables: Vec<BTreeMap<Signature, Witness>> = vec![BTreeMap::new(); n_nodes];
    let mut max_table = 0usize;

    for x in bd.bottom_up() {
        match bd.nodes[x].children {
            None => {
                let v = bd.nodes[x].leaf_vertex.expect("validated leaf");
                // the only equivalence class is {v}; {v} is potentially
                // bad for the class holding v, with profile ({v}, {})
                let pr_v = Profile::new(1, 0);
                let tau_v = ColorClassType::new(vec![pr_v]);
                let sig = Signature::new(
                    vec![(tau_v, 1), (ColorClassType::empty(), k - 1)],
                    k,
                )?;
                tables[x].insert(sig, Witness::Leaf(v));
            }
            Some((r, s)) => {
                let op = crate::branch_decomp::operator_for(g, &vts[r], &vts[s])?;
                let mut ctx = MergeCtx::new(&op);
                let mut table: BTreeMap<Signature, Witness> = BTreeMap::new();
                for sig_r in tables[r].keys() {
                    for sig_s in tables[s].keys() {
                        let skel = ctx.skeleton(sig_r, sig_s);
                        let rows: Vec<u32> =
                            sig_r.entries().iter().map(|(_, c)| *c).collect();
                        let cols: Vec<u32> =
                            sig_s.entries().iter().map(|(_, c)| *c).collect();
                        let mut guard: Option<Error> = None;
                        for_each_assignment(&rows, &cols, |matrix| {
                            if guard.is_some() {
                                return;
                            }
                            let mut counts: BTreeMap<&ColorClassType, u32> = BTreeMap::new();
                            for (i, row) in skel.label.iter().enumerate() {
                                for (j, lab) in row.iter().enumerate() {
                                    let cnt = matrix[i * cols.len() + j];
                                    if cnt > 0 {
                                        *counts.entry(lab).or_insert(0) += cnt;
                                    }
                                }
                            }
                            let sig_t = Signature(
                                counts
                                    .into_iter()
                                    .map(|(t, c)| (t.clone(), c))
                                    .collect(),
                            );
                            debug_assert_eq!(sig_t.total(), k);
                            if !table.contains_key(&sig_t) {
                                if table.len() >= signature_cap {
                                    guard = Some(Error::CwSignatureGuard {
                                        node: x,
                                        signatures: table.len() + 1,
                                        limit: signature_cap,
                                    });
                                    return;
                                }
                                let assign: Vec<(ColorClassType, ColorClassType, u32)> =
                                    matrix
                                        .iter()
                                        .enumerate()
                                        .filter(|(_, &c)| c > 0)
                                        .map(|(pos, &c)| {
                                            let (i, j) =
                                                (pos / cols.len(), pos % cols.len());
                                            (skel.left[i].clone(), skel.right[j].clone(), c)
                                        })
                                        .collect();
                                table.insert(
                                    sig_t,
                                    Witness::Merge {
                                        left: sig_r.clone(),
                                        right: sig_s.clone(),
                                        assign,
                                    },
                                );
                            }
                        })?;
                        if let Some(e) = guard {
                            return Err(e);
                        }
                    }
                }
                tables[x] = table;
            }
        }
        max_table = max_table.max(tables[x].len());
        if !want_certificate {
            if let Some((r, s)) = bd.nodes[x].children {
                tables[r].clear();
                tables[s].clear();
            }
        }
    }

    let target = Signature::all_empty(k);
    let colorable = tables[bd.root].contains_key(&target);
    let coloring = if colorable && want_certificate {
        let classes = materialize(g, bd, &vts, &tables, bd.root, &target, k)?;
        let mut colors = vec![0u32; g.n()];
        for (i, (_, members)) in classes.iter().enumerate() {
            for v in members.iter() {
                colors[v] = i as u32 + 1;
            }
        }
        Some(Coloring::new(colors, k)?)
    } else {
        None
    };
    Ok(CwOutcome {
        colorable,
        coloring,
        max_table,
    })
}

/// Rebuilds k concrete color classes (with their types) realizing an
/// attained signature. Same-type classes are interchangeable, so pairing
/// within a type is arbitrary; the stored assignment fixes how many
/// classes of each type pair merge.
fn materialize(
    g: &Graph,
    bd: &RootedBranchDecomposition,
    vts: &[VertexSet],
    tables: &[BTreeMap<Signature, Witness>],
    node: usize,
    sig: &Signature,
    k: u32,
) -> Result<Vec<(ColorClassType, VertexSet)>, Error> {
    let witness = tables[node]
        .get(sig)
        .ok_or_else(|| Error::Inconsistency("missing witness for attained signature".into()))?;
    match witness {
        Witness::Leaf(v) => {
            let mut out = vec![(
                ColorClassType::new(vec![Profile::new(1, 0)]),
                VertexSet::singleton(*v),
            )];
            for _ in 1..k {
                out.push((ColorClassType::empty(), VertexSet::new()));
            }
            Ok(out)
        }
        Witness::Merge {
            left,
            right,
            assign,
        } => {
            let (r, s) = bd.nodes[node].children.expect("merge witness on internal");
            let lhs = materialize(g, bd, vts, tables, r, left, k)?;
            let rhs = materialize(g, bd, vts, tables, s, right, k)?;
            let mut by_type_l: BTreeMap<ColorClassType, Vec<VertexSet>> = BTreeMap::new();
            for (ty, set) in lhs {
                by_type_l.entry(ty).or_default().push(set);
            }
            let mut by_type_r: BTreeMap<ColorClassType, Vec<VertexSet>> = BTreeMap::new();
            for (ty, set) in rhs {
                by_type_r.entry(ty).or_default().push(set);
            }
            let op = crate::branch_decomp::operator_for(g, &vts[r], &vts[s])?;
            let mut out = Vec::with_capacity(k as usize);
            for (tau_r, tau_s, cnt) in assign {
                let label = merge_ctype(&op, tau_r, tau_s);
                for _ in 0..*cnt {
                    let a = by_type_l
                        .get_mut(tau_r)
                        .and_then(Vec::pop)
                        .ok_or_else(|| {
                            Error::Inconsistency("left classes exhausted".into())
                        })?;
                    let b = by_type_r
                        .get_mut(tau_s)
                        .and_then(Vec::pop)
                        .ok_or_else(|| {
                            Error::Inconsistency("right classes exhausted".into())
                        })?;
                    out.push((label.clone(), a.union(&b)));
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch_decomp::{best_bd_small, linear_bd, operator_for, random_bd};
    use crate::coloring::{brute_force_solve, is_clique_coloring};
    use crate::graph::{build, Graph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn profile_count_formula() {
        for m in 0..=4usize {
            let expect = 3u64.pow(m as u32) - 2u64.pow(m as u32);
            assert_eq!(all_profiles(m).len() as u64, expect, "m = {m}");
        }
    }

    #[test]
    fn pbc_leaf_and_root_examples() {
        let g = build::complete(2);
        let bd = linear_bd(&g, &[0, 1]).unwrap();
        // leaf holding 0: X = C = {0} is potentially bad
        assert!(is_pbc(&g, &bd, 0, &[0].into(), &[0].into()).unwrap());
        // X not inside C
        assert!(!is_pbc(&g, &bd, 0, &[0].into(), &VertexSet::new()).unwrap());
        // at the root, {0} is extendable by 1 within the single class
        assert!(!is_pbc(&g, &bd, bd.root, &[0].into(), &[0, 1].into()).unwrap());
    }

    #[test]
    fn profile_leaf_example() {
        let g = build::complete(2);
        let bd = linear_bd(&g, &[0, 1]).unwrap();
        let pr = profile_of(&g, &bd, 0, &[0].into(), &[0].into()).unwrap();
        assert_eq!(pr, Profile::new(1, 0));
        // maximal clique at the root has the lone class as insider
        let pr = profile_of(&g, &bd, bd.root, &[0, 1].into(), &[0, 1].into()).unwrap();
        assert_eq!(pr, Profile::new(1, 0));
        // non-pbc input is an error
        assert!(profile_of(&g, &bd, bd.root, &[0].into(), &[0, 1].into()).is_err());
    }

    /// Four singleton classes at one node: X = {0,1} touches the first
    /// two, vertices 2 and 3 are complete to X from the other two.
    #[test]
    fn profile_two_insiders_two_outsiders() {
        let g = Graph::from_edges(
            6,
            &[
                (0, 1),
                (2, 0),
                (2, 1),
                (3, 0),
                (3, 1),
                (0, 4),
                (2, 4),
                (1, 5),
                (2, 5),
            ],
        )
        .unwrap();
        let bd = linear_bd(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        let t = bd
            .internal_nodes()
            .into_iter()
            .find(|&t| bd.subtree_vertices()[t].len() == 4)
            .unwrap();
        let classes = crate::branch_decomp::classes_at(&g, &bd, t).unwrap();
        assert_eq!(classes.count(), 4, "four singleton classes");
        let pr = profile_of(&g, &bd, t, &[0, 1].into(), &[0, 1].into()).unwrap();
        assert_eq!(pr, Profile::new(0b0011, 0b1100));
    }

    #[test]
    fn bubble_buddies_examples() {
        // paired bubbles: r-class i shares a parent with s-class i
        let g = Graph::from_edges(
            8,
            &[
                // parent classes split by outside vertices 6 and 7
                (0, 6),
                (3, 6),
                (1, 7),
                (4, 7),
                (2, 6),
                (2, 7),
                (5, 6),
                (5, 7),
            ],
        )
        .unwrap();
        let op = operator_for(&g, &[0, 1, 2].into(), &[3, 4, 5].into()).unwrap();
        assert_eq!(op.t_classes.count(), 3);
        // empty selection has no buddies
        assert_eq!(bubble_buddies(&op, 0, 0), (0, 0));
        // {Q1} u {P2, P3} pulls in P1 and Q2 (and Q3 via P3's bubble)
        let (bb_r, bb_s) = bubble_buddies(&op, 0b001, 0b110);
        assert_eq!(bb_s & 0b001, 0b001, "P1 is a bubble buddy");
        assert_eq!(bb_r & 0b010, 0b010, "Q2 is a bubble buddy");
        // one shared bubble: any nonempty selection pulls in everything
        let all = Graph::new(2);
        let op = operator_for(&all, &[0].into(), &[1].into()).unwrap();
        assert_eq!(bubble_buddies(&op, 1, 0), (1, 1));
    }

    #[test]
    fn compatible_examples() {
        // K_2 root: singleton insiders joined by an H-edge, no outsiders
        let g = build::complete(2);
        let op = operator_for(&g, &[0].into(), &[1].into()).unwrap();
        assert!(compatible(&op, Profile::new(1, 0), Profile::new(1, 0)));
        // missing H-edge: not even a biclique
        let h = Graph::new(2);
        let op = operator_for(&h, &[0].into(), &[1].into()).unwrap();
        assert!(!compatible(&op, Profile::new(1, 0), Profile::new(1, 0)));
        // an outsider in bb complete to the opposite insiders blocks
        let g = Graph::from_edges(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let op = operator_for(&g, &[0, 1].into(), &[2, 3].into()).unwrap();
        assert_eq!(op.r_classes.count(), 2);
        assert_eq!(op.t_classes.count(), 1, "no outside vertices: one bubble");
        let pr_r = Profile::new(0b01, 0b10); // insiders {0}, outsiders {1}
        let pr_s = Profile::new(0b01, 0); // insiders {2}
        assert!(!compatible(&op, pr_r, pr_s));
        assert!(compatible(&op, Profile::new(0b01, 0), pr_s));
    }

    #[test]
    fn merge_profile_empty_outsiders() {
        let g = build::complete(2);
        let op = operator_for(&g, &[0].into(), &[1].into()).unwrap();
        let merged = merge_profile(&op, Profile::new(1, 0), Profile::new(1, 0));
        assert_eq!(merged, Profile::new(1, 0), "single root class, no outsiders");
    }

    #[test]
    fn merge_profile_keeps_surviving_outsiders() {
        // X = {0} on the r side, Y = {1} on the s side; vertex 2 is
        // complete to both but sits in its own bubble (split off by the
        // outside vertex 3), so its parent class lands in the merged
        // profile's outsiders.
        let g = Graph::from_edges(4, &[(0, 1), (2, 0), (2, 1), (2, 3)]).unwrap();
        let vr: VertexSet = [0, 2].into();
        let vs: VertexSet = [1].into();
        let op = operator_for(&g, &vr, &vs).unwrap();
        assert_eq!(op.r_classes.classes, vec![[0].into(), [2].into()]);
        assert_eq!(op.t_classes.classes, vec![[0, 1].into(), [2].into()]);
        let pr_r = Profile::new(0b01, 0b10);
        let pr_s = Profile::new(0b1, 0);
        assert!(compatible(&op, pr_r, pr_s));
        let merged = merge_profile(&op, pr_r, pr_s);
        assert_eq!(merged, Profile::new(0b01, 0b10));
        // agrees with the direct profile of X u Y at the parent
        let classes_t = crate::branch_decomp::classes_for(&g, &vr.union(&vs));
        assert!(is_pbc_for(&g, &classes_t, &[0, 1].into(), &[0, 1].into()));
        assert_eq!(profile_for(&g, &classes_t, &[0, 1].into()), merged);
    }

    #[test]
    fn liftable_examples() {
        // K_2 root: the opposite class is a bubble buddy complete to the
        // insiders, so {u} does not survive alone
        let g = build::complete(2);
        let op = operator_for(&g, &[0].into(), &[1].into()).unwrap();
        assert!(!liftable(&op, Side::R, Profile::new(1, 0)));
        // edgeless pair: liftable, lift = (root class, nothing)
        let h = Graph::new(2);
        let op = operator_for(&h, &[0].into(), &[1].into()).unwrap();
        assert!(liftable(&op, Side::R, Profile::new(1, 0)));
        assert_eq!(
            lift_profile(&op, Side::R, Profile::new(1, 0)),
            Profile::new(1, 0)
        );
        // outsiders intersecting the bubble buddies block liftability
        let g = Graph::from_edges(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let op = operator_for(&g, &[0, 1].into(), &[2, 3].into()).unwrap();
        assert!(!liftable(&op, Side::R, Profile::new(0b01, 0b10)));
    }

    #[test]
    fn ctype_examples() {
        let g = build::complete(2);
        let bd = linear_bd(&g, &[0, 1]).unwrap();
        // leaf: the singleton class profile
        assert_eq!(
            ctype_of(&g, &bd, 0, &[0].into()).unwrap(),
            ColorClassType::new(vec![Profile::new(1, 0)])
        );
        // empty class: empty type
        assert_eq!(
            ctype_of(&g, &bd, 0, &VertexSet::new()).unwrap(),
            ColorClassType::empty()
        );
        // an edge of C_5 at the root is a maximal clique
        let c5 = build::cycle(5);
        let bd = linear_bd(&c5, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(
            ctype_of(&c5, &bd, bd.root, &[0, 1].into()).unwrap(),
            ColorClassType::new(vec![Profile::new(1, 0)])
        );
    }

    #[test]
    fn merge_ctype_k2_leaves() {
        let g = build::complete(2);
        let op = operator_for(&g, &[0].into(), &[1].into()).unwrap();
        let tau = ColorClassType::new(vec![Profile::new(1, 0)]);
        assert_eq!(
            merge_ctype(&op, &ColorClassType::empty(), &ColorClassType::empty()),
            ColorClassType::empty()
        );
        let merged = merge_ctype(&op, &tau, &tau);
        assert_eq!(merged, ColorClassType::new(vec![Profile::new(1, 0)]));
        // matches the reference implementation at the root
        let bd = linear_bd(&g, &[0, 1]).unwrap();
        assert_eq!(merged, ctype_of(&g, &bd, bd.root, &[0, 1].into()).unwrap());
    }

    #[test]
    fn assignment_enumeration() {
        // single forced cell
        assert_eq!(enumerate_assignments(&[3], &[3]).unwrap(), vec![vec![3]]);
        // forced column
        assert_eq!(
            enumerate_assignments(&[1, 2], &[3]).unwrap(),
            vec![vec![1, 2]]
        );
        // 2x2 with margins (2,2)/(2,2): three contingency tables
        let tables = enumerate_assignments(&[2, 2], &[2, 2]).unwrap();
        assert_eq!(tables.len(), 3);
        assert!(tables.contains(&vec![0, 2, 2, 0]));
        assert!(tables.contains(&vec![1, 1, 1, 1]));
        assert!(tables.contains(&vec![2, 0, 0, 2]));
        // marginal mismatch errors
        assert!(enumerate_assignments(&[2], &[3]).is_err());
    }

    fn solve_with_best_bd(g: &Graph, k: u32) -> CwOutcome {
        let found = best_bd_small(g).unwrap();
        solve_cw(g, &found.bd, k, true).unwrap()
    }

    #[test]
    fn known_family_facts() {
        let c5 = build::cycle(5);
        assert!(!solve_with_best_bd(&c5, 2).colorable);
        let out = solve_with_best_bd(&c5, 3);
        assert!(out.colorable);
        assert!(is_clique_coloring(&c5, &out.coloring.unwrap()).unwrap());

        let k4 = build::complete(4);
        let out = solve_with_best_bd(&k4, 2);
        assert!(out.colorable);
        assert!(is_clique_coloring(&k4, &out.coloring.unwrap()).unwrap());
    }

    #[test]
    fn leaf_table_shape() {
        // K_1: only signature is one class of the leaf type plus k-1
        // empties, so the all-empty target is unattained for every k
        let g = Graph::new(1);
        let bd = linear_bd(&g, &[0]).unwrap();
        for k in 1..=3 {
            assert!(!solve_cw(&g, &bd, k, false).unwrap().colorable);
        }
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let n = rng.gen_range(1..=7);
            let p = [0.25, 0.5, 0.75][rng.gen_range(0..3)];
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let bd = random_bd(n, &mut rng);
            for k in 2..=3u32 {
                let expect = brute_force_solve(&g, k).unwrap().is_some();
                let out = solve_cw(&g, &bd, k, true).unwrap();
                assert_eq!(out.colorable, expect, "n={n} k={k} edges={:?}", g.edges());
                if let Some(cert) = out.coloring {
                    assert!(is_clique_coloring(&g, &cert).unwrap());
                }
            }
        }
    }

    #[test]
    fn merge_type_identity_on_random_instances() {
        // merge_ctype(ctype(C_r), ctype(C_s)) = ctype(C_r u C_s)
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..150 {
            let n = rng.gen_range(2..=7);
            let p = [0.3, 0.5, 0.7][rng.gen_range(0..3)];
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let bd = random_bd(n, &mut rng);
            let internals = bd.internal_nodes();
            let t = internals[rng.gen_range(0..internals.len())];
            let (r, s) = bd.nodes[t].children.unwrap();
            let vts = bd.subtree_vertices();
            let cr: VertexSet = vts[r].iter().filter(|_| rng.gen_bool(0.6)).collect();
            let cs: VertexSet = vts[s].iter().filter(|_| rng.gen_bool(0.6)).collect();
            let op = operator_for(&g, &vts[r], &vts[s]).unwrap();
            let lhs = merge_ctype(
                &op,
                &ctype_of(&g, &bd, r, &cr).unwrap(),
                &ctype_of(&g, &bd, s, &cs).unwrap(),
            );
            let rhs = ctype_of(&g, &bd, t, &cr.union(&cs)).unwrap();
            assert_eq!(lhs, rhs, "n={n} edges={:?} cr={cr:?} cs={cs:?}", g.edges());
        }
    }

    #[test]
    fn split_and_lift_roundtrip() {
        // a potentially bad clique with nonempty parts on both sides
        // splits into potentially bad cliques with compatible profiles
        // whose merge equals the direct profile; liftability governs the
        // one-sided case
        let mut rng = ChaCha8Rng::seed_from_u64(31337);
        let mut split_cases = 0;
        let mut lift_cases = 0;
        for _ in 0..200 {
            let n = rng.gen_range(2..=7);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let bd = random_bd(n, &mut rng);
            let internals = bd.internal_nodes();
            let t = internals[rng.gen_range(0..internals.len())];
            let (r, s) = bd.nodes[t].children.unwrap();
            let vts = bd.subtree_vertices();
            let op = operator_for(&g, &vts[r], &vts[s]).unwrap();
            let classes_t = crate::branch_decomp::classes_for(&g, &vts[t]);
            let classes_r = crate::branch_decomp::classes_for(&g, &vts[r]);
            let classes_s = crate::branch_decomp::classes_for(&g, &vts[s]);
            let ct: VertexSet = vts[t].iter().filter(|_| rng.gen_bool(0.7)).collect();
            let members = ct.to_vec();
            let mut current = VertexSet::new();
            enumerate_cliques(&g, &members, 0, &mut current, &mut |x| {
                if !is_pbc_for(&g, &classes_t, x, &ct) {
                    return;
                }
                let direct = profile_for(&g, &classes_t, x);
                let xr = x.intersection(&vts[r]);
                let xs = x.intersection(&vts[s]);
                let cr = ct.intersection(&vts[r]);
                let cs = ct.intersection(&vts[s]);
                if !xr.is_empty() && !xs.is_empty() {
                    split_cases += 1;
                    assert!(is_pbc_for(&g, &classes_r, &xr, &cr));
                    assert!(is_pbc_for(&g, &classes_s, &xs, &cs));
                    let pr = profile_for(&g, &classes_r, &xr);
                    let ps = profile_for(&g, &classes_s, &xs);
                    assert!(compatible(&op, pr, ps));
                    assert_eq!(merge_profile(&op, pr, ps), direct);
                } else {
                    lift_cases += 1;
                    let (side, xp, cp, cls) = if xs.is_empty() {
                        (Side::R, &xr, &cr, &classes_r)
                    } else {
                        (Side::S, &xs, &cs, &classes_s)
                    };
                    assert!(is_pbc_for(&g, cls, xp, cp));
                    let pr = profile_for(&g, cls, xp);
                    assert!(liftable(&op, side, pr), "survivor must be liftable");
                    assert_eq!(lift_profile(&op, side, pr), direct);
                }
            });
            // converse of the lift direction: a child pbc that is NOT
            // liftable must not be potentially bad at the parent
            let cr: VertexSet = vts[r].iter().filter(|_| rng.gen_bool(0.7)).collect();
            let members = cr.to_vec();
            let mut current = VertexSet::new();
            let ct_parent = cr.clone();
            enumerate_cliques(&g, &members, 0, &mut current, &mut |x| {
                if !is_pbc_for(&g, &classes_r, x, &cr) {
                    return;
                }
                let pr = profile_for(&g, &classes_r, x);
                let parent_pbc = is_pbc_for(&g, &classes_t, x, &ct_parent);
                assert_eq!(
                    liftable(&op, Side::R, pr),
                    parent_pbc,
                    "lift predicate must match direct recomputation"
                );
            });
        }
        assert!(split_cases > 50, "harness exercised {split_cases} splits");
        assert!(lift_cases > 50, "harness exercised {lift_cases} lifts");
    }

    #[test]
    fn signature_guard_fires() {
        let g = build::cycle(6);
        let bd = linear_bd(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        match solve_cw_capped(&g, &bd, 3, false, 1) {
            Err(Error::CwSignatureGuard { .. }) => {}
            other => panic!("expected signature guard, got {other:?}"),
        }
    }
}
