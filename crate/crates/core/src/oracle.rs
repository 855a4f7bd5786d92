//! Maximal-clique containment oracle.
//!
//! After an O*(2^n) build, the oracle answers in constant time whether a
//! vertex subset contains a clique that is maximal in the ground graph:
//! with g the maximal-clique indicator and c identically 1, h = g (*) c
//! counts the maximal cliques inside each subset, and the answer is
//! h(X) >= 1. Because c is identically 1 the convolution degenerates to a
//! plain zeta transform; the production path exploits that, and the full
//! subset convolution is implemented anyway and cross-checked against it.

use crate::cliques::maximal_cliques;
use crate::error::Error;
use crate::graph::Graph;
use crate::vset::VertexSet;

/// Largest ground-set size accepted by [`subset_convolution`].
pub const CONVOLUTION_CAP: usize = 20;
/// Largest ground-graph size accepted by [`CliqueOracle::build`].
pub const ORACLE_CAP: usize = 26;

/// In-place zeta transform: a[S] becomes sum over T subset of S of a[T].
/// Checked arithmetic; errors on u64 overflow.
pub fn zeta_in_place(a: &mut [u64]) -> Result<(), Error> {
    debug_assert!(a.len().is_power_of_two());
    let mut bit = 1;
    while bit < a.len() {
        for s in 0..a.len() {
            if s & bit != 0 {
                a[s] = a[s]
                    .checked_add(a[s ^ bit])
                    .ok_or(Error::Overflow("zeta transform"))?;
            }
        }
        bit <<= 1;
    }
    Ok(())
}

/// In-place Moebius transform, the inverse of [`zeta_in_place`].
pub fn mobius_in_place(a: &mut [u64]) {
    debug_assert!(a.len().is_power_of_two());
    let mut bit = 1;
    while bit < a.len() {
        for s in 0..a.len() {
            if s & bit != 0 {
                a[s] = a[s].wrapping_sub(a[s ^ bit]);
            }
        }
        bit <<= 1;
    }
}

/// Subset convolution over the ground set {0..m-1}:
/// result(S) = sum over T subset of S of a(T) * b(S \ T),
/// via ranked zeta and Moebius transforms in O(2^m * m^2) ring operations.
pub fn subset_convolution(a: &[u64], b: &[u64]) -> Result<Vec<u64>, Error> {
    if a.len() != b.len() || !a.len().is_power_of_two() || a.is_empty() {
        return Err(Error::InvalidInput(
            "subset_convolution arguments must share a power-of-two length".into(),
        ));
    }
    let m = a.len().trailing_zeros() as usize;
    if m > CONVOLUTION_CAP {
        return Err(Error::SizeGuard {
            what: "subset_convolution",
            limit: CONVOLUTION_CAP,
            actual: m,
        });
    }
    let size = a.len();
    // ranked slices: ra[i][S] = a[S] if |S| = i else 0, then zeta each rank
    let mut ra = vec![vec![0u64; size]; m + 1];
    let mut rb = vec![vec![0u64; size]; m + 1];
    for (s, (&av, &bv)) in a.iter().zip(b).enumerate() {
        let ones = (s as u64).count_ones() as usize;
        ra[ones][s] = av;
        rb[ones][s] = bv;
    }
    for slice in ra.iter_mut().chain(rb.iter_mut()) {
        zeta_in_place(slice)?;
    }
    let mut out = vec![0u64; size];
    let mut acc = vec![0u64; size];
    for k in 0..=m {
        for v in acc.iter_mut() {
            *v = 0;
        }
        for i in 0..=k {
            for s in 0..size {
                let prod = ra[i][s]
                    .checked_mul(rb[k - i][s])
                    .ok_or(Error::Overflow("subset convolution product"))?;
                acc[s] = acc[s]
                    .checked_add(prod)
                    .ok_or(Error::Overflow("subset convolution sum"))?;
            }
        }
        mobius_in_place(&mut acc);
        for s in 0..size {
            if (s as u64).count_ones() as usize == k {
                out[s] = acc[s];
            }
        }
    }
    Ok(out)
}

/// Reference O(3^m) double loop. Test oracle for [`subset_convolution`].
pub fn subset_convolution_naive(a: &[u64], b: &[u64]) -> Vec<u64> {
    let size = a.len();
    let mut out = vec![0u64; size];
    for s in 0..size {
        // iterate submasks of s
        let mut t = s;
        loop {
            out[s] += a[t] * b[s & !t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    out
}

/// "Does S contain a marked subset?" answered in O(1) after a zeta
/// transform of the marked-set indicator. The clique oracle and the
/// treewidth DP's forget oracle are both instances of this.
#[derive(Clone, Debug)]
pub struct SubsetOracle {
    m: usize,
    counts: Vec<u64>,
}

impl SubsetOracle {
    /// `marked[S]` is the (nonnegative) multiplicity of ground subset S.
    pub fn from_counts(m: usize, mut marked: Vec<u64>) -> Result<Self, Error> {
        if marked.len() != 1usize << m {
            return Err(Error::InvalidInput(
                "indicator length must be 2^m".into(),
            ));
        }
        zeta_in_place(&mut marked)?;
        Ok(SubsetOracle { m, counts: marked })
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    /// Number of marked subsets contained in `mask`.
    pub fn count(&self, mask: usize) -> u64 {
        self.counts[mask]
    }

    /// True iff some marked subset is contained in `mask`.
    pub fn contains_marked_subset(&self, mask: usize) -> bool {
        self.counts[mask] >= 1
    }
}

/// Constant-time "does S contain a clique that is maximal in the
/// ground graph" queries after an O*(2^n) build.
#[derive(Clone, Debug)]
pub struct CliqueOracle {
    n: usize,
    inner: SubsetOracle,
}

impl CliqueOracle {
    pub fn build(g: &Graph) -> Result<Self, Error> {
        let n = g.n();
        if n > ORACLE_CAP {
            return Err(Error::SizeGuard {
                what: "CliqueOracle::build",
                limit: ORACLE_CAP,
                actual: n,
            });
        }
        let mut indicator = vec![0u64; 1usize << n];
        for clique in maximal_cliques(g) {
            indicator[set_to_mask(&clique)] = 1;
        }
        Ok(CliqueOracle {
            n,
            inner: SubsetOracle::from_counts(n, indicator)?,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// h(X): how many subsets of X are maximal cliques of the ground graph.
    pub fn count(&self, s: &VertexSet) -> Result<u64, Error> {
        Ok(self.inner.count(self.mask_of(s)?))
    }

    /// f(X) = (h(X) >= 1), in constant time.
    pub fn query(&self, s: &VertexSet) -> Result<bool, Error> {
        Ok(self.inner.contains_marked_subset(self.mask_of(s)?))
    }

    /// Mask-indexed query for hot paths; `mask` must fit the ground set.
    pub fn query_mask(&self, mask: usize) -> bool {
        self.inner.contains_marked_subset(mask)
    }

    fn mask_of(&self, s: &VertexSet) -> Result<usize, Error> {
        match s.iter().last() {
            Some(v) if v >= self.n => Err(Error::InvalidInput(format!(
                "vertex {v} outside oracle ground set of size {}",
                self.n
            ))),
            _ => Ok(set_to_mask(s)),
        }
    }
}

fn set_to_mask(s: &VertexSet) -> usize {
    s.iter().fold(0usize, |m, v| m | 1 << v)
}
