//! Certified minimal determinants `d_l(Λ)` of rank-`l` sublattices, `l <= 4`.
//!
//! Every rank-`l` sublattice with `l <= 4` has a Minkowski-reduced basis
//! `b_1..b_l` whose norms are its successive minima, so by Minkowski's second
//! theorem `Π ‖b_i‖² <= γ_l^l · det`. `H_l = (4/3)^{l(l-1)/2}` dominates
//! `γ_l^l` (`4/3`, `2`, `4` for `l = 2, 3, 4`), and each `‖b_i‖² >= λ₁²`, so
//! every vector of an optimal reduced basis has norm at most
//! `H_l · d_l / λ₁^{2(l-1)}`. Enumerating all vectors up to that radius and
//! searching index-increasing tuples, pruned by the same product bound, is
//! therefore exhaustive. The search is rerun with twice the radius as an
//! independent check.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{self, LinearCode};
use crate::enumeration::{lattice_minimum, short_vectors, ShortVector};
use crate::error::{Error, Result};
use crate::lattices::{sublattice_from_rows, IntegralLattice, Sublattice};
use crate::linalg::{self, IntMatrix};

/// Largest supported sublattice rank.
pub const MAX_RANK: usize = 4;

/// Default cap on the candidate list.
pub const DEFAULT_MAX_CANDIDATES: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// A known upper bound on `d_l`, e.g. `q^{2l}` for code lattices.
    pub upper_hint: Option<u64>,
    pub max_candidates: usize,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { upper_hint: None, max_candidates: DEFAULT_MAX_CANDIDATES, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub l: usize,
    pub value: u64,
    pub witness: Sublattice,
    /// Enumeration radius of the primary search.
    pub per_vector_bound: u64,
    /// Length of the candidate list of the primary search.
    pub candidates_examined: u64,
    /// The rerun with doubled radius returned the same value.
    pub confirmed_by_escalation: bool,
}

/// `H_l = 4^e / 3^e` with `e = l(l-1)/2`, as `(4^e, 3^e)`.
pub fn reduction_bound(l: usize) -> (u128, u128) {
    let e = (l * l.saturating_sub(1) / 2) as u32;
    (4u128.pow(e), 3u128.pow(e))
}

/// `floor(H_l · upper / min_norm^{l-1})`.
pub fn per_vector_bound(l: usize, upper: u64, min_norm: u64) -> Result<u64> {
    let (hn, hd) = reduction_bound(l);
    let num = hn
        .checked_mul(upper as u128)
        .ok_or(Error::Overflow("per-vector bound"))?;
    let den = hd
        .checked_mul((min_norm as u128).pow(l as u32 - 1))
        .ok_or(Error::Overflow("per-vector bound"))?;
    (num / den).to_u64().ok_or(Error::Overflow("per-vector bound"))
}

/// Exact `d_l(Λ)` with a witness.
pub fn d_l_search(
    lattice: &IntegralLattice,
    l: usize,
    opts: &SearchOptions,
) -> Result<SearchCertificate> {
    let n = lattice.dimension();
    if l == 0 || l > MAX_RANK.min(n) {
        return Err(Error::UnsupportedRank { l, max: MAX_RANK.min(n) });
    }
    let min_norm = lattice_minimum(lattice)?.norm;
    let greedy = greedy_upper_bound(lattice, l, min_norm, opts.max_candidates)?;
    let mut threshold = opts.upper_hint.map_or(greedy, |h| h.min(greedy));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;

    let (bound, candidates, found) = loop {
        let bound = per_vector_bound(l, threshold, min_norm)?;
        let candidates = short_vectors(lattice, bound, opts.max_candidates)?.vectors;
        match pool.install(|| search(&candidates, l, threshold)) {
            Some(found) => break (bound, candidates.len(), found),
            // Only reachable when the hint undercuts d_l.
            None if threshold < greedy => threshold = greedy,
            None => unreachable!("the greedy sublattice is among the candidates"),
        }
    };

    let escalated_bound = bound
        .checked_mul(2)
        .ok_or(Error::Overflow("escalated bound"))?;
    let escalated = short_vectors(lattice, escalated_bound, opts.max_candidates)?.vectors;
    let rerun = pool
        .install(|| search(&escalated, l, found.0))
        .expect("the primary witness is among the escalated candidates");
    let confirmed = rerun.0 == found.0;
    let (value, rows) = if rerun.0 < found.0 { rerun } else { found };

    let witness = sublattice_from_rows(lattice, &rows)?;
    debug_assert_eq!(witness.det, BigUint::from(value));
    Ok(SearchCertificate {
        l,
        value,
        witness,
        per_vector_bound: bound,
        candidates_examined: candidates as u64,
        confirmed_by_escalation: confirmed,
    })
}

/// Determinant of a sublattice built greedily from short vectors: start with
/// a minimal vector and repeatedly add the vector that keeps the partial
/// determinant smallest.
fn greedy_upper_bound(lattice: &IntegralLattice, l: usize, min_norm: u64, cap: usize) -> Result<u64> {
    let (reduced, _) = linalg::lll_gram(lattice.gram())?;
    let max_diag = reduced.iter().enumerate().map(|(i, r)| r[i] as u64).max().unwrap_or(1);
    let mut bound = min_norm;
    let pool = loop {
        let list = short_vectors(lattice, bound, cap)?.vectors;
        let coords: IntMatrix = list.iter().map(|v| v.coords.clone()).collect();
        if linalg::rank(&coords) >= l || bound >= max_diag {
            break list;
        }
        bound = (bound * 2).min(max_diag);
    };
    let mut chosen: Vec<&ShortVector> = vec![&pool[0]];
    let mut det = pool[0].norm as i128;
    while chosen.len() < l {
        let mut best: Option<(i128, &ShortVector)> = None;
        for v in &pool {
            let mut rows: Vec<&[i64]> = chosen.iter().map(|c| c.coords.as_slice()).collect();
            rows.push(&v.coords);
            let d = gram_det(&rows);
            if d > 0 && best.is_none_or(|(b, _)| d < b) {
                best = Some((d, v));
            }
        }
        let (d, v) = best.expect("pool has rank >= l");
        chosen.push(v);
        det = d;
    }
    det.to_u64().ok_or(Error::Overflow("greedy determinant"))
}

fn gram_det(rows: &[&[i64]]) -> i128 {
    let mut g = [[0i128; 4]; 4];
    for i in 0..rows.len() {
        for j in 0..=i {
            let d = linalg::dot(rows[i], rows[j]) as i128;
            g[i][j] = d;
            g[j][i] = d;
        }
    }
    linalg::det_i128(&g, rows.len())
}

/// Best `(det, rows)` among index-increasing `l`-tuples of `candidates`
/// (sorted by norm) with determinant at most `threshold`.
///
/// The returned witness is the lexicographically smallest sorted row list
/// among tuples attaining the minimum whose norm product is within
/// `H_l · det`; that set does not depend on how the shared bound evolved, so
/// the result is the same for any thread count.
fn search(candidates: &[ShortVector], l: usize, threshold: u64) -> Option<(u64, IntMatrix)> {
    let shared = AtomicU64::new(threshold);
    let (hn, hd) = reduction_bound(l);
    let results: Vec<Local> = (0..candidates.len())
        .into_par_iter()
        .map(|first| {
            let mut local = Local { best: threshold, witness: None };
            let mut worker = Worker {
                candidates,
                l,
                hn,
                hd,
                shared: &shared,
                local: &mut local,
                chosen: Vec::with_capacity(l),
                gram: [[0; 4]; 4],
            };
            worker.start(first);
            local
        })
        .collect();
    let value = results.iter().filter(|r| r.witness.is_some()).map(|r| r.best).min()?;
    results
        .into_iter()
        .filter(|r| r.best == value)
        .filter_map(|r| r.witness)
        .min()
        .map(|w| (value, w))
}

struct Local {
    best: u64,
    witness: Option<IntMatrix>,
}

struct Worker<'a> {
    candidates: &'a [ShortVector],
    l: usize,
    hn: u128,
    hd: u128,
    shared: &'a AtomicU64,
    local: &'a mut Local,
    chosen: Vec<usize>,
    gram: [[i128; 4]; 4],
}

impl Worker<'_> {
    fn limit(&self) -> u64 {
        self.shared.load(Ordering::Relaxed).min(self.local.best)
    }

    /// `product · next^{remaining} <= H_l · limit`, exactly.
    fn within(&self, product: u128, next: u64, remaining: usize, limit: u64) -> bool {
        let lhs = (next as u128)
            .checked_pow(remaining as u32)
            .and_then(|p| p.checked_mul(product))
            .and_then(|p| p.checked_mul(self.hd));
        match lhs {
            Some(lhs) => lhs <= self.hn * limit as u128,
            None => false,
        }
    }

    fn start(&mut self, first: usize) {
        let norm = self.candidates[first].norm;
        if !self.within(1, norm, self.l, self.limit()) {
            return;
        }
        self.push(first);
        self.extend(first + 1, norm as u128);
        self.chosen.pop();
    }

    fn push(&mut self, idx: usize) {
        let j = self.chosen.len();
        let v = &self.candidates[idx].coords;
        for (i, &c) in self.chosen.iter().enumerate() {
            let d = linalg::dot(&self.candidates[c].coords, v) as i128;
            self.gram[i][j] = d;
            self.gram[j][i] = d;
        }
        self.gram[j][j] = self.candidates[idx].norm as i128;
        self.chosen.push(idx);
    }

    fn extend(&mut self, from: usize, product: u128) {
        let depth = self.chosen.len();
        if depth == self.l {
            self.leaf(product);
            return;
        }
        for idx in from..self.candidates.len() {
            let norm = self.candidates[idx].norm;
            if !self.within(product, norm, self.l - depth, self.limit()) {
                break;
            }
            self.push(idx);
            if linalg::det_i128(&self.gram, depth + 1) > 0 {
                self.extend(idx + 1, product * norm as u128);
            }
            self.chosen.pop();
        }
    }

    fn leaf(&mut self, product: u128) {
        let det = linalg::det_i128(&self.gram, self.l);
        let Ok(det) = u64::try_from(det) else { return };
        if det == 0 || det > self.limit() {
            return;
        }
        let reduced = (product * self.hd) <= self.hn * det as u128;
        if det < self.local.best {
            self.local.best = det;
            self.local.witness = None;
            self.shared.fetch_min(det, Ordering::Relaxed);
        }
        if det == self.local.best && reduced {
            let mut rows: IntMatrix =
                self.chosen.iter().map(|&i| self.candidates[i].coords.clone()).collect();
            rows.sort();
            if self.local.witness.as_ref().is_none_or(|w| rows < *w) {
                self.local.witness = Some(rows);
            }
        }
    }
}

/// Checks a certificate against a lattice: witness membership, rank, Gram,
/// determinant, and that the enumeration radius covered `H_l · value`.
pub fn verify_certificate(lattice: &IntegralLattice, cert: &SearchCertificate) -> Result<()> {
    let fail = |m: &str| Err(Error::MismatchedCertificate(m.to_string()));
    if cert.l == 0 || cert.l > MAX_RANK.min(lattice.dimension()) {
        return fail("rank out of range");
    }
    if cert.witness.rows.len() != cert.l {
        return fail("witness has the wrong number of rows");
    }
    let witness = sublattice_from_rows(lattice, &cert.witness.rows)
        .map_err(|e| Error::MismatchedCertificate(e.to_string()))?;
    if witness != cert.witness {
        return fail("witness Gram matrix or determinant is inconsistent");
    }
    if witness.det != BigUint::from(cert.value) {
        return fail("witness determinant differs from the value");
    }
    let min_norm = lattice_minimum(lattice)?.norm;
    if cert.per_vector_bound < per_vector_bound(cert.l, cert.value, min_norm)? {
        return fail("enumeration radius too small for the claimed value");
    }
    Ok(())
}

/// `q^{2l}`: `qZ^n` contains rank-`l` sublattices of that determinant.
pub fn code_upper_hint(code: &LinearCode, l: usize) -> Option<u64> {
    (code.q() as u64).checked_pow(2 * l as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2Bound {
    pub value: u64,
    /// `d_E = b²`, so the second term was clamped to `q²`.
    pub clamped: bool,
}

/// `min(q⁴, q² · max(d_E − b², 1))`.
pub fn d2_upper_bound_code(code: &LinearCode) -> Result<D2Bound> {
    let report = codes::weight_report(code, codes::DEFAULT_ENUMERATION_CAP)?;
    let q2 = (code.q() as u64).pow(2);
    let diff = report.min_euclidean - report.max_coeff_sq;
    Ok(D2Bound { value: (q2 * q2).min(q2 * diff.max(1)), clamped: diff == 0 })
}
