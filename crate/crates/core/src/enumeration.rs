//! Complete short-vector enumeration with exact rational bounds.
//!
//! The Gram matrix is factored as `G = L D L^T` over the rationals, so the
//! norm of `x · B` is `Σ_k d_k (x_k + Σ_{a>k} L[a][k] x_a)²`. Coordinates are
//! fixed from the last one down; at each level the admissible integers form
//! a contiguous run around the rounded centre, found by stepping outwards, so
//! no square roots (and no floating point) are involved. The walk runs on
//! an LLL-reduced Gram matrix; results are mapped back to the input basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::BigRational;
use crate::lattices::IntegralLattice;
use crate::linalg::{self, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub norm: u64,
}

/// All nonzero lattice vectors of norm at most `bound`, one per sign pair
/// (first nonzero coordinate positive), sorted by norm then coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortVectorList {
    pub bound: u64,
    pub vectors: Vec<ShortVector>,
}

impl ShortVectorList {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Exact `L D L^T` factorization; fails unless `G` is positive definite.
pub fn ldl(gram: &[Vec<i64>]) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = gram.len();
    let g = |a: usize, b: usize| BigRational::from_integer(BigInt::from(gram[a][b]));
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    for k in 0..n {
        let mut dk = g(k, k);
        for s in 0..k {
            dk -= &l[k][s] * &l[k][s] * &d[s];
        }
        if !dk.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for a in k + 1..n {
            let mut v = g(a, k);
            for s in 0..k {
                v -= &l[a][s] * &l[k][s] * &d[s];
            }
            l[a][k] = v / &dk;
        }
        d[k] = dk;
    }
    Ok((l, d))
}

/// Coefficient vectors `x` with `x G x^T <= bound`, one per sign pair (first
/// nonzero coefficient positive), in no particular order.
pub fn short_coefficients(gram: &[Vec<i64>], bound: u64, cap: usize) -> Result<Vec<Vec<i64>>> {
    let n = gram.len();
    if let Some(bad) = gram.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    let (reduced, u) = linalg::lll_gram(gram)?;
    let ys = walk(&reduced, bound, cap)?;
    ys.into_iter()
        .map(|y| {
            let mut x = vec![0i64; n];
            for (r, &yr) in y.iter().enumerate() {
                if yr == 0 {
                    continue;
                }
                for (xi, &uri) in x.iter_mut().zip(&u[r]) {
                    *xi = uri
                        .checked_mul(yr)
                        .and_then(|t| xi.checked_add(t))
                        .ok_or(Error::Overflow("coefficient change of basis"))?;
                }
            }
            sign_canonical(&mut x);
            Ok(x)
        })
        .collect()
}

fn walk(gram: &[Vec<i64>], bound: u64, cap: usize) -> Result<Vec<Vec<i64>>> {
    let n = gram.len();
    let (l, d) = ldl(gram)?;
    let mut state = Walk {
        l,
        d,
        x: vec![0; n],
        out: Vec::new(),
        cap,
    };
    let budget = BigRational::from_integer(BigInt::from(bound));
    if n > 0 {
        state.descend(n - 1, budget, true)?;
    }
    Ok(state.out)
}

struct Walk {
    l: Vec<Vec<BigRational>>,
    d: Vec<BigRational>,
    x: Vec<i64>,
    out: Vec<Vec<i64>>,
    cap: usize,
}

impl Walk {
    /// `upper_zero`: every coordinate above `k` is zero, so only `x_k >= 0`
    /// is visited (sign canonical in coefficient space).
    fn descend(&mut self, k: usize, budget: BigRational, upper_zero: bool) -> Result<()> {
        let n = self.x.len();
        let mut centre = BigRational::zero();
        for a in k + 1..n {
            if self.x[a] != 0 {
                centre -= &self.l[a][k] * BigRational::from_integer(BigInt::from(self.x[a]));
            }
        }
        // The quadratic is convex in x, so admissible values form a run
        // around the rounded centre.
        let rounded = round_rational(&centre);
        let first = if upper_zero { rounded.max(0) } else { rounded };
        let mut x = first;
        while self.visit(k, x, &centre, &budget, upper_zero)? {
            x += 1;
        }
        let mut x = first - 1;
        while !(upper_zero && x < 0) && self.visit(k, x, &centre, &budget, upper_zero)? {
            x -= 1;
        }
        Ok(())
    }

    /// Tries `x_k = x`; returns whether it was within budget.
    fn visit(
        &mut self,
        k: usize,
        x: i64,
        centre: &BigRational,
        budget: &BigRational,
        upper_zero: bool,
    ) -> Result<bool> {
        let t = BigRational::from_integer(BigInt::from(x)) - centre;
        let cost = &t * &t * &self.d[k];
        if &cost > budget {
            return Ok(false);
        }
        self.x[k] = x;
        if k == 0 {
            if !(upper_zero && x == 0) {
                if self.out.len() >= self.cap {
                    return Err(Error::CapExceeded { count: self.out.len() + 1, cap: self.cap });
                }
                self.out.push(self.x.clone());
            }
        } else {
            self.descend(k - 1, budget - &cost, upper_zero && x == 0)?;
        }
        self.x[k] = 0;
        Ok(true)
    }
}

fn round_rational(r: &BigRational) -> i64 {
    let two = BigInt::from(2);
    let (q, _) = (r.numer() * &two + r.denom()).div_mod_floor(&(r.denom() * &two));
    q.to_i64().expect("centre fits in i64")
}

/// Sign-canonical ambient vector: first nonzero coordinate positive.
pub fn sign_canonical(v: &mut [i64]) {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Complete list of lattice vectors with `0 < ‖v‖² <= bound`, up to sign.
pub fn short_vectors(lattice: &IntegralLattice, bound: u64, cap: usize) -> Result<ShortVectorList> {
    let coeffs = short_coefficients(lattice.gram(), bound, cap)?;
    let mut vectors: Vec<ShortVector> = coeffs
        .iter()
        .map(|x| {
            let mut v = lattice.to_ambient(x);
            sign_canonical(&mut v);
            let norm = linalg::dot(&v, &v);
            ShortVector { coords: v, norm: norm as u64 }
        })
        .collect();
    for v in &vectors {
        // Independent re-check of the exact bound.
        debug_assert!(v.norm > 0 && v.norm <= bound);
        if v.norm == 0 || v.norm > bound {
            return Err(Error::Overflow("enumerated vector violates the bound"));
        }
    }
    vectors.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
    Ok(ShortVectorList { bound, vectors })
}

/// `N(Λ)` and the lexicographically first minimal vector.
pub fn lattice_minimum(lattice: &IntegralLattice) -> Result<ShortVector> {
    let (reduced, _) = linalg::lll_gram(lattice.gram())?;
    let bound = reduced
        .iter()
        .enumerate()
        .map(|(i, r)| r[i])
        .min()
        .ok_or(Error::InvalidParameter("empty lattice".into()))?;
    let list = short_vectors(lattice, bound as u64, usize::MAX)?;
    Ok(list.vectors.into_iter().next().expect("basis vector lies within the bound"))
}

/// Short vectors of a bare Gram matrix, in coefficient space; used for
/// lattices known only through their Gram matrix.
pub fn short_vectors_of_gram(gram: &IntMatrix, bound: u64, cap: usize) -> Result<Vec<(Vec<i64>, u64)>> {
    let mut out: Vec<(Vec<i64>, u64)> = short_coefficients(gram, bound, cap)?
        .into_iter()
        .map(|x| {
            let norm: i64 = (0..x.len())
                .map(|i| x[i] * linalg::dot(&gram[i], &x))
                .sum();
            (x, norm as u64)
        })
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}
