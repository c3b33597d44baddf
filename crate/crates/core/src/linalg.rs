//! Small exact integer linear algebra: Hermite normal form, fraction-free
//! determinants, membership solves and rational inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::BigRational;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gram(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|a| rows.iter().map(|b| dot(a, b)).collect())
        .collect()
}

pub fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_i64(m: &[Vec<BigInt>]) -> Result<IntMatrix> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("matrix entry exceeds i64")))
                .collect()
        })
        .collect()
}

/// Bareiss fraction-free determinant.
pub fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    det_big(&to_big(m))
}

/// Bareiss determinant in `i128`, used in the hot loop of the sublattice
/// search where Gram entries are small.
pub fn det_i128(m: &[[i128; 4]], n: usize) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut a = [[0i128; 4]; 4];
    for i in 0..n {
        a[i][..n].copy_from_slice(&m[i][..n]);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    hnf(rows).basis.len()
}

/// Row-style Hermite normal form of the row span.
#[derive(Debug, Clone)]
pub struct Hnf {
    /// Nonzero rows, upper echelon, positive pivots, entries above each pivot
    /// reduced into `[0, pivot)`.
    pub basis: Vec<Vec<BigInt>>,
    /// Column of the pivot of each basis row.
    pub pivots: Vec<usize>,
}

/// Hermite normal form by integer row operations (Euclidean elimination on
/// each column, smallest remainder first).
pub fn hnf(rows: &[Vec<i64>]) -> Hnf {
    hnf_big(to_big(rows))
}

pub fn hnf_big(mut a: Vec<Vec<BigInt>>) -> Hnf {
    let m = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        loop {
            // Smallest nonzero magnitude at or below row r becomes the pivot.
            let best = (r..m)
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let (head, tail) = a.split_at_mut(i);
                sub_mul(&mut tail[0], &head[r], &q);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !a[r][col].is_zero() {
            if a[r][col].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][col].div_floor(&a[r][col]);
                if !q.is_zero() {
                    let (head, tail) = a.split_at_mut(r);
                    sub_mul(&mut head[i], &tail[0], &q);
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    a.truncate(r);
    Hnf { basis: a, pivots }
}

fn sub_mul(target: &mut [BigInt], row: &[BigInt], q: &BigInt) {
    for (t, x) in target.iter_mut().zip(row) {
        *t -= q * x;
    }
}

/// Integer coefficients `x` with `x · basis = v`, if any. `basis` must be in
/// Hermite normal form with the given pivots.
pub fn solve_in_hnf(basis: &[Vec<i64>], pivots: &[usize], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    let mut coeffs = Vec::with_capacity(basis.len());
    for (row, &p) in basis.iter().zip(pivots) {
        let pivot = row[p] as i128;
        if rest[p] % pivot != 0 {
            return None;
        }
        let c = rest[p] / pivot;
        for (r, &b) in rest.iter_mut().zip(row) {
            *r -= c * b as i128;
        }
        coeffs.push(c as i64);
    }
    rest.iter().all(|&r| r == 0).then_some(coeffs)
}

/// Exact inverse of a square integer matrix over the rationals.
pub fn inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> =
                row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| {
                if i == j { BigRational::one() } else { BigRational::zero() }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or(Error::RankDeficient { rank: col, expected: n })?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exact LLL reduction (δ = 3/4) of a positive definite Gram matrix.
/// Returns `(G', U)` with `G' = U G U^T` and `U` unimodular; the rows of
/// `U` express the reduced basis in the original one.
pub fn lll_gram(gram: &[Vec<i64>]) -> Result<(IntMatrix, IntMatrix)> {
    let n = gram.len();
    let mut g: Vec<Vec<i128>> = gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    let overflow = || Error::Overflow("LLL reduction");

    // Gram–Schmidt data of row i from rows below it.
    let gs_row = |g: &[Vec<i128>], mu: &mut [Vec<BigRational>], b: &mut [BigRational], i: usize| -> Result<()> {
        for j in 0..i {
            let mut v = BigRational::from_integer(BigInt::from(g[i][j]));
            for s in 0..j {
                v -= &mu[j][s] * &mu[i][s] * &b[s];
            }
            mu[i][j] = v / &b[j];
        }
        let mut bi = BigRational::from_integer(BigInt::from(g[i][i]));
        for s in 0..i {
            bi -= &mu[i][s] * &mu[i][s] * &b[s];
        }
        if !bi.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        b[i] = bi;
        Ok(())
    };

    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    gs_row(&g, &mut mu, &mut b, 0)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < n {
        gs_row(&g, &mut mu, &mut b, k)?;
        for j in (0..k).rev() {
            if mu[k][j].abs() <= half {
                continue;
            }
            let r = mu[k][j].round().to_integer();
            let r128 = r.to_i128().ok_or_else(overflow)?;
            // b_k -= r b_j on rows and columns of G, and on U.
            for c in 0..n {
                g[k][c] = g[k][c].checked_sub(r128.checked_mul(g[j][c]).ok_or_else(overflow)?).ok_or_else(overflow)?;
                u[k][c] = u[k][c].checked_sub(r128.checked_mul(u[j][c]).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
            for row in g.iter_mut() {
                row[k] = row[k].checked_sub(r128.checked_mul(row[j]).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
            let r = BigRational::from_integer(r);
            let (head, tail) = mu.split_at_mut(k);
            for (m, t) in tail[0][..j].iter_mut().zip(&head[j][..j]) {
                *m -= &r * t;
            }
            mu[k][j] -= &r;
        }
        let lovasz = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if b[k] >= lovasz {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            gs_row(&g, &mut mu, &mut b, k - 1)?;
            k = (k - 1).max(1);
        }
    }
    let narrow = |m: Vec<Vec<i128>>| -> Result<IntMatrix> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| overflow())).collect())
            .collect()
    };
    Ok((narrow(g)?, narrow(u)?))
}
