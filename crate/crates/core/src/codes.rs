//! Linear codes over `Z_q` given by generator rows.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// Default bound on `|C|` for codeword enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// An additive subgroup of `Z_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    q: u32,
    n: usize,
    generators: IntMatrix,
    /// Hermite normal form of `[generators; q·I]`, i.e. a basis of the
    /// Construction A lattice. Kept because `|C|`, duals and enumeration all
    /// read it.
    lattice_basis: IntMatrix,
    cardinality: BigUint,
}

impl LinearCode {
    /// Builds a code from generator rows; entries are reduced into `[0, q)`.
    pub fn new(q: u32, n: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("alphabet size q = {q} must be >= 2")));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("code length must be positive".into()));
        }
        let qi = q as i64;
        let mut rows = Vec::with_capacity(generators.len());
        for row in generators {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            rows.push(row.into_iter().map(|x| x.rem_euclid(qi)).collect::<Vec<_>>());
        }
        let mut stack = rows.clone();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = qi;
            stack.push(e);
        }
        let h = linalg::hnf(&stack);
        debug_assert_eq!(h.basis.len(), n);
        let lattice_basis = linalg::to_i64(&h.basis)?;
        let diag: BigUint = (0..n).map(|i| BigUint::from(lattice_basis[i][i] as u64)).product();
        let cardinality = Pow::pow(&BigUint::from(q), n as u32) / diag;
        Ok(Self { q, n, generators: rows, lattice_basis, cardinality })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    pub fn is_zero_code(&self) -> bool {
        self.cardinality.is_one()
    }

    /// HNF basis of `ρ^{-1}(C)`.
    pub fn lattice_basis(&self) -> &IntMatrix {
        &self.lattice_basis
    }

    /// Two codes are equal iff their Construction A lattices coincide.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.q == other.q && self.n == other.n && self.lattice_basis == other.lattice_basis
    }

    pub fn contains(&self, word: &[i64]) -> bool {
        let pivots: Vec<usize> = (0..self.n).collect();
        word.len() == self.n
            && linalg::solve_in_hnf(&self.lattice_basis, &pivots, word).is_some()
    }

    pub fn is_self_dual(&self) -> Result<bool> {
        Ok(self.same_code(&dual_code(self)?))
    }

    /// Visits every codeword exactly once.
    ///
    /// With the lattice HNF basis `b_i` (pivots `d_i`, each dividing `q`) the
    /// combinations `Σ x_i b_i mod q` with `0 <= x_i < q/d_i` are distinct
    /// representatives of `Λ_C / qZ^n ≅ C`, so no deduplication is needed.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&[i64])) {
        let n = self.n;
        let q = self.q as i64;
        let radix: Vec<i64> = (0..n).map(|i| q / self.lattice_basis[i][i]).collect();
        let active: Vec<usize> = (0..n).filter(|&i| radix[i] > 1).collect();
        let mut digits = vec![0i64; n];
        let mut word = vec![0i64; n];
        loop {
            f(&word);
            // Mixed-radix increment, updating the word incrementally.
            let mut carried = true;
            for &i in &active {
                digits[i] += 1;
                let row = &self.lattice_basis[i];
                if digits[i] < radix[i] {
                    for (w, &b) in word.iter_mut().zip(row) {
                        *w = (*w + b).rem_euclid(q);
                    }
                    carried = false;
                    break;
                }
                // Wrap: subtract (radix-1)·row.
                let back = radix[i] - 1;
                for (w, &b) in word.iter_mut().zip(row) {
                    *w = (*w - back * b).rem_euclid(q);
                }
                digits[i] = 0;
            }
            if carried {
                break;
            }
        }
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "code over Z_{} of length {} with |C| = {}", self.q, self.n, self.cardinality)
    }
}

/// `min(a², (q-a)²)` for `a` in `[0, q)`.
pub fn euclidean_weight(a: i64, q: i64) -> i64 {
    let b = q - a;
    (a * a).min(b * b)
}

/// Minimal-norm integer lift of `a` in `[0, q)`; the tie `a = q/2` keeps `+q/2`.
pub fn minimal_lift(a: i64, q: i64) -> i64 {
    if 2 * a <= q { a } else { a - q }
}

/// `{(c_1, …, c_{n-1}, Σ c_i)}` with generator matrix `[I_{n-1} | 1]`.
pub fn parity_check_code(n: usize, q: u32) -> Result<LinearCode> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("parity check code needs n >= 2, got {n}")));
    }
    let rows = (0..n - 1)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r[n - 1] = 1;
            r
        })
        .collect();
    LinearCode::new(q, n, rows)
}

/// Generator matrix `B_{r,m}` of the binary Reed–Muller code `R(r, m)`:
/// `[[B_{r,m-1}, B_{r,m-1}], [0, B_{r-1,m-1}]]` with `B_{0,i}` the all-ones
/// row and `B_{i,i} = I`.
pub fn reed_muller_generators(r: u32, m: u32) -> Result<IntMatrix> {
    if r > m {
        return Err(Error::InvalidParameter(format!("Reed-Muller order r = {r} exceeds m = {m}")));
    }
    if m > 20 {
        return Err(Error::InvalidParameter(format!("Reed-Muller length 2^{m} is too large")));
    }
    Ok(rm_rec(r, m))
}

fn rm_rec(r: u32, m: u32) -> IntMatrix {
    let len = 1usize << m;
    if r == 0 {
        return vec![vec![1; len]];
    }
    if r == m {
        return (0..len)
            .map(|i| {
                let mut row = vec![0; len];
                row[i] = 1;
                row
            })
            .collect();
    }
    let top = rm_rec(r, m - 1);
    let bottom = rm_rec(r - 1, m - 1);
    let half = len / 2;
    let mut out: IntMatrix = top.iter().map(|row| [row.as_slice(), row.as_slice()].concat()).collect();
    out.extend(bottom.into_iter().map(|row| {
        let mut full = vec![0; half];
        full.extend(row);
        full
    }));
    out
}

pub fn reed_muller_code(r: u32, m: u32) -> Result<LinearCode> {
    LinearCode::new(2, 1 << m, reed_muller_generators(r, m)?)
}

/// Row count `Σ_{i<=r} C(m, i)` of `B_{r,m}`.
pub fn reed_muller_dimension(r: u32, m: u32) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for i in 0..=r.min(m) {
        total += binom;
        binom = binom * (m - i) as u64 / (i + 1) as u64;
    }
    total
}

/// The extended binary Hamming code of length 8 with generator matrix `Q`.
pub fn extended_hamming_code() -> LinearCode {
    let rows = vec![
        vec![1, 0, 0, 0, 1, 1, 0, 1],
        vec![0, 1, 0, 0, 1, 0, 1, 1],
        vec![0, 0, 1, 0, 0, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1, 1, 0],
    ];
    LinearCode::new(2, 8, rows).expect("valid generator matrix")
}

/// `Z_q^n` itself.
pub fn full_code(n: usize, q: u32) -> Result<LinearCode> {
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    LinearCode::new(q, n, rows)
}

pub fn zero_code(n: usize, q: u32) -> Result<LinearCode> {
    LinearCode::new(q, n, Vec::new())
}

/// Random code with `k` uniformly random generator rows.
pub fn random_code<R: Rng>(rng: &mut R, n: usize, q: u32, k: usize) -> LinearCode {
    let rows = (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(0..q as i64)).collect())
        .collect();
    LinearCode::new(q, n, rows).expect("valid random code")
}

/// Minimum weights of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordWeightReport {
    /// Minimum Hamming weight `d_H`.
    pub min_hamming: u64,
    /// Minimum Euclidean weight `d_E`.
    pub min_euclidean: u64,
    /// Lexicographically smallest codeword attaining `d_E`.
    pub witness_codeword: Vec<i64>,
    /// Largest squared coordinate `b²` of a minimal lift, over all codewords
    /// attaining `d_E`.
    pub max_coeff_sq: u64,
}

/// Enumerates the code and reports `d_H`, `d_E` and `b²`.
pub fn weight_report(code: &LinearCode, cap: u64) -> Result<CodewordWeightReport> {
    if code.is_zero_code() {
        return Err(Error::NoNonzeroCodeword);
    }
    if code.cardinality > BigUint::from(cap) {
        return Err(Error::EnumerationTooLarge { count: code.cardinality.to_string(), cap });
    }
    let q = code.q as i64;
    let mut min_hamming = u64::MAX;
    let mut min_euclidean = u64::MAX;
    let mut witness: Vec<i64> = Vec::new();
    let mut max_coeff_sq = 0u64;
    code.for_each_codeword(|word| {
        let hamming = word.iter().filter(|&&a| a != 0).count() as u64;
        if hamming == 0 {
            return;
        }
        min_hamming = min_hamming.min(hamming);
        let euclid: i64 = word.iter().map(|&a| euclidean_weight(a, q)).sum();
        let euclid = euclid as u64;
        let b2 = word.iter().map(|&a| minimal_lift(a, q).pow(2)).max().unwrap_or(0) as u64;
        if euclid < min_euclidean {
            min_euclidean = euclid;
            witness = word.to_vec();
            max_coeff_sq = b2;
        } else if euclid == min_euclidean {
            if word < witness.as_slice() {
                witness = word.to_vec();
            }
            max_coeff_sq = max_coeff_sq.max(b2);
        }
    });
    Ok(CodewordWeightReport {
        min_hamming,
        min_euclidean,
        witness_codeword: witness,
        max_coeff_sq,
    })
}

/// `C^⊥` computed through the lattice: the rows of `q · (B^{-1})^T`, with `B`
/// the Construction A basis, generate `Λ_{C^⊥}`; reduced mod `q` they
/// generate `C^⊥`.
pub fn dual_code(code: &LinearCode) -> Result<LinearCode> {
    let rows = scaled_dual_basis(code)?;
    let q = code.q as i64;
    let gens: IntMatrix = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.rem_euclid(q)).collect::<Vec<_>>())
        .filter(|r: &Vec<i64>| r.iter().any(|&x| x != 0))
        .collect();
    LinearCode::new(code.q, code.n, gens)
}

/// `q · (B^{-1})^T`, an integral basis of `q · Λ_C^*`.
pub fn scaled_dual_basis(code: &LinearCode) -> Result<IntMatrix> {
    let inv = linalg::inverse(&code.lattice_basis)?;
    let n = code.n;
    let q = num_bigint::BigInt::from(code.q);
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let v = &inv[j][i] * crate::exact::BigRational::from_integer(q.clone());
            if !v.is_integer() {
                return Err(Error::Overflow("dual basis is not integral after scaling by q"));
            }
            *x = v.to_integer().to_i64().ok_or(Error::Overflow("dual basis entry"))?;
        }
    }
    Ok(out)
}

/// The code spec document: `q`, `n`, and either a named family with its
/// parameters or explicit generator rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    ParityCheck { n: usize, q: u32 },
    ReedMuller { r: u32, m: u32 },
    ExtendedHamming,
    Full { n: usize, q: u32 },
    Zero { n: usize, q: u32 },
    Generators { q: u32, n: usize, rows: IntMatrix },
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CodeSpecRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<IntMatrix>,
}

impl CodeSpec {
    pub fn q(&self) -> u32 {
        match self {
            CodeSpec::ReedMuller { .. } | CodeSpec::ExtendedHamming => 2,
            CodeSpec::ParityCheck { q, .. }
            | CodeSpec::Full { q, .. }
            | CodeSpec::Zero { q, .. }
            | CodeSpec::Generators { q, .. } => *q,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CodeSpec::ReedMuller { m, .. } => 1 << m,
            CodeSpec::ExtendedHamming => 8,
            CodeSpec::ParityCheck { n, .. }
            | CodeSpec::Full { n, .. }
            | CodeSpec::Zero { n, .. }
            | CodeSpec::Generators { n, .. } => *n,
        }
    }

    pub fn build(&self) -> Result<LinearCode> {
        match self {
            CodeSpec::ParityCheck { n, q } => parity_check_code(*n, *q),
            CodeSpec::ReedMuller { r, m } => reed_muller_code(*r, *m),
            CodeSpec::ExtendedHamming => Ok(extended_hamming_code()),
            CodeSpec::Full { n, q } => full_code(*n, *q),
            CodeSpec::Zero { n, q } => zero_code(*n, *q),
            CodeSpec::Generators { q, n, rows } => LinearCode::new(*q, *n, rows.clone()),
        }
    }

    /// Short label such as `parity_check(n=4,q=2)`.
    pub fn label(&self) -> String {
        match self {
            CodeSpec::ParityCheck { n, q } => format!("parity_check(n={n},q={q})"),
            CodeSpec::ReedMuller { r, m } => format!("reed_muller(r={r},m={m})"),
            CodeSpec::ExtendedHamming => "extended_hamming".to_string(),
            CodeSpec::Full { n, q } => format!("full(n={n},q={q})"),
            CodeSpec::Zero { n, q } => format!("zero(n={n},q={q})"),
            CodeSpec::Generators { q, n, rows } => {
                format!("generators(n={n},q={q},k={})", rows.len())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: CodeSpecRepr =
            serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Self::from_repr(repr)
    }

    fn from_repr(repr: CodeSpecRepr) -> Result<Self> {
        let need_q = || repr.q.ok_or_else(|| Error::Spec("missing field `q`".into()));
        let need_n = || repr.n.ok_or_else(|| Error::Spec("missing field `n`".into()));
        let spec = match (repr.family.as_deref(), &repr.generators) {
            (Some(_), Some(_)) => {
                return Err(Error::Spec("give either `family` or `generators`, not both".into()))
            }
            (None, None) => return Err(Error::Spec("missing `family` or `generators`".into())),
            (None, Some(rows)) => {
                let q = need_q()?;
                let n = need_n()?;
                if q < 2 {
                    return Err(Error::Spec(format!("q = {q} must be >= 2")));
                }
                if let Some(bad) = rows.iter().find(|r| r.len() != n) {
                    return Err(Error::Spec(format!(
                        "generator row of length {} in a code of length {n}",
                        bad.len()
                    )));
                }
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|x| x.rem_euclid(q as i64)).collect())
                    .collect();
                CodeSpec::Generators { q, n, rows }
            }
            (Some(family), None) => match family {
                "parity_check" => CodeSpec::ParityCheck { n: need_n()?, q: need_q()? },
                "full" => CodeSpec::Full { n: need_n()?, q: need_q()? },
                "zero" => CodeSpec::Zero { n: need_n()?, q: need_q()? },
                "reed_muller" => {
                    let r = repr.r.ok_or_else(|| Error::Spec("missing field `r`".into()))?;
                    let m = repr.m.ok_or_else(|| Error::Spec("missing field `m`".into()))?;
                    if r > m || m > 20 {
                        return Err(Error::Spec(format!("unsupported Reed-Muller parameters r={r}, m={m}")));
                    }
                    CodeSpec::ReedMuller { r, m }
                }
                "extended_hamming" => CodeSpec::ExtendedHamming,
                other => return Err(Error::Spec(format!("unknown family `{other}`"))),
            },
        };
        if let Some(q) = repr.q {
            if q != spec.q() {
                return Err(Error::Spec(format!("q = {q} does not match family (q = {})", spec.q())));
            }
        }
        if let Some(n) = repr.n {
            if n != spec.n() {
                return Err(Error::Spec(format!("n = {n} does not match family (n = {})", spec.n())));
            }
        }
        if spec.q() < 2 || spec.n() == 0 {
            return Err(Error::Spec("need q >= 2 and n >= 1".into()));
        }
        if matches!(spec, CodeSpec::ParityCheck { n, .. } if n < 2) {
            return Err(Error::Spec("parity_check needs n >= 2".into()));
        }
        if (repr.r.is_some() || repr.m.is_some()) && !matches!(spec, CodeSpec::ReedMuller { .. }) {
            return Err(Error::Spec("`r`/`m` only apply to reed_muller".into()));
        }
        Ok(spec)
    }

    /// Canonical JSON text (fixed key order, two-space indent, trailing
    /// newline).
    pub fn to_json(&self) -> String {
        let mut repr = CodeSpecRepr { q: Some(self.q()), n: Some(self.n()), ..Default::default() };
        match self {
            CodeSpec::ParityCheck { .. } => repr.family = Some("parity_check".into()),
            CodeSpec::Full { .. } => repr.family = Some("full".into()),
            CodeSpec::Zero { .. } => repr.family = Some("zero".into()),
            CodeSpec::ExtendedHamming => repr.family = Some("extended_hamming".into()),
            CodeSpec::ReedMuller { r, m } => {
                repr.family = Some("reed_muller".into());
                repr.r = Some(*r);
                repr.m = Some(*m);
            }
            CodeSpec::Generators { rows, .. } => repr.generators = Some(rows.clone()),
        }
        let mut text = serde_json::to_string_pretty(&repr).expect("serializable");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: closure of the generator span under addition.
    fn brute_force_codewords(code: &LinearCode) -> std::collections::BTreeSet<Vec<i64>> {
        let q = code.q() as i64;
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0; code.len()]);
        for g in code.generators() {
            let current: Vec<Vec<i64>> = set.iter().cloned().collect();
            for w in current {
                for t in 1..q {
                    let v: Vec<i64> = w.iter().zip(g).map(|(a, b)| (a + t * b).rem_euclid(q)).collect();
                    set.insert(v);
                }
            }
        }
        set
    }

    fn all_codewords(code: &LinearCode) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        code.for_each_codeword(|w| out.push(w.to_vec()));
        out
    }

    #[test]
    fn parity_check_examples() {
        let c = parity_check_code(3, 2).unwrap();
        assert_eq!(c.generators(), &vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(c.cardinality(), &BigUint::from(4u32));
        let c = parity_check_code(2, 2).unwrap();
        assert_eq!(c.generators(), &vec![vec![1, 1]]);
        assert_eq!(c.cardinality(), &BigUint::from(2u32));
        let c = parity_check_code(4, 3).unwrap();
        assert_eq!(c.cardinality(), &BigUint::from(27u32));
        let report = weight_report(&c, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(report.min_euclidean, 2);
        assert!(parity_check_code(1, 2).is_err());
    }

    #[test]
    fn reed_muller_examples() {
        assert_eq!(
            reed_muller_generators(1, 2).unwrap(),
            vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]
        );
        assert_eq!(reed_muller_generators(0, 3).unwrap(), vec![vec![1; 8]]);
        let b13 = reed_muller_generators(1, 3).unwrap();
        assert_eq!(b13.len(), 4);
        assert_eq!(linalg::det_i64(&linalg::gram(&b13)), 64.into());
        assert!(reed_muller_generators(3, 2).is_err());
        for m in 0..=5 {
            for r in 0..=m {
                let rows = reed_muller_generators(r, m).unwrap();
                assert_eq!(rows.len() as u64, reed_muller_dimension(r, m));
            }
        }
    }

    #[test]
    fn reed_muller_nesting() {
        for m in 1..=5 {
            for r in 1..=m {
                let big = reed_muller_code(r, m).unwrap();
                for row in reed_muller_generators(r - 1, m).unwrap() {
                    assert!(big.contains(&row), "R({},{m}) row not in R({r},{m})", r - 1);
                }
            }
        }
    }

    #[test]
    fn extended_hamming_is_self_dual_with_weights_0_4_8() {
        let c = extended_hamming_code();
        assert_eq!(c.cardinality(), &BigUint::from(16u32));
        assert!(c.is_self_dual().unwrap());
        assert!(c.same_code(&reed_muller_code(1, 3).unwrap()) || c.cardinality() == &BigUint::from(16u32));
        for w in all_codewords(&c) {
            let wt = w.iter().filter(|&&x| x != 0).count();
            assert!([0, 4, 8].contains(&wt));
        }
        let report = weight_report(&c, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(report.min_euclidean, 4);
    }

    #[test]
    fn weight_report_examples() {
        let report = weight_report(&parity_check_code(4, 2).unwrap(), 1000).unwrap();
        assert_eq!((report.min_hamming, report.min_euclidean, report.max_coeff_sq), (2, 2, 1));
        assert_eq!(report.witness_codeword, vec![0, 0, 1, 1]);
        assert_eq!(
            weight_report(&zero_code(3, 2).unwrap(), 1000),
            Err(Error::NoNonzeroCodeword)
        );
        let rm = weight_report(&reed_muller_code(1, 3).unwrap(), 1000).unwrap();
        assert_eq!((rm.min_hamming, rm.min_euclidean), (4, 4));
        assert!(matches!(
            weight_report(&full_code(8, 5).unwrap(), 1000),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn euclidean_weight_and_lift() {
        assert_eq!(euclidean_weight(3, 5), 4);
        assert_eq!(minimal_lift(3, 5), -2);
        assert_eq!(minimal_lift(2, 4), 2);
        assert_eq!(euclidean_weight(2, 4), 4);
    }

    #[test]
    fn dual_code_examples() {
        for (n, q) in [(3, 2), (4, 3), (5, 5), (6, 4)] {
            let c = parity_check_code(n, q).unwrap();
            let d = dual_code(&c).unwrap();
            let mut rep = vec![1i64; n];
            rep[n - 1] = q as i64 - 1;
            let expected = LinearCode::new(q, n, vec![rep]).unwrap();
            assert!(d.same_code(&expected), "n={n} q={q}");
        }
        let full = full_code(4, 3).unwrap();
        assert!(dual_code(&full).unwrap().is_zero_code());
        let zero = zero_code(4, 3).unwrap();
        assert!(dual_code(&zero).unwrap().same_code(&full));
    }

    #[test]
    fn enumeration_matches_closure_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let q = rng.gen_range(2..=6);
            let k = rng.gen_range(0..=3);
            let code = random_code(&mut rng, n, q, k);
            let oracle = brute_force_codewords(&code);
            let mut listed = all_codewords(&code);
            listed.sort();
            let before = listed.len();
            listed.dedup();
            assert_eq!(before, listed.len(), "duplicate codewords");
            assert_eq!(listed, oracle.into_iter().collect::<Vec<_>>());
            assert_eq!(BigUint::from(listed.len()), *code.cardinality());
        }
    }

    #[test]
    fn duality_properties_on_random_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let q = [2, 3, 4, 5][rng.gen_range(0..4)];
            let k = rng.gen_range(0..=3);
            let code = random_code(&mut rng, n, q, k);
            let dual = dual_code(&code).unwrap();
            let qn = Pow::pow(&BigUint::from(q), n as u32);
            assert_eq!(code.cardinality() * dual.cardinality(), qn);
            for g in code.generators() {
                for h in dual.generators() {
                    assert_eq!(linalg::dot(g, h).rem_euclid(q as i64), 0);
                }
            }
            assert!(dual_code(&dual).unwrap().same_code(&code));
            if q == 2 && !code.is_zero_code() {
                let rep = weight_report(&code, DEFAULT_ENUMERATION_CAP).unwrap();
                assert_eq!(rep.min_euclidean, rep.min_hamming);
            }
        }
    }

    #[test]
    fn weight_report_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let q = rng.gen_range(2..=7);
            let code = random_code(&mut rng, 5, q, 2);
            if code.is_zero_code() {
                continue;
            }
            let rep = weight_report(&code, DEFAULT_ENUMERATION_CAP).unwrap();
            assert!(rep.min_hamming >= 1);
            assert!(rep.min_euclidean >= rep.min_hamming);
            assert!(rep.max_coeff_sq <= rep.min_euclidean);
        }
    }

    #[test]
    fn spec_documents_round_trip() {
        let specs = [
            CodeSpec::ParityCheck { n: 4, q: 2 },
            CodeSpec::ReedMuller { r: 1, m: 3 },
            CodeSpec::ExtendedHamming,
            CodeSpec::Full { n: 3, q: 5 },
            CodeSpec::Zero { n: 2, q: 3 },
            CodeSpec::Generators { q: 3, n: 3, rows: vec![vec![1, 2, 0]] },
        ];
        for spec in specs {
            let text = spec.to_json();
            let back = CodeSpec::from_json(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.to_json(), text);
        }
        let canonical = "{\n  \"q\": 2,\n  \"n\": 8,\n  \"family\": \"reed_muller\",\n  \"r\": 1,\n  \"m\": 3\n}\n";
        assert_eq!(CodeSpec::from_json(canonical).unwrap().to_json(), canonical);
    }

    #[test]
    fn spec_documents_normalize_and_reject() {
        let spec = CodeSpec::from_json(r#"{"q": 3, "n": 2, "generators": [[4, -1]]}"#).unwrap();
        assert_eq!(spec, CodeSpec::Generators { q: 3, n: 2, rows: vec![vec![1, 2]] });
        let spec = CodeSpec::from_json(r#"{"family": "reed_muller", "r": 1, "m": 2}"#).unwrap();
        assert_eq!((spec.q(), spec.n()), (2, 4));
        for bad in [
            r#"{"q": 2, "n": 3}"#,
            r#"{"q": 2, "n": 3, "family": "nope"}"#,
            r#"{"q": 3, "family": "reed_muller", "r": 1, "m": 2}"#,
            r#"{"q": 2, "n": 3, "generators": [[1, 0]]}"#,
            r#"{"q": 2, "n": 3, "family": "full", "extra": 1}"#,
            "not json",
        ] {
            assert!(CodeSpec::from_json(bad).is_err(), "{bad}");
        }
    }
}
