//! Full-rank integral lattices in `Z^n` kept in Hermite normal form.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::{self, LinearCode};
use crate::error::{Error, Result};
use crate::exact::{BigRational, ExactRadical};
use crate::linalg::{self, IntMatrix};

/// Serializes a `BigUint` as a decimal string; JSON numbers lose precision
/// past 2^53 in many readers.
pub mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralLattice {
    basis: IntMatrix,
    gram: IntMatrix,
    det_gram: BigUint,
}

impl IntegralLattice {
    /// The lattice spanned by `rows`, which must have full rank `n`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidParameter("lattice needs at least one coordinate".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        let h = linalg::hnf(rows);
        if h.basis.len() < n {
            return Err(Error::RankDeficient { rank: h.basis.len(), expected: n });
        }
        Self::from_hnf(linalg::to_i64(&h.basis)?)
    }

    fn from_hnf(basis: IntMatrix) -> Result<Self> {
        let gram = checked_gram(&basis)?;
        let diag: BigUint = basis
            .iter()
            .enumerate()
            .map(|(i, r)| BigUint::from(r[i] as u64))
            .product();
        Ok(Self { basis, gram, det_gram: &diag * &diag })
    }

    pub fn integer_lattice(n: usize) -> Self {
        let rows: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_rows(&rows).expect("identity has full rank")
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// HNF basis rows.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// `det(B B^T) = det(Λ)`.
    pub fn det_gram(&self) -> &BigUint {
        &self.det_gram
    }

    /// Integer coordinates of `v` in the basis, if `v ∈ Λ`.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        if v.len() != self.dimension() {
            return None;
        }
        let pivots: Vec<usize> = (0..self.dimension()).collect();
        linalg::solve_in_hnf(&self.basis, &pivots, v)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Maps basis coordinates to the ambient vector `x · B`.
    pub fn to_ambient(&self, coeffs: &[i64]) -> Vec<i64> {
        let n = self.dimension();
        let mut v = vec![0i64; n];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                for (x, b) in v.iter_mut().zip(row) {
                    *x += c * b;
                }
            }
        }
        v
    }

    /// Every vector has even norm iff every Gram diagonal entry is even, since
    /// `x G x^T ≡ Σ x_i² G_ii (mod 2)` for integral symmetric `G`.
    pub fn is_even(&self) -> bool {
        is_even_gram(&self.gram)
    }

    /// `s · Λ`. The scaled HNF is still in HNF.
    pub fn scale(&self, s: i64) -> Result<Self> {
        if s <= 0 {
            return Err(Error::InvalidParameter(format!("scale factor {s} must be positive")));
        }
        let basis = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.checked_mul(s).ok_or(Error::Overflow("lattice scaling")))
                    .collect()
            })
            .collect::<Result<IntMatrix>>()?;
        Self::from_hnf(basis)
    }

    pub fn to_document(&self) -> LatticeDocument {
        LatticeDocument {
            n: self.dimension(),
            basis: Some(self.basis.clone()),
            rows: None,
            gram: Some(self.gram.clone()),
            det_gram: Some(self.det_gram.to_string()),
        }
    }

    /// Canonical JSON text of the export format.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_document()).expect("serializable");
        text.push('\n');
        text
    }

    pub fn from_document(doc: &LatticeDocument) -> Result<Self> {
        let rows = match (&doc.basis, &doc.rows) {
            (Some(_), Some(_)) => {
                return Err(Error::Spec("give either `basis` or `rows`, not both".into()))
            }
            (Some(r), None) | (None, Some(r)) => r,
            (None, None) => return Err(Error::Spec("missing `basis` or `rows`".into())),
        };
        if let Some(bad) = rows.iter().find(|r| r.len() != doc.n) {
            return Err(Error::Spec(format!("row of length {} in dimension {}", bad.len(), doc.n)));
        }
        if rows.is_empty() {
            return Err(Error::RankDeficient { rank: 0, expected: doc.n });
        }
        let lattice = Self::from_rows(rows)?;
        if let Some(g) = &doc.gram {
            if doc.basis.is_some() && g != &lattice.gram {
                return Err(Error::Spec("`gram` does not match the basis".into()));
            }
        }
        if let Some(d) = &doc.det_gram {
            if d != &lattice.det_gram.to_string() {
                return Err(Error::Spec(format!(
                    "`det_gram` {d} does not match computed {}",
                    lattice.det_gram
                )));
            }
        }
        Ok(lattice)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LatticeDocument =
            serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Self::from_document(&doc)
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice of rank {} with det {}", self.dimension(), self.det_gram)
    }
}

/// Lattice export format. `rows` is accepted on input as an arbitrary
/// generating set; output always carries the HNF `basis`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_gram: Option<String>,
}

pub fn is_even_gram(gram: &[Vec<i64>]) -> bool {
    gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
}

fn checked_gram(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    rows.iter()
        .map(|a| {
            rows.iter()
                .map(|b| {
                    a.iter().zip(b).try_fold(0i64, |acc, (x, y)| {
                        x.checked_mul(*y)
                            .and_then(|p| acc.checked_add(p))
                            .ok_or(Error::Overflow("Gram matrix entry"))
                    })
                })
                .collect()
        })
        .collect()
}

/// `Λ_C = ρ^{-1}(C)`.
pub fn construction_a(code: &LinearCode) -> IntegralLattice {
    IntegralLattice::from_hnf(code.lattice_basis().clone()).expect("code lattice fits in i64")
}

/// `Λ_{C^⊥} = q · Λ_C^*`.
pub fn dual_as_code_lattice(code: &LinearCode) -> Result<IntegralLattice> {
    Ok(construction_a(&codes::dual_code(code)?))
}

/// A rank-`l` sublattice given by actual lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    pub rows: IntMatrix,
    pub gram: IntMatrix,
    #[serde(with = "big_string")]
    pub det: BigUint,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn sublattice_from_rows(lattice: &IntegralLattice, rows: &[Vec<i64>]) -> Result<Sublattice> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != lattice.dimension() {
            return Err(Error::DimensionMismatch { expected: lattice.dimension(), got: r.len() });
        }
        if !lattice.contains(r) {
            return Err(Error::NotAMember { row: i });
        }
    }
    let gram = checked_gram(rows)?;
    let det = linalg::det_i64(&gram);
    if !det.is_positive() {
        return Err(Error::RankDeficient { rank: linalg::rank(rows), expected: rows.len() });
    }
    Ok(Sublattice { rows: rows.to_vec(), gram, det: det.magnitude().clone() })
}

/// `det(Λ_l) / det(Λ)^{l/n}`, i.e. `(det_l^n / det^l)^{1/n}`.
pub fn gamma_ratio(lattice: &IntegralLattice, sub: &Sublattice) -> ExactRadical {
    gamma_from_det(&sub.det, sub.rank(), &lattice.det_gram, lattice.dimension())
}

/// `d / D^{l/n}` as a canonical radical.
pub fn gamma_from_det(d: &BigUint, l: usize, det: &BigUint, n: usize) -> ExactRadical {
    assert!(!det.is_zero(), "lattice determinant is positive");
    let num = BigInt::from(num_traits::pow(d.clone(), n));
    let den = BigInt::from(num_traits::pow(det.clone(), l));
    ExactRadical::new(BigRational::new(num, den), n as u32).expect("positive radicand")
}
