//! Rankin and Bergé–Martinet invariants: exact per-lattice values, the table
//! of known constants, bound propagation over the `(n, l)` grid, and the
//! asymptotic bounds on `γ_{2k,k}`.

mod asymptotic;
mod propagate;

pub use asymptotic::{asymptotic_gamma_2k_k, AsymptoticBounds, DecimalInterval};
pub use propagate::{propagate_bounds, BoundInterval, BoundTable, Rule, RuleSet};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::codes::{self, LinearCode};
use crate::denssub::{self, SearchCertificate, SearchOptions};
use crate::error::Result;
use crate::exact::{BigRational, ExactRadical};
use crate::lattices::{self, construction_a, dual_as_code_lattice, IntegralLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `γ_{n,l}`.
    Rankin,
    /// `γ'_{n,l}`.
    BergeMartinet,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Rankin => "gamma",
            Kind::BergeMartinet => "gamma'",
        })
    }
}

/// `γ_{n,l}(Λ) = d_l / det^{l/n}` from a certificate, which is re-verified
/// against the lattice first.
pub fn gamma_nl(lattice: &IntegralLattice, cert: &SearchCertificate) -> Result<ExactRadical> {
    denssub::verify_certificate(lattice, cert)?;
    Ok(lattices::gamma_from_det(
        &BigUint::from(cert.value),
        cert.l,
        lattice.det_gram(),
        lattice.dimension(),
    ))
}

/// `(1/q^l) · √(d_l(Λ_C) · d_l(Λ_{C^⊥}))`.
pub fn gamma_prime_from_values(q: u32, l: usize, d: u64, d_dual: u64) -> ExactRadical {
    let num = BigInt::from(d) * BigInt::from(d_dual);
    let den = num_traits::pow(BigInt::from(q), 2 * l);
    ExactRadical::new(BigRational::new(num, den), 2).expect("positive radicand")
}

/// Self-dual shortcut `d_l(Λ_C) / q^l`.
pub fn gamma_prime_self_dual(q: u32, l: usize, d: u64) -> ExactRadical {
    let den = num_traits::pow(BigInt::from(q), l);
    ExactRadical::rational(BigRational::new(BigInt::from(d), den)).expect("positive value")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPrime {
    pub value: ExactRadical,
    pub code_certificate: SearchCertificate,
    /// `None` when the code is self-dual and the shortcut was taken.
    pub dual_certificate: Option<SearchCertificate>,
    pub self_dual: bool,
}

/// `γ'_{n,l}(Λ_C)` through the dual code. With `use_shortcut`, a self-dual
/// code skips the second search.
pub fn gamma_prime_nl(
    code: &LinearCode,
    l: usize,
    opts: &SearchOptions,
    use_shortcut: bool,
) -> Result<GammaPrime> {
    let lattice = construction_a(code);
    let with_hint = |c: &LinearCode| SearchOptions {
        upper_hint: denssub::code_upper_hint(c, l).or(opts.upper_hint),
        ..opts.clone()
    };
    let cert = denssub::d_l_search(&lattice, l, &with_hint(code))?;
    let self_dual = code.is_self_dual()?;
    if self_dual && use_shortcut {
        return Ok(GammaPrime {
            value: gamma_prime_self_dual(code.q(), l, cert.value),
            code_certificate: cert,
            dual_certificate: None,
            self_dual,
        });
    }
    let dual = codes::dual_code(code)?;
    let dual_lattice = dual_as_code_lattice(code)?;
    let dual_cert = denssub::d_l_search(&dual_lattice, l, &with_hint(&dual))?;
    Ok(GammaPrime {
        value: gamma_prime_from_values(code.q(), l, cert.value, dual_cert.value),
        code_certificate: cert,
        dual_certificate: Some(dual_cert),
        self_dual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownFact {
    pub kind: Kind,
    pub n: usize,
    pub l: usize,
    pub value: ExactRadical,
    /// Lattice attaining the value, where the table names one.
    pub lattice: Option<String>,
    /// A construction by a code is available (reproduced by this crate).
    pub by_code: bool,
}

fn fact(kind: Kind, n: usize, l: usize, value: ExactRadical, lattice: Option<&str>, by_code: bool) -> KnownFact {
    KnownFact { kind, n, l, value, lattice: lattice.map(str::to_string), by_code }
}

fn rad(num: i64, den: i64, root: u32) -> ExactRadical {
    ExactRadical::from_ratio(num, den, root).expect("valid radical")
}

/// The table of known exact constants, for `l <= n/2`.
pub fn known_facts() -> Vec<KnownFact> {
    use Kind::{BergeMartinet as P, Rankin as R};
    vec![
        // 2/√3 = (4/3)^{1/2}
        fact(R, 2, 1, rad(4, 3, 2), Some("A2"), false),
        fact(P, 2, 1, rad(4, 3, 2), None, false),
        fact(R, 3, 1, rad(2, 1, 3), Some("A3=D3"), true),
        fact(P, 3, 1, rad(3, 2, 2), Some("D3"), true),
        fact(R, 4, 1, rad(2, 1, 2), Some("D4"), true),
        fact(P, 4, 1, rad(2, 1, 2), Some("D4"), true),
        fact(R, 4, 2, rad(3, 2, 1), Some("D4"), true),
        fact(P, 4, 2, rad(3, 2, 1), Some("D4"), true),
        fact(R, 5, 1, rad(8, 1, 5), Some("D5"), true),
        fact(P, 5, 1, rad(2, 1, 2), Some("D5"), true),
        fact(R, 6, 1, rad(64, 3, 6), Some("E6"), false),
        fact(P, 6, 1, rad(8, 3, 2), None, false),
        fact(R, 6, 2, rad(9, 1, 3), Some("E6"), false),
        fact(P, 6, 2, rad(2, 1, 1), Some("E6"), false),
        fact(R, 7, 1, rad(64, 1, 7), Some("E7"), false),
        fact(P, 7, 1, rad(3, 1, 2), None, false),
        fact(R, 8, 1, rad(2, 1, 1), Some("E8"), true),
        fact(P, 8, 1, rad(2, 1, 1), Some("E8"), true),
        fact(R, 8, 2, rad(3, 1, 1), Some("E8"), true),
        fact(P, 8, 2, rad(3, 1, 1), Some("E8"), true),
        fact(R, 8, 3, rad(4, 1, 1), Some("E8"), false),
        fact(P, 8, 3, rad(4, 1, 1), Some("E8"), false),
        fact(R, 8, 4, rad(4, 1, 1), Some("E8"), false),
        fact(P, 8, 4, rad(4, 1, 1), Some("E8"), false),
    ]
}

pub fn known_fact(kind: Kind, n: usize, l: usize) -> Option<KnownFact> {
    known_facts().into_iter().find(|f| f.kind == kind && f.n == n && f.l == l)
}

/// Lower-bound seeds from this crate's own lattices: `γ_{n,1}, γ_{n,2}` of
/// the parity-check lattices `D_n` (`q = 2`) and `γ'_{n,1}, γ'_{n,2}` through
/// their dual codes, for `3 <= n <= n_max` (capped at 8).
pub fn lattice_lower_bounds(n_max: usize, opts: &SearchOptions) -> Result<Vec<BoundInterval>> {
    let mut out = Vec::new();
    for n in 3..=n_max.min(8) {
        let code = codes::parity_check_code(n, 2)?;
        let lattice = construction_a(&code);
        for l in 1..=2usize.min(n / 2) {
            let hint = SearchOptions { upper_hint: denssub::code_upper_hint(&code, l), ..opts.clone() };
            let cert = denssub::d_l_search(&lattice, l, &hint)?;
            let g = gamma_nl(&lattice, &cert)?;
            out.push(BoundInterval::lower_only(
                Kind::Rankin,
                n,
                l,
                g,
                format!("lattice: D{n} = Construction A of the parity-check code (n={n}, q=2), d_{l} = {}", cert.value),
            ));
            let gp = gamma_prime_nl(&code, l, opts, true)?;
            let dual_value = gp.dual_certificate.as_ref().map_or(cert.value, |c| c.value);
            out.push(BoundInterval::lower_only(
                Kind::BergeMartinet,
                n,
                l,
                gp.value,
                format!(
                    "lattice: parity-check code (n={n}, q=2) and its dual, d_{l} = {}, d_{l}(dual) = {dual_value}",
                    cert.value
                ),
            ));
        }
    }
    Ok(out)
}
