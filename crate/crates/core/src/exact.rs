//! Exact numbers of the form `(p/q)^(1/r)`.
//!
//! Every Rankin-type invariant handled by this crate is a single radical of a
//! non-negative rational, so products, rational powers and comparisons can all
//! be carried out on integers without any floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type BigRational = Ratio<BigInt>;

/// A non-negative real number `radicand^(1/root)` kept in canonical form.
///
/// Canonical means `root` is minimal: no `d > 1` dividing `root` has both the
/// numerator and denominator of the radicand as perfect `d`-th powers. With
/// that normalization structural equality coincides with numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRadical {
    radicand: BigRational,
    root: u32,
}

impl ExactRadical {
    pub fn new(radicand: BigRational, root: u32) -> Result<Self> {
        if root == 0 {
            return Err(Error::InvalidParameter("radical root must be positive".into()));
        }
        if radicand.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "negative radicand {radicand} is not supported"
            )));
        }
        Ok(Self::canonical(radicand, root))
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, root: u32) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Self::new(BigRational::new(num.into(), den), root)
    }

    pub fn integer(value: impl Into<BigInt>) -> Self {
        let value = value.into();
        assert!(!value.is_negative(), "ExactRadical::integer needs a non-negative value");
        Self { radicand: BigRational::from_integer(value), root: 1 }
    }

    pub fn rational(value: BigRational) -> Result<Self> {
        Self::new(value, 1)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn numer(&self) -> &BigInt {
        self.radicand.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.radicand.denom()
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero()
    }

    /// Returns the value as a rational when the root is 1.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.root == 1).then_some(&self.radicand)
    }

    fn canonical(radicand: BigRational, root: u32) -> Self {
        if radicand.is_zero() || radicand.is_one() {
            return Self { radicand, root: 1 };
        }
        // The exponents d for which the radicand is a perfect d-th power are
        // closed under lcm, so the largest divisor that works is the answer.
        let num = radicand.numer().magnitude();
        let den = radicand.denom().magnitude();
        for d in divisors_descending(root) {
            if d == 1 {
                break;
            }
            if let (Some(n), Some(m)) = (exact_nth_root(num, d), exact_nth_root(den, d)) {
                return Self {
                    radicand: BigRational::new(BigInt::from(n), BigInt::from(m)),
                    root: root / d,
                };
            }
        }
        Self { radicand, root }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let l = lcm_u32(self.root, other.root).expect("root lcm overflow");
        let a = pow_ratio(&self.radicand, l / self.root);
        let b = pow_ratio(&other.radicand, l / other.root);
        Self::canonical(a * b, l)
    }

    /// `self / other`; fails when `other` is zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.powi(-1)?))
    }

    /// `self^exponent` for a rational exponent.
    pub fn pow(&self, exponent: &Ratio<i64>) -> Result<Self> {
        let (a, b) = (*exponent.numer(), *exponent.denom());
        if a == 0 {
            return Ok(Self::one());
        }
        if a < 0 && self.is_zero() {
            return Err(Error::ZeroToNegativePower);
        }
        let magnitude = u32::try_from(a.unsigned_abs()).map_err(|_| Error::RootOverflow)?;
        let b = u32::try_from(b).map_err(|_| Error::RootOverflow)?;
        let root = self.root.checked_mul(b).ok_or(Error::RootOverflow)?;
        let mut radicand = pow_ratio(&self.radicand, magnitude);
        if a < 0 {
            radicand = radicand.recip();
        }
        Ok(Self::canonical(radicand, root))
    }

    pub fn powi(&self, exponent: i64) -> Result<Self> {
        self.pow(&Ratio::from_integer(exponent))
    }

    /// Square root, i.e. `self^(1/2)`.
    pub fn sqrt(&self) -> Self {
        self.pow(&Ratio::new(1, 2)).expect("non-negative square root")
    }

    /// Rough floating point value, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let ln = (ln_big(self.numer().magnitude()) - ln_big(self.denom().magnitude()))
            / self.root as f64;
        ln.exp()
    }

    /// Decimal rendering correctly rounded (half away from zero) to `digits`
    /// significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1, "at least one significant digit is required");
        if self.is_zero() {
            return "0".to_string();
        }
        let num = self.numer().magnitude().clone();
        let den = self.denom().magnitude().clone();
        let r = self.root;

        // Decimal exponent e with 10^e <= value < 10^(e+1).
        let estimate = (ln_big(&num) - ln_big(&den)) / (r as f64) / std::f64::consts::LN_10;
        let mut e = estimate.floor() as i64;
        while cmp_with_pow10(&num, &den, r, e) == Ordering::Less {
            e -= 1;
        }
        while cmp_with_pow10(&num, &den, r, e + 1) != Ordering::Less {
            e += 1;
        }

        // S = floor(value · 10^k) has exactly `digits` digits.
        let k = digits as i64 - 1 - e;
        let (scaled_num, scaled_den) = scale_by_pow10(&num, &den, r, k);
        let mut s = (&scaled_num / &scaled_den).nth_root(r);
        // Round up when value · 10^k >= S + 1/2, i.e. (2S+1)^r · den <= 2^r · num.
        let two = BigUint::from(2u32);
        let lhs = Pow::pow(&(&s * &two + 1u32), r) * &scaled_den;
        let rhs = Pow::pow(&two, r) * &scaled_num;
        if lhs <= rhs {
            s += 1u32;
        }
        let mut digits_str = s.to_str_radix(10);
        if digits_str.len() > digits {
            // Rounding carried into a new leading digit.
            digits_str.truncate(digits);
            e += 1;
        }
        place_decimal_point(&digits_str, e)
    }

    /// Human-readable exact form such as `9^(1/3)`, `(243/16)^(1/5)` or `3/2`.
    pub fn to_exact_string(&self) -> String {
        let base = if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        };
        if self.root == 1 {
            base
        } else if self.denom().is_one() {
            format!("{}^(1/{})", base, self.root)
        } else {
            format!("({})^(1/{})", base, self.root)
        }
    }
}

impl Ord for ExactRadical {
    fn cmp(&self, other: &Self) -> Ordering {
        radical_compare(self, other)
    }
}

impl PartialOrd for ExactRadical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

/// Total order on non-negative radicals: compare `a^L` with `b^L` where
/// `L = lcm(a.root, b.root)`, by cross multiplication of integers.
pub fn radical_compare(a: &ExactRadical, b: &ExactRadical) -> Ordering {
    if a.root == b.root && a.radicand == b.radicand {
        return Ordering::Equal;
    }
    let l = lcm_u32(a.root, b.root).expect("root lcm overflow");
    let ea = l / a.root;
    let eb = l / b.root;
    let lhs = Pow::pow(a.numer(), ea) * Pow::pow(b.denom(), eb);
    let rhs = Pow::pow(b.numer(), eb) * Pow::pow(a.denom(), ea);
    lhs.cmp(&rhs)
}

/// Serialized as `{"num": "...", "den": "...", "root": r}` with decimal
/// strings so arbitrarily large radicands survive JSON.
#[derive(Serialize, Deserialize)]
struct RadicalRepr {
    num: String,
    den: String,
    root: u32,
}

impl Serialize for ExactRadical {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RadicalRepr {
            num: self.numer().to_string(),
            den: self.denom().to_string(),
            root: self.root,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactRadical {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RadicalRepr::deserialize(deserializer)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        ExactRadical::from_ratio(num, den, repr.root).map_err(D::Error::custom)
    }
}

pub(crate) fn pow_ratio(x: &BigRational, e: u32) -> BigRational {
    if e == 1 {
        return x.clone();
    }
    BigRational::new_raw(Pow::pow(x.numer(), e), Pow::pow(x.denom(), e))
}

pub(crate) fn lcm_u32(a: u32, b: u32) -> Option<u32> {
    (a / a.gcd(&b)).checked_mul(b)
}

fn divisors_descending(n: u32) -> Vec<u32> {
    let mut divs: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divs.reverse();
    divs
}

/// `Some(r)` when `x = r^d` exactly.
pub(crate) fn exact_nth_root(x: &BigUint, d: u32) -> Option<BigUint> {
    if x.is_zero() || x.is_one() {
        return Some(x.clone());
    }
    let r = x.nth_root(d);
    (Pow::pow(&r, d) == *x).then_some(r)
}

/// Natural log of a big unsigned integer, accurate to f64 precision.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Compares `(num/den)^(1/r)` with `10^e`.
fn cmp_with_pow10(num: &BigUint, den: &BigUint, r: u32, e: i64) -> Ordering {
    let p = Pow::pow(&BigUint::from(10u32), (e.unsigned_abs() as u32) * r);
    if e >= 0 {
        num.cmp(&(den * p))
    } else {
        (num * p).cmp(den)
    }
}

/// Returns `(num · 10^(r k), den)` or `(num, den · 10^(-r k))`.
fn scale_by_pow10(num: &BigUint, den: &BigUint, r: u32, k: i64) -> (BigUint, BigUint) {
    let p = Pow::pow(&BigUint::from(10u32), (k.unsigned_abs() as u32) * r);
    if k >= 0 {
        (num * p, den.clone())
    } else {
        (num.clone(), den * p)
    }
}

fn place_decimal_point(digits: &str, e: i64) -> String {
    if e < 0 {
        let zeros = "0".repeat((-e - 1) as usize);
        return format!("0.{zeros}{digits}");
    }
    let int_len = e as usize + 1;
    if int_len >= digits.len() {
        let zeros = "0".repeat(int_len - digits.len());
        format!("{digits}{zeros}")
    } else {
        format!("{}.{}", &digits[..int_len], &digits[int_len..])
    }
}

/// Converts a signed big integer into a rational.
pub fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}
