//! Decimal evaluation of the two published asymptotic bounds on `γ_{2k,k}`.
//!
//! Everything runs in fixed point with 30 guard digits; the final interval
//! is widened by a relative margin far above the accumulated error and then
//! rounded outwards, so the printed bounds stay valid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GUARD_DIGITS: u32 = 30;
/// Relative widening applied before rounding is `10^-(digits + MARGIN_DIGITS)`.
const MARGIN_DIGITS: u32 = 5;
pub const MAX_DIGITS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalInterval {
    pub lower: String,
    pub upper: String,
    pub lower_source: String,
    pub upper_source: String,
}

impl DecimalInterval {
    pub fn lower_f64(&self) -> f64 {
        self.lower.parse().unwrap_or(f64::NAN)
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper.parse().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticBounds {
    pub k: u64,
    pub digits: usize,
    pub classical: DecimalInterval,
    /// Only for `k >= 5`.
    pub improved: Option<DecimalInterval>,
    pub best: DecimalInterval,
    pub notes: Vec<String>,
}

const CLASSICAL_LOWER: &str = "(k/12)^(k/2)";
const CLASSICAL_UPPER: &str = "(1+k/2)^(k ln 2 + 1/2)";
const IMPROVED_LOWER: &str = "4/(pi^2 sqrt k) (2k/(pi e^(3/2)))^(k/2)";
const IMPROVED_UPPER: &str = "e^9 (0.0833)^(k/2) ((4k-1)/17)^(k/(4k-2)) (k-0.5)^(k ln 2)";

/// Fixed-point context: values are integers scaled by `10^prec`.
struct Fx {
    one: BigInt,
    ln2: BigInt,
}

impl Fx {
    fn new(prec: u32) -> Self {
        let one = BigInt::from(10u32).pow(prec);
        let mut fx = Self { one, ln2: BigInt::zero() };
        fx.ln2 = fx.atanh_ratio(&BigInt::one(), &BigInt::from(3)) * 2;
        fx
    }

    fn ratio(&self, n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigInt {
        (&self.one * n.into()).div_floor(&d.into())
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).div_floor(&self.one)
    }

    /// `atanh(p/q)` for `|p/q| <= 1/3`.
    fn atanh_ratio(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let p2 = p * p;
        let q2 = q * q;
        let mut term = (&self.one * p) / q;
        let mut sum = BigInt::zero();
        let mut i = 1u64;
        while !term.is_zero() {
            sum += &term / i;
            term = term * &p2 / &q2;
            i += 2;
        }
        sum
    }

    /// `atan(1/x)` for integer `x >= 2`.
    fn acot(&self, x: u64) -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut term = &self.one / x;
        let mut sum = BigInt::zero();
        let mut i = 1u64;
        let mut sign = true;
        while !term.is_zero() {
            if sign {
                sum += &term / i;
            } else {
                sum -= &term / i;
            }
            term /= &x2;
            i += 2;
            sign = !sign;
        }
        sum
    }

    fn pi(&self) -> BigInt {
        self.acot(5) * 16 - self.acot(239) * 4
    }

    /// `ln(a/b)` for positive integers.
    fn ln_ratio(&self, a: &BigInt, b: &BigInt) -> BigInt {
        assert!(a.is_positive() && b.is_positive());
        // a/(b 2^j) in [2/3, 4/3).
        let mut j: i64 = a.bits() as i64 - b.bits() as i64;
        let shifted = |j: i64| if j >= 0 { (a.clone(), b << j as usize) } else { (a << (-j) as usize, b.clone()) };
        loop {
            let (x, y) = shifted(j);
            if &x * 3 >= &y * 4 {
                j += 1;
            } else if &x * 3 < &y * 2 {
                j -= 1;
            } else {
                return &self.ln2 * j + self.atanh_ratio(&(&x - &y), &(&x + &y)) * 2;
            }
        }
    }

    fn ln_fixed(&self, x: &BigInt) -> BigInt {
        self.ln_ratio(x, &self.one)
    }

    fn exp(&self, y: &BigInt) -> BigInt {
        let two_ln2: BigInt = &self.ln2 * 2u32;
        let j: BigInt = (y * 2u32 + &self.ln2).div_floor(&two_ln2);
        let r = y - &self.ln2 * &j;
        let mut term = self.one.clone();
        let mut sum = BigInt::zero();
        let mut i = 1u64;
        while !term.is_zero() {
            sum += &term;
            term = self.mul(&term, &r) / i;
            i += 1;
        }
        let j: i64 = j.try_into().expect("exponent fits in i64");
        if j >= 0 {
            sum << j as usize
        } else {
            sum >> (-j) as usize
        }
    }
}

/// Rounds the fixed-point value `v / 10^prec` outward to `digits`
/// significant digits after a relative widening.
fn render(v: &BigInt, prec: u32, digits: usize, up: bool) -> String {
    assert!(v.is_positive());
    let margin = BigInt::from(10u32).pow(digits as u32 + MARGIN_DIGITS);
    let slack: BigInt = v / &margin + 1u32;
    let widened: BigInt = if up { v + &slack } else { v - &slack };
    let widened = widened.max(BigInt::one());
    let len = widened.to_string().len() as i64;
    let drop = len - digits as i64;
    let (mut mant, mut exp10) = if drop > 0 {
        let p = BigInt::from(10u32).pow(drop as u32);
        let (q, rem): (BigInt, BigInt) = widened.div_mod_floor(&p);
        let q = if up && !rem.is_zero() { q + 1 } else { q };
        (q, drop - prec as i64)
    } else {
        (widened, -(prec as i64))
    };
    // Rounding up may carry into an extra digit.
    if mant.to_string().len() > digits {
        mant /= 10;
        exp10 += 1;
    }
    let s = mant.to_string();
    let point = s.len() as i64 + exp10; // digits before the decimal point
    if (-4..=21).contains(&point) {
        if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), s.trim_end_matches('0'))
        } else if point as usize >= s.len() {
            format!("{}{}", s, "0".repeat(point as usize - s.len()))
        } else {
            let (a, b) = s.split_at(point as usize);
            let b = b.trim_end_matches('0');
            if b.is_empty() {
                a.to_string()
            } else {
                format!("{a}.{b}")
            }
        }
    } else {
        let (a, b) = s.split_at(1);
        let b = b.trim_end_matches('0');
        let e = point - 1;
        if b.is_empty() {
            format!("{a}e{e}")
        } else {
            format!("{a}.{b}e{e}")
        }
    }
}

/// Evaluates both bound pairs that apply to `k` and keeps the tighter side
/// of each.
pub fn asymptotic_gamma_2k_k(k: u64, digits: usize) -> Result<AsymptoticBounds> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k}: the bounds need k >= 2")));
    }
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::InvalidParameter(format!("precision {digits} outside 1..={MAX_DIGITS}")));
    }
    let prec = digits as u32 + GUARD_DIGITS + (k as f64).log10().ceil() as u32;
    let fx = Fx::new(prec);
    let kb = BigInt::from(k);
    let half_k = fx.ratio(k, 2u32);
    let ln = |a: u64, b: u64| fx.ln_ratio(&BigInt::from(a), &BigInt::from(b));

    let lower1 = fx.exp(&fx.mul(&half_k, &ln(k, 12)));
    let upper1 = {
        let e = &fx.ln2 * &kb + fx.ratio(1u32, 2u32);
        fx.exp(&fx.mul(&e, &ln(k + 2, 2)))
    };
    let classical = DecimalInterval {
        lower: render(&lower1, prec, digits, false),
        upper: render(&upper1, prec, digits, true),
        lower_source: CLASSICAL_LOWER.into(),
        upper_source: CLASSICAL_UPPER.into(),
    };

    let mut notes = Vec::new();
    let (mut best_lower, mut best_upper) = ((lower1, CLASSICAL_LOWER), (upper1, CLASSICAL_UPPER));
    let improved = if k >= 5 {
        let ln_pi = fx.ln_fixed(&fx.pi());
        let lower2 = {
            let inner = ln(2 * k, 1) - &ln_pi - fx.ratio(3u32, 2u32);
            let e = ln(4, 1) - &ln_pi * 2 - ln(k, 1) / 2 + fx.mul(&half_k, &inner);
            fx.exp(&e)
        };
        let upper2 = {
            let e = fx.ratio(9u32, 1u32)
                + fx.mul(&half_k, &ln(833, 10000))
                + fx.mul(&fx.ratio(k, 4 * k - 2), &ln(4 * k - 1, 17))
                + fx.mul(&(&fx.ln2 * &kb), &ln(2 * k - 1, 2));
            fx.exp(&e)
        };
        let interval = DecimalInterval {
            lower: render(&lower2, prec, digits, false),
            upper: render(&upper2, prec, digits, true),
            lower_source: IMPROVED_LOWER.into(),
            upper_source: IMPROVED_UPPER.into(),
        };
        if lower2 > best_lower.0 {
            best_lower = (lower2, IMPROVED_LOWER);
        }
        if upper2 < best_upper.0 {
            best_upper = (upper2, IMPROVED_UPPER);
        }
        Some(interval)
    } else {
        notes.push(format!("improved pair skipped: it requires k >= 5, got k = {k}"));
        None
    };
    let best = DecimalInterval {
        lower: render(&best_lower.0, prec, digits, false),
        upper: render(&best_upper.0, prec, digits, true),
        lower_source: best_lower.1.into(),
        upper_source: best_upper.1.into(),
    };
    Ok(AsymptoticBounds { k, digits, classical, improved, best, notes })
}
