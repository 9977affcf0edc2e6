//! Exact rationals backed by `num-rational`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// gcd of magnitudes. Multi-word operands go to dashu's Lehmer implementation;
/// num-bigint's binary gcd is quadratic with an allocation per shift.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = (a.magnitude(), b.magnitude());
    let (big, small) = if a.bits() >= b.bits() { (a, b) } else { (b, a) };
    if small.is_zero() {
        return BigInt::from(big.clone());
    }
    if small.bits() <= 64 {
        let s = small.iter_u64_digits().next().unwrap_or(0);
        let rem = (big % s).iter_u64_digits().next().unwrap_or(0);
        return BigInt::from(s.gcd(&rem));
    }
    let to_dashu = |x: &BigUint| dashu_int::UBig::from_words(&x.to_u64_digits());
    let g = dashu_int::ops::Gcd::gcd(&to_dashu(big), &to_dashu(small));
    BigInt::from_biguint(Sign::Plus, BigUint::from_bytes_le(&g.to_le_bytes()))
}

/// `x + y`, reducing only by the common factor of the denominators.
pub fn add(x: &Rational, y: &Rational) -> Rational {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    let g = gcd(b, d);
    if g.is_one() {
        return Rational::new_raw(a * d + c * b, b * d);
    }
    let (bg, dg) = (b / &g, d / &g);
    let t = a * &dg + c * &bg;
    if t.is_zero() {
        return Rational::zero();
    }
    let h = gcd(&t, &g);
    if h.is_one() {
        Rational::new_raw(t, bg * d)
    } else {
        Rational::new_raw(t / &h, bg * (d / &h))
    }
}

pub fn sub(x: &Rational, y: &Rational) -> Rational {
    add(x, &-y)
}

/// `x · y` with cross cancellation before multiplying.
pub fn mul(x: &Rational, y: &Rational) -> Rational {
    if x.is_zero() || y.is_zero() {
        return Rational::zero();
    }
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    let (g1, g2) = (gcd(a, d), gcd(c, b));
    let num = if g1.is_one() { a.clone() } else { a / &g1 } * if g2.is_one() { c.clone() } else { c / &g2 };
    let den = if g2.is_one() { b.clone() } else { b / &g2 } * if g1.is_one() { d.clone() } else { d / &g1 };
    Rational::new_raw(num, den)
}

/// Canonical `"p/q"` form used in JSON documents, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Writes `c*name` for use inside sums, omitting a unit coefficient.
pub(crate) fn write_term(out: &mut String, first: bool, c: &Rational, name: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if name.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(name);
    } else {
        out.push_str(&format!("{abs}*{name}"));
    }
}
