//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` with `q >= 1`, also for integers (`3/1`).
pub fn to_pq_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Coefficient text used by every canonical rendering: nonnegative integers
/// are printed bare, everything else in parentheses.
pub fn coeff_text(q: &Rational) -> String {
    if q.is_integer() && !q.is_negative() {
        q.numer().to_string()
    } else {
        format!("({})", q)
    }
}

/// Decimal rendering with `digits` significant digits after the point,
/// truncated toward zero. Exact input, so no floating point is involved.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let int_part = a.numer() / a.denom();
    let mut frac = a - BigRational::from_integer(int_part.clone());
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    out.push('.');
    let ten = rat(10);
    for _ in 0..digits {
        frac *= &ten;
        let d = frac.numer() / frac.denom();
        out.push_str(&d.to_string());
        frac -= BigRational::from_integer(d);
    }
    out
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}
