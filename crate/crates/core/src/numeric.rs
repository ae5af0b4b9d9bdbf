//! Exact rational helpers: decimal parsing and rendering, powers, f64 conversion.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"0.25"`, `"1/3"`, `"2.5e-3"` or `"7"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidNumber(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let mut r = BigRational::from_integer(all);
    let ten = BigRational::from_integer(BigInt::from(10));
    r *= pow_signed(&ten, scale);
    Ok(if neg { -r } else { r })
}

fn pow_signed(base: &BigRational, exp: i32) -> BigRational {
    let p = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

pub fn rat_pow(base: &BigRational, exp: u64) -> BigRational {
    BigRational::new(
        num_traits::pow(base.numer().clone(), exp as usize),
        num_traits::pow(base.denom().clone(), exp as usize),
    )
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn uint_to_int(v: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

/// Converts to the nearest-ish `f64` without overflowing on huge numerators
/// and denominators.
pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    // Scale both to ~64 significant bits.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let e = shift_n - shift_d;
    n / d * 2f64.powi(e.clamp(-1100, 1100) as i32)
}

/// Decimal rendering with `sig` significant digits, rounded half away from zero.
///
/// Moderate magnitudes use positional notation, others scientific; trailing
/// zeros are trimmed. Zero renders as `"0"`.
pub fn to_decimal_string(r: &BigRational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let sig = sig.max(1);
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();

    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    let cmp_pow = |e: i64| -> bool {
        // |r| >= 10^e ?
        if e >= 0 {
            num >= &den * num_traits::pow(ten.clone(), e as usize)
        } else {
            &num * num_traits::pow(ten.clone(), (-e) as usize) >= den
        }
    };
    while !cmp_pow(e) {
        e -= 1;
    }
    while cmp_pow(e + 1) {
        e += 1;
    }

    // digits = round(|r| * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (
            &num * num_traits::pow(ten.clone(), shift as usize),
            den.clone(),
        )
    } else {
        (
            num.clone(),
            &den * num_traits::pow(ten.clone(), (-shift) as usize),
        )
    };
    let (q, rem) = n2.div_rem(&d2);
    let mut digits = if &rem * 2 >= d2 { q + 1 } else { q };
    if digits.to_string().len() > sig {
        // rounding carried into a new digit, e.g. 9.99 -> 10.0
        e += 1;
        digits /= 10;
    }
    let mut ds = digits.to_string();
    while ds.len() > 1 && ds.ends_with('0') {
        ds.pop();
    }

    let body = if (-7..21).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if ds.len() <= int_len {
                format!("{ds}{}", "0".repeat(int_len - ds.len()))
            } else {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            }
        } else {
            format!("0.{}{ds}", "0".repeat((-e - 1) as usize))
        }
    } else if ds.len() == 1 {
        format!("{ds}e{e}")
    } else {
        format!("{}.{}e{e}", &ds[..1], &ds[1..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `a / b` as an exact rational from unsigned integers.
pub fn ratio(a: BigUint, b: BigUint) -> BigRational {
    BigRational::new(uint_to_int(a), uint_to_int(b))
}

pub fn is_probability(r: &BigRational) -> bool {
    !r.is_negative() && r <= &BigRational::one()
}
