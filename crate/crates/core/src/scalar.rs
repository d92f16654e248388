//! Exact rational scalars and the bridge to floating point.
//!
//! Structure constants are always [`Scalar`]s (arbitrary precision
//! rationals). Floating point only appears in the character computations,
//! where [`snap`] is used to recover exact values.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used for every structure constant and degree.
pub type Scalar = BigRational;

/// Exact Gaussian rational, used for snapped character values.
pub type GaussianRational = Complex<BigRational>;

/// Largest denominator accepted by [`snap`] by default.
pub const DEFAULT_SNAP_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `p / q` as an exact scalar. Panics when `q == 0`.
pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"p/q"` or an integer string. Decimal and exponent notation are
/// rejected since they cannot be told apart from rounded irrationals.
pub fn parse_rational(text: &str) -> Result<Scalar, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }
    let parse_int = |s: &str| -> Result<BigInt, ParseRationalError> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected an integer or p/q"));
        }
        s.parse::<BigInt>().map_err(|_| err("expected an integer or p/q"))
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p.trim())?;
            let q = parse_int(q.trim())?;
            if q.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(parse_int(t)?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// accepted only if it lies within `tol` of `x`. Convergents are tried in
/// order of increasing denominator so the simplest admissible value wins.
pub fn snap(x: f64, tol: f64, max_den: u64) -> Option<Scalar> {
    if !x.is_finite() {
        return None;
    }
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h_next = ai * h + h_prev;
        let k_next = ai * k + k_prev;
        if k_next > max_den as i128 {
            break;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        if (x - h as f64 / k as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h), BigInt::from(k)));
        }
        let rem = r - a;
        if rem.abs() < 1e-300 {
            break;
        }
        r = 1.0 / rem;
    }
    None
}

pub fn snap_complex(z: Complex<f64>, tol: f64, max_den: u64) -> Option<GaussianRational> {
    Some(Complex::new(snap(z.re, tol, max_den)?, snap(z.im, tol, max_den)?))
}

pub fn gaussian_to_c64(z: &GaussianRational) -> Complex<f64> {
    Complex::new(to_f64(&z.re), to_f64(&z.im))
}

pub fn is_nonnegative(x: &Scalar) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 1/2 ").unwrap(), frac(1, 2));
    }

    #[test]
    fn rejects_non_rational_text() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("sqrt2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/").is_err());
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_rational(&frac(4, 2)), "2");
        assert_eq!(format_rational(&frac(-1, 3)), "-1/3");
    }

    #[test]
    fn snap_recovers_simple_fractions() {
        assert_eq!(snap(0.5 + 1e-13, 1e-9, 1_000_000), Some(frac(1, 2)));
        assert_eq!(snap(-2.0 / 3.0, 1e-9, 1_000_000), Some(frac(-2, 3)));
        assert_eq!(snap(0.0, 1e-9, 1_000_000), Some(int(0)));
        assert_eq!(snap(7.0, 1e-9, 1_000_000), Some(int(7)));
    }

    #[test]
    fn snap_refuses_when_denominator_bound_is_too_small() {
        assert_eq!(snap(std::f64::consts::PI, 1e-12, 100), None);
    }
}
