//! Exact scalars: rationals and Gaussian rationals.
//!
//! Every scalar is stored as a complex number with `BigRational` real and
//! imaginary parts, so plain rationals are the special case of a zero
//! imaginary part. All arithmetic is exact; nothing in this crate touches
//! floating point.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;
pub type Scalar = Complex<Rat>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty entry")]
    Empty,
    #[error("malformed entry `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rational(p: i64, q: i64) -> Scalar {
    Complex::new(rat(p, q), Rat::zero())
}

pub fn int(p: i64) -> Scalar {
    rational(p, 1)
}

pub fn gaussian(re: Rat, im: Rat) -> Scalar {
    Complex::new(re, im)
}

pub fn conj(z: &Scalar) -> Scalar {
    Complex::new(z.re.clone(), -z.im.clone())
}

pub fn is_real(z: &Scalar) -> bool {
    z.im.is_zero()
}

/// Lexicographic order on (re, im); used only for canonical sorting.
pub fn cmp_scalar(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

fn parse_rat(s: &str) -> Result<Rat, ScalarParseError> {
    let bad = || ScalarParseError::Malformed(s.to_string());
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rat::from).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(ScalarParseError::ZeroDenominator(s.to_string()));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Accepts `p`, `p/q`, or `a+bi` / `a-bi` where a and b are rationals.
pub fn parse_scalar(entry: &str) -> Result<Scalar, ScalarParseError> {
    let s = entry.trim();
    if s.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split at the sign that separates the real and imaginary parts.
        // Denominators are unsigned, so any '+'/'-' past position 0 is it.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| ScalarParseError::Malformed(s.to_string()))?;
        let re = parse_rat(&body[..split])?;
        let sign = &body[split..split + 1];
        let im_mag = parse_rat(&body[split + 1..])?;
        let im = if sign == "-" { -im_mag } else { im_mag };
        Ok(Complex::new(re, im))
    } else {
        Ok(Complex::new(parse_rat(s)?, Rat::zero()))
    }
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_scalar(z: &Scalar) -> String {
    if z.im.is_zero() {
        format_rat(&z.re)
    } else if z.im.is_negative() {
        format!("{}-{}i", format_rat(&z.re), format_rat(&-z.im.clone()))
    } else {
        format!("{}+{}i", format_rat(&z.re), format_rat(&z.im))
    }
}

pub fn format_row(row: &[Scalar]) -> String {
    row.iter().map(format_scalar).collect::<Vec<_>>().join(" ")
}

pub fn parse_row(line: &str) -> Result<Vec<Scalar>, ScalarParseError> {
    line.split_whitespace().map(parse_scalar).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_integers() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("-7").unwrap(), int(-7));
        assert_eq!(parse_scalar("0").unwrap(), Scalar::zero());
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_scalar("1/2").unwrap(), rational(1, 2));
        assert_eq!(parse_scalar("-3/9").unwrap(), rational(-1, 3));
    }

    #[test]
    fn parses_gaussian_entries() {
        assert_eq!(parse_scalar("1+2i").unwrap(), gaussian(rat(1, 1), rat(2, 1)));
        assert_eq!(
            parse_scalar("-1/2-3/4i").unwrap(),
            gaussian(rat(-1, 2), rat(-3, 4))
        );
        assert_eq!(parse_scalar("0+1i").unwrap(), gaussian(rat(0, 1), rat(1, 1)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("i").is_err());
        assert!(parse_scalar("1+i").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_scalar(&rational(4, 2)), "2");
        assert_eq!(format_scalar(&rational(-1, 2)), "-1/2");
        assert_eq!(format_scalar(&gaussian(rat(0, 1), rat(-1, 3))), "0-1/3i");
    }

    #[test]
    fn conjugation_is_involutive() {
        let z = gaussian(rat(2, 3), rat(-5, 7));
        assert_eq!(conj(&conj(&z)), z);
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        /// format then parse is the identity on rationals
        #[test]
        fn roundtrip_rational(r in small_rat()) {
            let z = Complex::new(r, Rat::zero());
            prop_assert_eq!(parse_scalar(&format_scalar(&z)).unwrap(), z);
        }

        /// format then parse is the identity on Gaussian rationals
        #[test]
        fn roundtrip_gaussian(re in small_rat(), im in small_rat()) {
            let z = Complex::new(re, im);
            prop_assert_eq!(parse_scalar(&format_scalar(&z)).unwrap(), z);
        }
    }
}
