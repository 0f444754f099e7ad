//! Arbitrary-precision rationals and their `"p/q"` string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Bound on numerators and denominators of sampled parameters.
pub const SAMPLE_BOUND: i64 = 1_000_000;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int = if int.is_empty() || int == "-" {
            "0"
        } else {
            int
        };
        let whole: BigInt = int.parse().map_err(|_| bad())?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let part = Q::new(frac.parse::<BigInt>().map_err(|_| bad())?, scale);
        let whole = Q::from_integer(whole);
        return Ok(if negative { whole - part } else { whole + part });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// `"p/q"`, or just `"p"` for integers.
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

/// Numerator and denominator drawn uniformly from `[-SAMPLE_BOUND, SAMPLE_BOUND]`,
/// the denominator redrawn while zero.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let n = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
    let d = loop {
        let d = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        if d != 0 {
            break d;
        }
    };
    q_frac(n, d)
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Smallest positive integer multiple clearing all denominators in `row`.
pub fn common_denominator<'a>(row: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num_integer::Integer;
    row.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Serde adapter for a single rational as a string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/4").unwrap(), q_frac(3, 4));
        assert_eq!(parse_q("-6/8").unwrap(), q_frac(-3, 4));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert_eq!(parse_q("-0.25").unwrap(), q_frac(-1, 4));
        assert_eq!(parse_q("1.5").unwrap(), q_frac(3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("1.").is_err());
    }

    #[test]
    fn format_round_trip() {
        for x in [q_frac(-22, 7), q(5), q(0)] {
            assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
        }
        assert_eq!(format_q(&q_frac(1, -2)), "-1/2");
    }

    #[test]
    fn random_q_in_bounds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = random_q(&mut rng);
            // reduction only shrinks both parts
            assert!(x.numer().abs() <= BigInt::from(SAMPLE_BOUND));
            assert!(x.denom() <= &BigInt::from(SAMPLE_BOUND));
        }
    }
}
