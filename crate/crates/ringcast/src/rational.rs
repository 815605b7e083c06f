//! Exact rational scalars and small helpers shared by all modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact arbitrary-precision rational. All core game logic runs on this
/// type; floating point appears only in explicitly flagged large-scale
/// experiment paths.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// k-th harmonic number 1 + 1/2 + ... + 1/k as an exact rational, H_0 = 0.
pub fn harmonic(k: usize) -> Rat {
    let mut h = Rat::zero();
    for i in 1..=k {
        h += Rat::new(BigInt::one(), BigInt::from(i));
    }
    h
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in rational {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as "p" or "p/q" (canonical reduced form).
pub fn rational_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numerator/denominator
        // individually overflow f64.
        let scale = BigInt::from(1u64 << 53);
        let q = (r.numer() * &scale) / r.denom();
        q.to_f64().unwrap_or(f64::NAN) / (1u64 << 53) as f64
    })
}

/// Serde adapter: rationals as "p/q" strings in all JSON interfaces.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| rational_to_string(r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Checks a slice of costs for nonnegativity.
pub fn ensure_nonnegative(costs: &[Rat]) -> Result<()> {
    if let Some(i) = costs.iter().position(|c| c.is_negative()) {
        return Err(Error::Validation(format!(
            "edge cost {} at index {i} is negative",
            rational_to_string(&costs[i])
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), rat_int(0));
        assert_eq!(harmonic(1), rat_int(1));
        // 1 + 1/2 + 1/3 + 1/4 = 25/12
        assert_eq!(harmonic(4), rat(25, 12));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "26/19", "-5/7", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(rational_to_string(&r), s);
        }
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
