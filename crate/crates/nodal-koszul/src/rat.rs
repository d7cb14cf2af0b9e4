//! Exact rational scalars.
//!
//! Every computation in this crate runs over the rationals; there is no
//! floating point anywhere. `Rat` is an arbitrary-precision fraction kept
//! reduced with a positive denominator, which makes every rank, kernel and
//! certificate reproducible bit for bit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar: reduced fraction with positive denominator.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical decimal string: `"p"` for integers, `"p/q"` otherwise.
///
/// This is the wire format for every rational in JSON artifacts; parsing it
/// back must reproduce the value exactly.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the `"p"` / `"p/q"` wire format.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer `{t}` in rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s.trim())?)),
        Some((n, d)) => {
            let num = parse_int(n.trim())?;
            let den = parse_int(d.trim())?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(num, den))
        }
    }
}
