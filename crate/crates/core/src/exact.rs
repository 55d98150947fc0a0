//! Exact rational helpers and certified enclosures of `exp(-x)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Formats a rational as `"p/q"` in lowest terms (always with a slash).
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn from_uint(x: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(x.clone()))
}

pub fn from_u64(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Rational enclosure `lo <= exp(-x) <= hi` for `x >= 0`.
///
/// `x` is split as `m * y` with `y <= 1`; on `[0, 1]` the Taylor series of
/// `exp(-y)` alternates with decreasing terms, so consecutive partial sums
/// bracket the value. `terms` controls the truncation point.
pub fn exp_neg_enclosure(x: &Rational, terms: usize) -> (Rational, Rational) {
    assert!(!x.is_negative(), "exp_neg_enclosure needs x >= 0");
    if x.is_zero() {
        return (Rational::one(), Rational::one());
    }
    let m = x.ceil().to_integer().max(BigInt::one());
    let m_usize = m.to_usize().expect("exponent too large for enclosure");
    let y = x / Rational::from_integer(m);

    let terms = terms.max(2);
    let mut partial = Rational::one();
    let mut term = Rational::one();
    let mut previous = partial.clone();
    for k in 1..=terms {
        term = -term * &y / Rational::from_integer(BigInt::from(k));
        previous = partial.clone();
        partial += &term;
    }
    let (mut lo, hi) = if partial < previous {
        (partial, previous)
    } else {
        (previous, partial)
    };
    if lo.is_negative() {
        lo = Rational::zero();
    }
    (pow(&lo, m_usize), pow(&hi, m_usize))
}

fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Decides `p > exp(-x)` exactly by refining the enclosure until it
/// separates from `p`.
///
/// For rational `x > 0`, `exp(-x)` is irrational, so refinement always
/// terminates; at `x = 0` the comparison is against 1 exactly.
pub fn exceeds_exp_neg(p: &Rational, x: &Rational) -> bool {
    let mut terms = 16;
    loop {
        let (lo, hi) = exp_neg_enclosure(x, terms);
        if p > &hi {
            return true;
        }
        if p <= &lo {
            return false;
        }
        terms *= 2;
        assert!(terms <= 1 << 16, "enclosure refinement did not separate");
    }
}

/// Least common multiple of a slice of positive integers.
pub fn lcm_all(values: impl IntoIterator<Item = BigUint>) -> BigUint {
    values
        .into_iter()
        .fold(BigUint::one(), |acc, v| acc.lcm(&v))
}
