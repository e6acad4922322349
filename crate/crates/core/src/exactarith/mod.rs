//! Exact integer and rational helpers: p-adic valuations, Jacobi symbols,
//! perfect power detection and primitive representatives of projective points.
//!
//! Nothing in here touches floating point.

mod primes;

pub use primes::{
    factor, is_prime, is_prime_u64, prime_support, primes_up_to, Factorization,
    TRIAL_DIVISION_BOUND,
};

use num_bigint::BigInt;
use num_integer::{Integer as _, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `n = p^valuation * unit` with `p` not dividing `unit`.
///
/// For `n = 0` the valuation is `None` (infinite) and the unit part is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationResult {
    pub valuation: Option<u64>,
    pub unit: Integer,
}

impl ValuationResult {
    pub fn is_infinite(&self) -> bool {
        self.valuation.is_none()
    }
}

/// p-adic valuation and unit part of `n`. Rejects non-prime `p`.
pub fn valuation(n: &Integer, p: &Integer) -> Result<ValuationResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(valuation_unchecked(n, p))
}

/// Same as [`valuation`] without the primality check; `p` must be at least 2.
pub(crate) fn valuation_unchecked(n: &Integer, p: &Integer) -> ValuationResult {
    if n.is_zero() {
        return ValuationResult {
            valuation: None,
            unit: Integer::zero(),
        };
    }
    if *p == Integer::from(2u8) {
        let v = n.trailing_zeros().unwrap_or(0);
        return ValuationResult {
            valuation: Some(v),
            unit: n >> v,
        };
    }
    let mut v = 0u64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    ValuationResult {
        valuation: Some(v),
        unit: m,
    }
}

/// p-adic valuation of an integer, `None` for zero.
pub fn vp(n: &Integer, p: &Integer) -> Option<u64> {
    valuation_unchecked(n, p).valuation
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &Integer, n: &Integer) -> Result<i8> {
    if !n.is_positive() || n.is_even() {
        return Err(Error::BadJacobiModulus(n.to_string()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut sign = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz % 2 == 1 {
            let r = (&n % 8u8).to_u8_lossy();
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        a >>= tz;
        // quadratic reciprocity for odd a, n
        if (&a % 4u8).to_u8_lossy() == 3 && (&n % 4u8).to_u8_lossy() == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { sign } else { 0 })
}

trait LowBits {
    fn to_u8_lossy(&self) -> u8;
}

impl LowBits for Integer {
    fn to_u8_lossy(&self) -> u8 {
        self.iter_u32_digits().next().unwrap_or(0) as u8
    }
}

/// Primitive integer representative of the projective point `v`.
///
/// The result has gcd 1, is a positive rational multiple of `v` up to the
/// canonical sign rule, and its first nonzero coordinate is positive.
pub fn primitive_normalize(v: &[Rational; 3]) -> Result<[Integer; 3]> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroPoint);
    }
    let lcm = v.iter().fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<Integer> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    Ok(canonical_primitive(&[
        scaled[0].clone(),
        scaled[1].clone(),
        scaled[2].clone(),
    ]))
}

/// Divides an integer triple by its gcd and applies the canonical sign rule.
/// The zero triple is returned unchanged.
pub fn canonical_primitive(v: &[Integer; 3]) -> [Integer; 3] {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g.is_zero() {
        return v.clone();
    }
    let mut out = [&v[0] / &g, &v[1] / &g, &v[2] / &g];
    if out
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.is_negative())
    {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    out
}

/// Integer `k`-th root of `n` if `n` is an exact `k`-th power.
///
/// For even `k` the non-negative root is returned; negative `n` has no even
/// root. `k = 0` has no meaningful answer and yields `None`.
pub fn is_kth_power(n: &Integer, k: u32) -> Option<Integer> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(n.clone());
    }
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return is_kth_power(&-n, k).map(|r| -r);
    }
    // Newton iteration on integers (num-integer's nth_root), then exact check.
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// `k`-th root check on machine integers, used in the search inner loop.
pub fn is_kth_power_i128(n: i128, k: u32) -> Option<i128> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(n);
    }
    if n < 0 {
        if k.is_multiple_of(2) {
            return None;
        }
        return n
            .checked_neg()
            .and_then(|m| is_kth_power_i128(m, k))
            .map(|r| -r);
    }
    let m = n as u128;
    let r = m.nth_root(k);
    (r.checked_pow(k) == Some(m)).then_some(r as i128)
}

/// Renders a rational as `"n"` or `"n/d"`.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"n"` or `"n/d"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not an integer or fraction: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(int(n), int(d))
    }

    #[test]
    fn valuation_examples() {
        let r = valuation(&int(48), &int(2)).unwrap();
        assert_eq!((r.valuation, r.unit), (Some(4), int(3)));
        let r = valuation(&int(17), &int(2)).unwrap();
        assert_eq!((r.valuation, r.unit), (Some(0), int(17)));
        assert!(valuation(&int(0), &int(5)).unwrap().is_infinite());
        assert_eq!(valuation(&int(-250), &int(5)).unwrap().unit, int(-2));
        assert!(matches!(
            valuation(&int(12), &int(4)),
            Err(Error::NotPrime(_))
        ));
        assert!(valuation(&int(12), &int(1)).is_err());
    }

    #[test]
    fn valuation_reconstructs_large_inputs() {
        // 600-bit magnitude
        let n = num_traits::pow(int(3), 380) * num_traits::pow(int(7), 11) * int(-5);
        let r = valuation(&n, &int(7)).unwrap();
        assert_eq!(r.valuation, Some(11));
        assert_eq!(num_traits::pow(int(7), 11) * &r.unit, n);
        assert_eq!(n.to_string().parse::<Integer>().unwrap(), n);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(&int(2), &int(7)).unwrap(), 1);
        assert_eq!(jacobi(&int(1), &int(15)).unwrap(), 1);
        assert_eq!(jacobi(&int(3), &int(9)).unwrap(), 0);
        assert_eq!(jacobi(&int(-1), &int(7)).unwrap(), -1);
        assert_eq!(jacobi(&int(5), &int(1)).unwrap(), 1);
        assert!(jacobi(&int(3), &int(8)).is_err());
        assert!(jacobi(&int(3), &int(-7)).is_err());
        assert!(jacobi(&int(3), &int(0)).is_err());
    }

    #[test]
    fn jacobi_matches_residue_tables_below_100() {
        for p in primes_up_to(100).iter().copied().filter(|&p| p > 2) {
            let squares: Vec<bool> = {
                let mut s = vec![false; p as usize];
                for x in 1..p {
                    s[((x * x) % p) as usize] = true;
                }
                s
            };
            for a in -(p as i64)..(2 * p as i64) {
                let r = a.rem_euclid(p as i64) as usize;
                let expected = if r == 0 {
                    0
                } else if squares[r] {
                    1
                } else {
                    -1
                };
                assert_eq!(
                    jacobi(&int(a), &int(p as i64)).unwrap(),
                    expected,
                    "({a}/{p})"
                );
            }
        }
    }

    #[test]
    fn primitive_normalize_examples() {
        let n = primitive_normalize(&[q(1, 2), q(0, 1), q(1, 2)]).unwrap();
        assert_eq!(n, [int(1), int(0), int(1)]);
        let n = primitive_normalize(&[q(1, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(n, [int(1), int(0), int(1)]);
        let n = primitive_normalize(&[q(1, 4), q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(n, [int(1), int(4), int(4)]);
        let n = primitive_normalize(&[q(0, 1), q(-3, 5), q(6, 7)]).unwrap();
        assert_eq!(n, [int(0), int(7), int(-10)]);
        assert_eq!(
            primitive_normalize(&[q(0, 1), q(0, 1), q(0, 1)]),
            Err(Error::ZeroPoint)
        );
    }

    #[test]
    fn kth_power_examples() {
        assert_eq!(is_kth_power(&int(81), 4), Some(int(3)));
        assert_eq!(is_kth_power(&int(17), 4), None);
        assert_eq!(is_kth_power(&int(-8), 3), Some(int(-2)));
        assert_eq!(is_kth_power(&int(-16), 4), None);
        assert_eq!(is_kth_power(&int(0), 5), Some(int(0)));
        let big = num_traits::pow(int(123456789), 7);
        assert_eq!(is_kth_power(&big, 7), Some(int(123456789)));
        assert_eq!(is_kth_power(&(big + 1), 7), None);
        assert_eq!(is_kth_power_i128(-8, 3), Some(-2));
        assert_eq!(is_kth_power_i128(81, 4), Some(3));
        assert_eq!(is_kth_power_i128(82, 4), None);
        assert_eq!(is_kth_power_i128(i128::MIN, 3), None);
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(rational_to_string(&q(-1, 2)), "-1/2");
        assert_eq!(rational_to_string(&q(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
