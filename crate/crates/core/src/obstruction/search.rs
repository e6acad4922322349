use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::json::{ser_int, ser_points};
use crate::error::{Error, Result};
use crate::exactarith::{canonical_primitive, is_kth_power, is_kth_power_i128, Integer};
use crate::multipoly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    #[serde(serialize_with = "ser_int")]
    pub target: Integer,
    pub bound: u64,
    /// Index of the variable solved for (0 = x, 1 = y, 2 = z).
    pub solved_variable: usize,
    pub exponent: u32,
    #[serde(serialize_with = "ser_points")]
    pub solutions: Vec<[Integer; 3]>,
}

/// All primitive integer points in `[-B, B]^3` with `f(P) = target`, reported
/// as canonical representatives and sorted.
///
/// One variable must occur only as a pure power `c * v^k + r` with `c`, `r`
/// free of `v`. The two other coordinates are enumerated and `v` is recovered
/// from `v^k = (target - r) / c`. Variables whose coefficient `c` is a
/// constant are preferred.
pub fn integer_search(f: &MultiPoly, target: &Integer, bound: u64) -> Result<SearchResult> {
    let (var, k, coeff, rest) = arrangement(f)?;
    let b = i64::try_from(bound).map_err(|_| Error::InvalidArgument("bound too large".into()))?;
    let others: [usize; 2] = match var {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let mut solutions: Vec<[Integer; 3]> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|s| {
            let (coeff, rest) = (&coeff, &rest);
            (-b..=b).flat_map(move |t| {
                let mut at = [0i128; 3];
                at[others[0]] = s as i128;
                at[others[1]] = t as i128;
                solve_for(coeff, rest, target, k, b, &at)
                    .into_iter()
                    .map(move |v| {
                        let mut p = at;
                        p[var] = v;
                        p.map(Integer::from)
                    })
            })
        })
        .filter(|p| p[0].gcd(&p[1]).gcd(&p[2]) == Integer::from(1))
        .map(|p| canonical_primitive(&p))
        .collect();
    solutions.sort();
    solutions.dedup();
    Ok(SearchResult {
        target: target.clone(),
        bound,
        solved_variable: var,
        exponent: k,
        solutions,
    })
}

fn arrangement(f: &MultiPoly) -> Result<(usize, u32, MultiPoly, MultiPoly)> {
    let mut candidates: Vec<(usize, u32, MultiPoly, MultiPoly)> = (0..3)
        .filter_map(|v| f.split_pure_power(v).map(|(k, c, r)| (v, k, c, r)))
        .collect();
    // constant coefficients first, smallest in absolute value
    candidates.sort_by_key(|(v, _, c, _)| match c.degree() {
        Some(0) => (0, c.terms()[0].0.magnitude().clone(), *v),
        _ => (1, Default::default(), *v),
    });
    candidates
        .into_iter()
        .next()
        .ok_or(Error::NoSearchArrangement)
}

/// Values `v` in `[-b, b]` with `coeff * v^k + rest = target` at the given other coordinates.
fn solve_for(
    coeff: &MultiPoly,
    rest: &MultiPoly,
    target: &Integer,
    k: u32,
    b: i64,
    at: &[i128; 3],
) -> Vec<i128> {
    let in_range = |v: &i128| v.unsigned_abs() <= b as u128;
    let fast = (|| {
        let c = coeff.evaluate_i128(at)?;
        let r = rest.evaluate_i128(at)?;
        let rhs = target.to_i128()?.checked_sub(r)?;
        Some((c, rhs))
    })();
    let roots = |root: Option<i128>| -> Vec<i128> {
        match root {
            None => vec![],
            Some(0) => vec![0],
            Some(r) if k.is_multiple_of(2) => vec![-r, r],
            Some(r) => vec![r],
        }
    };
    let found = match fast {
        Some((0, rhs)) => {
            return if rhs == 0 {
                (-(b as i128)..=b as i128).collect()
            } else {
                vec![]
            }
        }
        Some((c, rhs)) => {
            if rhs % c != 0 {
                return vec![];
            }
            roots(is_kth_power_i128(rhs / c, k))
        }
        None => {
            let big = at.map(Integer::from);
            let c = coeff.evaluate_int(&big);
            let rhs = target - rest.evaluate_int(&big);
            if c.is_zero() {
                return if rhs.is_zero() {
                    (-(b as i128)..=b as i128).collect()
                } else {
                    vec![]
                };
            }
            if !rhs.is_multiple_of(&c) {
                return vec![];
            }
            roots(is_kth_power(&(rhs / c), k).and_then(|r| r.to_i128()))
        }
    };
    found.into_iter().filter(in_range).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::named::*;

    fn pt(x: i64, y: i64, z: i64) -> [Integer; 3] {
        [x, y, z].map(Integer::from)
    }

    #[test]
    fn quartic_has_no_small_solutions() {
        let r = integer_search(&quartic_f(), &Integer::from(1), 100).unwrap();
        assert!(r.solutions.is_empty());
        assert_eq!(r.solved_variable, 1);
    }

    #[test]
    fn quartic_minus_one_contains_the_obvious_point() {
        let r = integer_search(&quartic_f(), &Integer::from(-1), 2).unwrap();
        assert!(r.solutions.contains(&pt(0, 1, 0)));
    }

    #[test]
    fn cubic_has_no_small_solutions() {
        let r = integer_search(&cubic_f(), &Integer::from(1), 100).unwrap();
        assert!(r.solutions.is_empty());
        assert_eq!(r.solved_variable, 1);
    }

    #[test]
    fn vanishing_coefficient_branch() {
        // x y^2 + z^3 + y z^2 = 1 is solved for x; at y = 0, z = 1 every x works
        let (x, y, z) = (MultiPoly::x(), MultiPoly::y(), MultiPoly::z());
        let f = &(&(&x * &y.pow(2)) + &z.pow(3)) + &(&y * &z.pow(2));
        let r = integer_search(&f, &Integer::from(1), 2).unwrap();
        assert_eq!(r.solved_variable, 0);
        assert!(r.solutions.contains(&pt(2, 0, 1)));
        assert!(r.solutions.contains(&pt(0, 0, 1)));
        assert!(r
            .solutions
            .iter()
            .all(|p| num_traits::Signed::abs(&f.evaluate_int(p)) == Integer::from(1)));
    }

    #[test]
    fn no_arrangement() {
        let (x, y, z) = (MultiPoly::x(), MultiPoly::y(), MultiPoly::z());
        let f = &(&(&x * &y) + &(&y * &z)) + &(&z * &x);
        let f = &f + &(&(&x.pow(2) + &y.pow(2)) + &z.pow(2));
        assert_eq!(
            integer_search(&f, &Integer::from(1), 3).unwrap_err(),
            Error::NoSearchArrangement
        );
    }
}
