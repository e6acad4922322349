//! Hilbert symbols over Q, local invariants of quaternion algebras `(a, b)`,
//! reciprocity checking, and a brute-force solubility oracle that decides
//! whether `z^2 = a x^2 + b y^2` has a nontrivial local solution without using
//! the symbol formulas.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactarith::{
    is_prime, jacobi, prime_support, valuation_unchecked, vp, Integer, Rational,
};

/// A rational prime, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(Integer);

impl Prime {
    pub fn new(p: impl Into<Integer>) -> Result<Self> {
        let p = p.into();
        if is_prime(&p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }

    pub(crate) fn new_unchecked(p: Integer) -> Self {
        Prime(p)
    }

    pub fn get(&self) -> &Integer {
        &self.0
    }

    pub fn is_two(&self) -> bool {
        self.0 == Integer::from(2u8)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A place of Q. The real place sorts before every prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Finite(Prime),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }

    /// Parses `"real"`, `"inf"` or a decimal prime.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "real" | "inf" | "infinity" => Ok(Place::Real),
            t => {
                let p: Integer = t
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("not a place: {s:?}")))?;
                Prime::new(p).map(Place::Finite)
            }
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Finite(p) => p.fmt(f),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Element of `(1/2)Z/Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum LocalInvariant {
    #[default]
    Zero,
    Half,
}

impl LocalInvariant {
    pub fn from_symbol(s: i8) -> Self {
        if s == -1 {
            LocalInvariant::Half
        } else {
            LocalInvariant::Zero
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LocalInvariant::Zero => "0",
            LocalInvariant::Half => "1/2",
        }
    }
}

impl Add for LocalInvariant {
    type Output = LocalInvariant;
    fn add(self, rhs: LocalInvariant) -> LocalInvariant {
        if self == rhs {
            LocalInvariant::Zero
        } else {
            LocalInvariant::Half
        }
    }
}

impl std::iter::Sum for LocalInvariant {
    fn sum<I: Iterator<Item = LocalInvariant>>(iter: I) -> Self {
        iter.fold(LocalInvariant::Zero, Add::add)
    }
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for LocalInvariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Replaces `n/d` by the integer `n*d`, which differs by the square `d^2`.
fn square_cleared(q: &Rational) -> Integer {
    q.numer() * q.denom()
}

/// `(t - 1)/2 mod 2` for odd `t`.
fn eps(t: &Integer) -> u8 {
    (t.mod_floor(&Integer::from(4u8)).to_u8().unwrap() == 3) as u8
}

/// `(t^2 - 1)/8 mod 2` for odd `t`.
fn omega(t: &Integer) -> u8 {
    matches!(t.mod_floor(&Integer::from(8u8)).to_u8().unwrap(), 3 | 5) as u8
}

/// Hilbert symbol of two nonzero integers at a place.
pub fn hilbert_symbol_int(a: &Integer, b: &Integer, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSymbolEntry);
    }
    let p = match place {
        Place::Real => {
            return Ok(if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            })
        }
        Place::Finite(p) => p,
    };
    let va = valuation_unchecked(a, p.get());
    let vb = valuation_unchecked(b, p.get());
    let (alpha, u) = (va.valuation.unwrap(), va.unit);
    let (beta, v) = (vb.valuation.unwrap(), vb.unit);
    if p.is_two() {
        let e = eps(&u) * eps(&v) + (alpha % 2) as u8 * omega(&v) + (beta % 2) as u8 * omega(&u);
        return Ok(if e.is_multiple_of(2) { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if alpha % 2 == 1 && beta % 2 == 1 && eps(p.get()) == 1 {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= jacobi(&u, p.get())?;
    }
    if alpha % 2 == 1 {
        s *= jacobi(&v, p.get())?;
    }
    Ok(s)
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSymbolEntry);
    }
    hilbert_symbol_int(&square_cleared(a), &square_cleared(b), place)
}

pub fn local_invariant(a: &Rational, b: &Rational, place: &Place) -> Result<LocalInvariant> {
    hilbert_symbol(a, b, place).map(LocalInvariant::from_symbol)
}

/// Local invariants of `(a, b)` at every place where it can be nonzero, with their sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    pub invariants: Vec<(Place, LocalInvariant)>,
    pub sum: LocalInvariant,
}

impl InvariantProfile {
    pub fn at(&self, place: &Place) -> Option<LocalInvariant> {
        self.invariants
            .iter()
            .find(|(p, _)| p == place)
            .map(|(_, i)| *i)
    }
}

/// Places where `(a, b)` may ramify: the real place, 2, and primes dividing `a b`.
pub fn relevant_places(a: &Integer, b: &Integer) -> Result<Vec<Place>> {
    let mut primes: BTreeSet<Integer> = prime_support(&[a.clone(), b.clone()])?;
    primes.insert(Integer::from(2u8));
    Ok(std::iter::once(Place::Real)
        .chain(
            primes
                .into_iter()
                .map(|p| Place::Finite(Prime::new_unchecked(p))),
        )
        .collect())
}

/// Invariant profile of the integer pair `(a, b)`.
pub fn integer_profile(a: &Integer, b: &Integer) -> Result<InvariantProfile> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSymbolEntry);
    }
    let invariants = relevant_places(a, b)?
        .into_iter()
        .map(|pl| {
            let s = hilbert_symbol_int(a, b, &pl)?;
            Ok((pl, LocalInvariant::from_symbol(s)))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = invariants.iter().map(|(_, i)| *i).sum();
    Ok(InvariantProfile { invariants, sum })
}

/// Sum of all local invariants of `(a, b)`; by reciprocity this is always zero.
pub fn reciprocity_defect(a: &Rational, b: &Rational) -> Result<InvariantProfile> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSymbolEntry);
    }
    integer_profile(&square_cleared(a), &square_cleared(b))
}

/// Outcome of the brute-force solubility oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    Soluble,
    Insoluble,
    Inconclusive,
}

/// Default search depth for the oracle at `p`: `2 v_p(4ab) + 6`, computed on
/// the square-reduced entries.
pub fn oracle_default_depth(a: &Integer, b: &Integer, p: &Integer) -> u32 {
    let v = vp(&(a * b * 4), p).unwrap_or(0);
    2 * v as u32 + 6
}

/// Decides whether `z^2 = a x^2 + b y^2` has a nontrivial solution at `place`
/// by residue enumeration with Newton certificates.
///
/// At a prime `p`, candidate primitive solutions are enumerated level by level
/// modulo `p, p^2, ...` in three affine charts (first unit coordinate scaled to 1).
/// A class is certified when some partial derivative `D` of the form satisfies
/// `v(F) > 2 v(D)` at its representative; the search answers "insoluble" once
/// no class survives some level.
pub fn solubility_oracle(
    a: &Rational,
    b: &Rational,
    place: &Place,
    depth: Option<u32>,
) -> Result<OracleVerdict> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSymbolEntry);
    }
    let p = match place {
        Place::Real => {
            let soluble = a.is_positive() || b.is_positive();
            return Ok(if soluble {
                OracleVerdict::Soluble
            } else {
                OracleVerdict::Insoluble
            });
        }
        Place::Finite(p) => p.get().clone(),
    };
    let a = strip_square_powers(&square_cleared(a), &p);
    let b = strip_square_powers(&square_cleared(b), &p);
    let depth = depth.unwrap_or_else(|| oracle_default_depth(&a, &b, &p));
    Ok(ConicSearch::new(a, b, p).run(depth))
}

/// Divides out the largest even power of `p`.
fn strip_square_powers(n: &Integer, p: &Integer) -> Integer {
    let v = valuation_unchecked(n, p);
    let k = v.valuation.unwrap();
    let mut out = v.unit;
    if k % 2 == 1 {
        out *= p;
    }
    out
}

fn free_coordinates(chart: usize) -> [usize; 2] {
    match chart {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

struct ConicSearch {
    a: Integer,
    b: Integer,
    p: Integer,
}

impl ConicSearch {
    fn new(a: Integer, b: Integer, p: Integer) -> Self {
        ConicSearch { a, b, p }
    }

    fn form(&self, v: &[Integer; 3]) -> Integer {
        &v[2] * &v[2] - &self.a * &v[0] * &v[0] - &self.b * &v[1] * &v[1]
    }

    fn gradient(&self, v: &[Integer; 3]) -> [Integer; 3] {
        [-&self.a * &v[0] * 2, -&self.b * &v[1] * 2, &v[2] * 2]
    }

    fn certified(&self, v: &[Integer; 3]) -> bool {
        let fv = match vp(&self.form(v), &self.p) {
            None => return true,
            Some(k) => k,
        };
        self.gradient(v)
            .iter()
            .any(|d| vp(d, &self.p).is_some_and(|dv| fv > 2 * dv))
    }

    fn run(&self, depth: u32) -> OracleVerdict {
        // chart c: coordinates before c are divisible by p, coordinate c is 1
        let mut live: Vec<(usize, [Integer; 3])> = Vec::new();
        let p = &self.p;
        let psmall = p.to_u64().expect("oracle prime fits in u64");
        for chart in 0..3 {
            let free = free_coordinates(chart);
            for r0 in 0..psmall {
                for r1 in 0..psmall {
                    let mut v = [Integer::zero(), Integer::zero(), Integer::zero()];
                    v[chart] = Integer::one();
                    v[free[0]] = Integer::from(r0);
                    v[free[1]] = Integer::from(r1);
                    if free.iter().any(|&i| i < chart && !v[i].is_zero()) {
                        continue;
                    }
                    live.push((chart, v));
                }
            }
        }
        let mut modulus = p.clone();
        for _level in 1..=depth {
            live.retain(|(_, v)| self.form(v).is_multiple_of(&modulus));
            if live.is_empty() {
                return OracleVerdict::Insoluble;
            }
            if live.iter().any(|(_, v)| self.certified(v)) {
                return OracleVerdict::Soluble;
            }
            let mut next = Vec::with_capacity(live.len() * (psmall * psmall) as usize);
            for (chart, v) in &live {
                let free = free_coordinates(*chart);
                for t0 in 0..psmall {
                    for t1 in 0..psmall {
                        let mut w = v.clone();
                        w[free[0]] += &modulus * t0;
                        w[free[1]] += &modulus * t1;
                        next.push((*chart, w));
                    }
                }
            }
            live = next;
            modulus *= p;
        }
        OracleVerdict::Inconclusive
    }
}
