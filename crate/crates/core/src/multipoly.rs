//! Exact polynomials in `x, y, z` with integer coefficients.
//!
//! Terms are kept sorted in graded lexicographic order (`x > y > z`, highest
//! first) with no zero coefficients and no repeated monomials, so structural
//! equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactarith::{Integer, Rational};

/// Exponents of `x`, `y`, `z`.
pub type Exponents = [u32; 3];

fn total(e: &Exponents) -> u32 {
    e[0] + e[1] + e[2]
}

/// Graded lex, largest first.
fn grlex_desc(a: &Exponents, b: &Exponents) -> Ordering {
    total(b).cmp(&total(a)).then_with(|| b.cmp(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: Vec<(Integer, Exponents)>,
}

/// A one-variable integer polynomial, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Integer>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Integer) -> Integer {
        self.coeffs
            .iter()
            .rev()
            .fold(Integer::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Integer::from(i))
                .collect(),
        )
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::from_terms([(c.into(), [0, 0, 0])])
    }

    pub fn x() -> Self {
        Self::monomial(1, [1, 0, 0])
    }

    pub fn y() -> Self {
        Self::monomial(1, [0, 1, 0])
    }

    pub fn z() -> Self {
        Self::monomial(1, [0, 0, 1])
    }

    pub fn monomial(c: impl Into<Integer>, e: Exponents) -> Self {
        Self::from_terms([(c.into(), e)])
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Integer, Exponents)>) -> Self {
        let mut raw: Vec<(Integer, Exponents)> = terms.into_iter().collect();
        raw.sort_by(|a, b| grlex_desc(&a.1, &b.1));
        let mut out: Vec<(Integer, Exponents)> = Vec::with_capacity(raw.len());
        for (c, e) in raw {
            match out.last_mut() {
                Some((acc, last)) if *last == e => *acc += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        MultiPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Integer, Exponents)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks the canonical-form invariant. Always true for values built through this API.
    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(c, _)| !c.is_zero())
            && self
                .terms
                .windows(2)
                .all(|w| grlex_desc(&w[0].1, &w[1].1) == Ordering::Less)
    }

    pub fn scale(&self, s: &Integer) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(c, e)| (c * s, *e)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(_, e)| total(e))
    }

    /// Highest power of variable `var` (0 = x, 1 = y, 2 = z).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(_, e)| e[var]).max().unwrap_or(0)
    }

    /// `Some(d)` iff every term has total degree `d`. The zero polynomial is
    /// treated as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree().unwrap_or(0);
        self.terms.iter().all(|(_, e)| total(e) == d).then_some(d)
    }

    pub fn partial(&self, var: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(_, e)| e[var] > 0).map(|(c, e)| {
            let mut e2 = *e;
            e2[var] -= 1;
            (c * Integer::from(e[var]), e2)
        }))
    }

    pub fn evaluate(&self, at: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (c, e) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (v, &k) in at.iter().zip(e.iter()) {
                if k > 0 {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn evaluate_int(&self, at: &[Integer; 3]) -> Integer {
        let max = [self.degree_in(0), self.degree_in(1), self.degree_in(2)];
        let powers: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                let mut p = Vec::with_capacity(max[i] as usize + 1);
                p.push(Integer::one());
                for k in 1..=max[i] as usize {
                    let next = &p[k - 1] * &at[i];
                    p.push(next);
                }
                p
            })
            .collect();
        self.terms.iter().fold(Integer::zero(), |acc, (c, e)| {
            acc + c
                * &powers[0][e[0] as usize]
                * &powers[1][e[1] as usize]
                * &powers[2][e[2] as usize]
        })
    }

    /// Machine-integer evaluation; `None` on overflow.
    pub fn evaluate_i128(&self, at: &[i128; 3]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (c, e) in &self.terms {
            let mut t = c.to_i128()?;
            for (v, &k) in at.iter().zip(e.iter()) {
                t = t.checked_mul(v.checked_pow(k)?)?;
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    /// Value at an integer point reduced into `[0, m)`.
    pub fn evaluate_mod(&self, at: &[Integer; 3], m: u64) -> u64 {
        assert!(m >= 1, "modulus must be positive");
        let reduced: [u64; 3] = std::array::from_fn(|i| reduce(&at[i], m));
        self.evaluate_mod_u64(&reduced, m)
    }

    /// Modular evaluation at residues already reduced into `[0, m)`.
    pub fn evaluate_mod_u64(&self, at: &[u64; 3], m: u64) -> u64 {
        let mm = m as u128;
        let mut acc: u128 = 0;
        for (c, e) in &self.terms {
            let mut t = reduce(c, m) as u128;
            for (v, &k) in at.iter().zip(e.iter()) {
                for _ in 0..k {
                    t = t * (*v as u128) % mm;
                }
            }
            acc = (acc + t) % mm;
        }
        acc as u64
    }

    /// Restriction to the line through `point` in direction of variable `var`:
    /// `t -> self(point with coordinate var replaced by t)`.
    pub fn restrict_to_line(&self, var: usize, point: &[Integer; 3]) -> UniPoly {
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![Integer::zero(); deg + 1];
        for (c, e) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if i != var && k > 0 {
                    t *= num_traits::pow(point[i].clone(), k as usize);
                }
            }
            coeffs[e[var] as usize] += t;
        }
        UniPoly::new(coeffs)
    }

    /// Writes `self = coeff * v^k + rest` with neither `coeff` nor `rest`
    /// involving `v`, if `v` occurs with a single exponent `k >= 1`.
    pub fn split_pure_power(&self, var: usize) -> Option<(u32, MultiPoly, MultiPoly)> {
        let mut k = None;
        let mut coeff = Vec::new();
        let mut rest = Vec::new();
        for (c, e) in &self.terms {
            if e[var] == 0 {
                rest.push((c.clone(), *e));
                continue;
            }
            match k {
                None => k = Some(e[var]),
                Some(k0) if k0 != e[var] => return None,
                _ => {}
            }
            let mut e2 = *e;
            e2[var] = 0;
            coeff.push((c.clone(), e2));
        }
        k.map(|k| (k, MultiPoly::from_terms(coeff), MultiPoly::from_terms(rest)))
    }
}

fn reduce(c: &Integer, m: u64) -> u64 {
    c.mod_floor(&Integer::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &-rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(c, e)| (-c, *e)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut prod = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &rhs.terms {
                prod.push((a * b, [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]));
            }
        }
        MultiPoly::from_terms(prod)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let mono: String = ["x", "y", "z"]
                .iter()
                .zip(e.iter())
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// Claim that `sum_i scalar_i * prod_j factor_ij` is the zero polynomial.
#[derive(Debug, Clone, Default)]
pub struct IdentityClaim {
    pub summands: Vec<(Integer, Vec<MultiPoly>)>,
}

impl IdentityClaim {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, scalar: impl Into<Integer>, factors: Vec<MultiPoly>) -> Self {
        self.summands.push((scalar.into(), factors));
        self
    }

    /// Full expansion of the left-hand side.
    pub fn expand(&self) -> MultiPoly {
        self.summands
            .iter()
            .fold(MultiPoly::zero(), |acc, (s, fs)| {
                let prod = fs.iter().fold(MultiPoly::constant(1), |p, q| &p * q);
                &acc + &prod.scale(s)
            })
    }
}

/// Exact check of an identity claim by expansion.
pub fn verify_identity(claim: &IdentityClaim) -> bool {
    claim.expand().is_zero()
}

/// The polynomials that appear in the two bundled instances.
pub mod named {
    use super::MultiPoly;

    fn p(terms: &[(i64, [u32; 3])]) -> MultiPoly {
        MultiPoly::from_terms(terms.iter().map(|&(c, e)| (c.into(), e)))
    }

    /// `-2x^4 - y^4 + 18z^4`
    pub fn quartic_f() -> MultiPoly {
        p(&[(-2, [4, 0, 0]), (-1, [0, 4, 0]), (18, [0, 0, 4])])
    }

    /// `-28x^2 - 36xy + 7y^2 + 72z^2`
    pub fn quartic_g() -> MultiPoly {
        p(&[
            (-28, [2, 0, 0]),
            (-36, [1, 1, 0]),
            (7, [0, 2, 0]),
            (72, [0, 0, 2]),
        ])
    }

    /// `-25x^2 + 16xy - 22y^2 + 81z^2`
    pub fn quartic_h() -> MultiPoly {
        p(&[
            (-25, [2, 0, 0]),
            (16, [1, 1, 0]),
            (-22, [0, 2, 0]),
            (81, [0, 0, 2]),
        ])
    }

    /// `4x - z`
    pub fn cubic_linear() -> MultiPoly {
        p(&[(4, [1, 0, 0]), (-1, [0, 0, 1])])
    }

    /// `16x^2 + 20xz + 7z^2`
    pub fn cubic_quadratic() -> MultiPoly {
        p(&[(16, [2, 0, 0]), (20, [1, 0, 1]), (7, [0, 0, 2])])
    }

    /// `y^2 z - (4x - z)(16x^2 + 20xz + 7z^2)`
    pub fn cubic_f() -> MultiPoly {
        let y2z = p(&[(1, [0, 2, 1])]);
        &y2z - &(&cubic_linear() * &cubic_quadratic())
    }
}
