//! Curves `v^2 = u^3 + b u^2 + c u + d` over Q: reduction of a plane cubic
//! `y^2 z = c3 x^3 + c2 x^2 z + c1 x z^2 + c0 z^3` to this shape, the chord and
//! tangent group law, and Nagell-Lutz enumeration of rational torsion.
//!
//! Only torsion is computed. Rank is never attempted.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactarith::{factor, is_kth_power, Integer, Rational};

/// Largest possible order of a rational torsion point (Mazur).
pub const MAX_TORSION_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
    /// Leading coefficient `c3` of the source cubic; `u = c3 x / z`, `v = c3 y / z`.
    pub scale: Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Rational, Rational),
}

impl CurvePoint {
    pub fn affine(u: i64, v: i64) -> Self {
        CurvePoint::Affine(
            Rational::from_integer(u.into()),
            Rational::from_integer(v.into()),
        )
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine(u, v) => write!(f, "({u}, {v})"),
        }
    }
}

impl WeierstrassCurve {
    /// `v^2 = u^3 + b u^2 + c u + d`, rejected if singular.
    pub fn new(b: Integer, c: Integer, d: Integer) -> Result<Self> {
        let e = WeierstrassCurve {
            b,
            c,
            d,
            scale: Integer::one(),
        };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    /// Discriminant of the cubic `u^3 + b u^2 + c u + d`.
    pub fn discriminant(&self) -> Integer {
        let (b, c, d) = (&self.b, &self.c, &self.d);
        b * b * c * c - c * c * c * 4 - b * b * b * d * 4 - d * d * 27 + b * c * d * 18
    }

    fn rhs(&self, u: &Rational) -> Rational {
        let q = |n: &Integer| Rational::from_integer(n.clone());
        ((u + q(&self.b)) * u + q(&self.c)) * u + q(&self.d)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(u, v) => v * v == self.rhs(u),
        }
    }

    /// Projective point `(x : y : z)` on the source cubic corresponding to `p`.
    pub fn to_source(&self, p: &CurvePoint) -> [Rational; 3] {
        match p {
            CurvePoint::Infinity => [Rational::zero(), Rational::one(), Rational::zero()],
            CurvePoint::Affine(u, v) => [
                u.clone(),
                v.clone(),
                Rational::from_integer(self.scale.clone()),
            ],
        }
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(u, v) => CurvePoint::Affine(u.clone(), -v),
        }
    }

    pub fn add_points(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (u1, v1, u2, v2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(u1, v1), CurvePoint::Affine(u2, v2)) => (u1, v1, u2, v2),
        };
        let b = Rational::from_integer(self.b.clone());
        let slope = if u1 == u2 {
            if (v1 + v2).is_zero() {
                return CurvePoint::Infinity;
            }
            let c = Rational::from_integer(self.c.clone());
            let three = Rational::from_integer(3.into());
            let two = Rational::from_integer(2.into());
            (three * u1 * u1 + &two * &b * u1 + c) / (two * v1)
        } else {
            (v2 - v1) / (u2 - u1)
        };
        let u3 = &slope * &slope - b - u1 - u2;
        let v3 = -(&slope * (&u3 - u1) + v1);
        CurvePoint::Affine(u3, v3)
    }

    /// `n P`, by repeated addition.
    pub fn multiple(&self, p: &CurvePoint, n: usize) -> CurvePoint {
        (0..n).fold(CurvePoint::Infinity, |acc, _| self.add_unchecked(&acc, p))
    }

    /// Order of `p` if it is at most [`MAX_TORSION_ORDER`].
    pub fn torsion_order(&self, p: &CurvePoint) -> Option<usize> {
        let mut acc = p.clone();
        for n in 1..=MAX_TORSION_ORDER {
            if acc == CurvePoint::Infinity {
                return Some(n);
            }
            acc = self.add_unchecked(&acc, p);
        }
        None
    }
}

/// Reduces `y^2 z = c3 x^3 + c2 x^2 z + c1 x z^2 + c0 z^3` to
/// `v^2 = u^3 + c2 u^2 + c1 c3 u + c0 c3^2` via `u = c3 x / z`, `v = c3 y / z`.
pub fn to_weierstrass(
    c3: &Integer,
    c2: &Integer,
    c1: &Integer,
    c0: &Integer,
) -> Result<WeierstrassCurve> {
    if c3.is_zero() {
        return Err(Error::InvalidArgument(
            "leading coefficient c3 must be nonzero".into(),
        ));
    }
    let mut e = WeierstrassCurve::new(c2.clone(), c1 * c3, c0 * c3 * c3)?;
    e.scale = c3.clone();
    Ok(e)
}

/// Isomorphism type of a finite abelian group `Z/m` or `Z/2 x Z/2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupType {
    Cyclic(usize),
    TwoByEven(usize),
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::Cyclic(1) => write!(f, "0"),
            GroupType::Cyclic(n) => write!(f, "Z/{n}"),
            GroupType::TwoByEven(n) => write!(f, "Z/2 x Z/{n}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TorsionSubgroup {
    pub group: GroupType,
    pub generators: Vec<CurvePoint>,
    /// All affine torsion points, sorted.
    pub points: Vec<CurvePoint>,
    /// Nagell-Lutz candidates that turned out to have infinite order.
    pub rejected: Vec<CurvePoint>,
}

/// All `v >= 0` with `v^2 | n`, for nonzero `n`.
fn square_divisor_roots(n: &Integer) -> Result<Vec<Integer>> {
    let mut roots = vec![Integer::one()];
    for (p, e) in factor(n)? {
        let mut next = Vec::new();
        for r in &roots {
            let mut pk = Integer::one();
            for _ in 0..=e / 2 {
                next.push(r * &pk);
                pk *= &p;
            }
        }
        roots = next;
    }
    roots.sort();
    Ok(roots)
}

/// Integer roots of the monic cubic `u^3 + b u^2 + c u + d`.
fn integer_roots(b: &Integer, c: &Integer, d: &Integer) -> Result<Vec<Integer>> {
    let eval = |u: &Integer| ((u + b) * u + c) * u + d;
    let mut out = BTreeSet::new();
    if d.is_zero() {
        out.insert(Integer::zero());
        // remaining roots satisfy u^2 + b u + c = 0
        let disc: Integer = b * b - c * 4;
        if let Some(s) = (!disc.is_negative())
            .then(|| is_kth_power(&disc, 2))
            .flatten()
        {
            for r in [-b + &s, -b - &s] {
                if r.is_even() {
                    out.insert(r / 2);
                }
            }
        }
    } else {
        for r in divisors(d)? {
            for u in [r.clone(), -r] {
                if eval(&u).is_zero() {
                    out.insert(u);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn divisors(n: &Integer) -> Result<Vec<Integer>> {
    let mut divs = vec![Integer::one()];
    for (p, e) in factor(n)? {
        let mut next = Vec::new();
        for r in &divs {
            let mut pk = Integer::one();
            for _ in 0..=e {
                next.push(r * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    Ok(divs)
}

/// Rational torsion subgroup by Nagell-Lutz: torsion points are integral with
/// `v = 0` or `v^2 | disc`. Each candidate is confirmed by computing
/// multiples up to order 12.
pub fn torsion_subgroup(e: &WeierstrassCurve) -> Result<TorsionSubgroup> {
    let disc = e.discriminant();
    let mut candidates = BTreeSet::new();
    for v in std::iter::once(Integer::zero()).chain(square_divisor_roots(&disc)?) {
        for u in integer_roots(&e.b, &e.c, &(&e.d - &v * &v))? {
            let (uq, vq) = (Rational::from_integer(u), Rational::from_integer(v.clone()));
            candidates.insert(CurvePoint::Affine(uq.clone(), vq.clone()));
            candidates.insert(CurvePoint::Affine(uq, -vq));
        }
    }
    let mut points = Vec::new();
    let mut rejected = Vec::new();
    let mut orders = Vec::new();
    for p in candidates {
        debug_assert!(e.contains(&p));
        match e.torsion_order(&p) {
            Some(n) => {
                orders.push((n, p.clone()));
                points.push(p);
            }
            None => rejected.push(p),
        }
    }
    let size = points.len() + 1;
    let two_torsion: Vec<&CurvePoint> = orders
        .iter()
        .filter(|(n, _)| *n == 2)
        .map(|(_, p)| p)
        .collect();
    let max_order = orders.iter().map(|(n, _)| *n).max().unwrap_or(1);
    let (group, generators) = if two_torsion.len() == 3 {
        let big = orders
            .iter()
            .rev()
            .find(|(n, _)| *n == max_order)
            .map(|(_, p)| p.clone())
            .unwrap();
        let span: Vec<CurvePoint> = (1..=max_order).map(|k| e.multiple(&big, k)).collect();
        let other = two_torsion
            .iter()
            .find(|p| !span.contains(p))
            .map(|p| (*p).clone());
        (
            GroupType::TwoByEven(size / 2),
            std::iter::once(big).chain(other).collect(),
        )
    } else {
        let generators = orders
            .iter()
            .rev()
            .find(|(n, _)| *n == size)
            .map(|(_, p)| vec![p.clone()])
            .unwrap_or_default();
        (GroupType::Cyclic(size), generators)
    };
    Ok(TorsionSubgroup {
        group,
        generators,
        points,
        rejected,
    })
}
