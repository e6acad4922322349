//! Certified p-adic solubility of affine equations `f(x, y, z) = target`.
//!
//! Solutions are found by residue enumeration modulo `p, p^2, ...` and
//! certified by the Newton criterion `v_p(G(a)) > 2 v_p(G'(a))` along a
//! coordinate line. A "no" answer is only returned after every residue class
//! at some level has been ruled out, which is sound over the p-adic integers.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactarith::{vp, Integer, Rational};
use crate::localsymbols::Prime;
use crate::multipoly::{MultiPoly, UniPoly};

/// Witness that `poly` has a root in `Z_p` congruent to `approximation`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HenselCertificate {
    #[serde(serialize_with = "crate::cli::json::ser_int")]
    pub p: Integer,
    #[serde(serialize_with = "crate::cli::json::ser_int")]
    pub approximation: Integer,
    /// The root is congruent to `approximation` modulo `p^modulus_exponent`;
    /// `None` when `approximation` is an exact root.
    pub modulus_exponent: Option<u64>,
    /// `v_p(F(a))`, `None` for an exact root.
    pub value_valuation: Option<u64>,
    pub derivative_valuation: u64,
    #[serde(serialize_with = "crate::cli::json::ser_int_vec")]
    pub poly: Vec<Integer>,
}

impl HenselCertificate {
    /// Re-checks the certificate from scratch.
    pub fn replay(&self) -> bool {
        let Ok(p) = Prime::new(self.p.clone()) else {
            return false;
        };
        hensel_liftable_1var(&UniPoly::new(self.poly.clone()), &self.approximation, &p).as_ref()
            == Some(self)
    }
}

/// Newton criterion for a single-variable polynomial.
pub fn hensel_liftable_1var(f: &UniPoly, a: &Integer, p: &Prime) -> Option<HenselCertificate> {
    if f.is_zero() {
        return None;
    }
    let value = f.eval(a);
    let deriv = f.derivative().eval(a);
    let dv = vp(&deriv, p.get())?;
    let fv = vp(&value, p.get());
    let ok = match fv {
        None => true,
        Some(k) => k > 2 * dv,
    };
    ok.then(|| HenselCertificate {
        p: p.get().clone(),
        approximation: a.clone(),
        modulus_exponent: fv.map(|k| k - dv),
        value_valuation: fv,
        derivative_valuation: dv,
        poly: f.coeffs.clone(),
    })
}

/// A residue class of affine triples that contains a certified p-adic solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftedWitness {
    /// Representative in `[0, p^level)^3`.
    #[serde(serialize_with = "crate::cli::json::ser_int_array")]
    pub residue: [Integer; 3],
    pub level: u32,
    /// Coordinate (0 = x, 1 = y, 2 = z) along which the certificate lifts.
    pub variable: usize,
    pub certificate: HenselCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
// built once per check, so the witness stays unboxed
#[allow(clippy::large_enum_variant)]
pub enum SolubilityAnswer {
    Yes {
        witness: LiftedWitness,
    },
    /// No solutions exist modulo `p^depth`.
    No {
        depth: u32,
    },
    Inconclusive {
        depth: u32,
    },
}

impl SolubilityAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, SolubilityAnswer::Yes { .. })
    }
}

/// Default residue depth: 8 at `p = 2`, 4 at odd primes.
pub fn default_depth(p: &Prime) -> u32 {
    if p.is_two() {
        8
    } else {
        4
    }
}

/// Breadth-first residue search for solutions of `f = target` in `Z_p^3`.
///
/// Classes are visited level by level in lexicographic order of their
/// representatives in `[0, p^k)`, so the reported witness is deterministic.
pub fn padic_solutions_exist(
    f: &MultiPoly,
    target: &Integer,
    p: &Prime,
    maxdepth: u32,
) -> SolubilityAnswer {
    let g = f - &MultiPoly::constant(target.clone());
    let partials = [g.partial(0), g.partial(1), g.partial(2)];
    let pp = p.get();
    let digits: Vec<Integer> = {
        let mut out = Vec::new();
        let mut r = Integer::zero();
        while &r < pp {
            out.push(r.clone());
            r += 1;
        }
        out
    };
    let mut live: Vec<[Integer; 3]> = vec![[Integer::zero(), Integer::zero(), Integer::zero()]];
    let mut step = Integer::one();
    for level in 1..=maxdepth.max(1) {
        let modulus = &step * pp;
        let mut next = Vec::new();
        for base in &live {
            for d0 in &digits {
                for d1 in &digits {
                    for d2 in &digits {
                        let r = [
                            &base[0] + &step * d0,
                            &base[1] + &step * d1,
                            &base[2] + &step * d2,
                        ];
                        let value = g.evaluate_int(&r);
                        if value.is_multiple_of(&modulus) {
                            next.push((r, value));
                        }
                    }
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        for (r, value) in &next {
            if let Some(w) = certify(&g, &partials, r, value, p, level) {
                return SolubilityAnswer::Yes { witness: w };
            }
        }
        let next: Vec<[Integer; 3]> = next.into_iter().map(|(r, _)| r).collect();
        if next.is_empty() {
            return SolubilityAnswer::No { depth: level };
        }
        live = next;
        step = modulus;
    }
    SolubilityAnswer::Inconclusive {
        depth: maxdepth.max(1),
    }
}

fn certify(
    g: &MultiPoly,
    partials: &[MultiPoly; 3],
    r: &[Integer; 3],
    value: &Integer,
    p: &Prime,
    level: u32,
) -> Option<LiftedWitness> {
    let fv = vp(value, p.get());
    for (var, d) in partials.iter().enumerate() {
        let Some(dv) = vp(&d.evaluate_int(r), p.get()) else {
            continue;
        };
        if fv.is_none_or(|k| k > 2 * dv) {
            let line = g.restrict_to_line(var, r);
            let certificate = hensel_liftable_1var(&line, &r[var], p)?;
            return Some(LiftedWitness {
                residue: r.clone(),
                level,
                variable: var,
                certificate,
            });
        }
    }
    None
}

/// Re-derives a lifted witness from the equation.
pub fn replay_witness(f: &MultiPoly, target: &Integer, w: &LiftedWitness) -> bool {
    let g = f - &MultiPoly::constant(target.clone());
    w.certificate.replay()
        && g.restrict_to_line(w.variable, &w.residue).coeffs == w.certificate.poly
        && w.certificate.approximation == w.residue[w.variable]
}

/// Checks `f(w) = target` exactly and returns the primes at which `w` fails
/// to be a p-adic integer point (those dividing a coordinate denominator).
pub fn verify_rational_witness(
    w: &[Rational; 3],
    f: &MultiPoly,
    target: &Integer,
) -> Result<BTreeSet<Integer>> {
    let value = f.evaluate(w);
    if value != Rational::from_integer(target.clone()) {
        return Err(Error::WitnessMismatch {
            value: crate::exactarith::rational_to_string(&value),
            target: target.to_string(),
        });
    }
    let mut bad = BTreeSet::new();
    for c in w {
        for (p, _) in crate::exactarith::factor(c.denom())? {
            bad.insert(p);
        }
    }
    Ok(bad)
}
