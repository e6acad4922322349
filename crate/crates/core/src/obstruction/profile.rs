use num_traits::Zero;
use serde::Serialize;

use super::QuaternionAlgebraSpec;
use crate::cli::json::{ser_int, ser_int_array};
use crate::error::{Error, Result};
use crate::exactarith::{prime_support, Integer};
use crate::localsymbols::{
    hilbert_symbol_int, integer_profile, InvariantProfile, LocalInvariant, Place, Prime,
};
use crate::multipoly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointProfile {
    #[serde(serialize_with = "ser_int_array")]
    pub point: [Integer; 3],
    #[serde(serialize_with = "ser_int")]
    pub a: Integer,
    #[serde(serialize_with = "ser_int")]
    pub b: Integer,
    #[serde(flatten)]
    pub profile: InvariantProfile,
}

/// Local invariants of the algebra at an integer point: the real place and every prime dividing `2ab`.
pub fn point_invariant_profile(
    alg: &QuaternionAlgebraSpec,
    p: &[Integer; 3],
) -> Result<PointProfile> {
    let (a, b) = alg.evaluate(p);
    if a.is_zero() {
        return Err(Error::OnRamificationLocus("first"));
    }
    if b.is_zero() {
        return Err(Error::OnRamificationLocus("second"));
    }
    let profile = integer_profile(&a, &b)?;
    Ok(PointProfile {
        point: p.clone(),
        a,
        b,
        profile,
    })
}

/// Invariants at the odd primes `p | ab` with `p` not dividing `f(P)`.
///
/// At such primes `P` reduces into the complement of the curve, where the
/// algebra should be unramified; any nonzero entry is a violation.
pub fn odd_place_check(
    f: &MultiPoly,
    alg: &QuaternionAlgebraSpec,
    p: &[Integer; 3],
) -> Result<Vec<(Integer, LocalInvariant)>> {
    let (a, b) = alg.evaluate(p);
    if a.is_zero() || b.is_zero() {
        return Err(Error::OnRamificationLocus(if a.is_zero() {
            "first"
        } else {
            "second"
        }));
    }
    let fp = super::eval_fast(f, p);
    let two = Integer::from(2u8);
    let mut out = Vec::new();
    for q in prime_support(&[a.clone(), b.clone()])? {
        if q == two || (&fp % &q).is_zero() {
            continue;
        }
        let place = Place::Finite(Prime::new_unchecked(q.clone()));
        out.push((
            q,
            LocalInvariant::from_symbol(hilbert_symbol_int(&a, &b, &place)?),
        ));
    }
    Ok(out)
}
