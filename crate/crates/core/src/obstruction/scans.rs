use num_integer::Integer as _;
use num_traits::Signed;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{odd_place_check, step_rng, ObstructionInstance, QuaternionAlgebraSpec};
use crate::cli::json::{ser_int, ser_int_array, ser_points};
use crate::error::{Error, Result};
use crate::exactarith::Integer;
use crate::localsymbols::LocalInvariant;
use crate::multipoly::MultiPoly;

/// Radius of the integer ball used to approximate real directions.
pub const REAL_SCAN_RADIUS: i64 = 10_000;
/// A point is dropped when some entry has `|value| * 10^6 < |P|^deg`.
pub const NEAR_DIVISOR_FACTOR: u64 = 1_000_000;
/// At most this many example points are kept in a report.
pub const MAX_EXAMPLES: usize = 20;

const REAL_STREAM: u64 = 1;
const ODD_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealScan {
    pub status: &'static str,
    pub samples: usize,
    pub near_divisor: usize,
    pub violations: usize,
    #[serde(serialize_with = "ser_points")]
    pub examples: Vec<[Integer; 3]>,
}

impl RealScan {
    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

/// Samples real directions and flags those where both entries are negative.
///
/// Directions are integer points of the ball of radius [`REAL_SCAN_RADIUS`],
/// which are rational approximations of uniformly distributed points of the
/// sphere. Points close to the zero set of an entry are discarded since the
/// sign there is not meaningful as evidence.
pub fn real_unramified_scan(
    alg: &QuaternionAlgebraSpec,
    nsamples: usize,
    seed: u64,
) -> Result<RealScan> {
    if nsamples == 0 {
        return Err(Error::InvalidArgument(
            "real scan needs at least one sample".into(),
        ));
    }
    let mut rng = step_rng(seed, REAL_STREAM);
    let r = REAL_SCAN_RADIUS;
    let mut points = Vec::with_capacity(nsamples);
    while points.len() < nsamples {
        let p: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-r..=r));
        let norm: i64 = p.iter().map(|c| c * c).sum();
        if norm == 0 || norm > r * r {
            continue;
        }
        points.push(p);
    }
    let outcomes: Vec<Option<bool>> = points
        .par_iter()
        .map(|p| {
            let pt = p.map(Integer::from);
            let norm = Integer::from(p.iter().map(|c| c * c).sum::<i64>());
            let (a, b) = alg.evaluate(&pt);
            let near = |v: &Integer, poly: &MultiPoly| {
                let d = poly.homogeneous_degree().unwrap_or(0) / 2;
                v.abs() * NEAR_DIVISOR_FACTOR < num_traits::pow(norm.clone(), d as usize)
            };
            if near(&a, alg.first()) || near(&b, alg.second()) {
                None
            } else {
                Some(a.is_negative() && b.is_negative())
            }
        })
        .collect();
    let mut scan = RealScan {
        status: "sampled, not proven",
        samples: nsamples,
        near_divisor: 0,
        violations: 0,
        examples: vec![],
    };
    for (p, o) in points.iter().zip(outcomes) {
        match o {
            None => scan.near_divisor += 1,
            Some(true) => {
                scan.violations += 1;
                if scan.examples.len() < MAX_EXAMPLES {
                    scan.examples.push(p.map(Integer::from));
                }
            }
            Some(false) => {}
        }
    }
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddViolation {
    #[serde(serialize_with = "ser_int_array")]
    pub point: [Integer; 3],
    #[serde(serialize_with = "ser_int")]
    pub prime: Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddPlaceScan {
    pub status: &'static str,
    pub samples: usize,
    pub bound: u64,
    /// Number of (point, odd prime) pairs whose invariant was computed.
    pub checked: usize,
    pub skipped_on_locus: usize,
    /// Cofactors that trial division could not split; their samples are skipped.
    pub skipped_unfactored: Vec<String>,
    pub violations: Vec<OddViolation>,
}

impl OddPlaceScan {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks unramifiedness at odd primes on random primitive points with coordinates in `[-bound, bound]`.
pub fn odd_place_scan(
    inst: &ObstructionInstance,
    nsamples: usize,
    bound: u64,
    seed: u64,
) -> Result<OddPlaceScan> {
    if bound == 0 {
        return Err(Error::InvalidArgument(
            "odd-place scan bound must be positive".into(),
        ));
    }
    let mut rng = step_rng(seed, ODD_STREAM);
    let b = i64::try_from(bound).map_err(|_| Error::InvalidArgument("bound too large".into()))?;
    let mut points = Vec::with_capacity(nsamples);
    while points.len() < nsamples {
        let p: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-b..=b));
        if p[0].gcd(&p[1]).gcd(&p[2]) == 1 {
            points.push(p.map(Integer::from));
        }
    }
    enum Outcome {
        Checked(Vec<(Integer, LocalInvariant)>),
        OnLocus,
        Unfactored(String),
    }
    let outcomes: Vec<Outcome> = points
        .par_iter()
        .map(|p| match odd_place_check(&inst.f, &inst.algebra, p) {
            Ok(v) => Ok(Outcome::Checked(v)),
            Err(Error::OnRamificationLocus(_)) => Ok(Outcome::OnLocus),
            Err(Error::UnfactoredCofactor(c)) => Ok(Outcome::Unfactored(c)),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut scan = OddPlaceScan {
        status: "sampled, not proven",
        samples: nsamples,
        bound,
        checked: 0,
        skipped_on_locus: 0,
        skipped_unfactored: vec![],
        violations: vec![],
    };
    for (p, o) in points.into_iter().zip(outcomes) {
        match o {
            Outcome::Checked(v) => {
                scan.checked += v.len();
                for (q, inv) in v {
                    if inv != LocalInvariant::Zero {
                        scan.violations.push(OddViolation {
                            point: p.clone(),
                            prime: q,
                        });
                    }
                }
            }
            Outcome::OnLocus => scan.skipped_on_locus += 1,
            Outcome::Unfactored(c) => scan.skipped_unfactored.push(c),
        }
    }
    Ok(scan)
}
