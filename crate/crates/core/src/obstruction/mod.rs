//! The obstruction engine.
//!
//! An integral point of the model is a primitive triple `P` with `f(P)` in the
//! instance's target set. The engine sieves such points modulo a power of 2,
//! shows that the quaternion algebra has 2-adic invariant 1/2 on every
//! surviving class, gathers evidence that the algebra is unramified at the real
//! place and at odd primes, and then no integral point can exist because its
//! invariants would sum to 1/2.

mod profile;
mod scans;
mod search;
mod sieve;
mod squares;
mod table;
mod verdict;

pub use profile::{odd_place_check, point_invariant_profile, PointProfile};
pub use scans::{odd_place_scan, real_unramified_scan, OddPlaceScan, OddViolation, RealScan};
pub use search::{integer_search, SearchResult};
pub use sieve::{residue_sieve, ResidueClass};
pub use squares::{sqrt_mod, square_mod_sampling, Counterexample, SquareSampling};
pub use table::{class_invariant_table, InvariantTable, TableEntry};
pub use verdict::{obstruction_verdict, Verdict, VerdictReport, VerifyOptions};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactarith::{Integer, Rational};
use crate::multipoly::{MultiPoly, UniPoly};

/// A Brauer class `(first, second)` given by two forms of even degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionAlgebraSpec {
    first: MultiPoly,
    second: MultiPoly,
}

impl QuaternionAlgebraSpec {
    pub fn new(first: MultiPoly, second: MultiPoly) -> Result<Self> {
        for (name, p) in [("first", &first), ("second", &second)] {
            match p.homogeneous_degree() {
                Some(d) if d % 2 == 0 && !p.is_zero() => {}
                _ => return Err(Error::OddDegreeEntry(format!("{name} entry {p}"))),
            }
        }
        Ok(QuaternionAlgebraSpec { first, second })
    }

    pub fn first(&self) -> &MultiPoly {
        &self.first
    }

    pub fn second(&self) -> &MultiPoly {
        &self.second
    }

    pub fn evaluate(&self, p: &[Integer; 3]) -> (Integer, Integer) {
        (eval_fast(&self.first, p), eval_fast(&self.second, p))
    }
}

/// Integer evaluation with an `i128` fast path.
pub(crate) fn eval_fast(poly: &MultiPoly, p: &[Integer; 3]) -> Integer {
    use num_traits::ToPrimitive;
    let small: Option<[i128; 3]> = (|| Some([p[0].to_i128()?, p[1].to_i128()?, p[2].to_i128()?]))();
    small
        .and_then(|s| poly.evaluate_i128(&s))
        .map(Integer::from)
        .unwrap_or_else(|| poly.evaluate_int(p))
}

/// How local solubility at a prime is established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicWitnessSpec {
    /// Residue search on the equation itself.
    Search { p: u64 },
    /// A root of a one-variable polynomial, certified by Hensel's lemma.
    OneVar {
        p: u64,
        poly: UniPoly,
        start: Integer,
    },
}

impl PadicWitnessSpec {
    pub fn prime(&self) -> u64 {
        match self {
            PadicWitnessSpec::Search { p } | PadicWitnessSpec::OneVar { p, .. } => *p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingConfig {
    pub seed: u64,
    pub trials: usize,
    pub prime_min: u64,
    pub prime_max: u64,
}

/// Claim that `form` restricted to `modulo = 0` is a square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareCheckSpec {
    pub form: MultiPoly,
    pub modulo: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionInstance {
    pub name: String,
    pub f: MultiPoly,
    pub targets: Vec<Integer>,
    pub algebra: QuaternionAlgebraSpec,
    pub sieve_modulus: u64,
    pub rational_witness: [Rational; 3],
    pub padic_witnesses: Vec<PadicWitnessSpec>,
    pub search_bound: u64,
    pub sampling: SamplingConfig,
    pub square_checks: Vec<SquareCheckSpec>,
}

impl ObstructionInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.f.homogeneous_degree().is_none() || self.f.is_zero() {
            return bad(format!("{} is not homogeneous", self.f));
        }
        if self.targets.is_empty() || self.targets.iter().any(num_traits::Zero::is_zero) {
            return bad("targets must be nonempty and nonzero".into());
        }
        if self.sieve_modulus < 2 || !self.sieve_modulus.is_power_of_two() {
            return bad(format!(
                "sieve modulus {} is not a power of 2",
                self.sieve_modulus
            ));
        }
        if self.sampling.prime_min > self.sampling.prime_max {
            return bad("prime_min exceeds prime_max".into());
        }
        for w in &self.padic_witnesses {
            if !crate::exactarith::is_prime_u64(w.prime()) {
                return bad(format!("p-adic witness prime {} is not prime", w.prime()));
            }
        }
        Ok(())
    }
}

/// Independent random stream for one engine step.
pub(crate) fn step_rng(seed: u64, step: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step);
    rng
}

/// The two instances bundled with the crate.
pub mod bundled {
    pub const QUARTIC_JSON: &str = include_str!("../../instances/quartic.json");
    pub const CUBIC_JSON: &str = include_str!("../../instances/cubic.json");
}
