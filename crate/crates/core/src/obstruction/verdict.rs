use std::collections::BTreeSet;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use super::table::MAX_EXTRA_LEVELS;
use super::*;
use crate::cli::json::{ser_int, ser_int_array, ser_int_vec};
use crate::exactarith::rational_to_string;
use crate::localsymbols::{LocalInvariant, Place, Prime};
use crate::padicsolve::{
    default_depth, hensel_liftable_1var, padic_solutions_exist, replay_witness,
    verify_rational_witness, HenselCertificate, SolubilityAnswer,
};

/// Run parameters that are not part of the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: Option<u64>,
    pub depth: Option<u32>,
    pub bound: Option<u64>,
    pub targets: Option<Vec<Integer>>,
    pub real_samples: usize,
    pub odd_samples: usize,
    pub odd_bound: u64,
    /// Refinement levels beyond the sieve modulus available to the table.
    pub table_extra_levels: u32,
    /// Search bound for the unit targets not in the instance.
    pub complementary_bound: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: None,
            depth: None,
            bound: None,
            targets: None,
            real_samples: 10_000,
            odd_samples: 10_000,
            odd_bound: 1_000,
            table_extra_levels: 3,
            complementary_bound: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub point: [String; 3],
    #[serde(serialize_with = "ser_int")]
    pub target: Integer,
    pub value: String,
    pub verified: bool,
    #[serde(serialize_with = "ser_int_vec")]
    pub bad_primes: Vec<Integer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum LocalCheck {
    Onevar {
        p: u64,
        #[serde(serialize_with = "ser_int_vec")]
        poly: Vec<Integer>,
        #[serde(serialize_with = "ser_int")]
        start: Integer,
        certified: bool,
        certificate: Option<HenselCertificate>,
    },
    Search {
        p: u64,
        #[serde(serialize_with = "ser_int")]
        target: Integer,
        depth: u32,
        certified: bool,
        answer: SolubilityAnswer,
    },
}

impl LocalCheck {
    pub fn prime(&self) -> u64 {
        match self {
            LocalCheck::Onevar { p, .. } | LocalCheck::Search { p, .. } => *p,
        }
    }

    pub fn certified(&self) -> bool {
        match self {
            LocalCheck::Onevar { certified, .. } | LocalCheck::Search { certified, .. } => {
                *certified
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveRecord {
    pub modulus: u64,
    pub count: usize,
    /// Distinct reductions mod 2 of the surviving classes.
    pub mod_2: Vec<[u64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    #[serde(serialize_with = "ser_int_array")]
    pub point: [Integer; 3],
    #[serde(serialize_with = "ser_int")]
    pub value: Integer,
    pub profile: Option<PointProfile>,
    pub table_entry: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetEvidence {
    #[serde(serialize_with = "ser_int")]
    pub target: Integer,
    pub sieve: SieveRecord,
    pub table: InvariantTable,
    pub search: SearchResult,
    pub solutions: Vec<SolutionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub instance: String,
    pub seed: u64,
    #[serde(serialize_with = "ser_int_vec")]
    pub targets: Vec<Integer>,
    pub rational_witness: WitnessCheck,
    pub local_solubility: Vec<LocalCheck>,
    pub per_target: Vec<TargetEvidence>,
    pub real_scan: RealScan,
    pub odd_place_scan: OddPlaceScan,
    pub square_checks: Vec<SquareSampling>,
    pub complementary_targets: Vec<SearchResult>,
    pub flags: Vec<&'static str>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

const SQUARE_SEED_STREAM: u64 = 4;

/// Runs every step on the instance and decides the verdict.
///
/// Returns [`Error::Inconsistency`] when the evidence contradicts itself, for
/// instance an integral point whose class carries invariant 1/2.
pub fn obstruction_verdict(
    inst: &ObstructionInstance,
    opts: &VerifyOptions,
) -> Result<VerdictReport> {
    inst.validate()?;
    let seed = opts.seed.unwrap_or(inst.sampling.seed);
    let targets = opts.targets.clone().unwrap_or_else(|| inst.targets.clone());
    if targets.is_empty() || targets.iter().any(num_traits::Zero::is_zero) {
        return Err(Error::InvalidArgument(
            "targets must be nonempty and nonzero".into(),
        ));
    }
    let bound = opts.bound.unwrap_or(inst.search_bound);
    let mut notes = Vec::new();

    let witness_target = &inst.targets[0];
    let rational_witness = check_rational_witness(inst, witness_target)?;
    let local_solubility = inst
        .padic_witnesses
        .iter()
        .map(|w| local_check(inst, w, witness_target, opts.depth))
        .collect::<Result<Vec<_>>>()?;
    if opts.targets.is_some() {
        notes.push(format!(
            "witness checks refer to the instance target {witness_target}"
        ));
    }

    let k = inst.sieve_modulus.trailing_zeros();
    let max_exponent = k + opts.table_extra_levels.clamp(1, MAX_EXTRA_LEVELS);
    let mut per_target = Vec::new();
    for t in &targets {
        per_target.push(target_evidence(inst, t, max_exponent, bound)?);
    }

    let real_scan = real_unramified_scan(&inst.algebra, opts.real_samples.max(1), seed)?;
    let odd_place_scan = odd_place_scan(inst, opts.odd_samples, opts.odd_bound, seed)?;
    let mut seeds = step_rng(seed, SQUARE_SEED_STREAM);
    let square_checks = inst
        .square_checks
        .iter()
        .map(|c| {
            let s = &inst.sampling;
            square_mod_sampling(
                &c.form,
                &c.modulo,
                s.prime_min,
                s.prime_max,
                s.trials,
                seeds.gen(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let found: Vec<&SolutionRecord> = per_target.iter().flat_map(|e| &e.solutions).collect();
    let tables_half = per_target.iter().all(|e| e.table.all_half());
    let squares_ok = square_checks.iter().all(SquareSampling::all_passed);
    let verdict = if !found.is_empty() {
        Verdict::NotObstructed
    } else if tables_half && real_scan.is_clean() && odd_place_scan.is_clean() && squares_ok {
        Verdict::Obstructed
    } else {
        Verdict::Inconclusive
    };

    let units: Vec<Integer> = [Integer::one(), -Integer::one()]
        .into_iter()
        .filter(|u| !targets.contains(u))
        .collect();
    let complementary_targets = units
        .iter()
        .map(|u| integer_search(&inst.f, u, bound.min(opts.complementary_bound)))
        .collect::<Result<Vec<_>>>()?;

    let mut flags = Vec::new();
    if rational_witness.verified {
        flags.push("rational_point");
    }
    let certified: BTreeSet<u64> = local_solubility
        .iter()
        .filter(|c| c.certified())
        .map(LocalCheck::prime)
        .collect();
    let bad_covered = rational_witness
        .bad_primes
        .iter()
        .all(|p| u64::try_from(p).is_ok_and(|p| certified.contains(&p)));
    if rational_witness.verified && bad_covered {
        flags.push("locally_soluble");
    }
    if verdict == Verdict::Obstructed {
        if targets.contains(&Integer::one()) && targets.contains(&-Integer::one()) {
            flags.push("hasse_over_Z");
        }
        if complementary_targets
            .iter()
            .any(|s| !s.solutions.is_empty())
        {
            flags.push("strong_approximation_obstruction");
        }
    }

    notes.push("real place: sampled, not proven".into());
    notes.push(
        "odd places: sampled; unramifiedness at odd primes rests on the algebra extending over the model away from 2"
            .into(),
    );
    if !square_checks.is_empty() {
        notes.push("square conditions: sampled over prime fields, not an exact certificate".into());
    }
    if rational_witness.verified {
        notes.push(
            "the rational witness is a p-adic integral point at every prime outside bad_primes"
                .into(),
        );
    }
    for e in &per_target {
        let undetermined = e.table.count(None);
        if undetermined > 0 {
            notes.push(format!(
                "target {}: {undetermined} classes undetermined at depth {}",
                e.target, max_exponent
            ));
        }
        let zero = e.table.count(Some(LocalInvariant::Zero));
        if zero > 0 {
            notes.push(format!(
                "target {}: {zero} classes with 2-adic invariant 0",
                e.target
            ));
        }
    }
    for s in &complementary_targets {
        if let Some(p) = s.solutions.first() {
            notes.push(format!(
                "target {}: integral point ({}, {}, {}) with |coordinates| <= {}",
                s.target, p[0], p[1], p[2], s.bound
            ));
        }
    }

    Ok(VerdictReport {
        instance: inst.name.clone(),
        seed,
        targets,
        rational_witness,
        local_solubility,
        per_target,
        real_scan,
        odd_place_scan,
        square_checks,
        complementary_targets,
        flags,
        notes,
        verdict,
    })
}

fn check_rational_witness(inst: &ObstructionInstance, target: &Integer) -> Result<WitnessCheck> {
    let w = &inst.rational_witness;
    let value = inst.f.evaluate(w);
    let (verified, bad_primes) = match verify_rational_witness(w, &inst.f, target) {
        Ok(bad) => (true, bad.into_iter().collect()),
        Err(Error::WitnessMismatch { .. }) => (false, vec![]),
        Err(e) => return Err(e),
    };
    Ok(WitnessCheck {
        point: w.clone().map(|q| rational_to_string(&q)),
        target: target.clone(),
        value: rational_to_string(&value),
        verified,
        bad_primes,
    })
}

fn local_check(
    inst: &ObstructionInstance,
    w: &PadicWitnessSpec,
    target: &Integer,
    depth: Option<u32>,
) -> Result<LocalCheck> {
    let prime = Prime::new(w.prime())?;
    Ok(match w {
        PadicWitnessSpec::OneVar { p, poly, start } => {
            let certificate = hensel_liftable_1var(poly, start, &prime);
            LocalCheck::Onevar {
                p: *p,
                poly: poly.coeffs.clone(),
                start: start.clone(),
                certified: certificate.as_ref().is_some_and(HenselCertificate::replay),
                certificate,
            }
        }
        PadicWitnessSpec::Search { p } => {
            let depth = depth.unwrap_or_else(|| default_depth(&prime));
            let answer = padic_solutions_exist(&inst.f, target, &prime, depth);
            let certified = match &answer {
                SolubilityAnswer::Yes { witness } => replay_witness(&inst.f, target, witness),
                _ => false,
            };
            LocalCheck::Search {
                p: *p,
                target: target.clone(),
                depth,
                certified,
                answer,
            }
        }
    })
}

fn target_evidence(
    inst: &ObstructionInstance,
    t: &Integer,
    max_exponent: u32,
    bound: u64,
) -> Result<TargetEvidence> {
    let classes = residue_sieve(&inst.f, inst.sieve_modulus, t)?;
    let mod_2: BTreeSet<[u64; 3]> = classes.iter().map(|c| c.project(2).residues).collect();
    let sieve = SieveRecord {
        modulus: inst.sieve_modulus,
        count: classes.len(),
        mod_2: mod_2.into_iter().collect(),
    };
    let table = class_invariant_table(&inst.algebra, &classes, max_exponent)?;
    let search = integer_search(&inst.f, t, bound)?;
    let solutions = search
        .solutions
        .iter()
        .map(|p| solution_record(inst, &table, t, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(TargetEvidence {
        target: t.clone(),
        sieve,
        table,
        search,
        solutions,
    })
}

/// Cross-checks an integral point against reciprocity and the invariant table.
fn solution_record(
    inst: &ObstructionInstance,
    table: &InvariantTable,
    t: &Integer,
    p: &[Integer; 3],
) -> Result<SolutionRecord> {
    let value = eval_fast(&inst.f, p);
    // canonical signs may flip the value of an odd-degree form
    let affine = if &value == t {
        p.clone()
    } else {
        p.clone().map(|c| -c)
    };
    if &eval_fast(&inst.f, &affine) != t {
        return Err(Error::Inconsistency(format!(
            "search returned ({}, {}, {}) which does not solve f = {t}",
            p[0], p[1], p[2]
        )));
    }
    let entry = table.entry_for_point(&affine).ok_or_else(|| {
        Error::Inconsistency(format!(
            "integral point ({}, {}, {}) lies outside the sieve",
            p[0], p[1], p[2]
        ))
    })?;
    let profile = match point_invariant_profile(&inst.algebra, p) {
        Ok(pr) => Some(pr),
        Err(Error::OnRamificationLocus(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(pr) = &profile {
        if pr.profile.sum != LocalInvariant::Zero {
            return Err(Error::Inconsistency(format!(
                "invariants at ({}, {}, {}) do not sum to 0",
                p[0], p[1], p[2]
            )));
        }
        let two = Place::Finite(Prime::new_unchecked(Integer::from(2u8)));
        if let (Some(tab), Some(pt)) = (entry.invariant, pr.profile.at(&two)) {
            if tab != pt {
                return Err(Error::Inconsistency(format!(
                    "class {} has table invariant {tab} but the point ({}, {}, {}) has 2-adic invariant {pt}",
                    entry.class, p[0], p[1], p[2]
                )));
            }
            if tab == LocalInvariant::Half {
                let elsewhere: Vec<String> = pr
                    .profile
                    .invariants
                    .iter()
                    .filter(|(pl, i)| *pl != two && *i == LocalInvariant::Half)
                    .map(|(pl, _)| pl.to_string())
                    .collect();
                return Err(Error::Inconsistency(format!(
                    "integral point ({}, {}, {}) lies in a class with invariant 1/2; the algebra is ramified there at {}",
                    p[0],
                    p[1],
                    p[2],
                    elsewhere.join(", ")
                )));
            }
        }
    }
    Ok(SolutionRecord {
        point: p.clone(),
        value,
        profile,
        table_entry: entry
            .invariant
            .map_or("undetermined", LocalInvariant::as_str),
    })
}
