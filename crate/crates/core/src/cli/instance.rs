//! Instance files.
//!
//! ```json
//! { "name": "...", "poly": [[coeff, ex, ey, ez], ...], "targets": [1],
//!   "algebra": { "first": [...], "second": [...] }, "sieve_modulus": 16,
//!   "rational_witness": [[1, 2], [0, 1], [1, 2]],
//!   "padic_witnesses": [{ "p": 2, "kind": "onevar", "poly": [-17, 0, 0, 0, 1], "start": 3 },
//!                       { "p": 2, "kind": "search" }],
//!   "search_bound": 1000,
//!   "sampling": { "seed": 1, "trials": 500, "prime_min": 3, "prime_max": 10000 },
//!   "square_checks": [{ "form": [...], "modulo": [...] }] }
//! ```
//!
//! Integers may be JSON numbers or decimal strings. `square_checks` is optional.
//! Unknown keys are rejected.

use std::path::Path;

use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exactarith::{Integer, Rational};
use crate::multipoly::{MultiPoly, UniPoly};
use crate::obstruction::{
    ObstructionInstance, PadicWitnessSpec, QuaternionAlgebraSpec, SamplingConfig, SquareCheckSpec,
};

/// An integer written as a JSON number or a decimal string.
#[derive(Debug, Clone)]
struct Int(Integer);

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            U(u64),
            S(String),
        }
        match Raw::deserialize(d)
            .map_err(|_| de::Error::custom("expected an integer or a decimal string"))?
        {
            Raw::I(v) => Ok(Int(v.into())),
            Raw::U(v) => Ok(Int(v.into())),
            Raw::S(s) => s
                .trim()
                .parse()
                .map(Int)
                .map_err(|_| de::Error::custom(format!("not an integer: {s:?}"))),
        }
    }
}

type Term = (Int, u32, u32, u32);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    first: Vec<Term>,
    second: Vec<Term>,
}

#[derive(Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum WitnessKind {
    Search,
    Onevar,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PadicFile {
    p: u64,
    kind: WitnessKind,
    poly: Option<Vec<Int>>,
    start: Option<Int>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplingFile {
    seed: u64,
    trials: usize,
    prime_min: u64,
    prime_max: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareFile {
    form: Vec<Term>,
    modulo: Vec<Term>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    name: String,
    poly: Vec<Term>,
    targets: Vec<Int>,
    algebra: AlgebraFile,
    sieve_modulus: u64,
    rational_witness: [[Int; 2]; 3],
    padic_witnesses: Vec<PadicFile>,
    search_bound: u64,
    sampling: SamplingFile,
    #[serde(default)]
    square_checks: Vec<SquareFile>,
}

fn poly(terms: Vec<Term>) -> MultiPoly {
    MultiPoly::from_terms(terms.into_iter().map(|(c, ex, ey, ez)| (c.0, [ex, ey, ez])))
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<ObstructionInstance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))?;
    let bad = |m: String| Error::InvalidInstance(m);
    let algebra = QuaternionAlgebraSpec::new(poly(file.algebra.first), poly(file.algebra.second))
        .map_err(|e| bad(e.to_string()))?;
    let mut rational_witness: [Rational; 3] = Default::default();
    for (slot, [n, d]) in rational_witness.iter_mut().zip(file.rational_witness) {
        if num_traits::Zero::is_zero(&d.0) {
            return Err(bad("rational witness has a zero denominator".into()));
        }
        *slot = Rational::new(n.0, d.0);
    }
    let padic_witnesses = file
        .padic_witnesses
        .into_iter()
        .map(|w| match (w.kind, w.poly, w.start) {
            (WitnessKind::Search, None, None) => Ok(PadicWitnessSpec::Search { p: w.p }),
            (WitnessKind::Onevar, Some(c), Some(s)) => Ok(PadicWitnessSpec::OneVar {
                p: w.p,
                poly: UniPoly::new(c.into_iter().map(|i| i.0).collect()),
                start: s.0,
            }),
            (WitnessKind::Search, _, _) => {
                Err(bad("a search witness takes no poly or start".into()))
            }
            (WitnessKind::Onevar, _, _) => {
                Err(bad("an onevar witness needs poly and start".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let inst = ObstructionInstance {
        name: file.name,
        f: poly(file.poly),
        targets: file.targets.into_iter().map(|t| t.0).collect(),
        algebra,
        sieve_modulus: file.sieve_modulus,
        rational_witness,
        padic_witnesses,
        search_bound: file.search_bound,
        sampling: SamplingConfig {
            seed: file.sampling.seed,
            trials: file.sampling.trials,
            prime_min: file.sampling.prime_min,
            prime_max: file.sampling.prime_max,
        },
        square_checks: file
            .square_checks
            .into_iter()
            .map(|s| SquareCheckSpec {
                form: poly(s.form),
                modulo: poly(s.modulo),
            })
            .collect(),
    };
    inst.validate()?;
    Ok(inst)
}

pub fn load_instance(path: &Path) -> Result<ObstructionInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| match e {
        Error::InvalidInstance(m) => Error::InvalidInstance(format!("{}: {m}", path.display())),
        other => other,
    })
}
