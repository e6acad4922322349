//! Command-line front end.
//!
//! Exit codes: 0 when a command completes (for `verify`, when a verdict is
//! reached), 1 for usage and input errors, 2 when an internal consistency
//! check fails, 3 when `verify` ends inconclusive.

pub mod instance;
pub mod json;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::elliptic::{to_weierstrass, torsion_subgroup, CurvePoint};
use crate::error::{Error, Result};
use crate::exactarith::{parse_rational, Integer, Rational};
use crate::localsymbols::{hilbert_symbol, reciprocity_defect, LocalInvariant, Place, Prime};
use crate::obstruction::{
    class_invariant_table, integer_search, obstruction_verdict, point_invariant_profile,
    residue_sieve, Verdict, VerifyOptions,
};
use crate::padicsolve::{default_depth, padic_solutions_exist};
use instance::load_instance;
use json::{ser_int, to_line, to_pretty};

pub const SEED_ENV: &str = "OBSTRUCTION_LAB_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "obstruction-lab",
    version,
    about = "Check Brauer-Manin obstructions to integral points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every step on an instance and print the verdict report
    Verify {
        instance: PathBuf,
        /// Root seed; overrides the environment and the instance
        #[arg(long)]
        seed: Option<u64>,
        /// Residue depth for p-adic searches
        #[arg(long)]
        depth: Option<u32>,
        /// Coordinate bound for the integer search
        #[arg(long)]
        bound: Option<u64>,
        /// Worker threads (output does not depend on it)
        #[arg(long)]
        jobs: Option<usize>,
        /// Replace the instance targets (repeatable)
        #[arg(long = "target", allow_hyphen_values = true)]
        targets: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        real_samples: usize,
        #[arg(long, default_value_t = 10_000)]
        odd_samples: usize,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hilbert symbol (a, b) at a place ("real" or a prime)
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        place: String,
    },
    /// Local invariants of (a, b) at every relevant place and their sum
    Reciprocity {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Certified p-adic solubility of the instance equation
    Local {
        instance: PathBuf,
        #[arg(short)]
        p: u64,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Residue classes mod m that can hold integral points
    Sieve {
        instance: PathBuf,
        #[arg(short)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// 2-adic invariant table over the instance sieve classes
    Table {
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        #[arg(long, default_value_t = 3)]
        extra_levels: u32,
    },
    /// Local invariants of the instance algebra at an integer point
    Profile {
        instance: PathBuf,
        #[arg(short = 'P', allow_hyphen_values = true)]
        point: String,
    },
    /// Bounded integer search for each instance target
    Search {
        instance: PathBuf,
        #[arg(short = 'B')]
        bound: u64,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// Rational torsion of y^2 = c3 x^3 + c2 x^2 + c1 x + c0
    Torsion {
        #[arg(allow_hyphen_values = true)]
        c3: String,
        #[arg(allow_hyphen_values = true)]
        c2: String,
        #[arg(allow_hyphen_values = true)]
        c1: String,
        #[arg(allow_hyphen_values = true)]
        c0: String,
    },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Inconsistency(_) => EXIT_INCONSISTENT,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn integer_arg(s: &str) -> Result<Integer> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not an integer: {s:?}")))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}")))
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV} is not a seed: {s:?}"))),
        Err(_) => Ok(None),
    }
}

#[derive(Serialize)]
struct SymbolRecord {
    symbol: i8,
    invariant: LocalInvariant,
}

#[derive(Serialize)]
struct SieveOutput {
    modulus: u64,
    #[serde(serialize_with = "ser_int")]
    target: Integer,
    count: usize,
    classes: Vec<[u64; 3]>,
}

#[derive(Serialize)]
struct TorsionOutput {
    group: String,
    points: Vec<[TorsionCoord; 2]>,
}

/// Coordinate printed as an integer when it is one, else as `"n/d"`.
struct TorsionCoord(Rational);

impl Serialize for TorsionCoord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            ser_int(self.0.numer(), s)
        } else {
            s.serialize_str(&crate::exactarith::rational_to_string(&self.0))
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Verify {
            instance,
            seed,
            depth,
            bound,
            jobs,
            targets,
            real_samples,
            odd_samples,
            out: path,
        } => {
            let inst = load_instance(&instance)?;
            let targets = if targets.is_empty() {
                None
            } else {
                Some(
                    targets
                        .iter()
                        .map(|t| integer_arg(t))
                        .collect::<Result<Vec<_>>>()?,
                )
            };
            let seed = match seed {
                Some(s) => Some(s),
                None => env_seed()?,
            };
            let opts = VerifyOptions {
                seed,
                depth,
                bound,
                targets,
                real_samples,
                odd_samples,
                ..Default::default()
            };
            let report = with_jobs(jobs, || obstruction_verdict(&inst, &opts))??;
            let text = to_pretty(&report);
            match path {
                Some(p) => std::fs::write(&p, format!("{text}\n")).map_err(|e| {
                    Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))
                })?,
                None => emit(out, &text)?,
            }
            let _ = writeln!(
                err,
                "verdict: {}",
                to_line(&report.verdict).trim_matches('"')
            );
            Ok(match report.verdict {
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
                _ => EXIT_OK,
            })
        }
        Command::Hilbert { a, b, place } => {
            let (a, b, place) = (
                parse_rational(&a)?,
                parse_rational(&b)?,
                Place::parse(&place)?,
            );
            let symbol = hilbert_symbol(&a, &b, &place)?;
            emit(
                out,
                &to_line(&SymbolRecord {
                    symbol,
                    invariant: LocalInvariant::from_symbol(symbol),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Reciprocity { a, b } => {
            let profile = reciprocity_defect(&parse_rational(&a)?, &parse_rational(&b)?)?;
            emit(out, &to_line(&profile))?;
            if profile.sum != LocalInvariant::Zero {
                let _ = writeln!(err, "error: invariants sum to {}", profile.sum);
                return Ok(EXIT_INCONSISTENT);
            }
            Ok(EXIT_OK)
        }
        Command::Local { instance, p, depth } => {
            let inst = load_instance(&instance)?;
            let prime = Prime::new(p)?;
            let depth = depth.unwrap_or_else(|| default_depth(&prime));
            let answer = padic_solutions_exist(&inst.f, &inst.targets[0], &prime, depth);
            emit(out, &to_line(&answer))?;
            Ok(EXIT_OK)
        }
        Command::Sieve {
            instance,
            m,
            target,
        } => {
            let inst = load_instance(&instance)?;
            let target = target.map_or_else(|| Ok(inst.targets[0].clone()), |t| integer_arg(&t))?;
            let classes = residue_sieve(&inst.f, m, &target)?;
            let record = SieveOutput {
                modulus: m,
                target,
                count: classes.len(),
                classes: classes.iter().map(|c| c.residues).collect(),
            };
            emit(out, &to_line(&record))?;
            Ok(EXIT_OK)
        }
        Command::Table {
            instance,
            target,
            extra_levels,
        } => {
            let inst = load_instance(&instance)?;
            let target = target.map_or_else(|| Ok(inst.targets[0].clone()), |t| integer_arg(&t))?;
            let classes = residue_sieve(&inst.f, inst.sieve_modulus, &target)?;
            let k = inst.sieve_modulus.trailing_zeros();
            let table = class_invariant_table(&inst.algebra, &classes, k + extra_levels)?;
            emit(out, &to_line(&table))?;
            Ok(EXIT_OK)
        }
        Command::Profile { instance, point } => {
            let inst = load_instance(&instance)?;
            let coords: Vec<Integer> = point.split(',').map(integer_arg).collect::<Result<_>>()?;
            let p: [Integer; 3] = coords
                .try_into()
                .map_err(|_| Error::InvalidArgument(format!("expected X,Y,Z, got {point:?}")))?;
            let profile = point_invariant_profile(&inst.algebra, &p)?;
            emit(out, &to_line(&profile))?;
            if profile.profile.sum != LocalInvariant::Zero {
                let _ = writeln!(err, "error: invariants sum to {}", profile.profile.sum);
                return Ok(EXIT_INCONSISTENT);
            }
            Ok(EXIT_OK)
        }
        Command::Search {
            instance,
            bound,
            target,
        } => {
            let inst = load_instance(&instance)?;
            let targets = match target {
                Some(t) => vec![integer_arg(&t)?],
                None => inst.targets.clone(),
            };
            let results = targets
                .iter()
                .map(|t| integer_search(&inst.f, t, bound))
                .collect::<Result<Vec<_>>>()?;
            emit(out, &to_line(&results))?;
            Ok(EXIT_OK)
        }
        Command::Torsion { c3, c2, c1, c0 } => {
            let [c3, c2, c1, c0] = [c3, c2, c1, c0].map(|c| integer_arg(&c));
            let curve = to_weierstrass(&c3?, &c2?, &c1?, &c0?)?;
            let t = torsion_subgroup(&curve)?;
            let points = t
                .points
                .iter()
                .filter_map(|p| match p {
                    CurvePoint::Affine(u, v) => {
                        Some([TorsionCoord(u.clone()), TorsionCoord(v.clone())])
                    }
                    CurvePoint::Infinity => None,
                })
                .collect();
            emit(
                out,
                &to_line(&TorsionOutput {
                    group: t.group.to_string(),
                    points,
                }),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidArgument("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
