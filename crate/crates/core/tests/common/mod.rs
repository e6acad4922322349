//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use num_integer::Integer as _;
use obstruction_lab::exactarith::{canonical_primitive, Integer};
use obstruction_lab::multipoly::MultiPoly;

pub fn instance_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(format!("{name}.json"))
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.json"))
}

/// Runs the command-line binary with the seed variable cleared.
pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstruction-lab"))
        .args(args)
        .env_remove("OBSTRUCTION_LAB_SEED")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Every primitive point of `[-b, b]^3` with `f(P) = target`, canonically signed and sorted.
pub fn naive_search(f: &MultiPoly, target: i128, b: i64) -> Vec<[Integer; 3]> {
    let mut out = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                if x.gcd(&y).gcd(&z) != 1 {
                    continue;
                }
                let v = f
                    .evaluate_i128(&[x as i128, y as i128, z as i128])
                    .expect("no overflow at this size");
                if v == target {
                    out.push(canonical_primitive(&[x, y, z].map(Integer::from)));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn poly(terms: &[(i64, [u32; 3])]) -> MultiPoly {
    MultiPoly::from_terms(terms.iter().map(|&(c, e)| (Integer::from(c), e)))
}
