use rayon::prelude::*;
use serde::Serialize;

use super::{QuaternionAlgebraSpec, ResidueClass};
use crate::error::{Error, Result};
use crate::exactarith::Integer;
use crate::localsymbols::{hilbert_symbol_int, LocalInvariant, Place};

/// Deepest refinement allowed beyond the class modulus (8^6 lifts per class).
pub const MAX_EXTRA_LEVELS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub class: ResidueClass,
    /// `None` when undetermined.
    #[serde(serialize_with = "ser_value")]
    pub invariant: Option<LocalInvariant>,
    /// Exponent `L` such that all lifts mod `2^L` and `2^(L+1)` agree.
    pub level: Option<u32>,
}

fn ser_value<S: serde::Serializer>(
    v: &Option<LocalInvariant>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(v.map_or("undetermined", LocalInvariant::as_str))
}

/// 2-adic invariants of a quaternion algebra over residue classes mod `2^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantTable {
    pub modulus: u64,
    pub max_exponent: u32,
    /// Largest exponent `L + 1` inspected for a determined entry.
    pub depth_used: u32,
    pub entries: Vec<TableEntry>,
}

impl InvariantTable {
    pub fn get(&self, class: &ResidueClass) -> Option<&TableEntry> {
        self.entries
            .binary_search_by(|e| e.class.cmp(class))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// The entry of the class containing an integer point.
    pub fn entry_for_point(&self, p: &[Integer; 3]) -> Option<&TableEntry> {
        self.get(&ResidueClass::of_point(p, self.modulus))
    }

    pub fn count(&self, value: Option<LocalInvariant>) -> usize {
        self.entries.iter().filter(|e| e.invariant == value).count()
    }

    /// True when the table is nonempty and every entry is determined to be 1/2.
    pub fn all_half(&self) -> bool {
        !self.entries.is_empty() && self.count(Some(LocalInvariant::Half)) == self.entries.len()
    }
}

/// Computes the 2-adic invariant of `alg` on each class.
///
/// A lift `r` mod `2^L` is stable when both entries are nonzero mod `2^L`,
/// say with valuations `e_a`, `e_b`, and `L - e_a >= 2 + [e_b odd]`,
/// `L - e_b >= 2 + [e_a odd]`. The symbol at 2 of `2^e_a u` and `2^e_b v`
/// reads `u` mod 4, and mod 8 only when `e_b` is odd (symmetrically for `v`),
/// so every 2-adic point over a stable lift has the same invariant. A class is
/// determined at level `L` when all lifts mod `2^L` and mod `2^(L+1)` are stable
/// with one common symbol.
pub fn class_invariant_table(
    alg: &QuaternionAlgebraSpec,
    classes: &[ResidueClass],
    max_exponent: u32,
) -> Result<InvariantTable> {
    let modulus = classes.first().map_or(1, |c| c.modulus);
    if !modulus.is_power_of_two() || classes.iter().any(|c| c.modulus != modulus) {
        return Err(Error::InvalidArgument(
            "classes must share one modulus 2^k".into(),
        ));
    }
    let k = modulus.trailing_zeros();
    if max_exponent <= k || max_exponent > k + MAX_EXTRA_LEVELS {
        return Err(Error::InvalidArgument(format!(
            "max exponent {max_exponent} must lie in ({k}, {}]",
            k + MAX_EXTRA_LEVELS
        )));
    }
    let mut sorted = classes.to_vec();
    sorted.sort();
    sorted.dedup();
    let entries: Vec<TableEntry> = sorted
        .par_iter()
        .map(|c| class_entry(alg, c, max_exponent))
        .collect::<Result<_>>()?;
    let depth_used = entries
        .iter()
        .filter_map(|e| e.level)
        .map(|l| l + 1)
        .max()
        .unwrap_or(0);
    Ok(InvariantTable {
        modulus,
        max_exponent,
        depth_used,
        entries,
    })
}

fn class_entry(
    alg: &QuaternionAlgebraSpec,
    class: &ResidueClass,
    max_exponent: u32,
) -> Result<TableEntry> {
    let k = class.modulus.trailing_zeros();
    let mut previous: Option<LocalInvariant> = None;
    for level in k + 1..=max_exponent {
        let current = level_symbol(alg, class, level)?;
        if let (Some(p), Some(c)) = (previous, current) {
            if p == c {
                return Ok(TableEntry {
                    class: *class,
                    invariant: Some(c),
                    level: Some(level - 1),
                });
            }
            return Err(Error::Inconsistency(format!(
                "stable lifts of {class} give different invariants at levels {} and {level}",
                level - 1
            )));
        }
        previous = current;
    }
    Ok(TableEntry {
        class: *class,
        invariant: None,
        level: None,
    })
}

/// Common invariant of all lifts mod `2^level`, if every lift is stable and they agree.
fn level_symbol(
    alg: &QuaternionAlgebraSpec,
    class: &ResidueClass,
    level: u32,
) -> Result<Option<LocalInvariant>> {
    let factor = 1u64 << (level - class.modulus.trailing_zeros());
    let two = Place::Finite(crate::localsymbols::Prime::new_unchecked(Integer::from(
        2u8,
    )));
    let mut common = None;
    for lift in class.lifts(factor) {
        let point = lift.residues.map(Integer::from);
        let (a, b) = alg.evaluate(&point);
        let (Some(ea), Some(eb)) = (a.trailing_zeros(), b.trailing_zeros()) else {
            return Ok(None);
        };
        let (ea, eb, l) = (ea as u32, eb as u32, level);
        let stable = ea < l && eb < l && l - ea >= 2 + eb % 2 && l - eb >= 2 + ea % 2;
        if !stable {
            return Ok(None);
        }
        let inv = LocalInvariant::from_symbol(hilbert_symbol_int(&a, &b, &two)?);
        match common {
            None => common = Some(inv),
            Some(c) if c != inv => return Ok(None),
            _ => {}
        }
    }
    Ok(common)
}
