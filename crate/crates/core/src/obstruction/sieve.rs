use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactarith::{factor, Integer};
use crate::multipoly::MultiPoly;

/// A residue class of integer triples modulo `modulus`, with representatives in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueClass {
    pub modulus: u64,
    pub residues: [u64; 3],
}

impl ResidueClass {
    pub fn new(modulus: u64, residues: [u64; 3]) -> Self {
        ResidueClass {
            modulus,
            residues: residues.map(|r| r % modulus),
        }
    }

    /// Class of an integer point.
    pub fn of_point(p: &[Integer; 3], modulus: u64) -> Self {
        use num_integer::Integer as _;
        use num_traits::ToPrimitive;
        let m = Integer::from(modulus);
        ResidueClass {
            modulus,
            residues: p.clone().map(|c| c.mod_floor(&m).to_u64().unwrap()),
        }
    }

    /// Class modulo a divisor of the modulus.
    pub fn project(&self, modulus: u64) -> ResidueClass {
        ResidueClass::new(modulus, self.residues)
    }

    /// The classes modulo `modulus * factor` lying over this one, in lexicographic order.
    pub fn lifts(&self, factor: u64) -> Vec<ResidueClass> {
        let m = self.modulus;
        let big = m * factor;
        let mut out = Vec::with_capacity((factor * factor * factor) as usize);
        for i in 0..factor {
            for j in 0..factor {
                for k in 0..factor {
                    let r = self.residues;
                    out.push(ResidueClass {
                        modulus: big,
                        residues: [r[0] + i * m, r[1] + j * m, r[2] + k * m],
                    });
                }
            }
        }
        out.sort();
        out
    }

    pub fn contains(&self, p: &[Integer; 3]) -> bool {
        ResidueClass::of_point(p, self.modulus) == *self
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.residues;
        write!(f, "({}, {}, {}) mod {}", r[0], r[1], r[2], self.modulus)
    }
}

impl Serialize for ResidueClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.residues.serialize(s)
    }
}

/// Residue classes mod `m` that can contain a primitive integer solution of
/// `f = target`: those with `f(r) = target (mod m)` and, for every prime
/// `p | m`, some coordinate not divisible by `p`. Sorted lexicographically.
pub fn residue_sieve(f: &MultiPoly, m: u64, target: &Integer) -> Result<Vec<ResidueClass>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "sieve modulus must be at least 2, got {m}"
        )));
    }
    if m > 1 << 10 {
        return Err(Error::InvalidArgument(format!(
            "sieve modulus {m} exceeds 1024"
        )));
    }
    let primes: Vec<u64> = factor(&Integer::from(m))?
        .into_iter()
        .map(|(p, _)| u64::try_from(&p).unwrap())
        .collect();
    let t = ResidueClass::of_point(&[target.clone(), Integer::from(0), Integer::from(0)], m)
        .residues[0];
    let classes: Vec<ResidueClass> = (0..m)
        .into_par_iter()
        .flat_map_iter(|x| {
            let primes = &primes;
            (0..m)
                .flat_map(move |y| (0..m).map(move |z| [x, y, z]))
                .filter_map(move |r| {
                    let imprimitive = primes.iter().any(|&p| r.iter().all(|c| c % p == 0));
                    (!imprimitive && f.evaluate_mod_u64(&r, m) == t).then_some(ResidueClass {
                        modulus: m,
                        residues: r,
                    })
                })
        })
        .collect();
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::named::{cubic_f, quartic_f};

    #[test]
    fn quartic_mod_16() {
        let classes = residue_sieve(&quartic_f(), 16, &Integer::from(1)).unwrap();
        assert_eq!(classes.len(), 512);
        assert!(classes.iter().all(|c| c.project(2).residues == [0, 1, 1]));
        assert!(classes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cubic_mod_2() {
        for t in [1, -1] {
            let classes = residue_sieve(&cubic_f(), 2, &Integer::from(t)).unwrap();
            let reps: Vec<[u64; 3]> = classes.iter().map(|c| c.residues).collect();
            assert_eq!(reps, vec![[0, 0, 1], [1, 0, 1]]);
        }
    }

    #[test]
    fn imprimitive_classes_are_dropped_for_every_prime() {
        let f = &(&MultiPoly::x().pow(2) + &MultiPoly::y().pow(2)) + &MultiPoly::z().pow(2);
        let classes = residue_sieve(&f, 6, &Integer::from(3)).unwrap();
        assert!(classes
            .iter()
            .all(|c| c.residues.iter().any(|r| r % 2 == 1)));
        assert!(classes
            .iter()
            .all(|c| c.residues.iter().any(|r| r % 3 != 0)));
        assert!(classes.contains(&ResidueClass::new(6, [1, 1, 1])));
    }

    #[test]
    fn linear_form() {
        let classes = residue_sieve(&MultiPoly::x(), 2, &Integer::from(1)).unwrap();
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.residues[0] == 1));
    }

    #[test]
    fn lifts_cover_the_class() {
        let c = ResidueClass::new(2, [0, 1, 1]);
        let l = c.lifts(2);
        assert_eq!(l.len(), 8);
        assert!(l.iter().all(|d| d.project(2) == c && d.modulus == 4));
        assert_eq!(l[0].residues, [0, 1, 1]);
    }

    #[test]
    fn bad_moduli() {
        assert!(residue_sieve(&quartic_f(), 1, &Integer::from(1)).is_err());
        assert!(residue_sieve(&quartic_f(), 2048, &Integer::from(1)).is_err());
    }
}
