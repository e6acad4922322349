use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::step_rng;
use crate::error::{Error, Result};
use crate::exactarith::primes_up_to;
use crate::multipoly::MultiPoly;

/// Primes up to this bound are searched by listing every point of `H = 0`.
pub const ENUMERATION_LIMIT: u64 = 300;
const SQUARE_STREAM: u64 = 3;
const POINT_TRIES: usize = 64;
const MAX_COUNTEREXAMPLES: usize = 20;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if `a` is a square.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a non-residue");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub p: u64,
    pub point: [u64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareSampling {
    pub status: &'static str,
    pub form: String,
    pub modulo: String,
    /// Sampled points with `F(Q) != 0`.
    pub accepted: usize,
    pub passed: usize,
    /// `passed/accepted` as an exact fraction.
    pub pass_ratio: String,
    /// Sampled points with `F(Q) = 0`.
    pub degenerate: usize,
    /// Primes at which no smooth point of `H = 0` was found.
    pub skipped_primes: Vec<u64>,
    pub counterexamples: Vec<Counterexample>,
}

impl SquareSampling {
    pub fn all_passed(&self) -> bool {
        self.accepted > 0 && self.passed == self.accepted
    }
}

/// Tests whether `F` takes square values on smooth points of `H = 0` over prime fields.
pub fn square_mod_sampling(
    form: &MultiPoly,
    modulo: &MultiPoly,
    prime_min: u64,
    prime_max: u64,
    trials: usize,
    seed: u64,
) -> Result<SquareSampling> {
    let primes: Vec<u64> = primes_up_to(prime_max)
        .iter()
        .copied()
        .filter(|&p| p >= prime_min.max(3))
        .collect();
    if primes.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no odd primes in [{prime_min}, {prime_max}]"
        )));
    }
    if modulo.is_zero() {
        return Err(Error::InvalidArgument("H is identically zero".into()));
    }
    let mut rng = step_rng(seed, SQUARE_STREAM);
    let conic = ConicPoints::new(modulo);
    let mut skipped = BTreeSet::new();
    let mut out = SquareSampling {
        status: "sampled, not proven",
        form: form.to_string(),
        modulo: modulo.to_string(),
        accepted: 0,
        passed: 0,
        pass_ratio: String::new(),
        degenerate: 0,
        skipped_primes: vec![],
        counterexamples: vec![],
    };
    let max_attempts = trials.saturating_mul(20).max(100);
    let mut attempts = 0;
    while out.accepted < trials && attempts < max_attempts && skipped.len() < primes.len() {
        attempts += 1;
        let p = primes[rng.gen_range(0..primes.len())];
        if skipped.contains(&p) {
            continue;
        }
        let Some(q) = conic.sample(p, &mut rng) else {
            skipped.insert(p);
            continue;
        };
        let v = form.evaluate_mod_u64(&q, p);
        if v == 0 {
            out.degenerate += 1;
            continue;
        }
        out.accepted += 1;
        if pow_mod(v, (p - 1) / 2, p) == 1 {
            out.passed += 1;
        } else if out.counterexamples.len() < MAX_COUNTEREXAMPLES {
            out.counterexamples.push(Counterexample { p, point: q });
        }
    }
    out.pass_ratio = format!("{}/{}", out.passed, out.accepted);
    out.skipped_primes = skipped.into_iter().collect();
    Ok(out)
}

/// Smooth points of `H = 0` over prime fields.
struct ConicPoints<'a> {
    h: &'a MultiPoly,
    grad: [MultiPoly; 3],
    /// `H = sum_j coeff[j](x, y) z^j`
    z_coeffs: Vec<MultiPoly>,
    listed: std::cell::RefCell<HashMap<u64, Vec<[u64; 3]>>>,
}

impl<'a> ConicPoints<'a> {
    fn new(h: &'a MultiPoly) -> Self {
        let deg = h.degree_in(2) as usize;
        let mut buckets = vec![Vec::new(); deg + 1];
        for (c, e) in h.terms() {
            buckets[e[2] as usize].push((c.clone(), [e[0], e[1], 0]));
        }
        ConicPoints {
            h,
            grad: [h.partial(0), h.partial(1), h.partial(2)],
            z_coeffs: buckets.into_iter().map(MultiPoly::from_terms).collect(),
            listed: Default::default(),
        }
    }

    fn smooth(&self, q: &[u64; 3], p: u64) -> bool {
        q.iter().any(|&c| c != 0) && self.grad.iter().any(|g| g.evaluate_mod_u64(q, p) != 0)
    }

    fn sample(&self, p: u64, rng: &mut ChaCha8Rng) -> Option<[u64; 3]> {
        if p <= ENUMERATION_LIMIT {
            let mut listed = self.listed.borrow_mut();
            let pts = listed.entry(p).or_insert_with(|| self.enumerate(p));
            return (!pts.is_empty()).then(|| pts[rng.gen_range(0..pts.len())]);
        }
        (0..POINT_TRIES).find_map(|_| {
            let (x, y) = (rng.gen_range(0..p), rng.gen_range(0..p));
            let z = self.solve_z(x, y, p, rng)?;
            let q = [x, y, z];
            (self.smooth(&q, p) && self.h.evaluate_mod_u64(&q, p) == 0).then_some(q)
        })
    }

    /// One representative per projective point, first nonzero coordinate 1.
    fn enumerate(&self, p: u64) -> Vec<[u64; 3]> {
        let mut reps = Vec::new();
        for y in 0..p {
            for z in 0..p {
                reps.push([1, y, z]);
            }
        }
        for z in 0..p {
            reps.push([0, 1, z]);
        }
        reps.push([0, 0, 1]);
        reps.retain(|q| self.h.evaluate_mod_u64(q, p) == 0 && self.smooth(q, p));
        reps
    }

    fn solve_z(&self, x: u64, y: u64, p: u64, rng: &mut ChaCha8Rng) -> Option<u64> {
        let c: Vec<u64> = self
            .z_coeffs
            .iter()
            .map(|cj| cj.evaluate_mod_u64(&[x, y, 0], p))
            .collect();
        let d = c.iter().rposition(|&v| v != 0);
        match d {
            None => Some(rng.gen_range(0..p)),
            Some(0) => None,
            Some(1) => Some(mul_mod(p - c[0], inv_mod(c[1], p), p)),
            Some(2) => {
                let disc = (mul_mod(c[1], c[1], p) + p - mul_mod(4, mul_mod(c[2], c[0], p), p)) % p;
                let s = sqrt_mod(disc, p)?;
                let s = if rng.gen::<bool>() { s } else { (p - s) % p };
                Some(mul_mod(
                    (p - c[1] + s) % p,
                    inv_mod(mul_mod(2, c[2], p), p),
                    p,
                ))
            }
            Some(_) => {
                let roots: Vec<u64> = (0..p)
                    .filter(|&z| self.h.evaluate_mod_u64(&[x, y, z], p) == 0)
                    .collect();
                (!roots.is_empty()).then(|| roots[rng.gen_range(0..roots.len())])
            }
        }
    }
}
