//! Primality testing and factoring: trial division, then Pollard-Brent on
//! 64-bit cofactors.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division stops at primes below this bound. A leftover cofactor must
/// be certified prime or fit in 64 bits for Pollard-Brent, else factoring fails.
pub const TRIAL_DIVISION_BOUND: u64 = 1 << 20;

/// Prime factorization of |n| as (prime, exponent) pairs in increasing order.
pub type Factorization = Vec<(BigInt, u32)>;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test: deterministic below 2^64, Miller-Rabin with the first 24
/// prime bases above.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in primes_up_to(90).iter().take(24) {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u8), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes `<= bound`. Bounds up to [`TRIAL_DIVISION_BOUND`] share one cached sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound <= TRIAL_DIVISION_BOUND {
        let all = cached_primes();
        let end = all.partition_point(|&p| p <= bound);
        all[..end].to_vec()
    } else {
        sieve(bound)
    }
}

fn cached_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_DIVISION_BOUND))
}

fn push_factor(out: &mut Factorization, p: BigInt, e: u32) {
    if e > 0 {
        out.push((p, e));
    }
}

/// Factors |n| by trial division up to [`TRIAL_DIVISION_BOUND`].
///
/// A composite cofactor that fits in 64 bits is split by Pollard-Brent. Fails
/// if a larger cofactor remains that is not certified prime.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    let mut out = Factorization::new();
    let mut m = n.abs();
    if m.is_zero() {
        return Ok(out);
    }
    for &p in cached_primes() {
        if let Some(small) = m.to_u128() {
            return factor_u128(small, p, out);
        }
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        push_factor(&mut out, pb, e);
    }
    finish_cofactor(m, out)
}

fn factor_u128(mut m: u128, start: u64, mut out: Factorization) -> Result<Factorization> {
    let primes = cached_primes();
    let from = primes.partition_point(|&p| p < start);
    // a prime cofactor would otherwise cost a full pass over the table
    let prime_cofactor = |m: u128| m > 1 && u64::try_from(m).is_ok_and(is_prime_u64);
    if prime_cofactor(m) {
        return finish_cofactor(BigInt::from(m), out);
    }
    for &p in &primes[from..] {
        let p128 = p as u128;
        if p128 * p128 > m {
            break;
        }
        // cheaper 64-bit remainder once the cofactor fits
        let divides = |m: u128| match u64::try_from(m) {
            Ok(s) => s % p == 0,
            Err(_) => m.is_multiple_of(p128),
        };
        let mut e = 0;
        while divides(m) {
            m /= p128;
            e += 1;
        }
        push_factor(&mut out, BigInt::from(p), e);
        if e > 0 && prime_cofactor(m) {
            break;
        }
    }
    finish_cofactor(BigInt::from(m), out)
}

fn finish_cofactor(m: BigInt, mut out: Factorization) -> Result<Factorization> {
    if m.is_one() {
        return Ok(out);
    }
    if is_prime(&m) {
        out.push((m, 1));
        return Ok(out);
    }
    let Some(small) = m.to_u64() else {
        return Err(Error::UnfactoredCofactor(m.to_string()));
    };
    // every prime factor exceeds the trial bound, so at most three exist
    let mut big = Vec::new();
    split_u64(small, &mut big);
    big.sort_unstable();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == BigInt::from(p) => *e += 1,
            _ => out.push((BigInt::from(p), 1)),
        }
    }
    Ok(out)
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = (1..)
        .find_map(|c| pollard_brent(n, c))
        .expect("some constant splits a composite");
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Brent's cycle variant of Pollard rho with `x -> x^2 + c`. Returns a proper
/// divisor of the odd composite `n`, or `None` when this `c` fails.
fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut g, mut r, mut q) = (2u64, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (y, y);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        // the batch overshot; step singly from the saved point
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Primes dividing the product of `values` (zeros ignored).
///
/// Values are first split along pairwise gcds so that each trial division
/// runs on a smaller number.
pub fn prime_support(values: &[BigInt]) -> Result<BTreeSet<BigInt>> {
    let mut parts: Vec<BigInt> = values
        .iter()
        .map(|v| v.abs())
        .filter(|v| !v.is_zero() && !v.is_one())
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        'scan: for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                let d = parts[i].gcd(&parts[j]);
                if !d.is_one() && (d != parts[i] || d != parts[j]) {
                    parts[i] = &parts[i] / &d;
                    parts[j] = &parts[j] / &d;
                    parts.push(d);
                    parts.retain(|v| !v.is_one());
                    changed = true;
                    break 'scan;
                }
            }
        }
    }
    parts.sort();
    parts.dedup();
    let mut out = BTreeSet::new();
    for v in &parts {
        for (p, _) in factor(v)? {
            out.insert(p);
        }
    }
    Ok(out)
}
