//! Prime sieving and Miller–Rabin primality testing.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::int::{mul_mod, pow_mod};

/// All primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Cached list of primes below one million.
pub fn small_primes() -> &'static [u64] {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    CACHE.get_or_init(|| primes_up_to(1_000_000))
}

fn mr_witness_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(a % n, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if mr_witness_u64(n, a, d, s) {
            return false;
        }
    }
    true
}

/// Bases 2..41 are deterministic below this bound (Sorenson–Webster).
const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

fn mr_witness_big(n: &BigUint, a: &BigUint, d: &BigUint, s: u32) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == nm1 {
        return false;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return false;
        }
    }
    true
}

/// Miller–Rabin with the given number of random rounds (deterministic bases below 3.3e24).
pub fn is_probable_prime_rounds(n: &BigInt, rounds: u32) -> bool {
    if n.sign() != num_bigint::Sign::Plus {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let n = n.magnitude();
    for &p in &small_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap() as u32;
    let d = &nm1 >> s;
    let small_bases: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let deterministic = n.to_u128().map_or(false, |v| v < DETERMINISTIC_BOUND);
    for a in small_bases {
        if mr_witness_big(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    if deterministic {
        return true;
    }
    // Seed from the number itself so results are reproducible.
    let seed = (n % BigUint::from(u64::MAX)).to_u64().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &nm1);
        if mr_witness_big(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// Primality test: deterministic below 3.3e24, 40 Miller–Rabin rounds above.
pub fn is_prime(n: &BigInt) -> bool {
    is_probable_prime_rounds(n, 40)
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime_u64(m) {
        m += 1;
    }
    m
}

/// Largest prime strictly below `n`.
pub fn prev_prime(n: u64) -> u64 {
    let mut m = n - 1;
    while !is_prime_u64(m) {
        m -= 1;
    }
    m
}

/// Integer `k`-th root test: returns `r` with `r^k == n` if it exists.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == num_bigint::Sign::Minus {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// gcd helper for big integers that accepts references.
pub fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(small_primes().len(), 78498);
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(20000);
        let set: std::collections::HashSet<u64> = sieve.into_iter().collect();
        for n in 0..20000u64 {
            assert_eq!(is_prime_u64(n), set.contains(&n), "{n}");
        }
    }

    #[test]
    fn big_primes() {
        let m61 = (BigInt::one() << 61) - 1;
        assert!(is_prime(&m61));
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * &m61)));
        // Carmichael number.
        assert!(!is_prime(&BigInt::from(561)));
        assert!(!is_prime_u64(3215031751));
    }
}
