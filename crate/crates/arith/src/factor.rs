//! Integer factorization: trial division followed by Pollard–Brent rho.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::int::mul_mod;
use crate::primes::{exact_root, is_prime, is_prime_u64, small_primes};

/// Effort limits for [`factor_integer`].
#[derive(Clone, Debug)]
pub struct FactorBudget {
    /// Trial division by all primes up to this bound (at most one million).
    pub trial_bound: u64,
    /// Total number of rho iterations allowed across all composites.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 100_000_000,
        }
    }
}

/// A (possibly partial) factorization `sign * prod p^e * cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    pub sign: i8,
    /// Primes in increasing order with exponents.
    pub factors: Vec<(BigInt, u32)>,
    /// Product of the composites left unfactored; 1 when complete.
    pub cofactor: BigInt,
}

impl FactoredInteger {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Multiplies everything back together.
    pub fn value(&self) -> BigInt {
        let mut v = self.cofactor.clone();
        for (p, e) in &self.factors {
            v *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Exponent of `p` among the listed factors.
    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// The listed primes that fit in 64 bits.
    pub fn small_primes(&self) -> Vec<u64> {
        self.factors.iter().filter_map(|(p, _)| p.to_u64()).collect()
    }
}

impl std::fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (p, e) in &self.factors {
            if *e == 1 {
                parts.push(p.to_string());
            } else {
                parts.push(format!("{p}^{e}"));
            }
        }
        if !self.cofactor.is_one() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let s = parts.join(" * ");
        if self.sign < 0 {
            write!(f, "-{s}")
        } else {
            write!(f, "{s}")
        }
    }
}

/// Factors a nonzero integer within the given budget.
///
/// Composites that resist rho within the budget are multiplied into
/// `cofactor`; callers must check [`FactoredInteger::is_complete`].
pub fn factor_integer(n: &BigInt, budget: &FactorBudget) -> FactoredInteger {
    assert!(!n.is_zero(), "cannot factor zero");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut found: Vec<(BigInt, u32)> = Vec::new();

    let bound = budget.trial_bound.min(1_000_000);
    for &p in small_primes() {
        if p > bound {
            break;
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
        if e > 0 {
            found.push((pb, e));
        }
    }

    let mut cofactor = BigInt::one();
    let mut remaining = budget.rho_iterations;
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if is_prime(&x) {
            push_factor(&mut found, x, 1);
            continue;
        }
        if let Some((r, k)) = perfect_power(&x) {
            for _ in 0..k {
                stack.push(r.clone());
            }
            continue;
        }
        match rho(&x, &mut remaining) {
            Some(d) => {
                let q = &x / &d;
                stack.push(d);
                stack.push(q);
            }
            None => cofactor *= x,
        }
    }
    found.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in found {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    FactoredInteger {
        sign,
        factors: merged,
        cofactor,
    }
}

fn push_factor(found: &mut Vec<(BigInt, u32)>, p: BigInt, e: u32) {
    if let Some(entry) = found.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        found.push((p, e));
    }
}

fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    let max_k = n.bits() as u32;
    for k in 2..=max_k.max(2) {
        if !is_prime_u64(k as u64) {
            continue;
        }
        if let Some(r) = exact_root(n, k) {
            if r > BigInt::one() {
                return Some((r, k));
            }
        }
    }
    None
}

/// Finds a nontrivial factor of the odd composite `n`, charging iterations to `remaining`.
fn rho(n: &BigInt, remaining: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    if let Some(v) = n.to_u64() {
        return rho_u64(v, remaining).map(BigInt::from);
    }
    let mut c = 1u64;
    while *remaining > 0 {
        if let Some(d) = brent_big(n, &BigInt::from(c), remaining) {
            if !d.is_one() && &d != n {
                return Some(d);
            }
        }
        c += 1;
    }
    None
}

fn brent_big(n: &BigInt, c: &BigInt, remaining: &mut u64) -> Option<BigInt> {
    let f = |x: &BigInt| (x * x + c) % n;
    let mut y = BigInt::from(2);
    let mut r: u64 = 1;
    let mut q = BigInt::one();
    let m = 128u64;
    let mut x;
    let mut ys;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            *remaining = remaining.saturating_sub(lim);
            let g = q.gcd(n);
            k += lim;
            if !g.is_one() {
                if &g == n {
                    // Backtrack one step at a time.
                    loop {
                        ys = f(&ys);
                        let g = (&x - &ys).abs().gcd(n);
                        if !g.is_one() {
                            return Some(g);
                        }
                    }
                }
                return Some(g);
            }
            if k >= r || *remaining == 0 {
                break;
            }
        }
        if *remaining == 0 {
            return None;
        }
        r *= 2;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rho_u64(n: u64, remaining: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c = 1u64;
    while *remaining > 0 {
        let f = |x: u64| crate::int::add_mod(mul_mod(x, x, n), c, n);
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let m = 128u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 && *remaining > 0 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                *remaining = remaining.saturating_sub(lim);
                g = gcd_u64(q, n);
                k += lim;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
        c += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let b = FactorBudget::default();
        let f = factor_integer(&BigInt::from(1), &b);
        assert!(f.factors.is_empty() && f.is_complete());
        let f = factor_integer(&BigInt::from(-360), &b);
        assert_eq!(f.sign, -1);
        assert_eq!(f.value(), BigInt::from(-360));
        assert_eq!(f.to_string(), "-2^3 * 3^2 * 5");
    }

    #[test]
    fn semiprimes() {
        let b = FactorBudget::default();
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(998_244_353u64);
        let r = BigInt::from(2_305_843_009_213_693_951u64);
        let n = &p * &q * &r * &r;
        let f = factor_integer(&n, &b);
        assert!(f.is_complete());
        assert_eq!(f.value(), n);
        assert_eq!(f.exponent_of(&r), 2);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let b = FactorBudget {
            trial_bound: 1000,
            rho_iterations: 10,
        };
        let p = BigInt::from(2_305_843_009_213_693_951u64);
        let q = BigInt::from(4_611_686_018_427_388_039u64);
        let n = &p * &q;
        let f = factor_integer(&n, &b);
        assert!(!f.is_complete());
        assert_eq!(f.value(), n);
    }
}
