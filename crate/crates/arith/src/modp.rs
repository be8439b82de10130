//! Polynomials over the prime field F_p (p < 2^63), constant term first,
//! with squarefree, distinct-degree and Cantor–Zassenhaus factorization.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::int::{add_mod, inv_mod, mod_u64, mul_mod, pow_mod, sub_mod};
use crate::poly::IntPoly;

/// A polynomial over F_p stored as residues in `[0, p)`.
pub type FpPoly = Vec<u64>;

pub fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn trimmed(mut a: FpPoly) -> FpPoly {
    trim(&mut a);
    a
}

/// Degree, `None` for zero.
pub fn deg(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn reduce(f: &IntPoly, p: u64) -> FpPoly {
    trimmed(f.coeffs().iter().map(|c| mod_u64(c, p)).collect())
}

/// Lift to integers in `[0, p)`.
pub fn lift(a: &[u64]) -> IntPoly {
    IntPoly::new(a.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trimmed(
        (0..n)
            .map(|i| {
                add_mod(
                    *a.get(i).unwrap_or(&0),
                    *b.get(i).unwrap_or(&0),
                    p,
                )
            })
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trimmed(
        (0..n)
            .map(|i| {
                sub_mod(
                    *a.get(i).unwrap_or(&0),
                    *b.get(i).unwrap_or(&0),
                    p,
                )
            })
            .collect(),
    )
}

pub fn scale(a: &[u64], k: u64, p: u64) -> FpPoly {
    trimmed(a.iter().map(|&c| mul_mod(c, k, p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pm = p as u128;
    // Accumulate in u128 and reduce lazily when p is small.
    let small = p < (1 << 31);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = x as u128 * y as u128;
            if small {
                out[i + j] += t;
            } else {
                out[i + j] = (out[i + j] + t % pm) % pm;
            }
        }
        if small && i % 1024 == 1023 {
            for o in out.iter_mut() {
                *o %= pm;
            }
        }
    }
    trimmed(out.into_iter().map(|v| (v % pm) as u64).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p).expect("leading coefficient not invertible");
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let t = mul_mod(r[k + db], inv, p);
        if t == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[k + j] = sub_mod(r[k + j], mul_mod(t, bc, p), p);
        }
        q[k] = t;
    }
    r.truncate(db);
    (trimmed(q), trimmed(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv_mod(l, p).unwrap(), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g` and `g` monic.
pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&l) => {
            let inv = inv_mod(l, p).unwrap();
            (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
        }
    }
}

pub fn derivative(a: &[u64], p: u64) -> FpPoly {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = add_mod(mul_mod(acc, x, p), c, p);
    }
    acc
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

/// `a^e mod m` for a big exponent.
pub fn powmod_big(a: &[u64], e: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut result: FpPoly = rem(&[1], m, p);
    let base = rem(a, m, p);
    let nbits = e.bits();
    for i in (0..nbits).rev() {
        result = mulmod(&result, &result, m, p);
        if e.bit(i) {
            result = mulmod(&result, &base, m, p);
        }
    }
    result
}

pub fn powmod(a: &[u64], e: u64, m: &[u64], p: u64) -> FpPoly {
    powmod_big(a, &BigUint::from(e), m, p)
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(a: &[u64], p: u64) -> FpPoly {
    // Over F_p the Frobenius fixes coefficients, so the root just takes every p-th term.
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < a.len() {
        out.push(a[i]);
        i += p as usize;
    }
    trimmed(out)
}

/// Squarefree factorization of a monic polynomial: list of `(factor, multiplicity)`.
pub fn squarefree(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let f = monic(f, p);
    let mut out = Vec::new();
    if deg(&f).unwrap_or(0) == 0 {
        return out;
    }
    sqf_rec(&f, p, 1, &mut out);
    out.sort();
    out
}

fn sqf_rec(f: &[u64], p: u64, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    // Yun-style loop with p-th root extraction.
    let df = derivative(f, p);
    if df.is_empty() {
        let r = pth_root(f, p);
        sqf_rec(&r, p, mult * p as u32, out);
        return;
    }
    let mut c = gcd(f, &df, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z).unwrap_or(0) > 0 {
            out.push((monic(&z, p), i * mult));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if deg(&c).unwrap_or(0) > 0 {
        let r = pth_root(&c, p);
        sqf_rec(&r, p, mult * p as u32, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut h = rem(&x, &f, p);
    let mut d = 0usize;
    while deg(&f).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, p, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if deg(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    if deg(&f).unwrap_or(0) > 0 {
        let n = deg(&f).unwrap();
        out.push((f, n));
    }
    out
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = deg(f).unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![monic(f, p)];
    }
    let exp = if p == 2 {
        BigUint::zero()
    } else {
        (num_traits::pow(BigUint::from(p), d) - BigUint::one()) / BigUint::from(2u32)
    };
    loop {
        let a: FpPoly = trimmed((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)) mod f.
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            sub(&powmod_big(&a, &exp, f, p), &[1], p)
        };
        let g = gcd(&b, f, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Full factorization: leading coefficient and monic irreducible factors with multiplicity,
/// sorted by (degree, coefficients).
pub fn factor(f: &[u64], p: u64) -> (u64, Vec<(FpPoly, u32)>) {
    let f = trimmed(f.to_vec());
    assert!(!f.is_empty(), "factoring zero polynomial");
    let lc = *f.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, m) in squarefree(&f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    (lc, out)
}

/// Roots in F_p of a nonzero polynomial (distinct, sorted).
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = trimmed(f.to_vec());
    if deg(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    if p < 64 {
        return (0..p).filter(|&x| eval(&f, x, p) == 0).collect();
    }
    let f = monic(&f, p);
    let x: FpPoly = vec![0, 1];
    let xp = powmod(&x, p, &f, p);
    let g = gcd(&sub(&xp, &x, p), &f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7007 ^ p);
    let mut out: Vec<u64> = equal_degree(&g, 1, p, &mut rng)
        .into_iter()
        .map(|l| sub_mod(0, l[0], p))
        .collect();
    out.sort();
    out
}

/// True iff `f` is irreducible over F_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trimmed(f.to_vec());
    let n = match deg(&f) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let (_, fs) = factor(&f, p);
    fs.len() == 1 && fs[0].1 == 1 && deg(&fs[0].0) == Some(n)
}

/// Resultant over F_p of polynomials of the given true degrees.
pub fn resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let (mut a, mut b) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut acc = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mul_mod(acc, pow_mod(b[0], da as u64, p), p);
        }
        if da == 0 {
            return mul_mod(acc, pow_mod(a[0], db as u64, p), p);
        }
        let r = rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, r)
        if (da * db) % 2 == 1 {
            acc = sub_mod(0, acc, p);
        }
        acc = mul_mod(acc, pow_mod(b[db], (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Matrix of the Frobenius-power map on F_p[x]/(m): column j is x^(j p) mod m.
pub fn frobenius_matrix(m: &[u64], p: u64) -> Vec<FpPoly> {
    let n = deg(m).unwrap();
    let x: FpPoly = vec![0, 1];
    let xp = powmod(&x, p, m, p);
    let mut cols = Vec::with_capacity(n);
    let mut cur: FpPoly = vec![1];
    for _ in 0..n {
        cols.push(cur.clone());
        cur = mulmod(&cur, &xp, m, p);
    }
    cols
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prod(fs: &[(FpPoly, u32)], lc: u64, p: u64) -> FpPoly {
        let mut acc = vec![lc];
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    #[test]
    fn factor_small() {
        for p in [2u64, 3, 5, 7, 13, 1_000_003] {
            // (x^2+1)(x+1)^3 (x^3+x+1)
            let f = mul(
                &mul(&[1, 0, 1], &powmod(&[1, 1], 3, &[0, 0, 0, 0, 0, 0, 0, 1], p), p),
                &[1, 1, 0, 1],
                p,
            );
            let (lc, fs) = factor(&f, p);
            assert_eq!(prod(&fs, lc, p), f, "p = {p}");
            for (g, _) in &fs {
                assert!(is_irreducible(g, p));
            }
        }
    }

    #[test]
    fn roots_and_irreducibility() {
        let p = 10007u64;
        let f = mul(&mul(&[p - 3, 1], &[p - 5, 1], p), &[1, 0, 1], p);
        let r = roots(&f, p);
        assert!(r.contains(&3) && r.contains(&5));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn resultant_mod_p() {
        // Res(x^2 - 1, x - 2) = (2-1)(2+1)... = f(2) up to sign = 3.
        let p = 101;
        assert_eq!(resultant(&[p - 1, 0, 1], &[p - 2, 1], p), 3);
        assert_eq!(resultant(&[p - 1, 0, 1], &[p - 1, 1], p), 0);
    }

    #[test]
    fn squarefree_parts() {
        let p = 3;
        // x^3 + 2 = (x + 2)^3 over F_3.
        let s = squarefree(&[2, 0, 0, 1], p);
        assert_eq!(s, vec![(vec![2, 1], 3)]);
    }
}
