//! Integer and rational helpers shared by the whole workspace.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    split_valuation(n, p).0
}

/// Writes `n = p^v * m` with `p` not dividing `m`. `n` must be nonzero.
pub fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// p-adic valuation of a nonzero rational.
pub fn rat_valuation(q: &BigRational, p: u64) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative number");
    n.sqrt()
}

/// True iff `n` is the square of an integer.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if n.is_zero() {
        return true;
    }
    // Quick rejection by residues modulo a few small moduli.
    for m in [64u64, 63, 65, 11] {
        let r = (n % BigInt::from(m)).to_u64().unwrap();
        if !square_mod_small(r, m) {
            return false;
        }
    }
    let r = n.sqrt();
    &r * &r == *n
}

fn square_mod_small(r: u64, m: u64) -> bool {
    (0..m).any(|x| x * x % m == r)
}


/// Square root of a perfect square, or `None`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// True iff the rational number is the square of a rational number.
pub fn rat_is_square(q: &BigRational) -> bool {
    // BigRational is kept in lowest terms with positive denominator.
    is_square(q.numer()) && is_square(q.denom())
}

/// Bit length of |n|.
pub fn bits(n: &BigInt) -> u64 {
    n.bits()
}

/// Converts to `u64` if the value is in range.
pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

/// Nonnegative residue of `n` modulo `m`.
pub fn mod_u64(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_u64().unwrap()
}

/// Residue of a p-integral rational modulo `m` (the denominator must be a unit mod m).
pub fn rat_mod_u64(q: &BigRational, m: u64) -> Option<u64> {
    let d = mod_u64(q.denom(), m);
    let inv = inv_mod(d, m)?;
    Some(mul_mod(mod_u64(q.numer(), m), inv, m))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
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

/// Modular inverse via extended Euclid, `None` when not invertible.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Legendre symbol (a/p) for an odd prime p, returned as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Inverse of a unit modulo `m` for big integers.
pub fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Symmetric residue in (-m/2, m/2].
pub fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    let half: BigInt = m >> 1;
    if r > half {
        r - m
    } else {
        r
    }
}

/// `p^e` as a big integer.
pub fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Absolute value as an unsigned big integer.
pub fn abs_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

/// Sign of a big integer as -1, 0, 1.
pub fn sign_i32(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// The rational `n/d`.
pub fn rat_from_ints(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Greatest common divisor of two big integers (nonnegative).
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Least common multiple of the denominators of a list of rationals.
pub fn denom_lcm<'a, I: IntoIterator<Item = &'a BigRational>>(it: I) -> BigInt {
    let mut l = BigInt::one();
    for q in it {
        l = l.lcm(q.denom());
    }
    l
}

/// Chinese remainder: combine `x mod m` with `r mod p` (coprime moduli).
pub fn crt_step(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let xm = mod_u64(x, p);
    let mm = mod_u64(m, p);
    let inv = inv_mod(mm, p).expect("moduli must be coprime");
    let t = mul_mod(sub_mod(r % p, xm, p), inv, p);
    x + m * BigInt::from(t)
}
