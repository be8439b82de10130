//! Resultants and discriminants over ℤ by multimodular reduction and CRT.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::int::{crt_step, symmetric_mod};
use crate::modp;
use crate::poly::IntPoly;
use crate::primes::prev_prime;

/// Upper bound (in bits) for |Res(f, g)| from Hadamard's inequality on the
/// Sylvester matrix: ||f||^deg g * ||g||^deg f.
fn hadamard_bits(f: &IntPoly, g: &IntPoly) -> u64 {
    let norm_bits = |h: &IntPoly| -> f64 {
        let s: BigInt = h.coeffs().iter().map(|c| c * c).sum();
        // log2 of sqrt(s)
        let b = s.bits() as f64;
        let top = if b > 60.0 {
            (&s >> (b as u64 - 60)).to_f64().unwrap().log2() + (b - 60.0)
        } else {
            s.to_f64().unwrap().log2()
        };
        top / 2.0
    };
    let bits = norm_bits(f) * g.deg() as f64 + norm_bits(g) * f.deg() as f64;
    bits.ceil() as u64 + 2
}

/// Resultant Res(f, g) of nonzero integer polynomials (with their true degrees).
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    assert!(!f.is_zero() && !g.is_zero(), "resultant with zero polynomial");
    if f.deg() == 0 {
        return num_traits::pow(f.lead(), g.deg());
    }
    if g.deg() == 0 {
        return num_traits::pow(g.lead(), f.deg());
    }
    let need = hadamard_bits(f, g) + 1;
    let lcs = f.lead() * g.lead();
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut p: u64 = 1 << 62;
    while modulus.bits() <= need {
        p = prev_prime(p);
        if (&lcs % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::reduce(f, p);
        let gp = modp::reduce(g, p);
        let r = modp::resultant(&fp, &gp, p);
        value = crt_step(&value, &modulus, r, p);
        modulus *= BigInt::from(p);
        value = value.mod_floor(&modulus);
    }
    symmetric_mod(&value, &modulus)
}

/// Discriminant `(-1)^(d(d-1)/2) Res(f, f') / lc(f)` of a polynomial of degree `d >= 1`.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let d = f.deg();
    assert!(d >= 1, "discriminant of a constant");
    if d == 1 {
        return BigInt::one();
    }
    let r = resultant(f, &f.derivative());
    let q = r / f.lead();
    if (d * (d - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Sign of the leading coefficient, handy when normalizing.
pub fn lead_sign(f: &IntPoly) -> i32 {
    if f.lead().is_negative() {
        -1
    } else {
        1
    }
}
