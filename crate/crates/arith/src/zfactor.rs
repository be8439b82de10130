//! Factorization in ℤ[x]: squarefree decomposition, modular factorization,
//! Hensel lifting and exhaustive recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::int::{inv_mod_big, symmetric_mod};
use crate::modp::{self, FpPoly};
use crate::poly::IntPoly;
use crate::primes::primes_up_to;

/// Polynomial arithmetic modulo an integer `m` (coefficients kept in `[0, m)`).
mod zm {
    use super::*;

    pub fn norm(a: &IntPoly, m: &BigInt) -> IntPoly {
        IntPoly::new(a.coeffs().iter().map(|c| c.mod_floor(m)).collect())
    }

    pub fn mul(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
        norm(&a.mul(b), m)
    }

    pub fn sub(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
        norm(&a.sub(b), m)
    }

    pub fn add(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
        norm(&a.add(b), m)
    }

    /// Division by a monic divisor.
    pub fn divrem_monic(a: &IntPoly, b: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
        let a = norm(a, m);
        if a.deg() < b.deg() || a.is_zero() {
            return (IntPoly::zero(), a);
        }
        let db = b.deg();
        let mut r: Vec<BigInt> = a.coeffs().to_vec();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let t = r[k + db].mod_floor(m);
            if t.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs().iter().enumerate() {
                r[k + j] = (&r[k + j] - &t * bc).mod_floor(m);
            }
            q[k] = t;
        }
        r.truncate(db);
        (IntPoly::new(q), norm(&IntPoly::new(r), m))
    }
}

/// One quadratic Hensel step: from `f = g h mod m` with `h` monic and
/// `s g + t h = 1 mod m`, produce the same data modulo `m^2`.
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let e = zm::sub(f, &g.mul(h), &m2);
    let (q, r) = zm::divrem_monic(&zm::mul(s, &e, &m2), h, &m2);
    let g2 = zm::add(g, &zm::add(&zm::mul(t, &e, &m2), &zm::mul(&q, g, &m2), &m2), &m2);
    let h2 = zm::add(h, &r, &m2);
    let b = zm::sub(
        &zm::add(&zm::mul(s, &g2, &m2), &zm::mul(t, &h2, &m2), &m2),
        &IntPoly::one(),
        &m2,
    );
    let (c, d) = zm::divrem_monic(&zm::mul(s, &b, &m2), &h2, &m2);
    let s2 = zm::sub(s, &d, &m2);
    let t2 = zm::sub(&zm::sub(t, &zm::mul(t, &b, &m2), &m2), &zm::mul(&c, &g2, &m2), &m2);
    (g2, h2, s2, t2)
}

/// Lifts a monic factor `u` of `f mod p` (coprime to its cofactor) to the unique
/// monic factor of `f mod p^k` reducing to it. `f` must be monic modulo `p^k`.
pub fn lift_factor(f: &IntPoly, u: &FpPoly, p: u64, k: u32) -> IntPoly {
    let pb = BigInt::from(p);
    let fp = modp::reduce(f, p);
    let (cof, rem) = modp::divrem(&fp, u, p);
    assert!(rem.is_empty(), "factor does not divide");
    // s * cof + t * u = 1
    let (gg, s, t) = modp::xgcd(&cof, u, p);
    assert!(gg == vec![1], "factors not coprime");
    let mut g = modp::lift(&cof);
    let mut h = modp::lift(u);
    let mut s = modp::lift(&s);
    let mut t = modp::lift(&t);
    let mut m = pb.clone();
    let mut e = 1u32;
    while e < k {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
        e *= 2;
    }
    let target = num_traits::pow(pb, k as usize);
    zm::norm(&h, &target)
}

/// Mignotte-style bound: every coefficient of any factor of `f` has absolute
/// value at most `2^deg * ||f||_2`.
fn factor_coeff_bound(f: &IntPoly) -> BigInt {
    let s: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = crate::int::isqrt(&s) + 1;
    (BigInt::one() << f.deg()) * norm
}

fn choose_prime(f: &IntPoly) -> (u64, Vec<FpPoly>) {
    let lc = f.lead();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in primes_up_to(20000).into_iter().skip(1) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::reduce(f, p);
        if fp.len() != f.coeffs().len() {
            continue;
        }
        let d = modp::derivative(&fp, p);
        if modp::gcd(&fp, &d, p).len() != 1 {
            continue;
        }
        let (_, fs) = modp::factor(&fp, p);
        let facs: Vec<FpPoly> = fs.into_iter().map(|(g, _)| g).collect();
        if facs.len() == 1 {
            return (p, facs);
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    best.expect("no suitable prime found")
}

/// Factors a primitive squarefree polynomial of positive degree with positive leading coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    if f.deg() == 1 {
        return vec![f.clone()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let lc = f.lead();
    let bound = factor_coeff_bound(f) * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        k += 1;
        pk *= &pb;
    }
    // Hensel lifting needs a monic target with the same factorization mod p.
    let lc_inv = inv_mod_big(&lc, &pk).unwrap();
    let f_monic = zm::norm(&f.scale(&lc_inv), &pk);
    let mut lifted: Vec<IntPoly> = modular
        .iter()
        .map(|u| lift_factor(&f_monic, u, p, k))
        .collect();

    let mut result = Vec::new();
    let mut g = f.clone();
    let mut s = 1usize;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let n = lifted.len();
        let mut combo: Vec<usize> = (0..s).collect();
        loop {
            let lcg = g.lead();
            let mut cand = IntPoly::constant(lcg.clone());
            for &i in &combo {
                cand = zm::mul(&cand, &lifted[i], &pk);
            }
            let cand = IntPoly::new(cand.coeffs().iter().map(|c| symmetric_mod(c, &pk)).collect());
            let cand = cand.primitive_part();
            if let Some(q) = g.div_exact(&cand) {
                result.push(cand);
                g = q;
                let keep: Vec<IntPoly> = (0..n)
                    .filter(|i| !combo.contains(i))
                    .map(|i| lifted[i].clone())
                    .collect();
                lifted = keep;
                found = true;
                break;
            }
            if !next_combo(&mut combo, n) {
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    result.push(g.primitive_part());
    result
}

fn next_combo(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Squarefree decomposition over ℤ of a primitive polynomial (Yun).
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let f = f.primitive_part();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).unwrap();
    let mut c = df.div_exact(&a0).unwrap();
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).unwrap();
        if b.deg() == 0 {
            break;
        }
        c = d.div_exact(&a).unwrap();
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Result of [`factor_over_z`]: `f = content * prod g_i^e_i`.
#[derive(Clone, Debug)]
pub struct ZFactorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl ZFactorization {
    pub fn product(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (g, e) in &self.factors {
            acc = acc.mul(&g.pow(*e));
        }
        acc
    }
}

/// Complete factorization over ℤ into irreducibles with positive leading coefficient.
pub fn factor_over_z(f: &IntPoly) -> ZFactorization {
    assert!(!f.is_zero(), "factoring zero");
    let mut content = f.content();
    if f.lead().is_negative() {
        content = -content;
    }
    let prim = f.div_scalar(&content);
    let mut factors = Vec::new();
    // Powers of x are split off first so the modular step sees nonzero constants.
    let zeros = prim.coeffs().iter().take_while(|c| c.is_zero()).count();
    let prim = IntPoly::new(prim.coeffs()[zeros..].to_vec());
    if zeros > 0 {
        factors.push((IntPoly::x(), zeros as u32));
    }
    for (g, e) in squarefree_decomposition(&prim) {
        for h in factor_squarefree(&g) {
            factors.push((h, e));
        }
    }
    factors.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs().to_vec()).cmp(&(b.0.deg(), b.0.coeffs().to_vec()))
    });
    ZFactorization { content, factors }
}

/// True iff `f` is irreducible in ℚ[x] and of positive degree.
pub fn is_irreducible_over_q(f: &IntPoly) -> bool {
    if f.deg() == 0 {
        return false;
    }
    let fz = factor_over_z(f);
    fz.factors.len() == 1 && fz.factors[0].1 == 1
}

/// Small integer roots helper: rational roots of `f` from its linear factors.
pub fn rational_roots(f: &IntPoly) -> Vec<num_rational::BigRational> {
    factor_over_z(f)
        .factors
        .iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| num_rational::BigRational::new(-g.coeff(0), g.coeff(1)))
        .collect()
}
