//! Finite residue fields F_q = F_p[t]/(h) with `h` monic irreducible.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bm_arith::modp::{self, FpPoly};

#[derive(Clone, Debug)]
pub struct ResidueField {
    pub p: u64,
    pub h: FpPoly,
    pub f: usize,
}

/// Element as a coefficient vector of length `f`.
pub type Fq = Vec<u64>;

impl ResidueField {
    pub fn new(p: u64, h: FpPoly) -> Self {
        let f = h.len() - 1;
        Self { p, h, f }
    }

    pub fn prime_field(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.f)
    }

    fn pad(&self, mut a: FpPoly) -> Fq {
        a.resize(self.f, 0);
        a
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.f]
    }

    pub fn one(&self) -> Fq {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Fq {
        self.pad(modp::add(a, b, self.p))
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Fq {
        self.pad(modp::sub(a, b, self.p))
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Fq {
        self.pad(modp::mulmod(&modp::trimmed(a.to_vec()), &modp::trimmed(b.to_vec()), &self.h, self.p))
    }

    pub fn pow(&self, a: &[u64], e: &BigUint) -> Fq {
        self.pad(modp::powmod_big(&modp::trimmed(a.to_vec()), e, &self.h, self.p))
    }

    pub fn inv(&self, a: &[u64]) -> Option<Fq> {
        let a = modp::trimmed(a.to_vec());
        if a.is_empty() {
            return None;
        }
        let (g, s, _) = modp::xgcd(&a, &self.h, self.p);
        if g != vec![1] {
            return None;
        }
        Some(self.pad(modp::rem(&s, &self.h, self.p)))
    }

    /// Quadratic character for odd `p`: true iff `a` is a nonzero square.
    pub fn is_square(&self, a: &[u64]) -> bool {
        if self.is_zero(a) {
            return true;
        }
        if self.p == 2 {
            return true;
        }
        let e = (self.order() - 1u32) >> 1;
        self.pow(a, &e) == self.one()
    }

    /// Square root in characteristic 2 (Frobenius inverse).
    pub fn sqrt_char2(&self, a: &[u64]) -> Fq {
        assert_eq!(self.p, 2);
        let e = BigUint::one() << (self.f - 1);
        self.pow(a, &e)
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: &[u64]) -> u64 {
        let mut acc = self.zero();
        let mut x = a.to_vec();
        let pp = BigUint::from(self.p);
        for _ in 0..self.f {
            acc = self.add(&acc, &x);
            x = self.pow(&x, &pp);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    /// Absolute norm to F_p.
    pub fn norm(&self, a: &[u64]) -> u64 {
        let q = self.order();
        let e = (q - 1u32) / (self.p - 1);
        let n = self.pow(a, &e);
        n[0]
    }

    /// A fixed non-square (odd `p`), the first among seeded random draws;
    /// for even `f` every element of `F_p` is a square.
    pub fn nonsquare(&self) -> Fq {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        loop {
            let v: Fq = (0..self.f).map(|_| rng.gen_range(0..self.p)).collect();
            if !self.is_zero(&v) && !self.is_square(&v) {
                return v;
            }
        }
    }

    /// The basis vector `t^j`.
    pub fn basis(&self, j: usize) -> Fq {
        let mut v = self.zero();
        v[j] = 1;
        v
    }
}
