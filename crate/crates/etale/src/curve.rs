//! Hyperelliptic curves `y² = f(x)` with `deg f = 2g + 2`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use bm_arith::factor::{factor_integer, FactorBudget, FactoredInteger};
use bm_arith::poly::{IntPoly, RatPoly};
use bm_arith::resultant::discriminant;

use crate::element::EtaleElement;
use crate::error::{EtaleError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub f: IntPoly,
    /// leading coefficient of `f`
    pub c: BigInt,
    pub g: usize,
    pub disc: BigInt,
    pub disc_factored: FactoredInteger,
}

impl Curve {
    pub fn new(f: IntPoly) -> Result<Self> {
        Self::with_budget(f, &FactorBudget::default())
    }

    pub fn with_budget(f: IntPoly, budget: &FactorBudget) -> Result<Self> {
        let d = f.deg();
        if f.is_zero() || d < 4 || d % 2 == 1 {
            return Err(EtaleError::BadDegree(d));
        }
        let disc = discriminant(&f);
        if disc.is_zero() {
            return Err(EtaleError::Singular);
        }
        let disc_factored = factor_integer(&disc, budget);
        Ok(Curve { c: f.lead(), g: (d - 2) / 2, f, disc, disc_factored })
    }

    /// Coefficients given leading first.
    pub fn from_desc(coeffs: &[i64]) -> Result<Self> {
        Self::new(IntPoly::from_i64_desc(coeffs))
    }

    pub fn degree(&self) -> usize {
        self.f.deg()
    }

    /// `v_p(disc f)`.
    pub fn disc_valuation(&self, p: u64) -> u32 {
        self.disc_factored.exponent_of(&BigInt::from(p))
    }

    /// Primes of the discriminant factorization that fit in 64 bits.
    pub fn bad_primes(&self) -> Vec<u64> {
        self.disc_factored
            .factors
            .iter()
            .filter_map(|(p, _)| p.to_u64())
            .collect()
    }

    /// Coefficients leading first, space separated.
    pub fn coeff_string(&self) -> String {
        self.f.to_desc_string()
    }

    /// Reduces `g` modulo `f`.
    pub fn element(&self, g: RatPoly) -> EtaleElement {
        EtaleElement { rep: g.rem_int(&self.f) }
    }

    pub fn one(&self) -> EtaleElement {
        self.element(RatPoly::one())
    }

    pub fn theta(&self) -> EtaleElement {
        self.element(RatPoly::x())
    }

    pub fn mul(&self, a: &EtaleElement, b: &EtaleElement) -> EtaleElement {
        EtaleElement { rep: a.rep.mul_mod(&b.rep, &self.f) }
    }

    pub fn pow(&self, a: &EtaleElement, k: u32) -> EtaleElement {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }
}
