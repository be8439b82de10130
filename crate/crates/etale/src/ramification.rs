//! Odd primes at which a square class of `L` is ramified, and validation of
//! square-norm inputs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use bm_arith::factor::{factor_integer, FactorBudget};
use bm_arith::int::rat_is_square;
use bm_padic::{AlgebraCache, LocalAlgebra, Place};

use crate::curve::Curve;
use crate::element::{elt_norm, EtaleElement};
use crate::error::{EtaleError, Result};

/// An element of square norm together with its ramification data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllCandidate {
    pub element: EtaleElement,
    /// `element` is the product of these; a single entry for plain elements
    pub factors: Vec<EtaleElement>,
    pub norm: BigRational,
    pub square_norm: bool,
    pub ramified_odd_primes: BTreeSet<u64>,
}

fn push_odd_primes(n: &BigInt, budget: &FactorBudget, out: &mut BTreeSet<u64>) -> Result<()> {
    if n.abs().is_one() {
        return Ok(());
    }
    let fac = factor_integer(n, budget);
    if !fac.is_complete() {
        return Err(EtaleError::IncompleteFactorization(n.to_string()));
    }
    for (p, _) in &fac.factors {
        let p = p
            .to_u64()
            .ok_or_else(|| EtaleError::IncompleteFactorization(format!("prime {p} exceeds 64 bits")))?;
        if p != 2 {
            out.insert(p);
        }
    }
    Ok(())
}

/// Odd primes outside of which `l` is certainly unramified: those dividing
/// the norm, the leading coefficient or a coefficient denominator.
pub fn ramification_candidates(curve: &Curve, l: &EtaleElement, budget: &FactorBudget) -> Result<Vec<u64>> {
    let n = elt_norm(curve, l);
    if n.is_zero() {
        return Err(EtaleError::ZeroDivisor);
    }
    let mut out = BTreeSet::new();
    push_odd_primes(n.numer(), budget, &mut out)?;
    push_odd_primes(n.denom(), budget, &mut out)?;
    push_odd_primes(&curve.c, budget, &mut out)?;
    for q in l.coeffs() {
        push_odd_primes(q.denom(), budget, &mut out)?;
    }
    Ok(out.into_iter().collect())
}

/// Valuation parities of the components of `l` in `L_p`.
pub fn component_valuations(alg: &LocalAlgebra, l: &EtaleElement) -> Result<Vec<i64>> {
    match alg {
        LocalAlgebra::Padic(a) => Ok(a.valuations(&a.embed(&l.rep))?),
        LocalAlgebra::Real(_) => Ok(Vec::new()),
    }
}

/// The candidate primes `p` at which some component of `l` in `L_p` has odd valuation.
pub fn odd_ramified_primes(
    curve: &Curve,
    l: &EtaleElement,
    candidates: &[u64],
    cache: &AlgebraCache,
) -> Result<BTreeSet<u64>> {
    debug_assert_eq!(cache.poly(), &curve.f);
    let mut out = BTreeSet::new();
    for &p in candidates {
        assert!(p % 2 == 1, "candidate primes must be odd");
        let alg = cache.algebra(Place::Prime(p))?;
        let v = component_valuations(&alg, l)?;
        if v.iter().any(|x| x.rem_euclid(2) == 1) {
            out.insert(p);
        }
    }
    Ok(out)
}

/// Checks that `l` is a legal input (square norm) and records where it ramifies.
pub fn verify_ell_input(curve: &Curve, l: &EtaleElement, cache: &AlgebraCache) -> Result<EllCandidate> {
    let norm = elt_norm(curve, l);
    if norm.is_zero() {
        return Err(EtaleError::ZeroDivisor);
    }
    if !rat_is_square(&norm) {
        return Err(EtaleError::NonSquareNorm(norm));
    }
    let cand = ramification_candidates(curve, l, &FactorBudget::default())?;
    let ramified_odd_primes = odd_ramified_primes(curve, l, &cand, cache)?;
    Ok(EllCandidate {
        element: l.clone(),
        factors: vec![l.clone()],
        norm,
        square_norm: true,
        ramified_odd_primes,
    })
}
