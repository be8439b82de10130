//! Local solubility at single places and everywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use bm_arith::factor::{factor_integer, FactorBudget};
use bm_arith::int::legendre;
use bm_arith::primes::primes_up_to;
use bm_etale::Curve;
use bm_padic::{AlgebraCache, Place};

use crate::error::{MuError, Result};
use crate::image::first_point;

/// Outcome of an everywhere-local-solubility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solubility {
    pub soluble: bool,
    /// first place without local points, if any
    pub failing: Option<Place>,
    /// places tested explicitly, in order
    pub checked: Vec<Place>,
}

/// Largest prime `p` with `p + 1 − 2g√p ≤ 0`. Above it, a curve of genus `g`
/// whose discriminant has valuation at most one at an odd `p ∤ c` has a smooth
/// `F_p`-point, which lifts.
pub fn hasse_weil_threshold(g: usize) -> u64 {
    let g = g as f64;
    let limit = ((g + (g * g - 1.0).max(0.0).sqrt()).powi(2)).ceil() as u64 + 2;
    primes_up_to(limit)
        .into_iter()
        .filter(|&p| (p as f64) + 1.0 - 2.0 * g * (p as f64).sqrt() <= 0.0)
        .max()
        .unwrap_or(0)
}

/// A point with unit square value modulo an odd `p`, lifted by Hensel.
fn quick_point(curve: &Curve, p: u64) -> bool {
    let pb = BigInt::from(p);
    let coeffs: Vec<u64> = curve
        .f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    let c = *coeffs.last().unwrap();
    if c != 0 && legendre(c, p) == 1 {
        return true;
    }
    (0..p).any(|x| {
        let mut acc = 0u64;
        for &a in coeffs.iter().rev() {
            acc = ((acc as u128 * x as u128 + a as u128) % p as u128) as u64;
        }
        acc != 0 && legendre(acc, p) == 1
    })
}

pub fn is_locally_soluble(curve: &Curve, v: Place, cache: &AlgebraCache) -> Result<bool> {
    match v {
        Place::Prime(p) if p != 2 && quick_point(curve, p) => Ok(true),
        _ => first_point(curve, v, cache),
    }
}

/// Odd and even primes of `S_min`: 2, the primes dividing `c` and those where
/// the discriminant has valuation at least 2.
pub fn smin_primes(curve: &Curve) -> Result<Vec<u64>> {
    if !curve.disc_factored.is_complete() {
        return Err(MuError::IncompleteFactorization);
    }
    let mut out = vec![2u64];
    let fc = factor_integer(&curve.c.abs(), &FactorBudget::default());
    if !fc.is_complete() {
        return Err(MuError::IncompleteFactorization);
    }
    for (p, _) in &fc.factors {
        out.push(p.to_u64().ok_or(MuError::IncompleteFactorization)?);
    }
    for (p, e) in &curve.disc_factored.factors {
        if *e >= 2 {
            out.push(p.to_u64().ok_or(MuError::IncompleteFactorization)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Checks `∞`, the primes of `S_min` and every prime up to
/// `max(bound, hasse_weil_threshold(g))`; the remaining primes have points by
/// the Hasse–Weil bound.
pub fn is_everywhere_locally_soluble(curve: &Curve, bound: u64, cache: &AlgebraCache) -> Result<Solubility> {
    let mut places = vec![Place::Real];
    let smin = smin_primes(curve)?;
    let limit = bound.max(hasse_weil_threshold(curve.g));
    let mut primes: Vec<u64> = smin.iter().copied().chain(primes_up_to(limit)).collect();
    primes.sort_unstable();
    primes.dedup();
    places.extend(primes.into_iter().map(Place::Prime));
    let mut checked = Vec::new();
    for v in places {
        checked.push(v);
        if !is_locally_soluble(curve, v, cache)? {
            return Ok(Solubility { soluble: false, failing: Some(v), checked });
        }
    }
    Ok(Solubility { soluble: true, failing: None, checked })
}

