//! The set of places `S` and why each place belongs to it.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use bm_arith::factor::{factor_integer, FactorBudget};
use bm_etale::{Curve, EllCandidate};
use bm_padic::Place;

use crate::error::{EngineError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Archimedean,
    AboveTwo,
    LeadingCoefficient,
    DiscValuation,
    EllRamification,
    UserAdded,
}

/// `S_min ⊆ S` with the reasons for membership of each place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSelection {
    pub s_min: BTreeSet<Place>,
    pub s: BTreeMap<Place, BTreeSet<Provenance>>,
    /// hypotheses the selection rests on, empty when unconditional
    pub assumptions: Vec<String>,
}

impl PrimeSelection {
    pub fn places(&self) -> Vec<Place> {
        self.s.keys().copied().collect()
    }

    pub fn contains(&self, v: Place) -> bool {
        self.s.contains_key(&v)
    }

    fn add(&mut self, v: Place, why: Provenance) {
        self.s.entry(v).or_default().insert(why);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SminOptions {
    /// treat an unfactored part of the discriminant as squarefree
    pub assume_squarefree_cofactor: bool,
}

pub fn compute_smin(curve: &Curve) -> Result<PrimeSelection> {
    compute_smin_with(curve, &SminOptions::default())
}

/// `∞`, 2, the primes dividing the leading coefficient and the primes at
/// which the discriminant has valuation at least 2.
pub fn compute_smin_with(curve: &Curve, opts: &SminOptions) -> Result<PrimeSelection> {
    let mut sel = PrimeSelection { s_min: BTreeSet::new(), s: BTreeMap::new(), assumptions: Vec::new() };
    sel.add(Place::Real, Provenance::Archimedean);
    sel.add(Place::Prime(2), Provenance::AboveTwo);
    let fc = factor_integer(&curve.c.abs(), &FactorBudget::default());
    if !fc.is_complete() {
        return Err(EngineError::IncompleteFactorization(format!("leading coefficient {}", curve.c)));
    }
    for (p, _) in &fc.factors {
        sel.add(Place::Prime(small_prime(p)?), Provenance::LeadingCoefficient);
    }
    let disc = &curve.disc_factored;
    if !disc.is_complete() {
        let cof = &disc.cofactor;
        if !opts.assume_squarefree_cofactor {
            return Err(EngineError::IncompleteFactorization(format!(
                "discriminant cofactor with {} digits",
                cof.to_string().len()
            )));
        }
        let r = cof.sqrt();
        if &(&r * &r) == cof {
            return Err(EngineError::IncompleteFactorization("discriminant cofactor is a perfect square".into()));
        }
        sel.assumptions.push(format!(
            "the unfactored discriminant part ({} digits, no prime factor below the trial bound) is squarefree",
            cof.to_string().len()
        ));
    }
    for (p, e) in &disc.factors {
        if *e >= 2 {
            sel.add(Place::Prime(small_prime(p)?), Provenance::DiscValuation);
        }
    }
    sel.s_min = sel.s.keys().copied().collect();
    Ok(sel)
}

fn small_prime(p: &BigInt) -> Result<u64> {
    p.to_u64().ok_or_else(|| EngineError::IncompleteFactorization(format!("prime {p} exceeds 64 bits")))
}

/// `S = S_min ∪ {odd primes where some ℓ ramifies} ∪ extra`.
pub fn assemble_s(smin: &PrimeSelection, ells: &[EllCandidate], extra: &[Place]) -> PrimeSelection {
    let mut sel = smin.clone();
    for l in ells {
        for &p in &l.ramified_odd_primes {
            if !sel.s_min.contains(&Place::Prime(p)) {
                sel.add(Place::Prime(p), Provenance::EllRamification);
            }
        }
    }
    for &v in extra {
        if !sel.s_min.contains(&v) {
            sel.add(v, Provenance::UserAdded);
        }
    }
    sel
}

/// Largest integer `q` with `√q + 1/√q ≤ 2(2^{2g}(g − 1) + 1)`, i.e. with
/// `(q + 1)² ≤ R² q`.
pub fn theorem_prime_bound(g: usize) -> BigInt {
    assert!(g >= 2);
    let r: BigInt = BigInt::from(2) * ((BigInt::one() << (2 * g)) * BigInt::from(g - 1) + 1);
    let r2 = &r * &r;
    let ok = |q: &BigInt| {
        let s = q + 1;
        &s * &s <= &r2 * q
    };
    // larger root of q² + (2 − R²)q + 1
    let b = &r2 - 2;
    let mut q: BigInt = {
        let disc: BigInt = &b * &b - 4;
        (&b + disc.sqrt()) / 2
    };
    while !ok(&q) {
        q -= 1;
    }
    while ok(&(&q + 1)) {
        q += 1;
    }
    q
}
