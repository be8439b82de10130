//! The functional `φ_ℓ = Σ_v ⟨ℓ, ·⟩_v` on `∏_{v∈S} L_v^×/ℚ_v^×L_v^{×2}`.

use std::collections::{BTreeMap, BTreeSet};

use bm_arith::f2::F2Vec;
use bm_etale::EllCandidate;
use bm_padic::{PadicError, Place};

use crate::algorithm::LocalData;
use crate::error::{EngineError, Result, Step};
use crate::selection::PrimeSelection;

/// Local components of the functional of one `ℓ`, in quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFunctional {
    /// position of `ℓ` in the input list
    pub index: usize,
    /// `S′(ℓ)`: places where the functional may be nonzero on `I_v`
    pub support: BTreeSet<Place>,
    pub values: BTreeMap<Place, F2Vec>,
}

/// `S′(ℓ) = S_min ∪ {odd p : ℓ ramified at p}`.
pub fn support_of(ell: &EllCandidate, sel: &PrimeSelection) -> BTreeSet<Place> {
    let mut s = sel.s_min.clone();
    s.extend(ell.ramified_odd_primes.iter().map(|&p| Place::Prime(p)));
    s.retain(|v| sel.contains(*v));
    s
}

/// The local functional of `ℓ` at one place: the sum of the functionals of
/// its factors, restricted to the scalar quotient.
pub(crate) fn local_functional(ell: &EllCandidate, local: &LocalData) -> std::result::Result<F2Vec, PadicError> {
    let mut full = F2Vec::zeros(local.alg.full_dim());
    for factor in &ell.factors {
        full.add_assign(&local.alg.pairing_functional(&factor.rep)?);
    }
    local.image.space.restrict_functional(&full)
}

/// Builds `φ_ℓ` from the local data at every place of `S`.
pub fn build_phi(ell: &EllCandidate, index: usize, sel: &PrimeSelection, locals: &[LocalData]) -> Result<PhiFunctional> {
    let mut values = BTreeMap::new();
    for local in locals {
        let value = local_functional(ell, local).map_err(|e| EngineError::at(Step::Functionals)(e.into()))?;
        values.insert(local.place, value);
    }
    assemble_phi(ell, index, sel, locals, values)
}

/// Packages local functionals, checking that they vanish on `I_v` for every
/// `v ∈ S \ S′(ℓ)`.
pub(crate) fn assemble_phi(
    ell: &EllCandidate,
    index: usize,
    sel: &PrimeSelection,
    locals: &[LocalData],
    values: BTreeMap<Place, F2Vec>,
) -> Result<PhiFunctional> {
    let support = support_of(ell, sel);
    for local in locals {
        if support.contains(&local.place) {
            continue;
        }
        let phi = &values[&local.place];
        if local.image.classes.iter().any(|x| phi.dot(x)) {
            return Err(EngineError::FunctionalOutsideSupport { ell: index, place: local.place });
        }
    }
    Ok(PhiFunctional { index, support, values })
}

impl PhiFunctional {
    /// `φ_ℓ` evaluated on a tuple of local classes, one per place of `values`.
    pub fn eval(&self, tuple: &BTreeMap<Place, F2Vec>) -> bool {
        self.values.iter().fold(false, |acc, (v, phi)| acc ^ phi.dot(&tuple[v]))
    }
}
