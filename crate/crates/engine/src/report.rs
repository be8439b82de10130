//! Serializable obstruction reports. A report embeds the local images, the
//! functionals and the survivors, so its verdict can be re-derived with F₂
//! arithmetic alone.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use bm_arith::f2::F2Vec;
use bm_padic::Place;

use crate::error::{EngineError, Result};
use crate::selection::Provenance;
use crate::tree::{subproduct_intersect, survivor_tuples, Functional, Subproduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// no adelic point is orthogonal to the group generated by the `ℓ`s
    Obstructed,
    NotObstructedByB,
    NotLocallySoluble,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceRecord {
    pub place: String,
    pub provenance: Vec<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllRecord {
    /// coefficients of powers of `θ`, constant first
    pub coeffs: Vec<String>,
    /// the element is the product of these
    pub factors: Vec<Vec<String>>,
    pub ramified_odd_primes: Vec<u64>,
    pub support: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRecord {
    pub place: String,
    /// `(e, f)` of each local field factor; empty at the real place
    pub components: Vec<(usize, usize)>,
    /// number of real roots at the real place
    pub real_roots: usize,
    /// dimension of `L_v^×/L_v^{×2}`
    pub full_dim: usize,
    /// full-space coordinates kept as quotient coordinates
    pub free_cols: Vec<usize>,
    /// classes of `I_v` as bit strings of length `dim`
    pub image: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub timings_ms: BTreeMap<String, u64>,
    /// working p-adic precision per place
    pub precision: BTreeMap<String, u32>,
    pub discs: BTreeMap<String, usize>,
    pub nodes: u64,
    pub assumptions: Vec<String>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// coefficients of `f`, leading first
    pub curve: String,
    pub genus: usize,
    pub s: Vec<PlaceRecord>,
    pub ells: Vec<EllRecord>,
    pub locals: Vec<LocalRecord>,
    /// `phi[i][j]`: functional of `ℓ_i` at `locals[j]`
    pub phi: Vec<Vec<String>>,
    /// each survivor is a subproduct: per place, indices into `locals[j].image`
    pub survivors: Vec<Vec<Vec<usize>>>,
    pub verdict: Verdict,
    pub failing_place: Option<String>,
    /// always false: the `ℓ`s are not claimed to span the relevant group
    pub complete: bool,
    pub diagnostics: Diagnostics,
}

pub fn bits_to_string(v: &F2Vec) -> String {
    v.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_string(s: &str) -> Result<F2Vec> {
    let bits = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(EngineError::Report(format!("bad bit string {s:?}"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(F2Vec::from_bits(&bits))
}

pub fn parse_place(s: &str) -> Result<Place> {
    if s == "inf" {
        return Ok(Place::Real);
    }
    s.parse::<u64>()
        .map(Place::Prime)
        .map_err(|_| EngineError::Report(format!("bad place {s:?}")))
}

impl ObstructionReport {
    /// A report for a curve that fails before the intersection.
    pub fn short(curve: String, genus: usize, verdict: Verdict, failing_place: Option<String>, diagnostics: Diagnostics) -> Self {
        ObstructionReport {
            curve,
            genus,
            s: Vec::new(),
            ells: Vec::new(),
            locals: Vec::new(),
            phi: Vec::new(),
            survivors: Vec::new(),
            verdict,
            failing_place,
            complete: false,
            diagnostics,
        }
    }

    /// Local images as F₂ vectors, one list per place.
    pub fn images(&self) -> Result<Vec<Vec<F2Vec>>> {
        self.locals
            .iter()
            .map(|l| l.image.iter().map(|s| bits_from_string(s)).collect())
            .collect()
    }

    pub fn functionals(&self) -> Result<Vec<Functional>> {
        let mut out = Vec::new();
        for (e, row) in self.ells.iter().zip(&self.phi) {
            if row.len() != self.locals.len() {
                return Err(EngineError::Report("functional row has the wrong length".into()));
            }
            let support: BTreeSet<&str> = e.support.iter().map(|s| s.as_str()).collect();
            out.push(Functional {
                values: row.iter().map(|s| bits_from_string(s)).collect::<Result<_>>()?,
                support: self.locals.iter().map(|l| support.contains(l.place.as_str())).collect(),
            });
        }
        Ok(out)
    }

    /// Recorded survivors as subproducts.
    pub fn leaves(&self) -> Vec<Subproduct> {
        self.survivors
            .iter()
            .map(|sets| Subproduct { sets: sets.clone(), depth: self.ells.len() })
            .collect()
    }

    /// Survivor tuples as indices into the local images (expands products).
    pub fn survivor_tuples(&self) -> BTreeSet<Vec<usize>> {
        survivor_tuples(&self.leaves())
    }

    /// Whether a tuple of local classes (in the order of `locals`) survives.
    pub fn survives(&self, tuple: &[F2Vec]) -> Result<bool> {
        let images = self.images()?;
        if tuple.len() != images.len() {
            return Err(EngineError::Report("tuple has the wrong length".into()));
        }
        let mut idx = Vec::new();
        for (im, x) in images.iter().zip(tuple) {
            match im.iter().position(|c| c == x) {
                Some(i) => idx.push(i),
                None => return Ok(false),
            }
        }
        Ok(self
            .survivors
            .iter()
            .any(|sets| sets.iter().zip(&idx).all(|(set, i)| set.contains(i))))
    }

    /// Replays the intersection from the embedded images and functionals and
    /// checks the recorded survivors and verdict. Also checks that every
    /// functional vanishes on the images outside its support and that every
    /// functional is zero on every recorded survivor.
    pub fn verify(&self) -> Result<bool> {
        if matches!(self.verdict, Verdict::NotLocallySoluble | Verdict::Error) {
            return Ok(self.survivors.is_empty());
        }
        let images = self.images()?;
        let phis = self.functionals()?;
        for (im, l) in images.iter().zip(&self.locals) {
            let dim = l.free_cols.len();
            if im.iter().any(|x| x.len() != dim) {
                return Err(EngineError::Report(format!("class of the wrong length at {}", l.place)));
            }
        }
        for phi in &phis {
            for (j, im) in images.iter().enumerate() {
                if !phi.support[j] && im.iter().any(|x| phi.values[j].dot(x)) {
                    return Ok(false);
                }
            }
        }
        let recorded = self.leaves();
        for leaf in &recorded {
            if leaf.sets.len() != images.len() || leaf.is_empty() {
                return Err(EngineError::Report("malformed survivor".into()));
            }
            for phi in &phis {
                // constant on each factor, with constants summing to zero
                let mut total = false;
                for (j, set) in leaf.sets.iter().enumerate() {
                    let vals: BTreeSet<bool> = set
                        .iter()
                        .map(|&i| images[j].get(i).map(|x| phi.values[j].dot(x)))
                        .collect::<Option<_>>()
                        .ok_or_else(|| EngineError::Report("survivor index out of range".into()))?;
                    if vals.len() != 1 {
                        return Ok(false);
                    }
                    total ^= vals.contains(&true);
                }
                if total {
                    return Ok(false);
                }
            }
        }
        let (leaves, _) = subproduct_intersect(&images, &phis, u64::MAX)?;
        let expected_verdict = if leaves.is_empty() { Verdict::Obstructed } else { Verdict::NotObstructedByB };
        Ok(canonical(&leaves) == canonical(&recorded) && expected_verdict == self.verdict)
    }
}

fn canonical(leaves: &[Subproduct]) -> BTreeSet<Vec<Vec<usize>>> {
    leaves
        .iter()
        .map(|l| {
            l.sets
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.sort_unstable();
                    s
                })
                .collect()
        })
        .collect()
}
