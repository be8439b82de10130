//! The algorithm end to end: places, local solubility, local images and
//! functionals at every place of `S`, and the subproduct intersection.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use bm_arith::f2::F2Vec;
use bm_arith::primes::primes_up_to;
use bm_etale::{Curve, EllCandidate};
use bm_mu::{hasse_weil_threshold, is_locally_soluble, local_image, mu_of_point, LocalImage, MuError, Point};
use bm_padic::{is_precision_error, AlgebraCache, LocalAlgebra, Mode, PadicAlgebra, Place};

use crate::error::{EngineError, Result, Step};
use crate::phi::{assemble_phi, local_functional, PhiFunctional};
use crate::report::{bits_to_string, Diagnostics, EllRecord, LocalRecord, ObstructionReport, PlaceRecord, Verdict};
use crate::selection::{assemble_s, compute_smin_with, PrimeSelection, SminOptions};
use crate::tree::{subproduct_intersect, Functional};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// abort the subproduct search after this many nodes
    pub node_budget: u64,
    /// check local solubility at `S` and all primes up to
    /// `max(bound, hasse_weil_threshold(g))`; `None` checks only `S`
    pub solubility_bound: Option<u64>,
    pub smin: SminOptions,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { node_budget: 10_000_000, solubility_bound: Some(0), smin: SminOptions::default() }
    }
}

/// The local algebra and image at one place, in matching coordinates.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub place: Place,
    pub alg: Arc<LocalAlgebra>,
    pub image: LocalImage,
}

const FUNCTIONAL_RETRIES: u32 = 3;

/// `I_v` and the local functionals of all `ells` at `v`. A precision failure
/// while pairing rebuilds the algebra and recomputes the image as well, so
/// that both live in the same coordinates.
pub fn local_data(curve: &Curve, v: Place, ells: &[EllCandidate], cache: &AlgebraCache) -> Result<(LocalData, Vec<F2Vec>)> {
    let mut tries = 0;
    loop {
        let image = local_image(curve, v, cache).map_err(EngineError::at(Step::LocalImages))?;
        let alg = cache.algebra(v).map_err(|e| EngineError::at(Step::LocalImages)(e.into()))?;
        let local = LocalData { place: v, alg, image };
        if !local.image.soluble {
            return Ok((local, Vec::new()));
        }
        let values: std::result::Result<Vec<F2Vec>, _> = ells.iter().map(|l| local_functional(l, &local)).collect();
        match values {
            Ok(values) => return Ok((local, values)),
            Err(e) if is_precision_error(&e) && tries < FUNCTIONAL_RETRIES => {
                tries += 1;
                let LocalAlgebra::Padic(a) = local.alg.as_ref() else { unreachable!() };
                let rebuilt = PadicAlgebra::with_precision(&curve.f, a.p, 2 * a.prec + 20)
                    .map_err(|e| EngineError::at(Step::Functionals)(e.into()))?;
                cache.replace(v, LocalAlgebra::Padic(rebuilt));
            }
            Err(e) => return Err(EngineError::at(Step::Functionals)(MuError::from(e))),
        }
    }
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn place_records(sel: &PrimeSelection) -> Vec<PlaceRecord> {
    sel.s
        .iter()
        .map(|(v, why)| PlaceRecord { place: v.to_string(), provenance: why.iter().copied().collect() })
        .collect()
}

fn coeff_strings(c: &[num_rational::BigRational]) -> Vec<String> {
    c.iter().map(|q| q.to_string()).collect()
}

fn ell_record(ell: &EllCandidate, phi: &PhiFunctional) -> EllRecord {
    EllRecord {
        coeffs: coeff_strings(ell.element.coeffs()),
        factors: ell.factors.iter().map(|f| coeff_strings(f.coeffs())).collect(),
        ramified_odd_primes: ell.ramified_odd_primes.iter().copied().collect(),
        support: phi.support.iter().map(|v| v.to_string()).collect(),
    }
}

fn local_record(local: &LocalData) -> LocalRecord {
    let (components, real_roots) = match local.alg.as_ref() {
        LocalAlgebra::Padic(a) => (a.fields.iter().map(|k| (k.e, k.f)).collect(), 0),
        LocalAlgebra::Real(r) => (Vec::new(), r.roots.len()),
    };
    LocalRecord {
        place: local.place.to_string(),
        components,
        real_roots,
        full_dim: local.image.space.full_dim,
        free_cols: local.image.space.free_cols.clone(),
        image: local.image.classes.iter().map(bits_to_string).collect(),
    }
}

/// Places checked for local solubility before the intersection.
fn solubility_places(curve: &Curve, sel: &PrimeSelection, bound: u64) -> Vec<Place> {
    let limit = bound.max(hasse_weil_threshold(curve.g));
    let mut primes: Vec<u64> = primes_up_to(limit);
    primes.extend(sel.places().into_iter().filter_map(|v| match v {
        Place::Prime(p) => Some(p),
        Place::Real => None,
    }));
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Real).chain(primes.into_iter().map(Place::Prime)).collect()
}

/// The first place without local points among `∞`, the places of `S` and
/// the primes up to `max(bound, hasse_weil_threshold(g))`. Larger primes
/// outside `S` have points by the Hasse–Weil bound.
pub fn first_insoluble_place(curve: &Curve, sel: &PrimeSelection, bound: u64, cache: &AlgebraCache) -> Result<Option<Place>> {
    for v in solubility_places(curve, sel, bound) {
        if !is_locally_soluble(curve, v, cache).map_err(EngineError::at(Step::Solubility))? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Runs the algorithm for the group generated by `ells` with `S` enlarged by
/// `extra`. Empty survivors for a locally soluble curve certify that the
/// curve has no rational point.
pub fn run_algorithm1(
    curve: &Curve,
    ells: &[EllCandidate],
    extra: &[Place],
    cfg: &EngineConfig,
    cache: &AlgebraCache,
) -> Result<ObstructionReport> {
    let mut diag = Diagnostics::default();
    let t = Instant::now();
    let smin = compute_smin_with(curve, &cfg.smin)?;
    let sel = assemble_s(&smin, ells, extra);
    diag.assumptions = sel.assumptions.clone();
    diag.timings_ms.insert("select".into(), ms(t));
    let curve_str = curve.coeff_string();

    if let Some(bound) = cfg.solubility_bound {
        let t = Instant::now();
        let failing = first_insoluble_place(curve, &sel, bound, cache)?;
        diag.timings_ms.insert("solubility".into(), ms(t));
        if let Some(v) = failing {
            let mut r = ObstructionReport::short(curve_str, curve.g, Verdict::NotLocallySoluble, Some(v.to_string()), diag);
            r.s = place_records(&sel);
            return Ok(r);
        }
    }

    let t = Instant::now();
    let mut locals = Vec::new();
    let mut values: Vec<BTreeMap<Place, F2Vec>> = vec![BTreeMap::new(); ells.len()];
    for v in sel.places() {
        let (local, vals) = local_data(curve, v, ells, cache)?;
        if !local.image.soluble {
            diag.timings_ms.insert("local_images".into(), ms(t));
            let mut r = ObstructionReport::short(curve_str, curve.g, Verdict::NotLocallySoluble, Some(v.to_string()), diag);
            r.s = place_records(&sel);
            return Ok(r);
        }
        for (i, x) in vals.into_iter().enumerate() {
            values[i].insert(v, x);
        }
        if let LocalAlgebra::Padic(a) = local.alg.as_ref() {
            diag.precision.insert(v.to_string(), a.prec);
        }
        diag.discs.insert(v.to_string(), local.image.discs);
        locals.push(local);
    }
    diag.timings_ms.insert("local_images".into(), ms(t));

    let t = Instant::now();
    let mut phis = Vec::new();
    for (i, (ell, vals)) in ells.iter().zip(values).enumerate() {
        phis.push(assemble_phi(ell, i, &sel, &locals, vals)?);
    }
    let images: Vec<Vec<F2Vec>> = locals.iter().map(|l| l.image.classes.iter().cloned().collect()).collect();
    let functionals: Vec<Functional> = phis
        .iter()
        .map(|phi| Functional {
            values: locals.iter().map(|l| phi.values[&l.place].clone()).collect(),
            support: locals.iter().map(|l| phi.support.contains(&l.place)).collect(),
        })
        .collect();
    let (leaves, nodes) = subproduct_intersect(&images, &functionals, cfg.node_budget)?;
    diag.nodes = nodes;
    diag.timings_ms.insert("intersection".into(), ms(t));

    let verdict = if leaves.is_empty() { Verdict::Obstructed } else { Verdict::NotObstructedByB };
    Ok(ObstructionReport {
        curve: curve_str,
        genus: curve.g,
        s: place_records(&sel),
        ells: ells.iter().zip(&phis).map(|(l, p)| ell_record(l, p)).collect(),
        locals: locals.iter().map(local_record).collect(),
        phi: functionals.iter().map(|f| f.values.iter().map(bits_to_string).collect()).collect(),
        survivors: leaves.into_iter().map(|l| l.sets).collect(),
        verdict,
        failing_place: None,
        complete: false,
        diagnostics: diag,
    })
}

/// `(μ_v(P))_v` over the places of a report, in the coordinates of `cache`
/// (which must be the cache the report was computed with).
pub fn point_tuple(curve: &Curve, pt: &Point, report: &ObstructionReport, cache: &AlgebraCache) -> Result<Vec<F2Vec>> {
    let mut out = Vec::new();
    for l in &report.locals {
        let v = crate::report::parse_place(&l.place)?;
        let err = |e: bm_padic::PadicError| EngineError::at(Step::LocalImages)(e.into());
        let alg = cache.algebra(v).map_err(err)?;
        let space = cache.space(v, Mode::ScalarQuotient).map_err(err)?;
        out.push(mu_of_point(curve, pt, &alg, &space).map_err(EngineError::at(Step::LocalImages))?);
    }
    Ok(out)
}
