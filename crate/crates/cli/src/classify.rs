//! Four-way classification of a curve: not locally soluble, obstructed by
//! the group generated by the elements found, has a rational point, or
//! undecided.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use bm_arith::primes::primes_up_to;
use bm_engine::{
    compute_smin_with, first_insoluble_place, point_tuple, run_algorithm1, EngineConfig, EngineError, ObstructionReport,
    Verdict,
};
use bm_etale::{generate_square_norm_elements, verify_ell_input, Curve, EtaleElement, EtaleError, SearchBounds};
use bm_mu::Point;
use bm_padic::{AlgebraCache, Place};

use crate::points::first_rational_point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    NotLocallySoluble,
    BrauerManinObstructed,
    HasRationalPoint,
    Undecided,
}

impl Category {
    pub const ALL: [Category; 4] =
        [Category::NotLocallySoluble, Category::BrauerManinObstructed, Category::HasRationalPoint, Category::Undecided];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    /// `None` for a point at infinity
    pub x: Option<String>,
    pub y: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    FailingPlace(String),
    Point(PointRecord),
    Report(Box<ObstructionReport>),
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub index: Option<u64>,
    /// coefficients of `f`, leading first
    pub curve: String,
    pub category: Category,
    pub witness: Witness,
    /// a found point was not among the survivors of an obstruction run
    pub consistency_violation: bool,
    /// undecided because a budget or the working precision ran out
    pub resource_abort: bool,
    pub timings_ms: std::collections::BTreeMap<String, u64>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub genus: usize,
    /// coefficients are drawn from `[−bound, bound]`
    pub bound: i64,
    pub count: usize,
    pub seed: u64,
    pub height: u64,
    pub search: SearchBounds,
    /// places added to `S_min` in every run
    pub extra_primes: Vec<Place>,
    /// retry undecided curves with the primes up to 100 and the bad primes up to 10⁴
    pub deep: bool,
    /// local solubility is tested explicitly up to this bound
    pub solubility_bound: u64,
    /// also run the obstruction on curves with points and check the point survives
    pub cross_check: bool,
    pub engine: EngineConfig,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            genus: 2,
            bound: 10,
            count: 100,
            seed: 1,
            height: 10_000,
            search: SearchBounds::default(),
            extra_primes: Vec::new(),
            deep: false,
            solubility_bound: 0,
            cross_check: false,
            engine: EngineConfig { solubility_bound: None, ..EngineConfig::default() },
        }
    }
}

pub fn point_record(p: &Point) -> PointRecord {
    match p {
        Point::Affine { x, y } => PointRecord { x: Some(x.to_string()), y: Some(y.to_string()) },
        Point::Infinity { positive } => PointRecord { x: None, y: Some(if *positive { "+" } else { "-" }.into()) },
    }
}

struct RunError {
    message: String,
    resource: bool,
}

impl From<EngineError> for RunError {
    fn from(e: EngineError) -> Self {
        RunError { message: e.to_string(), resource: e.is_resource() }
    }
}

impl From<EtaleError> for RunError {
    fn from(e: EtaleError) -> Self {
        let resource = matches!(&e, EtaleError::Local(l) if bm_padic::is_precision_error(l));
        RunError { message: e.to_string(), resource }
    }
}

/// Element search over `S`, together with the given elements, followed by the algorithm.
fn obstruction_run(
    curve: &Curve,
    extra: &[Place],
    given: &[EtaleElement],
    cfg: &SampleConfig,
    cache: &AlgebraCache,
) -> Result<ObstructionReport, RunError> {
    let smin = compute_smin_with(curve, &cfg.engine.smin)?;
    let mut s: Vec<Place> = smin.places();
    s.extend(extra.iter().copied());
    s.sort_unstable();
    s.dedup();
    let mut ells = Vec::new();
    for l in given {
        ells.push(verify_ell_input(curve, l, cache)?);
    }
    ells.extend(generate_square_norm_elements(curve, &s, &cfg.search, cache)?);
    Ok(run_algorithm1(curve, &ells, extra, &cfg.engine, cache)?)
}

fn deep_extras(curve: &Curve, base: &[Place]) -> Vec<Place> {
    let mut out: Vec<Place> = base.to_vec();
    out.extend(primes_up_to(100).into_iter().map(Place::Prime));
    out.extend(curve.bad_primes().into_iter().filter(|&p| p <= 10_000).map(Place::Prime));
    out.sort_unstable();
    out.dedup();
    out
}

/// Classifies one curve. Upstream failures make the curve undecided.
pub fn classify_curve(curve: &Curve, cfg: &SampleConfig) -> ClassificationResult {
    classify_curve_with(curve, cfg, &[])
}

/// As [`classify_curve`], with elements of square norm supplied in addition
/// to those found by the search.
pub fn classify_curve_with(curve: &Curve, cfg: &SampleConfig, given: &[EtaleElement]) -> ClassificationResult {
    let mut res = ClassificationResult {
        index: None,
        curve: curve.coeff_string(),
        category: Category::Undecided,
        witness: Witness::None,
        consistency_violation: false,
        resource_abort: false,
        timings_ms: Default::default(),
        message: None,
    };
    let cache = AlgebraCache::new(&curve.f);
    let t = Instant::now();
    let sel = match compute_smin_with(curve, &cfg.engine.smin) {
        Ok(s) => bm_engine::assemble_s(&s, &[], &cfg.extra_primes),
        Err(e) => {
            res.message = Some(e.to_string());
            return res;
        }
    };
    match first_insoluble_place(curve, &sel, cfg.solubility_bound, &cache) {
        Ok(Some(v)) => {
            res.category = Category::NotLocallySoluble;
            res.witness = Witness::FailingPlace(v.to_string());
            res.timings_ms.insert("solubility".into(), t.elapsed().as_millis() as u64);
            return res;
        }
        Ok(None) => {}
        Err(e) => {
            res.message = Some(e.to_string());
            res.resource_abort = e.is_resource();
            return res;
        }
    }
    res.timings_ms.insert("solubility".into(), t.elapsed().as_millis() as u64);

    let t = Instant::now();
    let point = first_rational_point(curve, cfg.height);
    res.timings_ms.insert("points".into(), t.elapsed().as_millis() as u64);
    if let Some(p) = point {
        debug_assert!(p.on_curve(curve));
        res.category = Category::HasRationalPoint;
        res.witness = Witness::Point(point_record(&p));
        if cfg.cross_check {
            let t = Instant::now();
            match obstruction_run(curve, &cfg.extra_primes, given, cfg, &cache) {
                Ok(report) => {
                    let survives = point_tuple(curve, &p, &report, &cache)
                        .and_then(|tuple| report.survives(&tuple))
                        .unwrap_or(false);
                    if !survives || report.verdict == Verdict::Obstructed {
                        res.consistency_violation = true;
                        res.message = Some("rational point outside the survivors".into());
                    }
                }
                Err(e) => res.message = Some(format!("cross-check failed: {}", e.message)),
            }
            res.timings_ms.insert("cross_check".into(), t.elapsed().as_millis() as u64);
        }
        return res;
    }

    let t = Instant::now();
    let mut passes = vec![cfg.extra_primes.clone()];
    if cfg.deep {
        passes.push(deep_extras(curve, &cfg.extra_primes));
    }
    for extra in passes {
        match obstruction_run(curve, &extra, given, cfg, &cache) {
            Ok(report) => {
                let obstructed = report.verdict == Verdict::Obstructed;
                res.witness = Witness::Report(Box::new(report));
                if obstructed {
                    res.category = Category::BrauerManinObstructed;
                    break;
                }
            }
            Err(e) => {
                res.message = Some(e.message);
                res.resource_abort = e.resource;
                break;
            }
        }
    }
    res.timings_ms.insert("obstruction".into(), t.elapsed().as_millis() as u64);
    res
}
