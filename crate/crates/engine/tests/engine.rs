//! Prime selection, functionals and end-to-end runs on curves with known points.

use std::collections::BTreeSet;

use bm_arith::f2::F2Vec;
use bm_arith::poly::{IntPoly, RatPoly};
use bm_engine::report::bits_from_string;
use bm_engine::*;
use bm_etale::{generate_square_norm_elements, verify_ell_input, Curve, EllCandidate, SearchBounds};
use bm_mu::point::mu_representative;
use bm_mu::Point;
use bm_padic::{AlgebraCache, Place};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn genus5() -> Curve {
    Curve::from_desc(&[-17, -13, -15, 6, -19, 5, -19, 4, -2, 19, 12, 13, -6]).unwrap()
}

fn places(sel: &PrimeSelection) -> BTreeSet<Place> {
    sel.s.keys().copied().collect()
}

fn set(v: &[Place]) -> BTreeSet<Place> {
    v.iter().copied().collect()
}

#[test]
fn smin_examples() {
    let c = Curve::from_desc(&[1, 0, 0, 0, 0, 0, 1]).unwrap();
    let sel = compute_smin(&c).unwrap();
    assert_eq!(places(&sel), set(&[Place::Real, Place::Prime(2), Place::Prime(3)]));
    assert_eq!(sel.s[&Place::Prime(3)], [Provenance::DiscValuation].into_iter().collect());

    let sel = compute_smin(&genus5()).unwrap();
    assert_eq!(places(&sel), set(&[Place::Real, Place::Prime(2), Place::Prime(5), Place::Prime(17)]));
    assert!(sel.assumptions.is_empty());
}

#[test]
fn smin_contains_required_places() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let c = planted(&mut rng).0;
        let sel = compute_smin(&c).unwrap();
        assert!(sel.contains(Place::Real) && sel.contains(Place::Prime(2)));
        for p in bm_arith::primes::primes_up_to(200) {
            let pb = BigInt::from(p);
            if (&c.c % &pb).is_zero() || c.disc_valuation(p) >= 2 {
                assert!(sel.contains(Place::Prime(p)));
            }
        }
        for v in sel.places() {
            if let Place::Prime(p) = v {
                let ok = p == 2 || (&c.c % BigInt::from(p)).is_zero() || c.disc_valuation(p) >= 2;
                assert!(ok, "{p} in S_min without reason");
            }
        }
    }
}

#[test]
fn prime_bound_matches_floating_point() {
    let holds = |q: f64, g: i32| q.sqrt() + 1.0 / q.sqrt() <= 2.0 * (2f64.powi(2 * g) * (g as f64 - 1.0) + 1.0);
    for g in 2..=5 {
        let q: f64 = theorem_prime_bound(g as usize).to_string().parse().unwrap();
        assert!(holds(q, g) && !holds(q + 1.0, g), "g = {g}");
    }
    assert_eq!(theorem_prime_bound(2), BigInt::from(1153));
    assert!(theorem_prime_bound(3) > theorem_prime_bound(2));
}

#[test]
fn assemble_with_extras_and_ramification() {
    let c = genus5();
    let smin = compute_smin(&c).unwrap();
    assert_eq!(assemble_s(&smin, &[], &[]), smin);
    let s = assemble_s(&smin, &[], &[Place::Prime(239)]);
    assert_eq!(
        places(&s),
        set(&[Place::Real, Place::Prime(2), Place::Prime(5), Place::Prime(17), Place::Prime(239)])
    );
    assert_eq!(s.s[&Place::Prime(239)], [Provenance::UserAdded].into_iter().collect());

    // the scalar 7 has odd valuation at every prime above 7
    let cache = AlgebraCache::new(&c.f);
    let seven = c.element(RatPoly::constant(BigRational::from_integer(BigInt::from(7))));
    let l = verify_ell_input(&c, &seven, &cache).unwrap();
    assert!(l.ramified_odd_primes.contains(&7));
    let s = assemble_s(&smin, &[l], &[]);
    assert_eq!(s.s[&Place::Prime(7)], [Provenance::EllRamification].into_iter().collect());
}

/// `f = (x − a) h(x) + b²` with a random quintic `h`: the point `(a, b)`.
fn planted(rng: &mut ChaCha8Rng) -> (Curve, Point) {
    loop {
        let a = rng.gen_range(-4..=4i64);
        let b = rng.gen_range(1..=6i64);
        let h: Vec<i64> = (0..6).map(|_| rng.gen_range(-6..=6)).collect();
        if h[5] == 0 {
            continue;
        }
        let f = IntPoly::from_i64(&[-a, 1]).mul(&IntPoly::from_i64(&h)).add(&IntPoly::constant(BigInt::from(b * b)));
        if let Ok(c) = Curve::new(f) {
            let pt = Point::Affine { x: BigRational::from_integer(BigInt::from(a)), y: BigRational::from_integer(BigInt::from(b)) };
            return (c, pt);
        }
    }
}

/// Scalars, searched elements and products of them, in random order.
fn random_ells(rng: &mut ChaCha8Rng, c: &Curve, cache: &AlgebraCache, count: usize) -> Vec<EllCandidate> {
    let sel = compute_smin(c).unwrap();
    let bounds = SearchBounds { patience: 10, ..SearchBounds::default() };
    let mut base = generate_square_norm_elements(c, &sel.places(), &bounds, cache).unwrap();
    for q in [-1i64, 2, 3, 5, 7, 11] {
        let e = c.element(RatPoly::constant(BigRational::from_integer(BigInt::from(q))));
        base.push(verify_ell_input(c, &e, cache).unwrap());
    }
    let mut out = Vec::new();
    while out.len() < count {
        let k = rng.gen_range(1..=2.min(base.len()));
        let picks: Vec<&EllCandidate> = base.choose_multiple(rng, k).collect();
        if k == 1 {
            out.push(picks[0].clone());
            continue;
        }
        let mut elt = c.one();
        let mut factors = Vec::new();
        for p in &picks {
            elt = c.mul(&elt, &p.element);
            factors.extend(p.factors.iter().cloned());
        }
        let Ok(mut l) = verify_ell_input(c, &elt, cache) else { continue };
        l.factors = factors;
        out.push(l);
    }
    out
}

/// `Σ_v ⟨ℓ, μ_v(P)⟩_v` computed by pairing the product element on full spaces.
fn direct_pairing_sum(c: &Curve, l: &EllCandidate, pt: &Point, places: &[Place], cache: &AlgebraCache) -> u8 {
    let Point::Affine { x, .. } = pt else { return 0 };
    let m = mu_representative(c, x);
    places.iter().fold(0, |acc, &v| acc ^ cache.algebra(v).unwrap().pairing_value(&l.element.rep, &m).unwrap())
}

#[test]
fn planted_points_survive() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cfg = EngineConfig { solubility_bound: None, ..EngineConfig::default() };
    for _ in 0..8 {
        let (c, pt) = planted(&mut rng);
        assert!(pt.on_curve(&c));
        let cache = AlgebraCache::new(&c.f);
        let ells = random_ells(&mut rng, &c, &cache, 6);
        let report = run_algorithm1(&c, &ells, &[], &cfg, &cache).unwrap();
        assert_eq!(report.verdict, Verdict::NotObstructedByB, "{}", c.coeff_string());
        let tuple = point_tuple(&c, &pt, &report, &cache).unwrap();
        assert!(report.survives(&tuple).unwrap());
        let s: Vec<Place> = report.s.iter().map(|p| bm_engine::report::parse_place(&p.place).unwrap()).collect();
        for (i, l) in ells.iter().enumerate() {
            assert_eq!(direct_pairing_sum(&c, l, &pt, &s, &cache), 0, "{} ell {i}", c.coeff_string());
            let phi: Vec<F2Vec> = report.phi[i].iter().map(|b| bits_from_string(b).unwrap()).collect();
            let total = phi.iter().zip(&tuple).fold(false, |acc, (f, x)| acc ^ f.dot(x));
            assert!(!total);
        }
        assert!(report.verify().unwrap());
    }
}

#[test]
fn trivial_ell_gives_zero_functional() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let (c, _) = planted(&mut rng);
    let cache = AlgebraCache::new(&c.f);
    let l = verify_ell_input(&c, &c.one(), &cache).unwrap();
    let cfg = EngineConfig { solubility_bound: None, ..EngineConfig::default() };
    let report = run_algorithm1(&c, &[l], &[], &cfg, &cache).unwrap();
    assert!(report.phi[0].iter().all(|b| !b.contains('1')));
    let plain = run_algorithm1(&c, &[], &[], &cfg, &cache).unwrap();
    assert_eq!(report.survivor_tuples(), plain.survivor_tuples());
}

#[test]
fn functional_is_additive_on_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..4 {
        let (c, _) = planted(&mut rng);
        let cache = AlgebraCache::new(&c.f);
        let ells = random_ells(&mut rng, &c, &cache, 3);
        for v in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            let alg = cache.algebra(v).unwrap();
            for l in &ells {
                for _ in 0..5 {
                    let m1 = RatPoly::from_ints(&(0..6).map(|_| rng.gen_range(-9..=9)).collect::<Vec<_>>());
                    let m2 = RatPoly::from_ints(&(0..6).map(|_| rng.gen_range(-9..=9)).collect::<Vec<_>>());
                    let prod = c.mul(&c.element(m1.clone()), &c.element(m2.clone()));
                    if bm_etale::elt_norm(&c, &prod).is_zero() {
                        continue;
                    }
                    let a = alg.pairing_value(&l.element.rep, &m1).unwrap();
                    let b = alg.pairing_value(&l.element.rep, &m2).unwrap();
                    assert_eq!(alg.pairing_value(&l.element.rep, &prod.rep).unwrap(), a ^ b);
                }
            }
        }
    }
}

#[test]
fn survivors_shrink_and_ignore_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let cfg = EngineConfig { solubility_bound: None, ..EngineConfig::default() };
    for _ in 0..4 {
        let (c, _) = planted(&mut rng);
        let cache = AlgebraCache::new(&c.f);
        let ells = random_ells(&mut rng, &c, &cache, 5);
        // common S so that tuples are comparable
        let extra: Vec<Place> = ells.iter().flat_map(|l| l.ramified_odd_primes.iter().map(|&p| Place::Prime(p))).collect();
        let mut prev: Option<BTreeSet<Vec<usize>>> = None;
        for k in 0..=ells.len() {
            let r = run_algorithm1(&c, &ells[..k], &extra, &cfg, &cache).unwrap();
            let t = r.survivor_tuples();
            if let Some(p) = &prev {
                assert!(t.is_subset(p));
            }
            prev = Some(t);
        }
        let mut shuffled = ells.clone();
        shuffled.shuffle(&mut rng);
        let a = run_algorithm1(&c, &ells, &extra, &cfg, &cache).unwrap();
        let b = run_algorithm1(&c, &shuffled, &extra, &cfg, &cache).unwrap();
        assert_eq!(a.survivor_tuples(), b.survivor_tuples());
    }
}

#[test]
fn insoluble_curve_is_reported() {
    let c = Curve::from_desc(&[-1, 0, 0, 0, 0, 0, -1]).unwrap();
    let cache = AlgebraCache::new(&c.f);
    let r = run_algorithm1(&c, &[], &[], &EngineConfig::default(), &cache).unwrap();
    assert_eq!(r.verdict, Verdict::NotLocallySoluble);
    assert_eq!(r.failing_place.as_deref(), Some("inf"));
    assert!(r.verify().unwrap());
}

#[test]
fn reports_round_trip_and_tampering_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let (c, _) = planted(&mut rng);
    let cache = AlgebraCache::new(&c.f);
    let ells = random_ells(&mut rng, &c, &cache, 4);
    let cfg = EngineConfig { solubility_bound: None, ..EngineConfig::default() };
    let r = run_algorithm1(&c, &ells, &[], &cfg, &cache).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: ObstructionReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert!(back.verify().unwrap());
    let mut forged = r.clone();
    forged.verdict = Verdict::Obstructed;
    forged.survivors.clear();
    assert!(!forged.verify().unwrap());
}

#[test]
fn one_is_not_ramified_anywhere() {
    let c = genus5();
    let cache = AlgebraCache::new(&c.f);
    let l = verify_ell_input(&c, &c.one(), &cache).unwrap();
    let sel = compute_smin(&c).unwrap();
    assert_eq!(support_of(&l, &sel), sel.s_min);
}
