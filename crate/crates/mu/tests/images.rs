//! Local images and solubility against brute-force residue enumeration.

use std::collections::BTreeSet;

use bm_arith::f2::F2Vec;
use bm_arith::int::{big_pow, legendre};
use bm_arith::poly::{IntPoly, RatPoly};
use bm_etale::{elt_norm, Curve};
use bm_mu::point::{mu_of_x, mu_representative};
use bm_mu::{hasse_weil_threshold, is_everywhere_locally_soluble, is_locally_soluble, local_image, mu_of_point, Point};
use bm_padic::{AlgebraCache, LocalAlgebra, Mode, Place, SquareClassSpace};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Square test in ℚ_p by valuation and residue of the unit part.
fn is_square_qp(q: &BigRational, p: u64) -> bool {
    let mut v = 0i64;
    let pb = BigInt::from(p);
    let mut n = q.numer().clone();
    let mut d = q.denom().clone();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    if v % 2 != 0 {
        return false;
    }
    let u = n * d;
    if p == 2 {
        return u.mod_floor(&BigInt::from(8)) == BigInt::one();
    }
    let r = u.mod_floor(&pb).to_u64().unwrap();
    (1..p).any(|y| (y * y) % p == r)
}

/// Classes `μ(x)` over the integers `x < p^depth` and the parameters `t = 1/x ∈ pℤ`
/// with `t < p^depth` whose value is a square in ℚ_p.
fn brute_image(curve: &Curve, alg: &LocalAlgebra, space: &SquareClassSpace, p: u64, depth: u32) -> BTreeSet<F2Vec> {
    let n = big_pow(p, depth).to_u64().unwrap();
    let d = curve.degree();
    let rev = curve.f.reverse(d);
    let mut out = BTreeSet::new();
    for x in 0..n {
        let xb = BigInt::from(x);
        let fx = curve.f.eval(&xb);
        if fx.is_zero() || is_square_qp(&BigRational::from_integer(fx), p) {
            out.insert(mu_of_x(curve, &BigRational::from_integer(xb), alg, space).unwrap());
        }
    }
    if is_square_qp(&BigRational::from_integer(curve.c.clone()), p) {
        out.insert(F2Vec::zeros(space.dim()));
    }
    for t in (p..n).step_by(p as usize) {
        let tb = BigInt::from(t);
        let ft = rev.eval(&tb);
        if ft.is_zero() || is_square_qp(&BigRational::from_integer(ft), p) {
            let x = BigRational::new(BigInt::one(), tb);
            out.insert(mu_of_x(curve, &x, alg, space).unwrap());
        }
    }
    out
}

fn random_sextic(rng: &mut ChaCha8Rng, bound: i64) -> Curve {
    loop {
        let c: Vec<i64> = (0..7).map(|_| rng.gen_range(-bound..=bound)).collect();
        if c[6] == 0 {
            continue;
        }
        if let Ok(cv) = Curve::new(IntPoly::from_i64(&c)) {
            return cv;
        }
    }
}

fn check_against_brute(curve: &Curve, p: u64, depth: u32) {
    let cache = AlgebraCache::new(&curve.f);
    let img = local_image(curve, Place::Prime(p), &cache).unwrap();
    let alg = cache.algebra(Place::Prime(p)).unwrap();
    let space = cache.space(Place::Prime(p), Mode::ScalarQuotient).unwrap();
    let brute = brute_image(curve, &alg, &space, p, depth);
    assert_eq!(img.classes, brute, "curve {} at {p}", curve.coeff_string());
    assert_eq!(img.soluble, !brute.is_empty());
}

#[test]
fn images_match_enumeration_on_random_sextics() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..8 {
        let curve = random_sextic(&mut rng, 6);
        for (p, depth) in [(3u64, 6u32), (5, 5), (7, 4)] {
            check_against_brute(&curve, p, depth);
        }
    }
}

#[test]
fn two_adic_images_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..6 {
        let curve = random_sextic(&mut rng, 6);
        check_against_brute(&curve, 2, 12);
    }
}

#[test]
fn three_x6_plus_3_at_three() {
    let curve = Curve::from_desc(&[3, 0, 0, 0, 0, 0, 3]).unwrap();
    check_against_brute(&curve, 3, 7);
    let cache = AlgebraCache::new(&curve.f);
    let img = local_image(&curve, Place::Prime(3), &cache).unwrap();
    assert_eq!(is_locally_soluble(&curve, Place::Prime(3), &cache).unwrap(), img.soluble);
}

#[test]
fn negative_definite_curve_fails_at_infinity() {
    let curve = Curve::from_desc(&[-1, 0, 0, 0, 0, 0, -1]).unwrap();
    let cache = AlgebraCache::new(&curve.f);
    assert!(!is_locally_soluble(&curve, Place::Real, &cache).unwrap());
    let sol = is_everywhere_locally_soluble(&curve, 50, &cache).unwrap();
    assert!(!sol.soluble);
    assert_eq!(sol.failing, Some(Place::Real));
}

#[test]
fn real_image_follows_sign_pattern() {
    // (x^2 - 1)(x^2 - 4)(x^2 + 1): positive on (-inf,-2), (-1,1), (2,inf)
    let f = IntPoly::from_i64(&[-1, 0, 1])
        .mul(&IntPoly::from_i64(&[-4, 0, 1]))
        .mul(&IntPoly::from_i64(&[1, 0, 1]));
    let curve = Curve::new(f).unwrap();
    let cache = AlgebraCache::new(&curve.f);
    let img = local_image(&curve, Place::Real, &cache).unwrap();
    // the two unbounded intervals give the trivial class, (-1, 1) gives signs (+,+,-,-)
    assert_eq!(img.classes.len(), 2);
    assert!(img.classes.contains(&F2Vec::zeros(img.space.dim())));
    let alg = cache.algebra(Place::Real).unwrap();
    let zero = mu_of_x(&curve, &BigRational::zero(), &alg, &img.space).unwrap();
    assert!(img.classes.contains(&zero));
}

#[test]
fn hasse_weil_thresholds() {
    assert_eq!(hasse_weil_threshold(2), 13);
    assert_eq!(hasse_weil_threshold(5), 97);
    for g in 1..8 {
        let t = hasse_weil_threshold(g);
        let next = bm_arith::primes::next_prime(t) as f64;
        assert!(next + 1.0 - 2.0 * g as f64 * next.sqrt() > 0.0);
    }
}

/// A curve with the rational Weierstrass point (a, 0).
fn weierstrass_curve(rng: &mut ChaCha8Rng) -> (Curve, i64) {
    loop {
        let a = rng.gen_range(-3..=3i64);
        let h: Vec<i64> = (0..6).map(|i| if i == 5 { rng.gen_range(1..=4) } else { rng.gen_range(-5..=5) }).collect();
        let f = IntPoly::from_i64(&[-a, 1]).mul(&IntPoly::from_i64(&h));
        if let Ok(c) = Curve::new(f) {
            return (c, a);
        }
    }
}

#[test]
fn weierstrass_class_has_norm_c_times_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let (curve, a) = weierstrass_curve(&mut rng);
        let g = mu_representative(&curve, &BigRational::from_integer(BigInt::from(a)));
        let n = elt_norm(&curve, &curve.element(g)) * BigRational::from_integer(curve.c.clone());
        assert!(bm_arith::int::rat_is_square(&n), "norm times c = {n}");
    }
}

#[test]
fn weierstrass_class_is_limit_of_nearby_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut hits = 0;
    for _ in 0..12 {
        let (curve, a) = weierstrass_curve(&mut rng);
        let cache = AlgebraCache::new(&curve.f);
        let ar = BigRational::from_integer(BigInt::from(a));
        for v in [Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Real] {
            let alg = cache.algebra(v).unwrap();
            let space = cache.space(v, Mode::ScalarQuotient).unwrap();
            let w = mu_of_x(&curve, &ar, &alg, &space).unwrap();
            let img = local_image(&curve, v, &cache).unwrap();
            assert!(img.classes.contains(&w));
            // nearby soluble points x_n -> a
            for n in 6..9u32 {
                let eps: Vec<BigRational> = match v {
                    Place::Prime(p) => [1i64, 2, 3, 5, 6, 7, 10, 14]
                        .iter()
                        .map(|&u| BigRational::from_integer(big_pow(p, 2 * n) * BigInt::from(u)))
                        .collect(),
                    Place::Real => [1i64, -1]
                        .iter()
                        .map(|&s| BigRational::new(BigInt::from(s), BigInt::from(10).pow(n)))
                        .collect(),
                };
                for e in eps {
                    let x = &ar + &e;
                    let fx = curve.f.eval_rat(&x);
                    let ok = match v {
                        Place::Prime(p) => is_square_qp(&fx, p),
                        Place::Real => fx > BigRational::zero(),
                    };
                    if ok {
                        assert_eq!(mu_of_x(&curve, &x, &alg, &space).unwrap(), w, "{v} n={n}");
                        hits += 1;
                    }
                }
            }
        }
    }
    assert!(hits > 50);
}

#[test]
fn classes_away_from_bad_primes_are_unramified() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tested = 0;
    for _ in 0..10 {
        let curve = random_sextic(&mut rng, 8);
        for p in [3u64, 5, 7, 11] {
            if curve.disc_valuation(p) >= 2 || (&curve.c % BigInt::from(p)).is_zero() {
                continue;
            }
            let cache = AlgebraCache::new(&curve.f);
            let alg = cache.algebra(Place::Prime(p)).unwrap();
            let LocalAlgebra::Padic(pa) = alg.as_ref() else { unreachable!() };
            for x in 0..p * p * p {
                let xr = BigRational::from_integer(BigInt::from(x));
                let fx = curve.f.eval_rat(&xr);
                if fx.is_zero() || !is_square_qp(&fx, p) {
                    continue;
                }
                let g = RatPoly::new(vec![xr, -BigRational::one()]);
                let vals = pa.valuations(&pa.embed(&g)).unwrap();
                let parity: BTreeSet<i64> = vals.iter().map(|v| v.rem_euclid(2)).collect();
                assert_eq!(parity.len(), 1, "{} at {p}, x = {x}: {vals:?}", curve.coeff_string());
                tested += 1;
            }
        }
    }
    assert!(tested > 100);
}

#[test]
fn rational_points_land_in_local_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10 {
        // f = (x - a) h(x) + b^2 has the point (a, b)
        let a = rng.gen_range(-4..=4i64);
        let b = rng.gen_range(1..=5i64);
        let h: Vec<i64> = (0..6).map(|_| rng.gen_range(-4..=4)).collect();
        if h[5] == 0 {
            continue;
        }
        let f = IntPoly::from_i64(&[-a, 1]).mul(&IntPoly::from_i64(&h)).add(&IntPoly::constant(BigInt::from(b * b)));
        let Ok(curve) = Curve::new(f) else { continue };
        let pt = Point::Affine { x: BigRational::from_integer(BigInt::from(a)), y: BigRational::from_integer(BigInt::from(b)) };
        assert!(pt.on_curve(&curve));
        let cache = AlgebraCache::new(&curve.f);
        for v in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            let img = local_image(&curve, v, &cache).unwrap();
            let alg = cache.algebra(v).unwrap();
            let m = mu_of_point(&curve, &pt, &alg, &img.space).unwrap();
            assert!(img.classes.contains(&m));
        }
    }
}

#[test]
fn legendre_agrees_with_enumeration() {
    for p in [3u64, 5, 7, 11] {
        for a in 1..p {
            let brute = (1..p).any(|y| y * y % p == a);
            assert_eq!(legendre(a, p) == 1, brute);
        }
    }
}
