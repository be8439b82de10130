//! Brute-force oracles and instance generators for the acceptance run.

use std::collections::{BTreeSet, HashSet};

use bm_arith::f2::F2Vec;
use bm_arith::int::{big_pow, mod_u64, rat_valuation, split_valuation, valuation};
use bm_arith::poly::{IntPoly, RatPoly};
use bm_engine::{compute_smin, Functional};
use bm_etale::{generate_square_norm_elements, verify_ell_input, Curve, EllCandidate, SearchBounds};
use bm_mu::point::mu_of_x;
use bm_mu::Point;
use bm_padic::field::LocalField;
use bm_padic::{AlgebraCache, LocalAlgebra, SquareClassSpace};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ----- squares and Hilbert symbols over ℚ_p -----

/// Unit squares modulo `p^k` by enumeration.
pub fn unit_squares(p: u64, k: u32) -> (u64, HashSet<u64>) {
    let m = p.pow(k);
    let set = (1..m).filter(|x| x % p != 0).map(|x| ((x as u128 * x as u128) % m as u128) as u64).collect();
    (m, set)
}

/// Square test in ℚ_p by enumerating squares modulo `p` (odd) or 8.
pub fn brute_is_square(q: &BigRational, p: u64) -> bool {
    if q.is_zero() {
        return true;
    }
    if rat_valuation(q, p) % 2 != 0 {
        return false;
    }
    let k = if p == 2 { 3 } else { 1 };
    let (m, sq) = unit_squares(p, k);
    let (_, nu) = split_valuation(&q.numer().abs(), p);
    let (_, de) = split_valuation(q.denom(), p);
    // de³ has the square class of de⁻¹
    let u = ((mod_u64(&nu, m) as u128 * mod_u64(&(&de * &de * &de), m) as u128) % m as u128) as u64;
    let u = if q.is_negative() { (m - u) % m } else { u };
    sq.contains(&u)
}

/// Whether `z² = a x² + b y²` has a nontrivial ℚ_p-solution, for integers `a`, `b`
/// of valuation 0 or 1. A primitive solution has `x` or `y` a unit; scaling it
/// to 1 leaves `R(t) = c0 + c1 t²`, which must be a square. Residue classes of
/// `t` are refined until the square class of `R` is constant on the class.
pub fn conic_soluble(a: &BigInt, b: &BigInt, p: u64) -> bool {
    let e2 = if p == 2 { 1 } else { 0 };
    for (c0, c1, t_divisible) in [(a, b, false), (b, a, true)] {
        let mut stack = vec![(BigInt::zero(), if t_divisible { 1 } else { 0 })];
        let mut steps = 0u64;
        while let Some((t, j)) = stack.pop() {
            steps += 1;
            assert!(steps < 2_000_000, "conic oracle did not terminate");
            let r = c0 + c1 * &t * &t;
            if r.is_zero() {
                return true;
            }
            // R(t + p^j s) − R(t) = c1 (2 t p^j s + p^{2j} s²)
            let vc1 = valuation(c1, p);
            let vt = if t.is_zero() { u32::MAX / 4 } else { valuation(&t, p) };
            let known = vc1 + (j + e2 + vt).min(2 * j);
            let vr = valuation(&r, p);
            let digits = 1 + 2 * e2;
            if vr + digits <= known {
                if vr % 2 == 0 {
                    let (_, u) = split_valuation(&r, p);
                    let (m, sq) = unit_squares(p, digits);
                    if sq.contains(&mod_u64(&u, m)) {
                        return true;
                    }
                }
                continue;
            }
            for s in 0..p {
                stack.push((&t + BigInt::from(s) * big_pow(p, j), j + 1));
            }
        }
    }
    false
}

/// An integer in the square class of `q` with valuation 0 or 1.
fn reduce_class(q: &BigRational, p: u64) -> BigInt {
    let mut n = q.numer() * q.denom();
    let sq = BigInt::from(p * p);
    while (&n % &sq).is_zero() {
        n /= &sq;
    }
    n
}

/// `(a, b)_p` in additive notation from conic solubility.
pub fn oracle_hilbert(a: &BigRational, b: &BigRational, p: u64) -> u8 {
    (!conic_soluble(&reduce_class(a, p), &reduce_class(b, p), p)) as u8
}

pub fn oracle_real_hilbert(a: &BigRational, b: &BigRational) -> u8 {
    (a.is_negative() && b.is_negative()) as u8
}

/// A random rational with valuation in `[−2, 2]` at `p`.
pub fn random_rational(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    let v: i32 = rng.gen_range(-2..=2);
    let u: i64 = loop {
        let u = rng.gen_range(1..2000);
        if u % p as i64 != 0 {
            break u;
        }
    };
    let d: i64 = loop {
        let d = rng.gen_range(1..50);
        if d % p as i64 != 0 {
            break d;
        }
    };
    let s = if rng.gen_bool(0.5) { -1 } else { 1 };
    BigRational::new(BigInt::from(s * u), BigInt::from(d)) * BigRational::from_integer(BigInt::from(p)).pow(v)
}

/// Number of unit square classes of the valuation ring, by enumerating `(O/8O)^×`.
pub fn brute_unit_classes(k: &LocalField) -> usize {
    let n = k.n;
    let m = BigInt::from(8);
    let mut squares = HashSet::new();
    let mut units = 0usize;
    for idx in 0..8usize.pow(n as u32) {
        let mut z = Vec::with_capacity(n);
        let mut t = idx;
        for _ in 0..n {
            z.push(BigInt::from(t % 8));
            t /= 8;
        }
        let x = k.from_coords(z.clone());
        if k.residue.is_zero(&k.reduce(&x.z)) {
            continue;
        }
        units += 1;
        let sq = k.order.mul(&z, &z);
        squares.insert(sq.iter().map(|c| c.mod_floor(&m)).collect::<Vec<_>>());
    }
    units / squares.len()
}

/// 2-adic extensions of degree up to 4: ramified, unramified and mixed.
pub fn two_adic_polys() -> Vec<Vec<i64>> {
    vec![
        vec![-2, 0, 1],
        vec![1, 0, 1],
        vec![1, 1, 1],
        vec![-3, 0, 1],
        vec![2, 0, 1],
        vec![-6, 0, 1],
        vec![-2, 0, 0, 1],
        vec![1, 1, 0, 1],
        vec![-5, 0, 0, 1],
        vec![-2, 0, 0, 0, 1],
        vec![1, 1, 0, 0, 1],
        vec![2, 2, 0, 0, 1],
        vec![5, 0, 2, 0, 1],
        vec![-3, 0, 0, 0, 1],
    ]
}

// ----- local images -----

/// Classes `μ(x)` over the integers `0 ≤ x < p^depth` and the parameters
/// `t = 1/x ∈ pℤ` with `t < p^depth` at which the value is a ℚ_p-square,
/// with the points at infinity when the leading coefficient is a square.
pub fn brute_image(curve: &Curve, alg: &LocalAlgebra, space: &SquareClassSpace, p: u64, depth: u32) -> BTreeSet<F2Vec> {
    let n = big_pow(p, depth).to_u64().unwrap();
    let rev = curve.f.reverse(curve.degree());
    let mut out = BTreeSet::new();
    for x in 0..n {
        let xb = BigInt::from(x);
        if brute_is_square(&BigRational::from_integer(curve.f.eval(&xb)), p) {
            out.insert(mu_of_x(curve, &BigRational::from_integer(xb), alg, space).unwrap());
        }
    }
    if brute_is_square(&BigRational::from_integer(curve.c.clone()), p) {
        out.insert(F2Vec::zeros(space.dim()));
    }
    for t in (p..n).step_by(p as usize) {
        let tb = BigInt::from(t);
        if brute_is_square(&BigRational::from_integer(rev.eval(&tb)), p) {
            out.insert(mu_of_x(curve, &BigRational::new(BigInt::one(), tb), alg, space).unwrap());
        }
    }
    out
}

pub fn random_sextic(rng: &mut ChaCha8Rng, bound: i64) -> Curve {
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

// ----- planted points and elements of square norm -----

/// `f = (x − a) h(x) + b²` with a random quintic `h`, and the point `(a, b)`.
pub fn planted(rng: &mut ChaCha8Rng) -> (Curve, Point) {
    loop {
        let a = rng.gen_range(-4..=4i64);
        let b = rng.gen_range(1..=6i64);
        let h: Vec<i64> = (0..6).map(|_| rng.gen_range(-6..=6)).collect();
        if h[5] == 0 {
            continue;
        }
        let f = IntPoly::from_i64(&[-a, 1]).mul(&IntPoly::from_i64(&h)).add(&IntPoly::constant(BigInt::from(b * b)));
        if let Ok(c) = Curve::new(f) {
            let pt = Point::Affine {
                x: BigRational::from_integer(BigInt::from(a)),
                y: BigRational::from_integer(BigInt::from(b)),
            };
            return (c, pt);
        }
    }
}

/// Searched elements, scalars and pairwise products of them, in random order.
pub fn random_ells(rng: &mut ChaCha8Rng, c: &Curve, cache: &AlgebraCache, count: usize) -> Vec<EllCandidate> {
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

// ----- subproduct search -----

/// Every tuple of `∏ I_v` on which every functional sums to zero.
pub fn naive_survivors(images: &[Vec<F2Vec>], phis: &[Functional]) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if images.iter().any(|im| im.is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; images.len()];
    loop {
        let ok = phis.iter().all(|phi| {
            let mut s = false;
            for (v, &i) in idx.iter().enumerate() {
                s ^= phi.support[v] && phi.values[v].dot(&images[v][i]);
            }
            !s
        });
        if ok {
            out.insert(idx.clone());
        }
        let mut v = 0;
        loop {
            if v == idx.len() {
                return out;
            }
            idx[v] += 1;
            if idx[v] < images[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> F2Vec {
    F2Vec::from_bits(&(0..dim).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
}

/// At most 4 places of dimension at most 3, images of size at most 6 and at most 3 functionals.
pub fn random_tree_instance(rng: &mut ChaCha8Rng) -> (Vec<Vec<F2Vec>>, Vec<Functional>) {
    let places = rng.gen_range(1..=4);
    let dims: Vec<usize> = (0..places).map(|_| rng.gen_range(0..=3)).collect();
    let images = dims
        .iter()
        .map(|&d| {
            let size = rng.gen_range(0..=6.min(1 << d));
            let all: Vec<u64> = (0..(1u64 << d)).collect();
            let mut chosen: Vec<u64> = all.choose_multiple(rng, size).copied().collect();
            chosen.sort_unstable();
            chosen.into_iter().map(|x| F2Vec::from_u64(x, d)).collect()
        })
        .collect();
    let n = rng.gen_range(0..=3);
    let phis = (0..n)
        .map(|_| {
            let support: Vec<bool> = dims.iter().map(|_| rng.gen_bool(0.7)).collect();
            let values = dims
                .iter()
                .zip(&support)
                .map(|(&d, &s)| if s { random_vec(rng, d) } else { F2Vec::zeros(d) })
                .collect();
            Functional { values, support }
        })
        .collect();
    (images, phis)
}

// ----- paper curves -----

pub fn genus5() -> Curve {
    Curve::from_desc(&[-17, -13, -15, 6, -19, 5, -19, 4, -2, 19, 12, 13, -6]).unwrap()
}

/// The 0/1 polynomial of degree 102 (the curve is `y² = 5 f(x)`).
pub fn genus50_f() -> IntPoly {
    let exps = [
        102, 101, 97, 95, 93, 90, 86, 80, 77, 75, 71, 70, 68, 65, 64, 63, 62, 59, 58, 53, 50, 49, 48, 46, 45, 44, 38, 37,
        36, 35, 32, 31, 26, 25, 22, 16, 11, 8, 7, 1, 0,
    ];
    let mut c = vec![BigInt::zero(); 103];
    for e in exps {
        c[e] = BigInt::one();
    }
    IntPoly::new(c)
}

/// `Σ_v ⟨ℓ, μ_v(P)⟩_v`, pairing the product element with `x − θ` on the full spaces.
pub fn direct_pairing_sum(c: &Curve, l: &EllCandidate, pt: &Point, places: &[bm_padic::Place], cache: &AlgebraCache) -> u8 {
    let Point::Affine { x, .. } = pt else { return 0 };
    let m = bm_mu::point::mu_representative(c, x);
    places.iter().fold(0, |acc, &v| acc ^ cache.algebra(v).unwrap().pairing_value(&l.element.rep, &m).unwrap())
}
