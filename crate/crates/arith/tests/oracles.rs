//! Cross-checks of the arithmetic core against independent slow oracles.

use bm_arith::f2::{F2Matrix, F2Vec};
use bm_arith::factor::{factor_integer, FactorBudget};
use bm_arith::poly::IntPoly;
use bm_arith::primes::{is_probable_prime_rounds, primes_up_to};
use bm_arith::resultant::{discriminant, resultant};
use bm_arith::sturm::{count_real_roots, isolate_real_roots, sign_at};
use bm_arith::zfactor::{factor_over_z, is_irreducible_over_q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Sylvester-matrix resultant.
fn sylvester_resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (m, n) = (f.deg(), g.deg());
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            mat[i][i + j] = f.coeff(m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            mat[n + i][i + j] = g.coeff(n - j);
        }
    }
    bareiss_det(mat)
}

fn genus5() -> IntPoly {
    IntPoly::from_i64_desc(&[-17, -13, -15, 6, -19, 5, -19, 4, -2, 19, 12, 13, -6])
}

fn genus50_f() -> IntPoly {
    let exps = [
        102, 101, 97, 95, 93, 90, 86, 80, 77, 75, 71, 70, 68, 65, 64, 63, 62, 59, 58, 53, 50, 49,
        48, 46, 45, 44, 38, 37, 36, 35, 32, 31, 26, 25, 22, 16, 11, 8, 7, 1, 0,
    ];
    let mut c = vec![BigInt::zero(); 103];
    for e in exps {
        c[e] = BigInt::one();
    }
    IntPoly::new(c)
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> IntPoly {
    loop {
        let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
        if c[deg] != 0 {
            return IntPoly::from_i64(&c);
        }
    }
}

#[test]
fn genus5_discriminant_factors_as_expected() {
    let d = discriminant(&genus5());
    let expected: BigInt = [
        BigInt::from(64),
        BigInt::from(25),
        BigInt::from(29),
        BigInt::from(151),
        BigInt::from(54918937u64),
        BigInt::from(571571633u64),
        BigInt::from(8389309314807991u64),
    ]
    .iter()
    .product();
    assert_eq!(d.abs(), expected);
    let fac = factor_integer(&d, &FactorBudget::default());
    assert!(fac.is_complete());
    let primes: Vec<String> = fac.factors.iter().map(|(p, _)| p.to_string()).collect();
    assert_eq!(
        primes,
        ["2", "5", "29", "151", "54918937", "571571633", "8389309314807991"]
    );
    assert_eq!(fac.exponent_of(&BigInt::from(2)), 6);
    assert_eq!(fac.exponent_of(&BigInt::from(5)), 2);
}

#[test]
fn discriminant_matches_sylvester_oracle() {
    let f = IntPoly::from_i64(&[0, -1, 0, 1]);
    let lc = f.lead();
    let res = sylvester_resultant(&f, &f.derivative());
    // deg 3: sign (-1)^3
    assert_eq!(discriminant(&f), -(res / lc));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let df = rng.gen_range(1..8);
        let dg = rng.gen_range(1..7);
        let f = random_poly(&mut rng, df, 30);
        let g = random_poly(&mut rng, dg, 30);
        assert_eq!(resultant(&f, &g), sylvester_resultant(&f, &g), "{f} / {g}");
    }
}

#[test]
fn resultant_large_degree_matches_sylvester() {
    let f = genus50_f();
    let g = IntPoly::from_i64(&[3, -1, 4, 1, -5, 9, 2]);
    assert_eq!(resultant(&f, &g), sylvester_resultant(&f, &g));
}

#[test]
fn factor_integer_recovers_constructed_semiprimes() {
    let primes: Vec<u64> = primes_up_to(1 << 20)
        .into_iter()
        .filter(|&p| p > 1 << 19)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let budget = FactorBudget::default();
    for _ in 0..50 {
        let p = primes[rng.gen_range(0..primes.len())];
        let q = primes[rng.gen_range(0..primes.len())];
        let n = BigInt::from(p) * BigInt::from(q) * BigInt::from(1_000_003u64);
        let f = factor_integer(&n, &budget);
        assert!(f.is_complete());
        assert_eq!(f.value(), n);
        for (r, _) in &f.factors {
            assert!(is_probable_prime_rounds(r, 40));
        }
        assert!(f.exponent_of(&BigInt::from(p)) >= 1);
        assert!(f.exponent_of(&BigInt::from(q)) >= 1);
    }
}

#[test]
fn x4_plus_1_has_no_small_factor() {
    let f = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
    assert!(is_irreducible_over_q(&f));
    // Exhaustive: any monic factor of degree 1 or 2 has coefficients bounded by
    // the Mignotte bound binom(2,1)*||f||_2 < 3.
    for a in -3i64..=3 {
        let lin = IntPoly::from_i64(&[a, 1]);
        assert!(f.div_exact(&lin).is_none());
        for b in -3i64..=3 {
            let quad = IntPoly::from_i64(&[a, b, 1]);
            assert!(f.div_exact(&quad).is_none(), "{quad}");
        }
    }
}

#[test]
fn product_of_cubics_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 20 {
        let a = random_poly(&mut rng, 3, 9);
        let b = random_poly(&mut rng, 3, 9);
        if !is_irreducible_over_q(&a) || !is_irreducible_over_q(&b) || a.primitive_part() == b.primitive_part() {
            continue;
        }
        let f = a.mul(&b);
        let fz = factor_over_z(&f);
        assert_eq!(fz.product(), f);
        let got: Vec<IntPoly> = fz.factors.iter().map(|(g, _)| g.clone()).collect();
        assert!(got.contains(&a.primitive_part()));
        assert!(got.contains(&b.primitive_part()));
        done += 1;
    }
}

#[test]
fn genus50_polynomial_has_two_real_roots() {
    let f = genus50_f();
    let iv = isolate_real_roots(&f);
    assert_eq!(iv.len(), 2);
    assert_eq!(count_real_roots(&f), 2);
    for i in &iv {
        assert!(sign_at(&f, &i.lo) * sign_at(&f, &i.hi) < 0);
    }
}

#[test]
fn kernel_of_random_8x12_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let rows: Vec<F2Vec> = (0..8)
            .map(|_| F2Vec::from_u64(rng.gen::<u64>() & 0xfff, 12))
            .collect();
        let m = F2Matrix::from_rows(12, rows);
        let ker = m.kernel();
        let mut count = 0;
        for x in 0u64..(1 << 12) {
            let v = F2Vec::from_u64(x, 12);
            if m.mul_vec(&v).is_zero() {
                count += 1;
            }
        }
        assert_eq!(1usize << ker.len(), count);
        for v in &ker {
            assert!(m.mul_vec(v).is_zero());
        }
        let k = ker.len();
        assert_eq!(F2Matrix::from_rows(12, ker).rank(), k);
    }
}

fn poly_strategy(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    (1..=max_deg).prop_flat_map(move |d| {
        (prop::collection::vec(-bound..=bound, d), 1..=bound, any::<bool>()).prop_map(
            move |(mut c, lead, neg)| {
                c.push(if neg { -lead } else { lead });
                IntPoly::from_i64(&c)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn discriminant_vanishes_iff_repeated_factor(f in poly_strategy(8, 6)) {
        prop_assume!(f.deg() >= 1);
        let d = discriminant(&f);
        let g = f.gcd(&f.derivative());
        prop_assert_eq!(d.is_zero(), g.deg() > 0);
    }

    #[test]
    fn factorization_multiplies_back(f in poly_strategy(12, 20)) {
        let fz = factor_over_z(&f);
        prop_assert_eq!(fz.product(), f);
    }

    #[test]
    fn integer_factorization_reassembles(n in 1u64..u64::MAX) {
        let f = factor_integer(&BigInt::from(n), &FactorBudget::default());
        prop_assert!(f.is_complete());
        prop_assert_eq!(f.value(), BigInt::from(n));
        for (p, _) in &f.factors {
            prop_assert!(is_probable_prime_rounds(p, 40));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sturm_intervals_match_root_count(f in poly_strategy(9, 12)) {
        let g = f.gcd(&f.derivative());
        prop_assume!(g.deg() == 0);
        let iv = isolate_real_roots(&f);
        prop_assert_eq!(iv.len(), count_real_roots(&f));
        for (k, i) in iv.iter().enumerate() {
            prop_assert!(sign_at(&f, &i.lo) * sign_at(&f, &i.hi) < 0);
            if k > 0 {
                prop_assert!(iv[k - 1].hi <= i.lo);
            }
        }
        let mut one = iv.first().cloned();
        if let Some(i) = one.as_mut() {
            let eps = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
            i.refine(&f, &eps);
            prop_assert!(i.width() < eps);
        }
    }

    #[test]
    fn f2_rank_nullity(width in 1usize..=14, rows in 1usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = (1u64 << width) - 1;
        let m = F2Matrix::from_rows(
            width,
            (0..rows).map(|_| F2Vec::from_u64(rng.gen::<u64>() & mask, width)).collect(),
        );
        let ker = m.kernel();
        prop_assert_eq!(m.rank() + ker.len(), width);
        let count = (0u64..(1 << width))
            .filter(|&x| m.mul_vec(&F2Vec::from_u64(x, width)).is_zero())
            .count();
        prop_assert_eq!(count, 1usize << ker.len());
        for v in &ker {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }
}
