//! The real place: one class per interval of ℝ on which `f > 0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use bm_arith::f2::F2Vec;
use bm_arith::sturm::sign_at;
use bm_etale::Curve;
use bm_padic::{RealAlgebra, SquareClassSpace};

/// Classes of `x − θ` over `C(ℝ)` and whether `C(ℝ)` is nonempty.
pub fn real_image(curve: &Curve, alg: &RealAlgebra, space: &SquareClassSpace) -> (BTreeSet<F2Vec>, bool) {
    let m = alg.roots.len();
    let mut classes = BTreeSet::new();
    if m == 0 {
        let sol = curve.c.is_positive();
        if sol {
            classes.insert(F2Vec::zeros(space.dim()));
        }
        return (classes, sol);
    }
    let one = BigRational::one();
    // sample point of the j-th gap: roots 0..j lie to its left
    for j in 0..=m {
        let x = if j == 0 {
            &alg.roots[0].lo - &one
        } else if j == m {
            &alg.roots[m - 1].hi + &one
        } else {
            (&alg.roots[j - 1].hi + &alg.roots[j].lo) / BigRational::from_integer(BigInt::from(2))
        };
        if sign_at(&curve.f, &x) > 0 {
            let bits: Vec<bool> = (0..m).map(|k| k >= j).collect();
            classes.insert(space.project(&F2Vec::from_bits(&bits)));
        }
    }
    let sol = !classes.is_empty();
    (classes, sol)
}
