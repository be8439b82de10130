//! Points of `C` with rational x-coordinate and their image under `μ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use bm_arith::f2::F2Vec;
use bm_arith::int::{legendre, rat_is_square, split_valuation};
use bm_arith::poly::RatPoly;
use bm_etale::Curve;
use bm_padic::{LocalAlgebra, SquareClassSpace};

use crate::error::Result;

/// A point of `y² = f(x)`: affine, or one of the two points at infinity where
/// `y/x^{g+1} = ±√c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Affine { x: BigRational, y: BigRational },
    Infinity { positive: bool },
}

impl Point {
    /// Exact membership test for rational points.
    pub fn on_curve(&self, curve: &Curve) -> bool {
        match self {
            Point::Affine { x, y } => curve.f.eval_rat(x) == y * y,
            Point::Infinity { .. } => rat_is_square(&BigRational::from_integer(curve.c.clone())),
        }
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            Point::Affine { x, .. } => Some(x),
            Point::Infinity { .. } => None,
        }
    }
}

/// Whether a nonzero rational is a square in `ℚ_p`.
pub fn qp_is_square(q: &BigRational, p: u64) -> bool {
    assert!(!q.is_zero());
    let (vn, un) = split_valuation(q.numer(), p);
    let (vd, ud) = split_valuation(q.denom(), p);
    if (vn + vd) % 2 == 1 {
        return false;
    }
    let u = un * ud;
    if p == 2 {
        u.mod_floor(&BigInt::from(8)).to_u64() == Some(1)
    } else {
        legendre(u.mod_floor(&BigInt::from(p)).to_u64().unwrap(), p) == 1
    }
}

/// Representative `g(θ)` of `μ` at a point with x-coordinate `a`: `a − θ`, or
/// `(a − θ) + f̃(θ)` with `f = (x − a) f̃` when `a` is a root of `f`.
pub fn mu_representative(curve: &Curve, a: &BigRational) -> RatPoly {
    let lin = RatPoly::new(vec![a.clone(), -BigRational::one()]);
    if !curve.f.eval_rat(a).is_zero() {
        return lin;
    }
    let f = curve.f.to_rat();
    let (q, r) = f.divrem(&RatPoly::new(vec![-a.clone(), BigRational::one()]));
    debug_assert!(r.is_zero());
    lin.add(&q)
}

/// Class of `μ_v` at a `ℚ_v`-point with rational x-coordinate `a`.
pub fn mu_of_x(curve: &Curve, a: &BigRational, alg: &LocalAlgebra, space: &SquareClassSpace) -> Result<F2Vec> {
    let g = mu_representative(curve, a);
    Ok(space.project(&alg.dlog_poly(&g)?))
}

/// `μ_v(P)` in scalar-quotient coordinates; points at infinity map to zero.
pub fn mu_of_point(curve: &Curve, pt: &Point, alg: &LocalAlgebra, space: &SquareClassSpace) -> Result<F2Vec> {
    match pt {
        Point::Infinity { .. } => Ok(F2Vec::zeros(space.dim())),
        Point::Affine { x, .. } => mu_of_x(curve, x, alg, space),
    }
}
