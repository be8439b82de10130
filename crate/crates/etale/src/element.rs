//! Elements of `L = ℚ[x]/(f)` and their norms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use bm_arith::int::rat_is_square;
use bm_arith::poly::RatPoly;
use bm_arith::resultant::resultant;

use crate::curve::Curve;

/// `rep(θ)` with `deg rep < deg f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaleElement {
    pub rep: RatPoly,
}

impl EtaleElement {
    /// Coefficients of powers of θ, constant first.
    pub fn coeffs(&self) -> &[BigRational] {
        self.rep.coeffs()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// `N_{L/ℚ}(g(θ)) = Res(f, g) / c^{deg g}`.
pub fn elt_norm(curve: &Curve, l: &EtaleElement) -> BigRational {
    let n = curve.degree();
    let (g, s) = l.rep.to_primitive_int();
    if g.is_zero() {
        return BigRational::zero();
    }
    let scale = num_traits::pow(s, n);
    if g.deg() == 0 {
        let g0 = BigRational::from_integer(g.coeff(0));
        return scale * num_traits::pow(g0, n);
    }
    let r = resultant(&curve.f, &g);
    let cd: BigInt = num_traits::pow(curve.c.clone(), g.deg());
    scale * BigRational::new(r, cd)
}

/// True iff the norm is a nonzero rational square.
pub fn has_square_norm(curve: &Curve, l: &EtaleElement) -> bool {
    let n = elt_norm(curve, l);
    !n.is_zero() && rat_is_square(&n)
}

/// True iff `l` is a unit of `L`.
pub fn is_unit(curve: &Curve, l: &EtaleElement) -> bool {
    !elt_norm(curve, l).is_zero()
}
