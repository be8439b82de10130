//! The local algebra L_v = ℚ_v[x]/(f) at a prime or at the real place.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use bm_arith::f2::F2Vec;
use bm_arith::int::{big_pow, inv_mod_big, split_valuation, valuation};
use bm_arith::modp::{self, FpPoly};
use bm_arith::poly::{IntPoly, RatPoly};
use bm_arith::sturm::{isolate_real_roots, roots_in, sign_at, sturm_sequence, IsolatingInterval};
use bm_arith::zfactor::lift_factor;

use crate::error::{PadicError, Result};
use crate::field::{KElt, LocalField};
use crate::order::Order;

/// Maximum number of precision doublings before giving up.
pub const MAX_DOUBLINGS: u32 = 6;

/// A place of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// `ℚ_p[x]/(f)` as a product of finite extensions.
#[derive(Clone, Debug)]
pub struct PadicAlgebra {
    pub p: u64,
    /// `θ = p^{-k} y` where `y` is integral with monic minimal polynomial `h`.
    pub k: u32,
    /// `h` modulo `p^prec`, constant first
    pub h: Vec<BigInt>,
    pub prec: u32,
    pub fields: Vec<LocalField>,
    pub theta: Vec<KElt>,
}

impl PadicAlgebra {
    /// Builds the decomposition at `p`, doubling the working precision on failure.
    pub fn new(f: &IntPoly, p: u64) -> Result<Self> {
        let mut prec = Self::initial_precision(f, p);
        let mut last = None;
        for _ in 0..=MAX_DOUBLINGS {
            match Self::with_precision(f, p, prec) {
                Ok(a) => return Ok(a),
                Err(e) => last = Some(e),
            }
            prec *= 2;
        }
        Err(last.unwrap())
    }

    fn scaling(f: &IntPoly, p: u64) -> u32 {
        let d = f.deg();
        let vc = valuation(&f.lead(), p) as i64;
        let mut k = 0i64;
        for i in 0..d {
            let c = f.coeff(i);
            if c.is_zero() {
                continue;
            }
            let vi = valuation(&c, p) as i64;
            // need vi + k (d - i) >= vc
            let need = vc - vi;
            if need > 0 {
                let di = (d - i) as i64;
                k = k.max((need + di - 1) / di);
            }
        }
        k as u32
    }

    /// Monic integral `h(y) = p^{kd} f(y / p^k) / c` modulo `p^prec`.
    fn monic_model(f: &IntPoly, p: u64, k: u32, prec: u32) -> Vec<BigInt> {
        let d = f.deg();
        let m = big_pow(p, prec);
        let (vc, cu) = split_valuation(&f.lead(), p);
        let cinv = inv_mod_big(&cu, &m).unwrap();
        let pvc = big_pow(p, vc);
        (0..=d)
            .map(|i| {
                let num = f.coeff(i) * big_pow(p, k * (d - i) as u32);
                let (q, r) = num.div_rem(&pvc);
                debug_assert!(r.is_zero());
                (q * &cinv).mod_floor(&m)
            })
            .collect()
    }

    fn initial_precision(f: &IntPoly, p: u64) -> u32 {
        let k = Self::scaling(f, p);
        let h = Self::monic_model(f, p, k, 8);
        let hp = modp::reduce(&IntPoly::new(h), p);
        let (_, fac) = modp::factor(&hp, p);
        let maxmult = fac.iter().map(|(_, m)| *m).max().unwrap_or(1);
        20 * maxmult + 20
    }

    pub fn with_precision(f: &IntPoly, p: u64, prec: u32) -> Result<Self> {
        let k = Self::scaling(f, p);
        let h = Self::monic_model(f, p, k, prec);
        let hint = IntPoly::new(h.clone());
        let hp = modp::reduce(&hint, p);
        let (_, fac) = modp::factor(&hp, p);
        let mut fields = Vec::new();
        let single = fac.len() == 1;
        for (phi, mult) in &fac {
            let mut block: FpPoly = vec![1];
            for _ in 0..*mult {
                block = modp::mul(&block, phi, p);
            }
            let lifted: Vec<BigInt> = if single {
                h.clone()
            } else {
                let l = lift_factor(&hint, &block, p, prec);
                let mut c = l.coeffs().to_vec();
                c.resize(block.len(), BigInt::zero());
                c
            };
            let order = Order::power_basis(&lifted, p, prec);
            if *mult == 1 {
                fields.push(LocalField::from_order(order)?);
            } else {
                let order = order.maximalize()?;
                let idem = order.idempotents()?;
                if idem.len() == 1 {
                    fields.push(LocalField::from_order(order)?);
                } else {
                    for e in &idem {
                        fields.push(LocalField::from_order(order.component(e)?)?);
                    }
                }
            }
        }
        let theta = fields
            .iter()
            .map(|kf| {
                let mut t = kf.generator();
                t.shift = -(k as i64);
                t
            })
            .collect();
        let prec_out = fields.iter().map(|kf| kf.prec()).min().unwrap_or(prec);
        Ok(PadicAlgebra { p, k, h, prec: prec_out, fields, theta })
    }

    pub fn degree(&self) -> usize {
        self.fields.iter().map(|k| k.n).sum()
    }

    /// `g(θ)` in every component.
    pub fn embed(&self, g: &RatPoly) -> Vec<KElt> {
        self.fields
            .iter()
            .zip(&self.theta)
            .map(|(k, t)| k.eval_poly(g.coeffs(), t))
            .collect()
    }

    pub fn embed_rational(&self, q: &BigRational) -> Vec<KElt> {
        self.fields.iter().map(|k| k.from_rational(q)).collect()
    }

    /// `a − θ` in every component.
    pub fn a_minus_theta(&self, a: &BigRational) -> Vec<KElt> {
        self.fields
            .iter()
            .zip(&self.theta)
            .map(|(k, t)| k.sub(&k.from_rational(a), t))
            .collect()
    }

    /// Concatenated full square-class coordinates of a unit of the algebra.
    pub fn dlog(&self, x: &[KElt]) -> Result<F2Vec> {
        let mut out = F2Vec::zeros(0);
        for (k, xi) in self.fields.iter().zip(x) {
            out = out.concat(&k.dlog(xi)?);
        }
        Ok(out)
    }

    pub fn full_dim(&self) -> usize {
        self.fields.iter().map(|k| k.square_class_dim()).sum()
    }

    /// The functional `m ↦ Σ_i (ℓ_i, m_i)` on the full square-class space.
    pub fn pairing_functional(&self, ell: &[KElt]) -> Result<F2Vec> {
        let mut out = F2Vec::zeros(0);
        for (k, li) in self.fields.iter().zip(ell) {
            out = out.concat(&k.pairing_row(li)?);
        }
        Ok(out)
    }

    /// Valuations of the components of `x` (normalized per component).
    pub fn valuations(&self, x: &[KElt]) -> Result<Vec<i64>> {
        self.fields.iter().zip(x).map(|(k, xi)| k.valuation(xi)).collect()
    }
}

/// `ℝ[x]/(f)`: one real factor per real root, complex factors carry no data.
#[derive(Clone, Debug)]
pub struct RealAlgebra {
    pub f: IntPoly,
    pub roots: Vec<IsolatingInterval>,
    pub n_complex: usize,
}

impl RealAlgebra {
    pub fn new(f: &IntPoly) -> Self {
        let roots = isolate_real_roots(f);
        let n_complex = (f.deg() - roots.len()) / 2;
        RealAlgebra { f: f.clone(), roots, n_complex }
    }

    /// Signs (true = negative) of `g(r)` at each real root `r` of `f`.
    pub fn negative_at_roots(&self, g: &RatPoly) -> Vec<bool> {
        let (gi, scale) = g.to_primitive_int();
        let neg_scale = scale.is_negative();
        if gi.deg() == 0 {
            let neg = gi.lead().is_negative() ^ neg_scale;
            return vec![neg; self.roots.len()];
        }
        let sq = {
            let gcd = gi.gcd(&gi.derivative());
            gi.div_exact(&gcd).unwrap_or_else(|| gi.clone())
        };
        let seq = sturm_sequence(&sq);
        self.roots
            .iter()
            .map(|iv| {
                let mut iv = iv.clone();
                loop {
                    let slo = sign_at(&gi, &iv.lo);
                    if slo != 0 && roots_in(&seq, &iv.lo, &iv.hi) == 0 && sign_at(&gi, &iv.hi) != 0 {
                        return (slo < 0) ^ neg_scale;
                    }
                    iv.bisect(&self.f);
                }
            })
            .collect()
    }

    pub fn dlog(&self, g: &RatPoly) -> F2Vec {
        F2Vec::from_bits(&self.negative_at_roots(g))
    }

    /// Signs of `a − r` for a rational `a`.
    pub fn dlog_a_minus_theta(&self, a: &BigRational) -> F2Vec {
        let g = RatPoly::new(vec![a.clone(), -BigRational::one()]);
        self.dlog(&g)
    }

    pub fn full_dim(&self) -> usize {
        self.roots.len()
    }
}

/// The local algebra at a place.
#[derive(Clone, Debug)]
pub enum LocalAlgebra {
    Real(RealAlgebra),
    Padic(PadicAlgebra),
}

impl LocalAlgebra {
    pub fn new(f: &IntPoly, v: Place) -> Result<Self> {
        Ok(match v {
            Place::Real => LocalAlgebra::Real(RealAlgebra::new(f)),
            Place::Prime(p) => LocalAlgebra::Padic(PadicAlgebra::new(f, p)?),
        })
    }

    pub fn place(&self) -> Place {
        match self {
            LocalAlgebra::Real(_) => Place::Real,
            LocalAlgebra::Padic(a) => Place::Prime(a.p),
        }
    }

    pub fn full_dim(&self) -> usize {
        match self {
            LocalAlgebra::Real(r) => r.full_dim(),
            LocalAlgebra::Padic(a) => a.full_dim(),
        }
    }

    /// Full-space class of `g(θ)`.
    pub fn dlog_poly(&self, g: &RatPoly) -> Result<F2Vec> {
        match self {
            LocalAlgebra::Real(r) => Ok(r.dlog(g)),
            LocalAlgebra::Padic(a) => a.dlog(&a.embed(g)),
        }
    }

    /// Full-space class of a rational scalar.
    pub fn dlog_rational(&self, q: &BigRational) -> Result<F2Vec> {
        self.dlog_poly(&RatPoly::constant(q.clone()))
    }

    /// The functional `m ↦ ⟨ℓ, m⟩` on the full space.
    pub fn pairing_functional(&self, ell: &RatPoly) -> Result<F2Vec> {
        match self {
            LocalAlgebra::Real(r) => Ok(r.dlog(ell)),
            LocalAlgebra::Padic(a) => a.pairing_functional(&a.embed(ell)),
        }
    }

    /// `⟨ℓ, m⟩_v = Σ_i (ℓ_i, m_i)_{L_i}` for a second element given by a polynomial.
    pub fn pairing_value(&self, ell: &RatPoly, m: &RatPoly) -> Result<u8> {
        let phi = self.pairing_functional(ell)?;
        let dm = self.dlog_poly(m)?;
        Ok(phi.dot(&dm) as u8)
    }
}

/// Independent generators of ℚ_v^× modulo squares.
pub fn scalar_generators(v: Place) -> Vec<BigRational> {
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    match v {
        Place::Real => vec![r(-1)],
        Place::Prime(2) => vec![r(-1), r(2), r(5)],
        Place::Prime(p) => {
            let u = (2..p).find(|&a| bm_arith::int::legendre(a, p) == -1).unwrap();
            vec![r(p as i64), r(u as i64)]
        }
    }
}

impl From<PadicAlgebra> for LocalAlgebra {
    fn from(a: PadicAlgebra) -> Self {
        LocalAlgebra::Padic(a)
    }
}

pub fn is_precision_error(e: &PadicError) -> bool {
    matches!(e, PadicError::PrecisionExhausted(_))
}
