//! Residue-disc recursion computing `μ_p(C(ℚ_p))`.
//!
//! `ℙ¹(ℚ_p)` is covered by two charts: `x = t` with `t ∈ ℤ_p`, where
//! `μ = t − θ`, and `x = 1/t` with `t ∈ pℤ_p`, where `μ ≡ 1 − tθ`. In both the
//! element is `M(t) = P + tQ` and `F(t) = c·N(M(t))` is `f(t)` or the
//! reversed polynomial. On a disc `t₀ + p^kℤ_p` the class of the component
//! `M_i` is constant once `e_i k + v(Q_i) − v(M_i(t₀)) > 2 v_i(2)`; if every
//! component is constant the class of `F` is constant as well, so the disc is
//! either entirely soluble with a single class or has no points. A disc that
//! contains the root of a linear component and on which all other components
//! are constant has points, all with the same class; it is read off at an
//! explicit soluble point of the disc.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use bm_arith::f2::F2Vec;
use bm_arith::int::{big_pow, inv_mod_big, legendre, rat_valuation};
use bm_arith::poly::IntPoly;
use bm_etale::Curve;
use bm_padic::{is_precision_error, AlgebraCache, KElt, LocalAlgebra, Mode, PadicAlgebra, PadicError, Place, SquareClassSpace};

use crate::error::{MuError, Result};
use crate::point::{mu_of_x, qp_is_square};
use crate::real::real_image;

/// `I_v` in scalar-quotient coordinates.
#[derive(Clone, Debug)]
pub struct LocalImage {
    pub place: Place,
    pub space: Arc<SquareClassSpace>,
    pub classes: BTreeSet<F2Vec>,
    pub soluble: bool,
    /// number of discs visited
    pub discs: usize,
}

/// Number of rebuilds at doubled precision before giving up.
const PRECISION_RETRIES: u32 = 3;

/// Computes `I_v`, rebuilding the local algebra at higher precision when needed.
pub fn local_image(curve: &Curve, v: Place, cache: &AlgebraCache) -> Result<LocalImage> {
    image_impl(curve, v, cache, false)
}

/// Solubility only: stops at the first soluble disc.
pub(crate) fn first_point(curve: &Curve, v: Place, cache: &AlgebraCache) -> Result<bool> {
    Ok(image_impl(curve, v, cache, true)?.soluble)
}

fn image_impl(curve: &Curve, v: Place, cache: &AlgebraCache, stop: bool) -> Result<LocalImage> {
    let mut tries = 0;
    loop {
        let alg = cache.algebra(v)?;
        let space = cache.space(v, Mode::ScalarQuotient)?;
        match local_image_with(curve, &alg, space, stop) {
            Err(e) if retryable(&e) && tries < PRECISION_RETRIES => {
                tries += 1;
                let LocalAlgebra::Padic(a) = alg.as_ref() else { return Err(e) };
                let rebuilt = PadicAlgebra::with_precision(&curve.f, a.p, 2 * a.prec + 20)?;
                cache.replace(v, LocalAlgebra::Padic(rebuilt));
            }
            r => return r,
        }
    }
}

fn retryable(e: &MuError) -> bool {
    match e {
        MuError::DepthExceeded(..) => true,
        MuError::Local(l) => is_precision_error(l),
        _ => false,
    }
}

/// Computes `I_v` with a given algebra and quotient space.
pub fn local_image_with(
    curve: &Curve,
    alg: &LocalAlgebra,
    space: Arc<SquareClassSpace>,
    stop_at_first: bool,
) -> Result<LocalImage> {
    match alg {
        LocalAlgebra::Real(r) => {
            let (classes, soluble) = real_image(curve, r, &space);
            Ok(LocalImage { place: Place::Real, space, classes, soluble, discs: 0 })
        }
        LocalAlgebra::Padic(a) => {
            let mut rec = Recursion::new(curve, a, alg, &space, stop_at_first)?;
            rec.run()?;
            let soluble = !rec.classes.is_empty();
            Ok(LocalImage { place: Place::Prime(a.p), classes: rec.classes, soluble, discs: rec.discs, space })
        }
    }
}

struct Chart {
    /// `F(t)` with `F = f` or the reversal of `f`
    poly: IntPoly,
    p_part: Vec<KElt>,
    q_part: Vec<KElt>,
    /// `v(Q_i)`, `None` when `Q_i = 0`
    vq: Vec<Option<i64>>,
    inverted: bool,
}

struct Recursion<'a> {
    curve: &'a Curve,
    alg: &'a PadicAlgebra,
    local: &'a LocalAlgebra,
    space: &'a SquareClassSpace,
    stop: bool,
    cap: u32,
    classes: BTreeSet<F2Vec>,
    discs: usize,
}

fn opt_val(alg: &PadicAlgebra, i: usize, x: &KElt) -> std::result::Result<Option<i64>, PadicError> {
    let k = &alg.fields[i];
    if k.is_zero(x) {
        return Ok(None);
    }
    match k.valuation(x) {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_precision_error(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

impl<'a> Recursion<'a> {
    fn new(
        curve: &'a Curve,
        alg: &'a PadicAlgebra,
        local: &'a LocalAlgebra,
        space: &'a SquareClassSpace,
        stop: bool,
    ) -> Result<Self> {
        let e_max = alg.fields.iter().map(|k| k.e).max().unwrap_or(1) as u32;
        let cap = 4 * (1 + curve.disc_valuation(alg.p)) + 2 * e_max + 4;
        Ok(Recursion { curve, alg, local, space, stop, cap, classes: BTreeSet::new(), discs: 0 })
    }

    fn chart(&self, inverted: bool) -> Result<Chart> {
        let a = self.alg;
        let mut p_part = Vec::new();
        let mut q_part = Vec::new();
        for (k, t) in a.fields.iter().zip(&a.theta) {
            if inverted {
                p_part.push(k.one());
                q_part.push(k.neg(t));
            } else {
                p_part.push(k.neg(t));
                q_part.push(k.one());
            }
        }
        let mut vq = Vec::new();
        for (i, q) in q_part.iter().enumerate() {
            vq.push(opt_val(a, i, q)?);
        }
        let d = self.curve.degree();
        let poly = if inverted { self.curve.f.reverse(d) } else { self.curve.f.clone() };
        Ok(Chart { poly, p_part, q_part, vq, inverted })
    }

    fn run(&mut self) -> Result<()> {
        for inverted in [false, true] {
            let ch = self.chart(inverted)?;
            let k0 = if inverted { 1 } else { 0 };
            let mut stack = vec![(BigInt::zero(), k0)];
            while let Some((t0, k)) = stack.pop() {
                self.discs += 1;
                if let Some(children) = self.visit(&ch, &t0, k)? {
                    stack.extend(children);
                }
                if self.stop && !self.classes.is_empty() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// Handles the disc `t0 + p^k ℤ_p`; returns its children when it must be split.
    fn visit(&mut self, ch: &Chart, t0: &BigInt, k: u32) -> Result<Option<Vec<(BigInt, u32)>>> {
        let a = self.alg;
        let p = a.p;
        let v2: i64 = if p == 2 { 1 } else { 0 };
        let kk = k as i64;
        let mut vals = Vec::with_capacity(a.fields.len());
        for (i, kf) in a.fields.iter().enumerate() {
            let m = kf.add(&ch.p_part[i], &kf.mul(&kf.from_int(t0), &ch.q_part[i]));
            vals.push(opt_val(a, i, &m)?);
        }
        let mut roots = Vec::new();
        let mut all_const = true;
        let mut all_val_const = true;
        let mut consts = Vec::with_capacity(vals.len());
        for (i, kf) in a.fields.iter().enumerate() {
            let e = kf.e as i64;
            let (is_const, val_const) = match (ch.vq[i], vals[i]) {
                (None, _) => (true, true),
                (Some(_), None) => (false, false),
                (Some(vq), Some(vm)) => (e * kk + vq - vm > 2 * e * v2, e * kk + vq > vm),
            };
            let has_root = kf.n == 1
                && match (ch.vq[i], vals[i]) {
                    (None, _) => false,
                    (Some(_), None) => true,
                    (Some(vq), Some(vm)) => vm >= vq + kk,
                };
            if has_root {
                roots.push(i);
            }
            consts.push(is_const);
            all_const &= is_const;
            all_val_const &= val_const;
        }
        if roots.is_empty() && all_const {
            let ft = ch.poly.eval(t0);
            if qp_is_square(&BigRational::from_integer(ft), p) {
                let cls = self.class_at(ch, &BigRational::from_integer(t0.clone()))?;
                self.classes.insert(cls);
            }
            return Ok(None);
        }
        if roots.len() == 1 && (0..consts.len()).all(|j| j == roots[0] || consts[j]) {
            let t = self.soluble_point(ch, roots[0], t0, k)?;
            let cls = self.class_at(ch, &t)?;
            self.classes.insert(cls);
            return Ok(None);
        }
        if roots.is_empty() && all_val_const {
            // v(F) is constant on the disc; an odd value rules out squares
            let ft = ch.poly.eval(t0);
            if !ft.is_zero() && rat_valuation(&BigRational::from_integer(ft), p) % 2 != 0 {
                return Ok(None);
            }
        }
        if k >= self.cap {
            return Err(MuError::DepthExceeded(Place::Prime(p), self.cap));
        }
        let pk = big_pow(p, k);
        Ok(Some((0..p).map(|s| (t0 + &pk * BigInt::from(s), k + 1)).collect()))
    }

    /// Class of `μ` at the chart parameter `t` (a point of the curve over ℚ_p).
    fn class_at(&self, ch: &Chart, t: &BigRational) -> Result<F2Vec> {
        if !ch.inverted {
            return mu_of_x(self.curve, t, self.local, self.space);
        }
        if t.is_zero() {
            return Ok(F2Vec::zeros(self.space.dim()));
        }
        mu_of_x(self.curve, &(BigRational::one() / t), self.local, self.space)
    }

    /// A parameter `t` in the disc with `F(t)` a nonzero square, near the root
    /// of the linear component `i`.
    fn soluble_point(&self, ch: &Chart, i: usize, t0: &BigInt, k: u32) -> Result<BigRational> {
        let a = self.alg;
        let p = a.p;
        let kf = &a.fields[i];
        let r = kf.mul(&kf.neg(&ch.p_part[i]), &kf.inv(&ch.q_part[i])?);
        let m = kf.modulus();
        // n = 1: the coordinate is relative to the basis vector, which is a unit multiple of 1
        let one0 = inv_mod_big(&kf.one().z[0], m).ok_or_else(|| PadicError::Internal("degenerate basis".into()))?;
        let u = (&r.z[0] * one0) % m;
        let approx = if r.shift >= 0 {
            BigRational::from_integer(u * big_pow(p, r.shift as u32))
        } else {
            BigRational::new(u, big_pow(p, (-r.shift) as u32))
        };
        let abs_prec = r.shift + r.prec as i64;
        let reps: Vec<i64> = if p == 2 {
            vec![1, 3, 5, 7, 2, 6, 10, 14]
        } else {
            let nr = (2..p).find(|&x| legendre(x, p) == -1).unwrap() as i64;
            vec![1, nr, p as i64, p as i64 * nr]
        };
        let base = BigRational::from_integer(t0.clone());
        let half = (k as i64 + 1) / 2 + 1;
        for mm in half..half + 3 {
            if 2 * mm + 8 > abs_prec {
                break;
            }
            let scale = BigRational::from_integer(big_pow(p, 2 * mm as u32));
            for &w in &reps {
                let t = &approx + &scale * BigRational::from_integer(BigInt::from(w));
                // stay inside the disc
                let diff = &t - &base;
                if !diff.is_zero() && rat_valuation(&diff, p) < k as i64 {
                    continue;
                }
                let ft = ch.poly.eval_rat(&t);
                if !ft.is_zero() && qp_is_square(&ft, p) {
                    return Ok(t);
                }
            }
        }
        Err(MuError::Local(PadicError::PrecisionExhausted(format!(
            "no soluble point found near a root at {p}"
        ))))
    }
}
