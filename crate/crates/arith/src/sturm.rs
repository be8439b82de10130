//! Exact real root isolation with Sturm sequences over ℚ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::IntPoly;

/// An interval `(lo, hi)` with rational endpoints containing exactly one real
/// root of the associated squarefree polynomial; `f(lo)` and `f(hi)` are
/// nonzero with opposite signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Bisects once, keeping the half that contains the root of `f`.
    pub fn bisect(&mut self, f: &IntPoly) {
        let slo = sign_at(f, &self.lo);
        let mid = self.midpoint();
        let sm = sign_at(f, &mid);
        if sm == 0 {
            // Exact rational root: shrink to a tiny interval around it.
            let eps = self.width() / BigRational::from_integer(BigInt::from(1024));
            let mut a = &mid - &eps;
            let mut b = &mid + &eps;
            let mut e = eps;
            while sign_at(f, &a) == 0 || sign_at(f, &b) == 0 || sign_at(f, &a) == sign_at(f, &b) {
                e = e / BigRational::from_integer(BigInt::from(2));
                a = &mid - &e;
                b = &mid + &e;
            }
            self.lo = a;
            self.hi = b;
            return;
        }
        if sm == slo {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Shrinks until the width is below `eps`.
    pub fn refine(&mut self, f: &IntPoly, eps: &BigRational) {
        while &self.width() >= eps {
            self.bisect(f);
        }
    }
}

/// Sign of `f(x)` as -1, 0, 1.
pub fn sign_at(f: &IntPoly, x: &BigRational) -> i32 {
    let d = f.deg() as u32;
    let v = f.eval_hom(x.numer(), x.denom(), d);
    // denominators are positive so the homogenized value has the same sign
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// The Sturm sequence of a squarefree polynomial (primitive terms, signs kept).
pub fn sturm_sequence(f: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let b = &seq[n - 1];
        if b.deg() == 0 {
            break;
        }
        let a = &seq[n - 2];
        let delta = a.deg() - b.deg() + 1;
        let mut r = a.pseudo_rem(b);
        // pseudo-remainder multiplies by lc(b)^delta; undo a negative sign
        if b.lead().is_negative() && delta % 2 == 1 {
            r = r.neg();
        }
        if r.is_zero() {
            break;
        }
        let c = r.content();
        let r = r.div_scalar(&c).neg();
        seq.push(r);
    }
    seq
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn var_at(seq: &[IntPoly], x: &BigRational) -> usize {
    variations(seq.iter().map(|g| sign_at(g, x)))
}

fn var_at_inf(seq: &[IntPoly], positive: bool) -> usize {
    variations(seq.iter().map(|g| {
        let s = if g.lead().is_positive() { 1 } else { -1 };
        if positive || g.deg() % 2 == 0 {
            s
        } else {
            -s
        }
    }))
}

/// Number of roots in `(lo, hi]` of the squarefree polynomial with Sturm sequence `seq`.
pub fn roots_in(seq: &[IntPoly], lo: &BigRational, hi: &BigRational) -> usize {
    var_at(seq, lo) - var_at(seq, hi)
}

/// Number of real roots by Sturm's theorem.
pub fn count_real_roots(f: &IntPoly) -> usize {
    let seq = sturm_sequence(f);
    var_at_inf(&seq, false) - var_at_inf(&seq, true)
}

/// Cauchy bound: every real root has absolute value below `1 + max |a_i / a_n|`.
pub fn root_bound(f: &IntPoly) -> BigRational {
    let lc = f.lead().abs();
    let m = f.coeffs()[..f.deg()]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigRational::one() + BigRational::new(m, lc) + BigRational::one()
}

/// Isolating intervals for all real roots of a squarefree polynomial, in increasing order.
pub fn isolate_real_roots(f: &IntPoly) -> Vec<IsolatingInterval> {
    assert!(f.deg() >= 1, "constant polynomial");
    let seq = sturm_sequence(f);
    let b = root_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        // roots in (lo, hi]
        let n = var_at(&seq, &lo) - var_at(&seq, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(IsolatingInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            });
            continue;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mut mid = (&lo + &hi) / &two;
        if sign_at(f, &mid) == 0 {
            // nudge the split point off the root
            let w = (&hi - &lo) / BigRational::from_integer(BigInt::from(7));
            mid = &mid + &w / &two;
            let mut k = 3;
            while sign_at(f, &mid) == 0 {
                mid = &lo + (&hi - &lo) / BigRational::from_integer(BigInt::from(k));
                k += 1;
            }
        }
        // split points are never roots, so endpoints stay root-free
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_with_known_roots() {
        let f = IntPoly::from_i64(&[-1, 1])
            .mul(&IntPoly::from_i64(&[-2, 1]))
            .mul(&IntPoly::from_i64(&[-3, 1]));
        let iv = isolate_real_roots(&f);
        assert_eq!(iv.len(), 3);
        for (k, i) in iv.iter().enumerate() {
            let r = BigRational::from_integer(BigInt::from(k as i64 + 1));
            assert!(i.lo < r && r < i.hi, "{i:?}");
            assert!(sign_at(&f, &i.lo) * sign_at(&f, &i.hi) < 0);
        }
        assert_eq!(count_real_roots(&f), 3);
    }

    #[test]
    fn no_real_roots() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert!(isolate_real_roots(&f).is_empty());
        assert_eq!(count_real_roots(&f), 0);
    }

    #[test]
    fn refinement() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        let mut iv = isolate_real_roots(&f);
        assert_eq!(iv.len(), 2);
        let eps = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
        iv[1].refine(&f, &eps);
        let lo = iv[1].lo.clone();
        assert!(&lo * &lo < BigRational::from_integer(BigInt::from(2)));
        assert!(iv[1].width() < eps);
    }
}
