//! Dense univariate polynomials over ℤ and ℚ, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with integer coefficients. The coefficient vector never has
/// trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// From machine integers, constant term first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// From machine integers, leading coefficient first.
    pub fn from_i64_desc(coeffs: &[i64]) -> Self {
        let mut v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        v.reverse();
        Self::new(v)
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let (n, d) = (x.numer(), x.denom());
        let deg = self.deg() as u32;
        let h = self.eval_hom(n, d, deg);
        BigRational::new(h, num_traits::pow(d.clone(), deg as usize))
    }

    /// Homogeneous evaluation `sum f_i a^i b^(d-i)` for a formal degree `d >= deg`.
    pub fn eval_hom(&self, a: &BigInt, b: &BigInt, d: u32) -> BigInt {
        let n = self.coeffs.len();
        if n == 0 {
            return BigInt::zero();
        }
        assert!(d as usize + 1 >= n, "formal degree below degree");
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc * num_traits::pow(b.clone(), d as usize + 1 - n)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_scalar(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff_ref(i) + o.coeff_ref(i))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff_ref(i) - o.coeff_ref(i))
                .collect(),
        )
    }

    fn coeff_ref(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Reversal `x^d f(1/x)` for a formal degree `d >= deg f`.
    pub fn reverse(&self, d: usize) -> Self {
        let mut v = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[d - i] = c.clone();
        }
        Self::new(v)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "division by zero polynomial");
        let db = b.deg();
        let mut r = self.coeffs.clone();
        if r.len() < b.coeffs.len() {
            return self.clone();
        }
        let lb = b.lead();
        let delta = r.len() - b.coeffs.len() + 1;
        let mut steps = 0;
        while r.len() >= b.coeffs.len() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps += 1;
        }
        let mut out = Self::new(r);
        for _ in steps..delta {
            out = out.scale(&lb);
        }
        out
    }

    /// Exact quotient over ℤ, or `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < b.coeffs.len() {
            return None;
        }
        let db = b.deg();
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let top = &r[k + db];
            if top.is_zero() {
                continue;
            }
            let (qq, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &qq * bc;
            }
            q[k] = qq;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Primitive gcd over ℤ[x] with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive_part();
        }
        if o.is_zero() {
            return self.primitive_part();
        }
        let cont = self.content().gcd(&o.content());
        let (mut a, mut b) = if self.deg() >= o.deg() {
            (self.primitive_part(), o.primitive_part())
        } else {
            (o.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&cont)
    }

    /// `f(x + t)` for integer `t`.
    pub fn shift(&self, t: &BigInt) -> Self {
        let mut acc = Self::zero();
        let lin = Self::new(vec![t.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `b^d f(x / b)` for the formal degree `d = deg f`: coefficient i scaled by b^(d-i).
    pub fn scale_var_inv(&self, b: &BigInt) -> Self {
        let d = self.deg();
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * num_traits::pow(b.clone(), d - i))
                .collect(),
        )
    }

    /// `f(k x)`.
    pub fn scale_var(&self, k: &BigInt) -> Self {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pw);
            pw *= k;
        }
        Self::new(out)
    }

    /// Largest absolute value of a coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Coefficients leading first, as decimal strings separated by spaces.
    pub fn to_desc_string(&self) -> String {
        self.coeffs
            .iter()
            .rev()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn fmt_terms<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: Vec<(usize, T, bool, bool)>,
) -> fmt::Result {
    // (exponent, |coefficient|, negative, coefficient is one)
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (k, c, neg, unit)) in terms.into_iter().enumerate() {
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let body = match (k, unit) {
            (0, _) => format!("{c}"),
            (1, true) => "x".to_string(),
            (1, false) => format!("{c}*x"),
            (_, true) => format!("x^{k}"),
            (_, false) => format!("{c}*x^{k}"),
        };
        write!(f, "{body}")?;
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.abs(), c.is_negative(), c.abs().is_one()))
            .collect();
        fmt_terms(f, terms)
    }
}

/// Polynomial with rational coefficients, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < b.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let db = b.deg();
        let inv = BigRational::one() / b.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let t = &r[k + db] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &t * bc;
            }
            q[k] = t;
        }
        r.truncate(db);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.divrem(b).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = BigRational::one() / self.lead();
        self.scale(&inv)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Writes `self = q * g / d` with `g` primitive integral, returning `(g, q/d)` as
    /// the integer polynomial and the rational scale factor.
    pub fn to_primitive_int(&self) -> (IntPoly, BigRational) {
        if self.is_zero() {
            return (IntPoly::zero(), BigRational::one());
        }
        let l = crate::int::denom_lcm(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let p = IntPoly::new(ints);
        let mut cont = p.content();
        if p.lead().is_negative() {
            cont = -cont;
        }
        let g = IntPoly::new(p.coeffs().iter().map(|c| c / &cont).collect());
        (g, BigRational::new(cont, l))
    }

    /// Integer polynomial when every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Reduction modulo an integer polynomial of positive degree.
    pub fn rem_int(&self, f: &IntPoly) -> Self {
        self.rem(&f.to_rat())
    }

    /// Multiplication modulo an integer polynomial.
    pub fn mul_mod(&self, o: &Self, f: &IntPoly) -> Self {
        self.mul(o).rem_int(f)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.abs(), c.is_negative(), c.abs().is_one()))
            .collect();
        fmt_terms(f, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&a), Some(b.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact(&a), None);
        assert_eq!(p(&[0, 0, 3]).derivative(), p(&[0, 6]));
        assert_eq!(p(&[6, 4]).content(), BigInt::from(2));
        assert_eq!(p(&[1, 2, 3]).reverse(2), p(&[3, 2, 1]));
        assert_eq!(p(&[1, 2, 3]).reverse(4), p(&[0, 0, 3, 2, 1]));
    }

    #[test]
    fn gcds() {
        let a = p(&[-1, 0, 1]).mul(&p(&[2, 1]));
        let b = p(&[1, 1]).mul(&p(&[5, 0, 1]));
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        let g = p(&[3, -1]).mul(&p(&[7, 2, 5]));
        assert_eq!(g.gcd(&g.derivative()), IntPoly::one());
    }

    #[test]
    fn evaluation() {
        let f = p(&[1, -3, 0, 2]);
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(11));
        let x = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.eval_rat(&x), BigRational::new(BigInt::from(-1), BigInt::from(4)));
        // F(a, b) = b^3 f(a/b) with formal degree 4 gives an extra factor b.
        let h = f.eval_hom(&BigInt::from(1), &BigInt::from(2), 4);
        assert_eq!(h, BigInt::from(-4));
        assert_eq!(f.shift(&BigInt::from(1)).eval(&BigInt::from(1)), BigInt::from(11));
    }

    #[test]
    fn pseudo_remainder() {
        let a = p(&[1, 0, 0, 1]);
        let b = p(&[1, 2]);
        let r = a.pseudo_rem(&b);
        // 8 * (1 + x^3) at x = -1/2 is 7.
        assert_eq!(r, p(&[7]));
    }

    #[test]
    fn rational_division() {
        let a = RatPoly::from_ints(&[1, 0, 0, 1]);
        let b = RatPoly::from_ints(&[1, 2]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() == 0);
        let (g, s) = RatPoly::new(vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(3), BigInt::from(4)),
        ])
        .to_primitive_int();
        assert_eq!(g, p(&[2, 3]));
        assert_eq!(s, BigRational::new(BigInt::from(1), BigInt::from(4)));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(p(&[0, -2, 0, 1]).to_string(), "x^3 - 2*x");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}
