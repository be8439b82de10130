//! Search for rational points of bounded height on `y² = f(x)`.
//!
//! With `x = a/b` in lowest terms, `y = z/b^{g+1}` where `z² = F(a, b)` and `F`
//! is the homogenization of `f` of degree `2g + 2`. For each `b` a table of
//! the residues of `a` for which `F(a, b)` is a square is built modulo a few
//! small moduli; only the pairs passing every table are evaluated exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use bm_arith::int::{exact_sqrt, is_square};
use bm_etale::Curve;
use bm_mu::Point;

/// Sieving moduli: 64 and odd primes.
const MODULI: [u64; 12] = [64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

struct Sieve {
    /// `squares[j][r]`: `r` is a square modulo `MODULI[j]`
    squares: Vec<Vec<bool>>,
    /// coefficients of `f` reduced modulo each modulus, constant first
    coeffs: Vec<Vec<u64>>,
}

impl Sieve {
    fn new(f: &bm_arith::poly::IntPoly) -> Self {
        let squares = MODULI
            .iter()
            .map(|&m| {
                let mut t = vec![false; m as usize];
                for y in 0..m {
                    t[(y * y % m) as usize] = true;
                }
                t
            })
            .collect();
        let coeffs = MODULI
            .iter()
            .map(|&m| {
                let mb = BigInt::from(m);
                f.coeffs().iter().map(|c| c.mod_floor(&mb).to_u64().unwrap()).collect()
            })
            .collect();
        Sieve { squares, coeffs }
    }

    /// `ok[j][a mod m_j]` for a fixed `b`.
    fn tables(&self, b: u64) -> Vec<Vec<bool>> {
        MODULI
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let d = self.coeffs[j].len() - 1;
                // coefficients of F(·, b): f_i b^{d−i}
                let mut hc = vec![0u64; d + 1];
                let bm = b % m;
                let mut pw = 1u64;
                for i in (0..=d).rev() {
                    hc[i] = self.coeffs[j][i] * pw % m;
                    pw = pw * bm % m;
                }
                (0..m)
                    .map(|a| {
                        let mut acc = 0u64;
                        for &c in hc.iter().rev() {
                            acc = (acc * a + c) % m;
                        }
                        self.squares[j][acc as usize]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Rational points with `x = a/b`, `|a|, b ≤ height`, and the points at
/// infinity when the leading coefficient is a square. Stops after `limit`
/// points if given.
pub fn search_points(curve: &Curve, height: u64, limit: Option<usize>) -> Vec<Point> {
    assert!(height >= 1);
    let mut out = Vec::new();
    let full = |out: &Vec<Point>| limit.is_some_and(|l| out.len() >= l);
    if is_square(&curve.c) {
        out.push(Point::Infinity { positive: true });
        out.push(Point::Infinity { positive: false });
        if full(&out) {
            out.truncate(limit.unwrap());
            return out;
        }
    }
    let d = curve.degree() as u32;
    let g1 = curve.g as u32 + 1;
    let sieve = Sieve::new(&curve.f);
    let h = height as i64;
    for b in 1..=height {
        let tables = sieve.tables(b);
        let mods: Vec<i64> = MODULI.iter().map(|&m| m as i64).collect();
        let bb = BigInt::from(b);
        for a in -h..=h {
            let pass = tables
                .iter()
                .zip(&mods)
                .all(|(t, &m)| t[a.rem_euclid(m) as usize]);
            if !pass || a.gcd(&(b as i64)) != 1 {
                continue;
            }
            let ab = BigInt::from(a);
            let val = curve.f.eval_hom(&ab, &bb, d);
            if val.is_negative() {
                continue;
            }
            let Some(z) = exact_sqrt(&val) else { continue };
            let x = BigRational::new(ab.clone(), bb.clone());
            let den = num_traits::pow(bb.clone(), g1 as usize);
            let y = BigRational::new(z.clone(), den.clone());
            if z.is_zero() {
                out.push(Point::Affine { x, y });
            } else {
                out.push(Point::Affine { x: x.clone(), y: y.clone() });
                out.push(Point::Affine { x, y: -y });
            }
            if full(&out) {
                out.truncate(limit.unwrap());
                return out;
            }
        }
    }
    out
}

/// All points up to the height bound.
pub fn search_rational_points(curve: &Curve, height: u64) -> Vec<Point> {
    search_points(curve, height, None)
}

/// The first point found, if any.
pub fn first_rational_point(curve: &Curve, height: u64) -> Option<Point> {
    search_points(curve, height, Some(1)).pop()
}
