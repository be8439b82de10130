//! Linear algebra over F_p (word-sized p) and over ℤ/p^N.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use bm_arith::int::{add_mod, inv_mod, inv_mod_big, mul_mod, sub_mod, valuation};

/// Dense matrix over F_p stored as rows.
pub type FpMat = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn fp_rref(m: &mut FpMat, p: u64) -> Vec<usize> {
    let nrows = m.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(k) = (r..nrows).find(|&k| m[k][c] != 0) else {
            continue;
        };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p).unwrap();
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let t = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(t, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r.max(0));
    pivots
}

/// Basis of the row space in reduced echelon form, with pivots.
pub fn fp_row_basis(rows: &[Vec<u64>], p: u64) -> (FpMat, Vec<usize>) {
    let mut m = rows.to_vec();
    let piv = fp_rref(&mut m, p);
    (m, piv)
}

/// Kernel `{x : A x = 0}` of an `r × c` matrix given by rows.
pub fn fp_kernel(a: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = a.to_vec();
    let piv = if m.is_empty() { Vec::new() } else { fp_rref(&mut m, p) };
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&piv) {
                v[pc] = sub_mod(0, row[fc], p);
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix over F_p.
pub fn fp_inverse(a: &[Vec<u64>], p: u64) -> Option<FpMat> {
    let n = a.len();
    let mut m: FpMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let piv = fp_rref(&mut m, p);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `A x` over F_p.
pub fn fp_mat_vec(a: &[Vec<u64>], x: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0, |acc, (&r, &v)| add_mod(acc, mul_mod(r, v, p), p))
        })
        .collect()
}

/// Reduces a row vector against a reduced echelon basis; returns the remainder.
pub fn fp_reduce(v: &[u64], basis: &[Vec<u64>], pivots: &[usize], p: u64) -> Vec<u64> {
    let mut v = v.to_vec();
    for (row, &c) in basis.iter().zip(pivots) {
        let t = v[c];
        if t != 0 {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = sub_mod(*x, mul_mod(t, y, p), p);
            }
        }
    }
    v
}

/// Reduces every entry into `[0, m)`.
pub fn mod_vec(v: &mut [BigInt], m: &BigInt) {
    for x in v.iter_mut() {
        *x = x.mod_floor(m);
    }
}

pub fn vec_mod_p(v: &[BigInt], p: u64) -> Vec<u64> {
    v.iter().map(|x| bm_arith::int::mod_u64(x, p)).collect()
}

pub fn vec_from_u64(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Solves `A x = b` modulo `m = p^N` for `A` invertible modulo `p`.
pub fn solve_unit(a: &[Vec<BigInt>], b: &[BigInt], p: u64, m: &BigInt) -> Option<Vec<BigInt>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pb = BigInt::from(p);
    for c in 0..n {
        let k = (c..n).find(|&k| !(&aug[k][c] % &pb).is_zero())?;
        aug.swap(c, k);
        let inv = inv_mod_big(&aug[c][c], m)?;
        for x in aug[c].iter_mut() {
            *x = (&*x * &inv).mod_floor(m);
        }
        let prow = aug[c].clone();
        for (k, row) in aug.iter_mut().enumerate() {
            if k != c && !row[c].is_zero() {
                let t = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = (&*x - &t * y).mod_floor(m);
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `v_p(det A)` computed modulo `p^N`; `None` when the determinant vanishes at
/// this precision.
pub fn det_valuation(a: &[Vec<BigInt>], p: u64, prec: u32) -> Option<u32> {
    let n = a.len();
    let m = bm_arith::int::big_pow(p, prec);
    let mut a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&m)).collect())
        .collect();
    let mut total = 0u32;
    for c in 0..n {
        // pivot of minimal valuation in the remaining submatrix
        let mut best: Option<(u32, usize, usize)> = None;
        for i in c..n {
            for j in c..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let v = valuation(&a[i][j], p);
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, i, j) = best?;
        a.swap(c, i);
        for row in a.iter_mut() {
            row.swap(c, j);
        }
        total += v;
        if total >= prec {
            return None;
        }
        let pv = bm_arith::int::big_pow(p, v);
        let unit = &a[c][c] / &pv;
        let inv = inv_mod_big(&unit, &m).unwrap();
        for k in c + 1..n {
            if a[k][c].is_zero() {
                continue;
            }
            // a[k][c] is divisible by p^v
            let t = ((&a[k][c] / &pv) * &inv).mod_floor(&m);
            let prow = a[c].clone();
            for (x, y) in a[k].iter_mut().zip(&prow) {
                *x = (&*x - &t * y).mod_floor(&m);
            }
        }
    }
    Some(total)
}

pub fn is_zero_mod(v: &[BigInt], m: &BigInt) -> bool {
    v.iter().all(|x| (x % m).is_zero())
}

pub fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}
