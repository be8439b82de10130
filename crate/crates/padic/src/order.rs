//! Free ℤ_p-algebras given by structure constants modulo p^N: the Round 2
//! enlargement to a p-maximal order and splitting into local components.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bm_arith::int::{big_pow, inv_mod, mul_mod, pow_mod, sub_mod};
use bm_arith::modp;

use crate::error::{exhausted, internal, Result};
use crate::linalg::{fp_kernel, fp_reduce, fp_row_basis, is_zero_mod, vec_from_u64, vec_mod_p, FpMat};

/// A commutative ℤ_p-algebra, free of rank `n` on a basis `w_0..w_{n-1}`,
/// with `w_i w_j = Σ_k table[i][j][k] w_k` known modulo `p^prec`.
#[derive(Clone, Debug)]
pub struct Order {
    pub p: u64,
    pub n: usize,
    pub prec: u32,
    pub modulus: BigInt,
    pub table: Vec<Vec<Vec<BigInt>>>,
    pub one: Vec<BigInt>,
    /// Coordinates of the distinguished generator.
    pub gen: Vec<BigInt>,
}

/// Multiplication on `O / pO`.
pub struct ModP {
    pub p: u64,
    pub n: usize,
    t: Vec<Vec<Vec<u64>>>,
}

impl ModP {
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut acc = vec![0u128; self.n];
        let mut out = vec![0u64; self.n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = mul_mod(ai, bj, p);
                for (k, &t) in self.t[i][j].iter().enumerate() {
                    if t != 0 {
                        acc[k] = (acc[k] + (c as u128) * (t as u128)) % (p as u128);
                    }
                }
            }
        }
        for k in 0..self.n {
            out[k] = acc[k] as u64;
        }
        out
    }

    pub fn pow(&self, a: &[u64], mut e: u64, one: &[u64]) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut r = one.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }
}

impl Order {
    /// The order `ℤ_p[y]/(F)` for a monic `F` (constant term first, length n+1).
    pub fn power_basis(poly: &[BigInt], p: u64, prec: u32) -> Self {
        let n = poly.len() - 1;
        let modulus = big_pow(p, prec);
        // powers y^0 .. y^{2n-2} in the power basis
        let mut pows: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
        let mut cur = vec![BigInt::zero(); n];
        cur[0] = BigInt::one();
        for _ in 0..(2 * n).max(2) - 1 {
            pows.push(cur.clone());
            // multiply by y
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for k in (1..n).rev() {
                next[k] = cur[k - 1].clone();
            }
            for k in 0..n {
                next[k] = (&next[k] - &top * &poly[k]).mod_floor(&modulus);
            }
            cur = next;
        }
        let table = (0..n)
            .map(|i| (0..n).map(|j| pows[i + j].clone()).collect())
            .collect();
        let gen = if n == 1 {
            vec![(-&poly[0]).mod_floor(&modulus)]
        } else {
            pows[1].clone()
        };
        Self {
            p,
            n,
            prec,
            modulus,
            table,
            one: pows[0].clone(),
            gen,
        }
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        for x in out.iter_mut() {
            *x = x.mod_floor(&self.modulus);
        }
        out
    }

    pub fn pow(&self, a: &[BigInt], mut e: u64) -> Vec<BigInt> {
        let mut base = a.to_vec();
        let mut r = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    /// Matrix `M` with `M[r][c]` = coordinate `r` of `x · w_c`.
    pub fn mul_matrix(&self, x: &[BigInt]) -> Vec<Vec<BigInt>> {
        let cols: Vec<Vec<BigInt>> = (0..self.n)
            .map(|c| self.mul(x, &crate::linalg::unit_vec(self.n, c)))
            .collect();
        (0..self.n)
            .map(|r| (0..self.n).map(|c| cols[c][r].clone()).collect())
            .collect()
    }

    pub fn mod_p(&self) -> ModP {
        ModP {
            p: self.p,
            n: self.n,
            t: self
                .table
                .iter()
                .map(|r| r.iter().map(|v| vec_mod_p(v, self.p)).collect())
                .collect(),
        }
    }

    pub fn one_mod_p(&self) -> Vec<u64> {
        vec_mod_p(&self.one, self.p)
    }

    /// The nilradical of `O / pO` as a reduced echelon basis with pivots.
    pub fn radical(&self) -> (FpMat, Vec<usize>) {
        let mp = self.mod_p();
        let one = self.one_mod_p();
        let p = self.p;
        // smallest q = p^j with q >= n
        let mut j = 1u32;
        while (p as u128).pow(j) < self.n as u128 {
            j += 1;
        }
        let imgs: Vec<Vec<u64>> = (0..self.n)
            .map(|k| {
                let mut x = vec![0u64; self.n];
                x[k] = 1;
                for _ in 0..j {
                    x = mp.pow(&x, p, &one);
                }
                x
            })
            .collect();
        // kernel of x -> Σ x_k imgs_k
        let at: Vec<Vec<u64>> = (0..self.n)
            .map(|r| (0..self.n).map(|k| imgs[k][r]).collect())
            .collect();
        let ker = fp_kernel(&at, self.n, p);
        fp_row_basis(&ker, p)
    }

    /// One Round 2 enlargement. `None` means the order is already p-maximal.
    fn round2_step(&self) -> Result<Option<Order>> {
        let p = self.p;
        let n = self.n;
        let pb = BigInt::from(p);
        let (rad, rpiv) = self.radical();
        if rad.is_empty() {
            return Ok(None);
        }
        if self.prec < 4 {
            return Err(exhausted("Round 2 ran out of precision"));
        }
        let nonpiv: Vec<usize> = (0..n).filter(|c| !rpiv.contains(c)).collect();
        let mut beta: Vec<Vec<BigInt>> = rad.iter().map(|r| vec_from_u64(r)).collect();
        for &j in &nonpiv {
            let mut v = vec![BigInt::zero(); n];
            v[j] = pb.clone();
            beta.push(v);
        }
        let rad_big: Vec<Vec<BigInt>> = rad.iter().map(|r| vec_from_u64(r)).collect();
        // coordinates of z ∈ I modulo pI
        let icoords = |z: &[BigInt]| -> Result<Vec<u64>> {
            let mut r = z.to_vec();
            let mut out = Vec::with_capacity(n);
            for (row, &c) in rad_big.iter().zip(&rpiv) {
                let g = r[c].clone();
                out.push(bm_arith::int::mod_u64(&g, p));
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= &g * y;
                }
            }
            for &j in &nonpiv {
                let v = r[j].mod_floor(&self.modulus);
                let (q, rem) = v.div_rem(&pb);
                if !rem.is_zero() {
                    return Err(internal("element outside the radical"));
                }
                out.push(bm_arith::int::mod_u64(&q, p));
            }
            Ok(out)
        };
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n * n);
        let mut blocks: Vec<Vec<Vec<u64>>> = Vec::new();
        for b in &beta {
            let mut cols = Vec::with_capacity(n);
            for k in 0..n {
                let mut wk = vec![BigInt::zero(); n];
                wk[k] = BigInt::one();
                cols.push(icoords(&self.mul(&wk, b))?);
            }
            blocks.push(cols);
        }
        for cols in &blocks {
            for r in 0..n {
                rows.push((0..n).map(|k| cols[k][r]).collect());
            }
        }
        let ker = fp_kernel(&rows, n, p);
        if ker.is_empty() {
            return Ok(None);
        }
        let (kb, kpiv) = fp_row_basis(&ker, p);
        let kbig: Vec<Vec<BigInt>> = kb.iter().map(|r| vec_from_u64(r)).collect();
        let mut num: Vec<(Vec<BigInt>, u32)> = (0..n)
            .map(|a| (crate::linalg::unit_vec(n, a), 0))
            .collect();
        for (row, &c) in kbig.iter().zip(&kpiv) {
            num[c] = (row.clone(), 1);
        }
        let new_prec = self.prec - 2;
        let new_mod = big_pow(p, new_prec);
        let convert = |z: &[BigInt], s: u32| -> Result<Vec<BigInt>> {
            let ps = big_pow(p, s);
            let mut out = vec![BigInt::zero(); n];
            for &c in &kpiv {
                out[c] = if s == 0 {
                    &z[c] * &pb
                } else {
                    let d = big_pow(p, s - 1);
                    let (q, r) = z[c].div_rem(&d);
                    if !r.is_zero() {
                        return Err(internal("inexact Round 2 division"));
                    }
                    q
                };
            }
            for j in 0..n {
                if kpiv.contains(&j) {
                    continue;
                }
                let mut v = z[j].clone();
                for (row, &c) in kbig.iter().zip(&kpiv) {
                    v -= &z[c] * &row[j];
                }
                let v = v.mod_floor(&self.modulus);
                let (q, r) = v.div_rem(&ps);
                if !r.is_zero() {
                    return Err(internal("inexact Round 2 division"));
                }
                out[j] = q;
            }
            for x in out.iter_mut() {
                *x = x.mod_floor(&new_mod);
            }
            Ok(out)
        };
        let mut table = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in a..n {
                let z = self.mul(&num[a].0, &num[b].0);
                let t = convert(&z, num[a].1 + num[b].1)?;
                table[a][b] = t.clone();
                table[b][a] = t;
            }
        }
        let one = convert(&self.one, 0)?;
        let gen = convert(&self.gen, 0)?;
        Ok(Some(Order {
            p,
            n,
            prec: new_prec,
            modulus: new_mod.clone(),
            table,
            one,
            gen,
        }))
    }

    /// Enlarges to the p-maximal order.
    pub fn maximalize(mut self) -> Result<Order> {
        while let Some(next) = self.round2_step()? {
            self = next;
        }
        Ok(self)
    }

    /// Primitive idempotents of a p-maximal order, lifted modulo `p^prec`.
    pub fn idempotents(&self) -> Result<Vec<Vec<BigInt>>> {
        let p = self.p;
        let n = self.n;
        let mp = self.mod_p();
        let (rad, rpiv) = self.radical();
        let nonpiv: Vec<usize> = (0..n).filter(|c| !rpiv.contains(c)).collect();
        let d = nonpiv.len();
        let to_q = |x: &[u64]| -> Vec<u64> {
            let r = fp_reduce(x, &rad, &rpiv, p);
            nonpiv.iter().map(|&j| r[j]).collect()
        };
        let lift = |q: &[u64]| -> Vec<u64> {
            let mut v = vec![0u64; n];
            for (&j, &x) in nonpiv.iter().zip(q) {
                v[j] = x;
            }
            v
        };
        let qmul = |a: &[u64], b: &[u64]| to_q(&mp.mul(&lift(a), &lift(b)));
        let qone = to_q(&self.one_mod_p());
        let qpow = |a: &[u64], mut e: u64| {
            let mut base = a.to_vec();
            let mut r = qone.clone();
            while e > 0 {
                if e & 1 == 1 {
                    r = qmul(&r, &base);
                }
                e >>= 1;
                if e > 0 {
                    base = qmul(&base, &base);
                }
            }
            r
        };
        // Frobenius-fixed subalgebra of Q = O / rad
        let frob_minus_id: Vec<Vec<u64>> = (0..d)
            .map(|k| {
                let mut ek = vec![0u64; d];
                ek[k] = 1;
                let mut f = qpow(&ek, p);
                f[k] = sub_mod(f[k], 1, p);
                f
            })
            .collect();
        let at: Vec<Vec<u64>> = (0..d)
            .map(|r| (0..d).map(|k| frob_minus_id[k][r]).collect())
            .collect();
        let fixed = fp_kernel(&at, d, p);
        let mut rng = ChaCha8Rng::seed_from_u64(0x1de0 ^ p);
        let mut out_q: Vec<Vec<u64>> = Vec::new();
        let mut stack = vec![qone.clone()];
        while let Some(e) = stack.pop() {
            let sub: Vec<Vec<u64>> = fixed.iter().map(|b| qmul(&e, b)).collect();
            let (sb, _) = fp_row_basis(&sub, p);
            if sb.len() <= 1 {
                out_q.push(e);
                continue;
            }
            let mut split = None;
            for _ in 0..200 {
                let mut x = vec![0u64; d];
                for b in &sb {
                    let c = rng.gen_range(0..p);
                    for (xi, &bi) in x.iter_mut().zip(b) {
                        *xi = (*xi + mul_mod(c, bi, p)) % p;
                    }
                }
                // minimal polynomial of x in eQ
                let mut pows = vec![e.clone()];
                let mpoly = loop {
                    let next = qmul(pows.last().unwrap(), &x);
                    pows.push(next);
                    let k = pows.len();
                    let cols: Vec<Vec<u64>> =
                        (0..d).map(|r| (0..k).map(|i| pows[i][r]).collect()).collect();
                    let ker = fp_kernel(&cols, k, p);
                    if let Some(v) = ker.into_iter().find(|v| v[k - 1] != 0) {
                        let inv = inv_mod(v[k - 1], p).unwrap();
                        break v.iter().map(|&c| mul_mod(c, inv, p)).collect::<Vec<u64>>();
                    }
                };
                let roots = modp::roots(&mpoly, p);
                if roots.len() >= 2 {
                    split = Some((x, roots));
                    break;
                }
            }
            let Some((x, roots)) = split else {
                return Err(internal("failed to split semisimple algebra"));
            };
            for (i, &lam) in roots.iter().enumerate() {
                let mut eps = e.clone();
                for (j, &mu) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let inv = inv_mod(sub_mod(lam, mu, p), p).unwrap();
                    let factor: Vec<u64> = x
                        .iter()
                        .zip(&e)
                        .map(|(&xi, &ei)| mul_mod(sub_mod(xi, mul_mod(mu, ei, p), p), inv, p))
                        .collect();
                    eps = qmul(&eps, &factor);
                }
                stack.push(eps);
            }
        }
        // lift each idempotent to O mod p^prec
        let mut out = Vec::new();
        for q in out_q {
            let mut e = vec_from_u64(&lift(&q));
            let mut ok = false;
            for _ in 0..200 {
                let e2 = self.mul(&e, &e);
                let diff: Vec<BigInt> = e2.iter().zip(&e).map(|(a, b)| a - b).collect();
                if is_zero_mod(&diff, &self.modulus) {
                    ok = true;
                    break;
                }
                let e3 = self.mul(&e2, &e);
                e = e2
                    .iter()
                    .zip(&e3)
                    .map(|(a, b)| (BigInt::from(3) * a - BigInt::from(2) * b).mod_floor(&self.modulus))
                    .collect();
            }
            if !ok {
                return Err(internal("idempotent lifting did not converge"));
            }
            out.push(e);
        }
        out.sort();
        Ok(out)
    }

    /// The component `e O` with identity `e`, on a ℤ_p-basis taken from the
    /// unit-pivot echelon form of `e w_0, …, e w_{n-1}`.
    pub fn component(&self, e: &[BigInt]) -> Result<Order> {
        let n = self.n;
        let p = self.p;
        let pb = BigInt::from(p);
        let m = &self.modulus;
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|k| self.mul(e, &crate::linalg::unit_vec(n, k)))
            .collect();
        let mut pivots = Vec::new();
        let mut done = vec![false; n];
        for c in 0..n {
            let Some(r) = (0..n).find(|&r| !done[r] && !(&rows[r][c] % &pb).is_zero()) else {
                continue;
            };
            let inv = bm_arith::int::inv_mod_big(&rows[r][c], m).unwrap();
            for x in rows[r].iter_mut() {
                *x = (&*x * &inv).mod_floor(m);
            }
            let prow = rows[r].clone();
            for (k, row) in rows.iter_mut().enumerate() {
                if k != r && !row[c].is_zero() {
                    let t = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x = (&*x - &t * y).mod_floor(m);
                    }
                }
            }
            done[r] = true;
            pivots.push((c, r));
        }
        for r in 0..n {
            if !done[r] && !is_zero_mod(&rows[r], m) {
                return Err(exhausted("component lattice not saturated at this precision"));
            }
        }
        let basis: Vec<Vec<BigInt>> = pivots.iter().map(|&(_, r)| rows[r].clone()).collect();
        let cols: Vec<usize> = pivots.iter().map(|&(c, _)| c).collect();
        let coords = |x: &[BigInt]| -> Vec<BigInt> { cols.iter().map(|&c| x[c].clone()).collect() };
        let k = basis.len();
        let mut table = vec![vec![Vec::new(); k]; k];
        for a in 0..k {
            for b in a..k {
                let t = coords(&self.mul(&basis[a], &basis[b]));
                table[a][b] = t.clone();
                table[b][a] = t;
            }
        }
        Ok(Order {
            p,
            n: k,
            prec: self.prec,
            modulus: self.modulus.clone(),
            table,
            one: coords(e),
            gen: coords(&self.mul(e, &self.gen)),
        })
    }

    /// Characteristic polynomial of multiplication by `x` (Berkowitz), monic,
    /// constant term first, modulo `p^prec`.
    pub fn charpoly(&self, x: &[BigInt]) -> Vec<BigInt> {
        let a = self.mul_matrix(x);
        let m = &self.modulus;
        let n = self.n;
        let mut v: Vec<BigInt> = vec![BigInt::one()];
        for r in 0..n {
            // column: [1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C]
            let mut col = vec![BigInt::one(), (-&a[r][r]).mod_floor(m)];
            let mut mc: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
            for _ in 0..r {
                let rc: BigInt = (0..r).map(|j| &a[r][j] * &mc[j]).sum();
                col.push((-rc).mod_floor(m));
                mc = (0..r)
                    .map(|i| (0..r).map(|j| &a[i][j] * &mc[j]).sum::<BigInt>().mod_floor(m))
                    .collect();
            }
            let mut nv = vec![BigInt::zero(); r + 2];
            for (i, slot) in nv.iter_mut().enumerate() {
                let mut s = BigInt::zero();
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < col.len() {
                        s += &col[i - j] * vj;
                    }
                }
                *slot = s.mod_floor(m);
            }
            v = nv;
        }
        v.reverse();
        v
    }
}

/// `x^e` by repeated squaring modulo `p` (re-exported helper).
pub fn pow_u64(b: u64, e: u64, p: u64) -> u64 {
    pow_mod(b, e, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn charpoly_of_power_basis() {
        let f = poly(&[5, -3, 0, 2, 1]);
        let o = Order::power_basis(&f, 7, 10);
        let cp = o.charpoly(&o.gen);
        let m = &o.modulus;
        let want: Vec<BigInt> = f.iter().map(|x| x.mod_floor(m)).collect();
        assert_eq!(cp, want);
    }

    #[test]
    fn round2_on_non_maximal_orders() {
        // y^2 - 4·3 = 0 at p = 2: ℤ_2[2√3] has index 2 in ℤ_2[√3]
        let o = Order::power_basis(&poly(&[-12, 0, 1]), 2, 30).maximalize().unwrap();
        let (rad, _) = o.radical();
        assert_eq!(rad.len(), 1);
        // y^2 + 7 at p = 2 splits: (1+√-7)/2 is integral
        let o = Order::power_basis(&poly(&[7, 0, 1]), 2, 30).maximalize().unwrap();
        assert!(o.radical().0.is_empty());
        assert_eq!(o.idempotents().unwrap().len(), 2);
        // y^3 - 8·5 at p = 2: index grows, maximal order is ℤ_2[∛5] (unramified? no, 5 ≡ 1 mod 4)
        let o = Order::power_basis(&poly(&[-40, 0, 0, 1]), 2, 40).maximalize().unwrap();
        let idem = o.idempotents().unwrap();
        let degs: Vec<usize> = idem.iter().map(|e| o.component(e).unwrap().n).collect();
        assert_eq!(degs.iter().sum::<usize>(), 3);
    }
}
