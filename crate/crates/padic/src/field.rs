//! Finite extensions K/ℚ_p presented by their valuation ring, with elements
//! at tracked precision, valuations, residues and square-class logarithms.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bm_arith::f2::F2Vec;
use bm_arith::int::{big_pow, inv_mod_big, mod_u64, rat_valuation, split_valuation};

use crate::error::{exhausted, internal, Result};
use crate::linalg::{
    det_valuation, fp_inverse, fp_kernel, fp_mat_vec, fp_reduce, is_zero_mod, solve_unit, unit_vec,
    vec_from_u64, vec_mod_p, FpMat,
};
use crate::order::Order;
use crate::residue::{Fq, ResidueField};

/// Above this square-class dimension a 2-adic pairing row is computed directly
/// instead of through the full Gram matrix.
const DIRECT_PAIRING_DIM: usize = 16;

/// An element `p^shift · z` where `z` has integral coordinates known modulo `p^prec`.
#[derive(Clone, Debug)]
pub struct KElt {
    pub shift: i64,
    pub z: Vec<BigInt>,
    pub prec: u32,
}

/// A finite extension of ℚ_p given by its ring of integers.
#[derive(Clone, Debug)]
pub struct LocalField {
    pub p: u64,
    pub n: usize,
    pub e: usize,
    pub f: usize,
    pub order: Order,
    pub residue: ResidueField,
    rad: FpMat,
    rad_piv: Vec<usize>,
    nonpiv: Vec<usize>,
    /// maps quotient coordinates of O/m to coordinates in the residue basis
    to_res: FpMat,
    /// lifts of t^k
    res_lift: Vec<Vec<BigInt>>,
    pub pi: Vec<BigInt>,
    /// p / π
    pub pi_co: Vec<BigInt>,
    /// p / π^e (a unit) and its inverse
    eps: Vec<BigInt>,
    eps_inv: Vec<BigInt>,
    /// characteristic polynomial of the generator (constant first, monic)
    pub defining_poly: Vec<BigInt>,
    /// Gram matrix of the Hilbert pairing on the full square-class basis, built on first use
    gram: OnceLock<std::result::Result<Vec<F2Vec>, crate::error::PadicError>>,
    /// representatives of the full square-class basis
    basis: Vec<KElt>,
}

impl LocalField {
    /// ℚ_p itself.
    pub fn qp(p: u64, prec: u32) -> Result<Self> {
        let o = Order::power_basis(&[BigInt::zero(), BigInt::one()], p, prec);
        Self::from_order(o)
    }

    /// Builds the field data from a p-maximal local order.
    pub fn from_order(order: Order) -> Result<Self> {
        let p = order.p;
        let n = order.n;
        let (rad, rad_piv) = order.radical();
        let nonpiv: Vec<usize> = (0..n).filter(|c| !rad_piv.contains(c)).collect();
        let f = nonpiv.len();
        if f == 0 || n % f != 0 {
            return Err(internal("order is not local"));
        }
        let e = n / f;
        let mp = order.mod_p();
        let to_q = |x: &[u64]| -> Vec<u64> {
            let r = fp_reduce(x, &rad, &rad_piv, p);
            nonpiv.iter().map(|&j| r[j]).collect()
        };
        let one_p = order.one_mod_p();
        // residue field generator
        let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d ^ p ^ ((n as u64) << 32));
        let (gen, h, gmat) = if f == 1 {
            (one_p.clone(), vec![0u64, 1], vec![to_q(&one_p)])
        } else {
            let mut found = None;
            for attempt in 0..500 {
                let a: Vec<u64> = if attempt < n {
                    unit_vec(n, attempt).iter().map(|x| mod_u64(x, p)).collect()
                } else {
                    (0..n).map(|_| rng.gen_range(0..p)).collect()
                };
                let mut pows = vec![one_p.clone()];
                for _ in 0..f {
                    let nx = mp.mul(pows.last().unwrap(), &a);
                    pows.push(nx);
                }
                let qp: Vec<Vec<u64>> = pows.iter().map(|x| to_q(x)).collect();
                // columns 1, a, ..., a^f; generator iff the first f are independent
                let cols: Vec<Vec<u64>> = (0..f).map(|r| (0..=f).map(|i| qp[i][r]).collect()).collect();
                let ker = fp_kernel(&cols, f + 1, p);
                if ker.len() == 1 && ker[0][f] != 0 {
                    let inv = bm_arith::int::inv_mod(ker[0][f], p).unwrap();
                    let h: Vec<u64> = ker[0].iter().map(|&c| bm_arith::int::mul_mod(c, inv, p)).collect();
                    found = Some((a, h, qp[..f].to_vec()));
                    break;
                }
            }
            found.ok_or_else(|| internal("no residue field generator found"))?
        };
        // gmat[k] = quotient coordinates of gen^k; to_res = inverse of matrix with these columns
        let gcols: FpMat = (0..f).map(|r| (0..f).map(|k| gmat[k][r]).collect()).collect();
        let to_res = fp_inverse(&gcols, p).ok_or_else(|| internal("singular residue basis"))?;
        let residue = ResidueField::new(p, h);
        let gen_big = vec_from_u64(&gen);
        let mut res_lift = vec![order.one.clone()];
        for _ in 1..f {
            let nx = order.mul(res_lift.last().unwrap(), &gen_big);
            res_lift.push(nx);
        }
        // uniformizer
        let pb = BigInt::from(p);
        let pi = if e == 1 {
            order.one.iter().map(|x| (x * &pb).mod_floor(&order.modulus)).collect()
        } else {
            let mut cand = None;
            for r in &rad {
                let x = vec_from_u64(r);
                if det_valuation(&order.mul_matrix(&x), p, order.prec) == Some(f as u32) {
                    cand = Some(x);
                    break;
                }
            }
            if cand.is_none() {
                'outer: for a in 0..rad.len() {
                    for b in a + 1..rad.len() {
                        let x: Vec<BigInt> = rad[a].iter().zip(&rad[b]).map(|(&u, &v)| BigInt::from(u + v)).collect();
                        if det_valuation(&order.mul_matrix(&x), p, order.prec) == Some(f as u32) {
                            cand = Some(x);
                            break 'outer;
                        }
                    }
                }
            }
            cand.ok_or_else(|| internal("no uniformizer found"))?
        };
        // w = π^e / p, eps = w^{-1}
        let pie = order.pow(&pi, e as u64);
        let mut w = Vec::with_capacity(n);
        for x in &pie {
            let (q, r) = x.div_rem(&pb);
            if !r.is_zero() {
                return Err(internal("π^e not divisible by p"));
            }
            w.push(q);
        }
        let prec = order.prec - 1;
        let modulus = big_pow(p, prec);
        let mut order = order;
        // drop one digit of precision everywhere for consistency
        order.prec = prec;
        order.modulus = modulus.clone();
        for row in order.table.iter_mut() {
            for v in row.iter_mut() {
                crate::linalg::mod_vec(v, &modulus);
            }
        }
        crate::linalg::mod_vec(&mut order.one, &modulus);
        crate::linalg::mod_vec(&mut order.gen, &modulus);
        crate::linalg::mod_vec(&mut w, &modulus);
        let eps = solve_unit(&order.mul_matrix(&w), &order.one, p, &modulus)
            .ok_or_else(|| internal("π^e/p is not a unit"))?;
        let pi_co = if e == 1 {
            order.one.clone()
        } else {
            let t = order.pow(&pi, (e - 1) as u64);
            order.mul(&t, &eps)
        };
        let mut pi = pi;
        crate::linalg::mod_vec(&mut pi, &modulus);
        let defining_poly = order.charpoly(&order.gen);
        let mut k = LocalField {
            p,
            n,
            e,
            f,
            order,
            residue,
            rad,
            rad_piv,
            nonpiv,
            to_res,
            res_lift,
            pi,
            pi_co,
            eps,
            eps_inv: w,
            defining_poly,
            gram: OnceLock::new(),
            basis: Vec::new(),
        };
        k.basis = k.build_basis();
        Ok(k)
    }

    pub fn prec(&self) -> u32 {
        self.order.prec
    }

    pub fn modulus(&self) -> &BigInt {
        &self.order.modulus
    }

    // ----- elements -----

    pub fn one(&self) -> KElt {
        KElt { shift: 0, z: self.order.one.clone(), prec: self.prec() }
    }

    pub fn generator(&self) -> KElt {
        KElt { shift: 0, z: self.order.gen.clone(), prec: self.prec() }
    }

    pub fn uniformizer(&self) -> KElt {
        KElt { shift: 0, z: self.pi.clone(), prec: self.prec() }
    }

    pub fn from_int(&self, a: &BigInt) -> KElt {
        self.from_rational(&BigRational::from_integer(a.clone()))
    }

    /// A nonzero rational number (zero maps to an element with no precision).
    pub fn from_rational(&self, q: &BigRational) -> KElt {
        if q.is_zero() {
            return KElt { shift: 0, z: vec![BigInt::zero(); self.n], prec: 0 };
        }
        let p = self.p;
        let v = rat_valuation(q, p);
        let (_, nu) = split_valuation(q.numer(), p);
        let (_, de) = split_valuation(q.denom(), p);
        let m = self.modulus();
        let u = (nu * inv_mod_big(&de, m).unwrap()).mod_floor(m);
        let z = self.order.one.iter().map(|x| (x * &u).mod_floor(m)).collect();
        KElt { shift: v, z, prec: self.prec() }
    }

    /// Element with the given coordinates in the integral basis.
    pub fn from_coords(&self, z: Vec<BigInt>) -> KElt {
        let m = self.modulus();
        KElt { shift: 0, z: z.into_iter().map(|x| x.mod_floor(m)).collect(), prec: self.prec() }
    }

    pub fn mul(&self, a: &KElt, b: &KElt) -> KElt {
        let prec = a.prec.min(b.prec);
        let m = big_pow(self.p, prec);
        let mut z = self.order.mul(&a.z, &b.z);
        crate::linalg::mod_vec(&mut z, &m);
        KElt { shift: a.shift + b.shift, z, prec }
    }

    pub fn add(&self, a: &KElt, b: &KElt) -> KElt {
        if a.prec == 0 {
            return b.clone();
        }
        if b.prec == 0 {
            return a.clone();
        }
        let s = a.shift.min(b.shift);
        let da = (a.shift - s) as u32;
        let db = (b.shift - s) as u32;
        let prec = (a.prec + da).min(b.prec + db);
        let m = big_pow(self.p, prec);
        let pa = big_pow(self.p, da);
        let pb = big_pow(self.p, db);
        let z = a
            .z
            .iter()
            .zip(&b.z)
            .map(|(x, y)| (x * &pa + y * &pb).mod_floor(&m))
            .collect();
        KElt { shift: s, z, prec }
    }

    pub fn neg(&self, a: &KElt) -> KElt {
        let m = big_pow(self.p, a.prec);
        KElt { shift: a.shift, z: a.z.iter().map(|x| (-x).mod_floor(&m)).collect(), prec: a.prec }
    }

    pub fn sub(&self, a: &KElt, b: &KElt) -> KElt {
        self.add(a, &self.neg(b))
    }

    pub fn scale_rational(&self, a: &KElt, q: &BigRational) -> KElt {
        self.mul(a, &self.from_rational(q))
    }

    /// Residue class in F_q of an integral element.
    pub fn reduce(&self, z: &[BigInt]) -> Fq {
        let p = self.p;
        let r = fp_reduce(&vec_mod_p(z, p), &self.rad, &self.rad_piv, p);
        let q: Vec<u64> = self.nonpiv.iter().map(|&j| r[j]).collect();
        fp_mat_vec(&self.to_res, &q, p)
    }

    /// Lift of a residue class to an integral element.
    pub fn lift_residue(&self, a: &[u64]) -> Vec<BigInt> {
        let mut z = vec![BigInt::zero(); self.n];
        for (k, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (zi, li) in z.iter_mut().zip(&self.res_lift[k]) {
                *zi += li * c;
            }
        }
        crate::linalg::mod_vec(&mut z, self.modulus());
        z
    }

    /// Divides integral coordinates by `π` (the element must lie in `m`).
    fn div_pi(&self, z: &[BigInt], prec: u32) -> Result<(Vec<BigInt>, u32)> {
        if prec <= 1 {
            return Err(exhausted("division by the uniformizer"));
        }
        let pb = BigInt::from(self.p);
        let t = self.order.mul(z, &self.pi_co);
        let m = big_pow(self.p, prec - 1);
        let mut out = Vec::with_capacity(self.n);
        let mfull = big_pow(self.p, prec);
        for x in t {
            let x = x.mod_floor(&mfull);
            let (q, r) = x.div_rem(&pb);
            if !r.is_zero() {
                return Err(internal("element not divisible by π"));
            }
            out.push(q.mod_floor(&m));
        }
        Ok((out, prec - 1))
    }

    /// Splits integral `z` as `π^v · u` with `u` a unit.
    fn split_integral(&self, z: &[BigInt], prec: u32) -> Result<(u32, Vec<BigInt>, u32)> {
        let mut z = z.to_vec();
        let mut prec = prec;
        let mut v = 0;
        loop {
            if prec == 0 || is_zero_mod(&z, &big_pow(self.p, prec)) {
                return Err(exhausted("element is zero at working precision"));
            }
            if !self.residue.is_zero(&self.reduce(&z)) {
                return Ok((v, z, prec));
            }
            let (nz, np) = self.div_pi(&z, prec)?;
            z = nz;
            prec = np;
            v += 1;
        }
    }

    fn pow_elt(&self, z: &[BigInt], k: u64) -> Vec<BigInt> {
        self.order.pow(z, k)
    }

    /// Valuation (normalized so `v(π) = 1`) and unit part `x = π^v u`.
    pub fn valuation_unit(&self, x: &KElt) -> Result<(i64, KElt)> {
        let (vz, u, prec) = self.split_integral(&x.z, x.prec)?;
        let v = x.shift * self.e as i64 + vz as i64;
        // p^shift = π^{e·shift} · eps^shift
        let mut u = KElt { shift: 0, z: u, prec };
        if x.shift != 0 {
            let base = if x.shift > 0 { &self.eps } else { &self.eps_inv };
            let t = self.pow_elt(base, x.shift.unsigned_abs());
            u = self.mul(&u, &KElt { shift: 0, z: t, prec: self.prec() });
        }
        Ok((v, u))
    }

    pub fn valuation(&self, x: &KElt) -> Result<i64> {
        Ok(self.valuation_unit(x)?.0)
    }

    /// Inverse of a unit.
    pub fn inv_unit(&self, u: &KElt) -> Result<KElt> {
        let m = big_pow(self.p, u.prec);
        let a: Vec<Vec<BigInt>> = self.order.mul_matrix(&u.z);
        let z = solve_unit(&a, &self.order.one, self.p, &m).ok_or_else(|| internal("not a unit"))?;
        Ok(KElt { shift: 0, z, prec: u.prec })
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, x: &KElt) -> Result<KElt> {
        let (v, u) = self.valuation_unit(x)?;
        let ui = self.inv_unit(&u)?;
        // π^{-v} = (π'/p)^v
        let mut r = ui;
        let t = KElt { shift: -v, z: self.pow_elt(&self.pi_co, v.unsigned_abs()), prec: self.prec() };
        if v >= 0 {
            r = self.mul(&r, &t);
        } else {
            let t = KElt { shift: 0, z: self.pow_elt(&self.pi, v.unsigned_abs()), prec: self.prec() };
            r = self.mul(&r, &t);
        }
        Ok(r)
    }

    // ----- square classes -----

    /// Dimension of K^×/K^{×2}.
    pub fn square_class_dim(&self) -> usize {
        if self.p == 2 {
            self.n + 2
        } else {
            2
        }
    }

    /// Representatives of the full square-class basis.
    pub fn square_class_basis(&self) -> &[KElt] {
        &self.basis
    }

    fn build_basis(&self) -> Vec<KElt> {
        let mut out = vec![self.uniformizer()];
        if self.p != 2 {
            let ns = self.residue.nonsquare();
            out.push(self.from_coords(self.lift_residue(&ns)));
            return out;
        }
        let one = self.one();
        for i in (1..2 * self.e).step_by(2) {
            let pii = KElt { shift: 0, z: self.pow_elt(&self.pi, i as u64), prec: self.prec() };
            for j in 0..self.f {
                let lam = self.from_coords(self.lift_residue(&self.residue.basis(j)));
                out.push(self.add(&one, &self.mul(&lam, &pii)));
            }
        }
        let gamma = (0..self.f)
            .map(|j| self.residue.basis(j))
            .find(|b| self.residue.trace(b) == 1)
            .expect("trace form is nonzero");
        let lam = self.from_coords(self.lift_residue(&gamma));
        out.push(self.add(&one, &self.scale_rational(&lam, &BigRational::from_integer(BigInt::from(4)))));
        out
    }

    /// Coordinates of the square class of `x` in the full basis.
    pub fn dlog(&self, x: &KElt) -> Result<F2Vec> {
        let (v, u) = self.valuation_unit(x)?;
        let dim = self.square_class_dim();
        let mut out = F2Vec::zeros(dim);
        if v.rem_euclid(2) == 1 {
            out.set(0, true);
        }
        if self.p != 2 {
            let ubar = self.reduce(&u.z);
            if !self.residue.is_square(&ubar) {
                out.set(1, true);
            }
            return Ok(out);
        }
        self.dlog_unit2(u, &mut out)?;
        Ok(out)
    }

    fn dlog_unit2(&self, u: KElt, out: &mut F2Vec) -> Result<()> {
        let k = &self.residue;
        let e = self.e;
        let mut u = u;
        if u.prec < 2 * e as u32 + 2 {
            return Err(exhausted("unit known to too few digits for a 2-adic square test"));
        }
        // level 0: make u ≡ 1 mod π
        let ub = self.reduce(&u.z);
        let s = k.sqrt_char2(&k.inv(&ub).ok_or_else(|| internal("unit reduces to zero"))?);
        let sl = self.from_coords(self.lift_residue(&s));
        u = self.mul(&u, &self.mul(&sl, &sl));
        let one = self.one();
        let mut bit = 1;
        for i in 1..2 * e {
            let w = self.sub(&u, &one);
            // (u - 1) / π^i
            let mut z = w.z.clone();
            let mut prec = w.prec;
            for _ in 0..i {
                let (nz, np) = self.div_pi(&z, prec)?;
                z = nz;
                prec = np;
            }
            if prec == 0 {
                return Err(exhausted("2-adic unit filtration"));
            }
            let a = self.reduce(&z);
            if i % 2 == 1 {
                for j in 0..self.f {
                    if a[j] != 0 {
                        out.set(bit + j, true);
                        u = self.mul(&u, &self.basis[bit + j]);
                    }
                }
                bit += self.f;
            } else if !k.is_zero(&a) {
                let s = k.sqrt_char2(&a);
                let sl = self.from_coords(self.lift_residue(&s));
                let ph = KElt { shift: 0, z: self.pow_elt(&self.pi, (i / 2) as u64), prec: self.prec() };
                let t = self.add(&one, &self.mul(&sl, &ph));
                u = self.mul(&u, &self.mul(&t, &t));
            }
        }
        // level 2e: u = 1 + 4c
        let w = self.sub(&u, &one);
        if w.prec < 3 {
            return Err(exhausted("2-adic unit filtration"));
        }
        let mut z: Vec<BigInt> = w.z.clone();
        let four = BigInt::from(4);
        for x in z.iter_mut() {
            let (q, r) = x.div_rem(&four);
            if !r.is_zero() {
                return Err(internal("unit not congruent to 1 mod 4"));
            }
            *x = q;
        }
        // w.shift is 0 here since u and one are integral
        if w.shift != 0 {
            return Err(internal("unexpected shift in unit"));
        }
        let c = self.reduce(&z);
        if k.trace(&c) == 1 {
            out.set(bit, true);
        }
        Ok(())
    }

    /// A unit `u·s²` of the form `1 + π^d w` with `d < 2e` odd, if there is one;
    /// `None` when `u` is a square times `1 + 4c`.
    fn odd_level_form(&self, u: KElt) -> Result<Option<KElt>> {
        let k = &self.residue;
        let e = self.e;
        let ub = self.reduce(&u.z);
        let s = k.sqrt_char2(&k.inv(&ub).ok_or_else(|| internal("unit reduces to zero"))?);
        let sl = self.from_coords(self.lift_residue(&s));
        let mut u = self.mul(&u, &self.mul(&sl, &sl));
        let one = self.one();
        for i in 1..2 * e {
            let w = self.sub(&u, &one);
            let mut z = w.z.clone();
            let mut prec = w.prec;
            for _ in 0..i {
                let (nz, np) = self.div_pi(&z, prec)?;
                z = nz;
                prec = np;
            }
            if prec == 0 {
                return Err(exhausted("2-adic unit filtration"));
            }
            let a = self.reduce(&z);
            if k.is_zero(&a) {
                continue;
            }
            if i % 2 == 1 {
                return Ok(Some(u));
            }
            let s = k.sqrt_char2(&a);
            let sl = self.from_coords(self.lift_residue(&s));
            let ph = KElt { shift: 0, z: self.pow_elt(&self.pi, (i / 2) as u64), prec: self.prec() };
            let t = self.add(&one, &self.mul(&sl, &ph));
            u = self.mul(&u, &self.mul(&t, &t));
        }
        Ok(None)
    }

    // ----- Hilbert symbol -----

    fn build_gram(&self) -> Result<Vec<F2Vec>> {
        let dim = self.square_class_dim();
        if self.p != 2 {
            let minus_one_nonsquare = !self.residue.is_square(&self.reduce(&self.neg(&self.one()).z));
            let mut g0 = F2Vec::zeros(2);
            g0.set(0, minus_one_nonsquare);
            g0.set(1, true);
            let mut g1 = F2Vec::zeros(2);
            g1.set(0, true);
            return Ok(vec![g0, g1]);
        }
        let rows: Vec<F2Vec> = (0..dim)
            .map(|a| self.norm_hyperplane(&self.basis[a.min(self.basis.len() - 1)], a as u64))
            .collect::<Result<_>>()?;
        for i in 0..dim {
            for j in 0..dim {
                if rows[i].get(j) != rows[j].get(i) {
                    return Err(internal("Hilbert pairing matrix not symmetric"));
                }
            }
        }
        Ok(rows)
    }

    /// The functional `x ↦ (a, x)` as the unique nonzero vector orthogonal to the
    /// norm group `N(K(√a)^×)`, which is sampled until it spans a hyperplane.
    pub fn norm_hyperplane(&self, a: &KElt, seed: u64) -> Result<F2Vec> {
        let dim = self.square_class_dim();
        if self.dlog(a)?.is_zero() {
            return Ok(F2Vec::zeros(dim));
        }
        let mut span = bm_arith::f2::SpanTracker::new(dim, dim);
        span.insert(&self.dlog(&self.neg(a))?);
        if self.p == 2 {
            // with a·s² = 1 + π^d w, d odd, the norm 1 − a·s² of 1 + s√a has odd valuation
            let (v, u) = self.valuation_unit(a)?;
            if v.rem_euclid(2) == 0 {
                if let Some(ar) = self.odd_level_form(u)? {
                    span.insert(&self.dlog(&self.sub(&self.one(), &ar))?);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xabcd ^ seed ^ (self.n as u64) << 20);
        let pi = self.uniformizer();
        let m = self.modulus().clone();
        let mut tries = 0;
        while span.dim() < dim - 1 {
            tries += 1;
            if tries > 4000 {
                return Err(internal("norm group sampling did not reach a hyperplane"));
            }
            let rand_elt = |rng: &mut ChaCha8Rng| {
                let z: Vec<BigInt> = (0..self.n).map(|_| BigInt::from(rng.gen_range(0u64..64))).collect();
                let mut x = self.from_coords(z);
                let k = rng.gen_range(0..3);
                for _ in 0..k {
                    x = self.mul(&x, &pi);
                }
                x
            };
            let s = rand_elt(&mut rng);
            let t = rand_elt(&mut rng);
            let val = self.sub(&self.mul(&s, &s), &self.mul(a, &self.mul(&t, &t)));
            if is_zero_mod(&val.z, &m) {
                continue;
            }
            match self.dlog(&val) {
                Ok(d) => {
                    span.insert(&d);
                }
                Err(_) => continue,
            }
        }
        if span.dim() == dim {
            return Err(internal("norm group is not a hyperplane"));
        }
        let mat = bm_arith::f2::F2Matrix::from_rows(dim, span.basis());
        let ker = mat.kernel();
        if ker.len() != 1 {
            return Err(internal("norm group kernel has wrong dimension"));
        }
        Ok(ker[0].clone())
    }

    /// The additive Hilbert symbol `(a, b)_K ∈ {0, 1}` (1 meaning 1/2).
    pub fn hilbert(&self, a: &KElt, b: &KElt) -> Result<u8> {
        let da = self.dlog(a)?;
        let db = self.dlog(b)?;
        self.pair_dlogs(&da, &db)
    }

    fn gram_rows(&self) -> Result<&[F2Vec]> {
        match self.gram.get_or_init(|| self.build_gram()) {
            Ok(g) => Ok(g),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn pair_dlogs(&self, da: &F2Vec, db: &F2Vec) -> Result<u8> {
        Ok(self.pairing_vector(da)?.dot(db) as u8)
    }

    /// `G · dlog(a)`: the vector `g` with `(a, x) = g · dlog(x)`.
    pub fn pairing_vector(&self, da: &F2Vec) -> Result<F2Vec> {
        let gram = self.gram_rows()?;
        let mut g = F2Vec::zeros(da.len());
        for i in 0..da.len() {
            if da.get(i) {
                g.add_assign(&gram[i]);
            }
        }
        Ok(g)
    }

    /// The functional `x ↦ (a, x)` in full square-class coordinates. Large
    /// 2-adic fields sample the norm group of `a` alone.
    pub fn pairing_row(&self, a: &KElt) -> Result<F2Vec> {
        let dim = self.square_class_dim();
        if self.p == 2 && dim > DIRECT_PAIRING_DIM && self.gram.get().is_none() {
            return self.norm_hyperplane(a, 0x9a1d);
        }
        self.pairing_vector(&self.dlog(a)?)
    }

    pub fn gram(&self) -> Result<&[F2Vec]> {
        self.gram_rows()
    }

    pub fn residue_order(&self) -> BigUint {
        self.residue.order()
    }

    /// Whether `x` is a square in K.
    pub fn is_square(&self, x: &KElt) -> Result<bool> {
        Ok(self.dlog(x)?.is_zero())
    }

    /// A random element of the valuation ring (for tests).
    pub fn random_integral(&self, rng: &mut ChaCha8Rng, bound: u64) -> KElt {
        let z: Vec<BigInt> = (0..self.n)
            .map(|_| {
                let v = rng.gen_range(0..bound);
                if rng.gen_bool(0.5) {
                    -BigInt::from(v)
                } else {
                    BigInt::from(v)
                }
            })
            .collect();
        self.from_coords(z)
    }

    /// Evaluates a polynomial with rational coefficients (constant first) at `x`.
    pub fn eval_poly(&self, coeffs: &[BigRational], x: &KElt) -> KElt {
        let mut acc: Option<KElt> = None;
        for c in coeffs.iter().rev() {
            acc = Some(match acc {
                None => self.from_rational(c),
                Some(a) => {
                    let t = self.mul(&a, x);
                    if c.is_zero() {
                        t
                    } else {
                        self.add(&t, &self.from_rational(c))
                    }
                }
            });
        }
        acc.unwrap_or_else(|| self.from_rational(&BigRational::zero()))
    }

    /// True when `x` vanishes to its tracked precision.
    pub fn is_zero(&self, x: &KElt) -> bool {
        x.prec == 0 || is_zero_mod(&x.z, &big_pow(self.p, x.prec))
    }

    pub fn is_negative_one_square(&self) -> Result<bool> {
        self.is_square(&self.neg(&self.one()))
    }
}

