//! Search for elements of square norm unramified outside a set of places.
//!
//! Small elements `g(θ)` are enumerated. Those whose norm is already a square
//! are tested directly. The others, when their norm factors over a small
//! factor base, become relations: a vector recording the sign of the norm,
//! the parity of `v_p(N)` for `p ∈ S` and the parities of the component
//! valuations at primes `p ∉ S`. Products over left-kernel vectors of the
//! relation matrix have square norm and are unramified outside `S`. Results
//! are kept only when their local classes at `S` are independent of those
//! already found.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use bm_arith::f2::{F2Matrix, F2Vec, SpanTracker};
use bm_arith::factor::{factor_integer, FactorBudget};
use bm_arith::int::rat_is_square;
use bm_arith::poly::IntPoly;
use bm_arith::primes::primes_up_to;
use bm_padic::{AlgebraCache, LocalAlgebra, Mode, Place, SquareClassSpace};

use crate::curve::Curve;
use crate::element::{elt_norm, EtaleElement};
use crate::error::{EtaleError, Result};
use crate::ramification::{component_valuations, EllCandidate};

/// Limits of the element search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// maximal degree of `g` in the box enumeration
    pub degree: usize,
    /// coefficient bound of the box enumeration
    pub coeff: i64,
    /// `θ − a` and `1 − aθ` are added for `|a| ≤ linear`
    pub linear: i64,
    /// combine non-square-norm elements into products
    pub combine: bool,
    /// factor base bound for relations
    pub smooth_bound: u64,
    /// stop scanning kernel vectors after this many fail to add a new class
    pub patience: usize,
    /// combination is skipped for `deg f` above this
    pub combine_max_degree: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            degree: 2,
            coeff: 10,
            linear: 30,
            combine: true,
            smooth_bound: 1000,
            patience: 40,
            combine_max_degree: 16,
        }
    }
}

fn normalize(mut c: Vec<i64>) -> Option<Vec<i64>> {
    while c.last() == Some(&0) {
        c.pop();
    }
    let g = c.iter().fold(0i64, |a, &b| a.gcd(&b));
    if g == 0 {
        return None;
    }
    let s = if *c.last().unwrap() < 0 { -g } else { g };
    Some(c.into_iter().map(|x| x / s).collect())
}

/// Primitive polynomials `g` up to sign, small ones first.
pub fn candidate_pool(curve: &Curve, b: &SearchBounds) -> Vec<IntPoly> {
    let n = curve.degree();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |c: Vec<i64>, out: &mut Vec<IntPoly>| {
        if let Some(c) = normalize(c) {
            if c.len() <= n && seen.insert(c.clone()) {
                out.push(IntPoly::from_i64(&c));
            }
        }
    };
    if b.degree >= 1 || b.linear >= 1 {
        push(vec![0, 1], &mut out);
    }
    for a in 1..=b.linear {
        for s in [a, -a] {
            push(vec![s, -1], &mut out);
            push(vec![1, -s], &mut out);
        }
    }
    let d = b.degree.min(n - 1);
    let w = (2 * b.coeff + 1) as usize;
    let mut boxed: Vec<Vec<i64>> = Vec::new();
    let total = w.pow(d as u32 + 1);
    for mut k in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            c.push((k % w) as i64 - b.coeff);
            k /= w;
        }
        boxed.push(c);
    }
    boxed.sort_by_key(|c| {
        let m = c.iter().map(|x| x.abs()).max().unwrap_or(0);
        let deg = c.iter().rposition(|&x| x != 0).unwrap_or(0);
        (m, deg, c.iter().map(|x| x.abs()).sum::<i64>())
    });
    for c in boxed {
        push(c, &mut out);
    }
    out
}

/// Splits `n` over `primes`; returns exponents and the remaining cofactor.
fn trial_split(n: &BigInt, primes: &[u64]) -> (Vec<(u64, u32)>, BigInt) {
    let mut m = n.abs();
    let mut out = Vec::new();
    for &p in primes {
        if m.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    (out, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Col {
    Sign,
    Norm(u64),
    Component(u64, usize),
}

struct LocalSpace {
    alg: Arc<LocalAlgebra>,
    space: Arc<SquareClassSpace>,
}

struct Searcher<'a> {
    curve: &'a Curve,
    cache: &'a AlgebraCache,
    places: Vec<LocalSpace>,
    s_primes: BTreeSet<u64>,
    sig_len: usize,
}

impl Searcher<'_> {
    /// Concatenated scalar-quotient classes at the places of `S`.
    fn signature(&self, g: &EtaleElement) -> Result<F2Vec> {
        let mut out = F2Vec::zeros(0);
        for ls in &self.places {
            out = out.concat(&ls.space.project(&ls.alg.dlog_poly(&g.rep)?));
        }
        Ok(out)
    }

    /// Odd primes of `S` at which the product of `factors` has a component of odd valuation.
    fn ramified_in_s(&self, factors: &[EtaleElement]) -> Result<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for &p in self.s_primes.iter().filter(|&&p| p != 2) {
            let alg = self.cache.algebra(Place::Prime(p))?;
            let mut tot: Vec<i64> = Vec::new();
            for g in factors {
                let v = component_valuations(&alg, g)?;
                if tot.is_empty() {
                    tot = v;
                } else {
                    for (t, x) in tot.iter_mut().zip(v) {
                        *t += x;
                    }
                }
            }
            if tot.iter().any(|t| t.rem_euclid(2) == 1) {
                out.insert(p);
            }
        }
        Ok(out)
    }

    /// Odd primes outside `S` at which `g` has a component of odd valuation.
    fn ramified_outside(&self, g: &EtaleElement, primes: &[u64]) -> Result<bool> {
        for &p in primes {
            if p == 2 || self.s_primes.contains(&p) {
                continue;
            }
            let alg = self.cache.algebra(Place::Prime(p))?;
            if component_valuations(&alg, g)?.iter().any(|v| v.rem_euclid(2) == 1) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn candidate(&self, factors: Vec<EtaleElement>, norms: &[BigRational]) -> Result<EllCandidate> {
        let mut element = self.curve.one();
        for g in &factors {
            element = self.curve.mul(&element, g);
        }
        let norm: BigRational = norms.iter().fold(BigRational::one(), |a, b| a * b);
        if !rat_is_square(&norm) {
            return Err(EtaleError::NonSquareNorm(norm));
        }
        let ramified_odd_primes = self.ramified_in_s(&factors)?;
        Ok(EllCandidate { element, factors, norm, square_norm: true, ramified_odd_primes })
    }
}

fn full_primes(n: &BigInt) -> Option<Vec<u64>> {
    if n.abs().is_one() {
        return Some(Vec::new());
    }
    let fac = factor_integer(n, &FactorBudget { trial_bound: 100_000, rho_iterations: 2_000_000 });
    if !fac.is_complete() {
        return None;
    }
    fac.factors.iter().map(|(p, _)| p.to_u64()).collect()
}

/// Elements of square norm, unramified outside `s`, with independent local
/// classes at the places of `s`.
pub fn generate_square_norm_elements(
    curve: &Curve,
    s: &[Place],
    bounds: &SearchBounds,
    cache: &AlgebraCache,
) -> Result<Vec<EllCandidate>> {
    let mut places = Vec::new();
    for &v in s {
        places.push(LocalSpace {
            alg: cache.algebra(v)?,
            space: cache.space(v, Mode::ScalarQuotient)?,
        });
    }
    let s_primes: BTreeSet<u64> = s
        .iter()
        .filter_map(|v| match v {
            Place::Prime(p) => Some(*p),
            Place::Real => None,
        })
        .collect();
    let sig_len = places.iter().map(|ls| ls.space.dim()).sum();
    let sr = Searcher { curve, cache, places, s_primes, sig_len };

    let mut base: Vec<u64> = primes_up_to(bounds.smooth_bound);
    base.extend(sr.s_primes.iter().copied().filter(|&p| p > bounds.smooth_bound));
    let combine = bounds.combine && curve.degree() <= bounds.combine_max_degree;

    let mut tracker = SpanTracker::new(sr.sig_len.max(1), sr.sig_len.max(1));
    let mut out = Vec::new();
    let mut rel_elems: Vec<EtaleElement> = Vec::new();
    let mut rel_norms: Vec<BigRational> = Vec::new();
    let mut rel_rows: Vec<Vec<Col>> = Vec::new();

    for g in candidate_pool(curve, bounds) {
        let elt = curve.element(g.to_rat());
        let norm = elt_norm(curve, &elt);
        if norm.is_zero() {
            continue;
        }
        if rat_is_square(&norm) {
            let (Some(pn), Some(pd)) = (full_primes(norm.numer()), full_primes(norm.denom())) else {
                continue;
            };
            let primes: Vec<u64> = pn.into_iter().chain(pd).collect();
            match sr.ramified_outside(&elt, &primes) {
                Ok(false) => {}
                _ => continue,
            }
            let Ok(sig) = sr.signature(&elt) else { continue };
            if sr.sig_len > 0 && tracker.insert(&sig) {
                out.push(sr.candidate(vec![elt], &[norm])?);
            }
            continue;
        }
        if !combine {
            continue;
        }
        let (fn_, cn) = trial_split(norm.numer(), &base);
        let (fd, cd) = trial_split(norm.denom(), &base);
        if !cn.is_one() || !cd.is_one() {
            continue;
        }
        let mut row = Vec::new();
        if norm.is_negative() {
            row.push(Col::Sign);
        }
        let mut exps: HashMap<u64, i64> = HashMap::new();
        for (p, e) in fn_ {
            *exps.entry(p).or_default() += e as i64;
        }
        for (p, e) in fd {
            *exps.entry(p).or_default() -= e as i64;
        }
        let mut ok = true;
        let mut keys: Vec<u64> = exps.keys().copied().collect();
        keys.sort_unstable();
        for p in keys {
            if sr.s_primes.contains(&p) {
                if exps[&p].rem_euclid(2) == 1 {
                    row.push(Col::Norm(p));
                }
                continue;
            }
            let vals = cache
                .algebra(Place::Prime(p))
                .map_err(EtaleError::from)
                .and_then(|alg| component_valuations(&alg, &elt));
            match vals {
                Ok(v) => {
                    for (i, x) in v.iter().enumerate() {
                        if x.rem_euclid(2) == 1 {
                            row.push(Col::Component(p, i));
                        }
                    }
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            rel_elems.push(elt);
            rel_norms.push(norm);
            rel_rows.push(row);
        }
    }

    if combine && !rel_rows.is_empty() && sr.sig_len > 0 {
        let mut index: HashMap<Col, usize> = HashMap::new();
        for row in &rel_rows {
            for c in row {
                let k = index.len();
                index.entry(*c).or_insert(k);
            }
        }
        let ncols = index.len().max(1);
        let rows: Vec<F2Vec> = rel_rows
            .iter()
            .map(|row| {
                let mut v = F2Vec::zeros(ncols);
                for c in row {
                    v.flip(index[c]);
                }
                v
            })
            .collect();
        let mut kernel = F2Matrix::from_rows(ncols, rows).left_kernel();
        kernel.sort_by_key(|v| v.weight());
        let mut sigs: HashMap<usize, Option<F2Vec>> = HashMap::new();
        let mut idle = 0;
        for kv in kernel {
            if idle >= bounds.patience || tracker.dim() == sr.sig_len {
                break;
            }
            let idx: Vec<usize> = (0..kv.len()).filter(|&i| kv.get(i)).collect();
            let mut sig = F2Vec::zeros(sr.sig_len);
            let mut good = true;
            for &i in &idx {
                let s = sigs.entry(i).or_insert_with(|| sr.signature(&rel_elems[i]).ok());
                match s {
                    Some(s) => sig.add_assign(s),
                    None => {
                        good = false;
                        break;
                    }
                }
            }
            if good && tracker.insert(&sig) {
                idle = 0;
                let factors: Vec<EtaleElement> = idx.iter().map(|&i| rel_elems[i].clone()).collect();
                let norms: Vec<BigRational> = idx.iter().map(|&i| rel_norms[i].clone()).collect();
                out.push(sr.candidate(factors, &norms)?);
            } else {
                idle += 1;
            }
        }
    }
    Ok(out)
}
