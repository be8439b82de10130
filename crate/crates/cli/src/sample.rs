//! Random curves `y² = f(x)` with `deg f = 2g + 2` and coefficients uniform in `[−n, n]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bm_arith::poly::IntPoly;
use bm_arith::zfactor::is_irreducible_over_q;
use bm_etale::Curve;

use crate::classify::SampleConfig;

/// Deterministic stream of curves: zero leading coefficient, reducible `f`
/// and vanishing discriminant are rejected.
pub struct CurveSampler {
    rng: ChaCha8Rng,
    degree: usize,
    bound: i64,
}

impl CurveSampler {
    pub fn new(genus: usize, bound: i64, seed: u64) -> Self {
        CurveSampler { rng: ChaCha8Rng::seed_from_u64(seed), degree: 2 * genus + 2, bound }
    }

    /// Raw coefficient draw, constant first.
    pub fn draw(&mut self) -> Vec<i64> {
        (0..=self.degree).map(|_| self.rng.gen_range(-self.bound..=self.bound)).collect()
    }
}

impl Iterator for CurveSampler {
    type Item = Curve;

    fn next(&mut self) -> Option<Curve> {
        loop {
            let c = self.draw();
            if c[self.degree] == 0 {
                continue;
            }
            let f = IntPoly::from_i64(&c);
            if !is_irreducible_over_q(&f) {
                continue;
            }
            if let Ok(curve) = Curve::new(f) {
                return Some(curve);
            }
        }
    }
}

pub fn sample_curves(cfg: &SampleConfig) -> impl Iterator<Item = Curve> {
    CurveSampler::new(cfg.genus, cfg.bound, cfg.seed).take(cfg.count)
}
