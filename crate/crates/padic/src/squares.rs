//! Square-class spaces L_v^×/L_v^{×2} and L_v^×/ℚ_v^×L_v^{×2} as F₂ spaces.

use bm_arith::f2::{F2Matrix, F2Vec};
use num_rational::BigRational;

use crate::algebra::{scalar_generators, LocalAlgebra, Place};
use crate::error::{internal, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    ScalarQuotient,
}

/// Coordinates on a quotient of the full square-class space of a local algebra.
#[derive(Clone, Debug)]
pub struct SquareClassSpace {
    pub place: Place,
    pub mode: Mode,
    pub full_dim: usize,
    /// reduced echelon basis of the subspace being quotiented out
    sub_rows: Vec<F2Vec>,
    sub_pivots: Vec<usize>,
    /// full-space coordinates kept as quotient coordinates
    pub free_cols: Vec<usize>,
}

impl SquareClassSpace {
    pub fn new(alg: &LocalAlgebra, mode: Mode) -> Result<Self> {
        let full_dim = alg.full_dim();
        let mut sub = Vec::new();
        if mode == Mode::ScalarQuotient {
            for g in scalar_generators(alg.place()) {
                sub.push(alg.dlog_rational(&g)?);
            }
        }
        let ech = F2Matrix::from_rows(full_dim, sub).rref();
        let sub_pivots = ech.pivots.clone();
        let sub_rows: Vec<F2Vec> = ech.matrix.rows()[..sub_pivots.len()].to_vec();
        let free_cols = (0..full_dim).filter(|c| !sub_pivots.contains(c)).collect();
        Ok(SquareClassSpace { place: alg.place(), mode, full_dim, sub_rows, sub_pivots, free_cols })
    }

    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    /// Quotient coordinates of a full-space vector.
    pub fn project(&self, full: &F2Vec) -> F2Vec {
        let mut r = full.clone();
        for (row, &c) in self.sub_rows.iter().zip(&self.sub_pivots) {
            if r.get(c) {
                r.add_assign(row);
            }
        }
        let bits: Vec<bool> = self.free_cols.iter().map(|&c| r.get(c)).collect();
        F2Vec::from_bits(&bits)
    }

    /// A full-space representative of quotient coordinates.
    pub fn lift(&self, q: &F2Vec) -> F2Vec {
        let mut v = F2Vec::zeros(self.full_dim);
        for (i, &c) in self.free_cols.iter().enumerate() {
            v.set(c, q.get(i));
        }
        v
    }

    /// Restricts a functional on the full space to quotient coordinates. The
    /// functional must vanish on the quotiented subspace.
    pub fn restrict_functional(&self, phi: &F2Vec) -> Result<F2Vec> {
        for row in &self.sub_rows {
            if phi.dot(row) {
                return Err(internal("functional does not vanish on the scalar image"));
            }
        }
        let bits: Vec<bool> = self.free_cols.iter().map(|&c| phi.get(c)).collect();
        Ok(F2Vec::from_bits(&bits))
    }

    /// Class of `g(θ)`.
    pub fn class_of_poly(&self, alg: &LocalAlgebra, g: &bm_arith::poly::RatPoly) -> Result<F2Vec> {
        Ok(self.project(&alg.dlog_poly(g)?))
    }

    pub fn class_of_rational(&self, alg: &LocalAlgebra, q: &BigRational) -> Result<F2Vec> {
        Ok(self.project(&alg.dlog_rational(q)?))
    }
}
