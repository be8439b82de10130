//! Per-curve memo of local algebras and square-class spaces.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use bm_arith::poly::IntPoly;

use crate::algebra::{LocalAlgebra, Place};
use crate::error::Result;
use crate::squares::{Mode, SquareClassSpace};

/// Local data for one polynomial, built on first use.
#[derive(Debug)]
pub struct AlgebraCache {
    f: IntPoly,
    algebras: Mutex<HashMap<Place, Arc<LocalAlgebra>>>,
    spaces: Mutex<HashMap<(Place, bool), Arc<SquareClassSpace>>>,
}

impl AlgebraCache {
    pub fn new(f: &IntPoly) -> Self {
        AlgebraCache {
            f: f.clone(),
            algebras: Mutex::new(HashMap::new()),
            spaces: Mutex::new(HashMap::new()),
        }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn algebra(&self, v: Place) -> Result<Arc<LocalAlgebra>> {
        if let Some(a) = self.algebras.lock().unwrap().get(&v) {
            return Ok(a.clone());
        }
        let a = Arc::new(LocalAlgebra::new(&self.f, v)?);
        self.algebras.lock().unwrap().insert(v, a.clone());
        Ok(a)
    }

    pub fn space(&self, v: Place, mode: Mode) -> Result<Arc<SquareClassSpace>> {
        let key = (v, mode == Mode::ScalarQuotient);
        if let Some(s) = self.spaces.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let alg = self.algebra(v)?;
        let s = Arc::new(SquareClassSpace::new(&alg, mode)?);
        self.spaces.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// Replaces the algebra at `v` (used after rebuilding at higher precision).
    pub fn replace(&self, v: Place, alg: LocalAlgebra) {
        self.algebras.lock().unwrap().insert(v, Arc::new(alg));
        self.spaces.lock().unwrap().retain(|(w, _), _| *w != v);
    }
}
