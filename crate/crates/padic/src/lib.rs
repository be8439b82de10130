//! Local arithmetic at a place of ℚ: the decomposition of ℚ_v[x]/(f) into
//! fields, square-class spaces with discrete logarithms, Hilbert symbols and
//! the local pairing.

pub mod algebra;
pub mod cache;
pub mod error;
pub mod field;
pub mod linalg;
pub mod order;
pub mod residue;
pub mod squares;

pub use error::{PadicError, Result};
pub use field::{KElt, LocalField};
pub use cache::AlgebraCache;
pub use algebra::{is_precision_error, scalar_generators, LocalAlgebra, PadicAlgebra, Place, RealAlgebra};
pub use squares::{Mode, SquareClassSpace};
