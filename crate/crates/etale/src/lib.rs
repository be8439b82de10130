//! The curve `y² = f(x)` and its étale algebra `L = ℚ[x]/(f)`: element
//! arithmetic, norms, ramification of square classes and the search for
//! elements of square norm.

pub mod curve;
pub mod element;
pub mod error;
pub mod ramification;
pub mod search;

pub use curve::Curve;
pub use element::{elt_norm, has_square_norm, EtaleElement};
pub use error::{EtaleError, Result};
pub use ramification::{odd_ramified_primes, ramification_candidates, verify_ell_input, EllCandidate};
pub use search::{generate_square_norm_elements, SearchBounds};
