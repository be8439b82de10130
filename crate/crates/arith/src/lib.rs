//! Exact arithmetic substrate: big integers and rationals, integer
//! factorization, polynomials over ℤ, ℚ and F_p, resultants, factorization
//! in ℤ[x], real root isolation and F_2 linear algebra.

pub mod f2;
pub mod factor;
pub mod int;
pub mod modp;
pub mod poly;
pub mod primes;
pub mod resultant;
pub mod sturm;
pub mod zfactor;

pub use f2::{F2Matrix, F2Vec, SpanTracker};
pub use factor::{factor_integer, FactorBudget, FactoredInteger};
pub use poly::{IntPoly, RatPoly};
pub use resultant::{discriminant, resultant};
pub use sturm::{isolate_real_roots, IsolatingInterval};
pub use zfactor::{factor_over_z, is_irreducible_over_q, ZFactorization};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
