//! Local images `I_v = μ_v(C(ℚ_v))` in `L_v^×/ℚ_v^×L_v^{×2}` and local solubility.

pub mod error;
pub mod image;
pub mod point;
pub mod real;
pub mod solubility;

pub use error::{MuError, Result};
pub use image::{local_image, local_image_with, LocalImage};
pub use point::{mu_of_point, mu_of_x, qp_is_square, Point};
pub use solubility::{hasse_weil_threshold, smin_primes, is_everywhere_locally_soluble, is_locally_soluble, Solubility};
