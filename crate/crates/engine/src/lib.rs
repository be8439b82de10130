//! The obstruction algorithm: choice of the places `S`, the functionals of the
//! elements `ℓ`, local images at `S` and their intersection by the recursive
//! subproduct search, packaged as a replayable report.

pub mod algorithm;
pub mod error;
pub mod phi;
pub mod report;
pub mod selection;
pub mod tree;

pub use algorithm::{first_insoluble_place, local_data, point_tuple, run_algorithm1, EngineConfig, LocalData};
pub use error::{EngineError, Result, Step};
pub use phi::{build_phi, support_of, PhiFunctional};
pub use report::{Diagnostics, EllRecord, LocalRecord, ObstructionReport, PlaceRecord, Verdict};
pub use selection::{assemble_s, compute_smin, compute_smin_with, theorem_prime_bound, PrimeSelection, Provenance, SminOptions};
pub use tree::{survivor_count, subproduct_intersect, survivor_tuples, Functional, Subproduct};
