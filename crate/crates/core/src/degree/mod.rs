//! Degrees of projective division fields from Galois image data.

mod engine;
mod spec;
mod verify;

pub use engine::{
    bound_scan, decimal, image_mod, j_degree, j_degree_bruteforce, pgl_lower_bound_constant, DegreeReport, Method,
    ScanResult,
};
pub use spec::{Entry, GaloisImageSpec, RingFile, SpecFile};
pub use verify::{goursat_verify, Check, Transcript};
