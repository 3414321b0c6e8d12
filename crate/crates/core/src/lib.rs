//! Exact degrees `[J_a : K] = |G(a) / Scal G(a)|` of projective division
//! fields, computed from a mod-m description of a Galois image in
//! GL_r(A/m) for A = Z or F_q[T].

pub mod cli;
pub mod degree;
pub mod error;
pub mod goursat;
pub mod group;
pub mod ideal;
pub mod matrix;
pub mod orders;
pub mod residue;
pub mod specs;

pub use degree::{
    bound_scan, goursat_verify, image_mod, j_degree, j_degree_bruteforce, pgl_lower_bound_constant, DegreeReport,
    GaloisImageSpec, Method, ScanResult, Transcript,
};
pub use error::{Error, Result};
pub use goursat::{fibered_intersect, goursat_decompose, FiberedIntersection, FiberedProduct, FiniteGroup};
pub use group::MatGroup;
pub use ideal::{Ideal, IdealDecomposition, RingSpec};
pub use matrix::{Mat, MatAlgebra};
pub use orders::{gl_order, pgl_order, pgl_ratio, units_order};
pub use residue::ResidueRing;
