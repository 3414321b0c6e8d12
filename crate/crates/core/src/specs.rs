//! Example image specs. The same data ships as JSON under `specs/`.

use crate::degree::GaloisImageSpec;
use crate::error::Result;
use crate::group::{MatGroup, DEFAULT_CAP};
use crate::ideal::{Ideal, RingSpec};
use crate::matrix::MatAlgebra;
use crate::residue::ResidueRing;

pub type Builder = fn() -> Result<GaloisImageSpec>;

/// File stem and builder for every bundled spec.
pub const BUNDLED: &[(&str, Builder)] = &[
    ("full_gl2_Z", full_gl2_z),
    ("full_gl2_F2T", || full_gl2_fqt(2)),
    ("full_gl2_F3T", || full_gl2_fqt(3)),
    ("level2_identity", level2_identity),
    ("levelT_identity_F2T", || level_t_identity(2)),
    ("levelT_identity_F3T", || level_t_identity(3)),
    ("det_square_Z3", det_square_z3),
    ("det_square_F2T", det_square_f2t),
    ("det_square_F3T", det_square_f3t),
    ("entangled_Z6", entangled_z6),
];

pub fn bundled(name: &str) -> Option<Result<GaloisImageSpec>> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, build)| build())
}

fn gl(m: &Ideal, r: usize) -> Result<MatGroup> {
    MatGroup::full_linear(MatAlgebra::new(ResidueRing::new(m)?, r), DEFAULT_CAP)
}

pub fn full_gl2_z() -> Result<GaloisImageSpec> {
    GaloisImageSpec::full_image("full GL_2 over Z", &RingSpec::Integers, 2)
}

pub fn full_gl2_fqt(q: u32) -> Result<GaloisImageSpec> {
    GaloisImageSpec::full_image(format!("full GL_2 over F_{q}[T]"), &RingSpec::polynomial(q)?, 2)
}

/// Trivial image mod 2.
pub fn level2_identity() -> Result<GaloisImageSpec> {
    GaloisImageSpec::from_generators("trivial mod 2", 2, &Ideal::integer(2)?, &[], DEFAULT_CAP)
}

/// Trivial image mod T.
pub fn level_t_identity(q: u32) -> Result<GaloisImageSpec> {
    let t = Ideal::polynomial(&RingSpec::polynomial(q)?, vec![0, 1])?;
    GaloisImageSpec::from_generators(format!("trivial mod T over F_{q}[T]"), 2, &t, &[], DEFAULT_CAP)
}

/// Matrices mod m whose determinant is a square unit.
pub fn det_square(label: &str, m: &Ideal) -> Result<GaloisImageSpec> {
    let full = gl(m, 2)?;
    let alg = full.algebra().clone();
    let ring = alg.ring().clone();
    let mut squares: Vec<u64> = ring.units().into_iter().map(|u| ring.mul(u, u)).collect();
    squares.sort_unstable();
    let elements = full
        .elements()
        .iter()
        .filter(|g| squares.binary_search(&alg.det(g)).is_ok())
        .cloned()
        .collect();
    GaloisImageSpec::new(label, MatGroup::from_elements(alg, elements)?)
}

pub fn det_square_z3() -> Result<GaloisImageSpec> {
    det_square("square determinant mod 3", &Ideal::integer(3)?)
}

pub fn det_square_f2t() -> Result<GaloisImageSpec> {
    let m = Ideal::polynomial(&RingSpec::polynomial(2)?, vec![0, 0, 1])?;
    det_square("square determinant mod T^2 over F_2[T]", &m)
}

pub fn det_square_f3t() -> Result<GaloisImageSpec> {
    let m = Ideal::polynomial(&RingSpec::polynomial(3)?, vec![0, 1])?;
    det_square("square determinant mod T over F_3[T]", &m)
}

/// Index-2 subgroup of GL_2(Z/6) tying the sign of `g mod 2`, viewed as a
/// permutation of the three nonzero vectors of (Z/2)^2, to the Legendre
/// symbol of `det g mod 3`.
pub fn entangled_z6() -> Result<GaloisImageSpec> {
    let full = gl(&Ideal::integer(6)?, 2)?;
    let alg = full.algebra().clone();
    let mod2 = MatAlgebra::new(ResidueRing::new(&Ideal::integer(2)?)?, 2);
    let elements = full
        .elements()
        .iter()
        .filter(|g| {
            let h = alg.reduce(g, &mod2);
            // even permutations of three points are exactly those with h^3 = 1
            let even = mod2.is_identity(&mod2.mul(&mod2.mul(&h, &h), &h));
            let square_det = alg.det(g) % 3 == 1;
            even == square_det
        })
        .cloned()
        .collect();
    GaloisImageSpec::new(
        "sign mod 2 entangled with det mod 3",
        MatGroup::from_elements(alg, elements)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn specs_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs")
    }

    #[test]
    fn orders() {
        let order = |name: &str| bundled(name).unwrap().unwrap().image().order();
        assert_eq!(order("full_gl2_Z"), 1);
        assert_eq!(order("det_square_Z3"), 24);
        assert_eq!(order("det_square_F2T"), 48);
        assert_eq!(order("det_square_F3T"), 24);
        assert_eq!(order("entangled_Z6"), 144);
    }

    #[test]
    fn bundled_files_match_builders() {
        for (name, build) in BUNDLED {
            let path = specs_dir().join(format!("{name}.json"));
            let loaded = GaloisImageSpec::load(&path, DEFAULT_CAP).unwrap();
            assert_eq!(loaded, build().unwrap(), "{name}");
        }
    }

    #[test]
    #[ignore = "rewrites specs/*.json"]
    fn regenerate_bundled_files() {
        for (name, build) in BUNDLED {
            let path = specs_dir().join(format!("{name}.json"));
            std::fs::write(path, build().unwrap().to_json() + "\n").unwrap();
        }
    }
}
