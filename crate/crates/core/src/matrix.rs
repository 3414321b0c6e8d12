//! r x r matrices over a residue ring.
//!
//! `Mat` is plain row-major data; all arithmetic goes through a
//! `MatAlgebra` that knows the ring and rank. The derived ordering on `Mat`
//! is the canonical element order used by groups.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::residue::ResidueRing;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat(SmallVec<[u64; 4]>);

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl Mat {
    pub fn from_entries(entries: &[u64]) -> Mat {
        Mat(SmallVec::from_slice(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }
}

/// Ring plus rank: the ambient M_r(A/a).
#[derive(Clone)]
pub struct MatAlgebra {
    ring: Arc<ResidueRing>,
    r: usize,
}

impl fmt::Debug for MatAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{}({:?})", self.r, self.ring)
    }
}

impl PartialEq for MatAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.ring == other.ring
    }
}

impl MatAlgebra {
    pub fn new(ring: Arc<ResidueRing>, r: usize) -> Self {
        assert!(r >= 1, "rank must be positive");
        MatAlgebra { ring, r }
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn identity(&self) -> Mat {
        self.scalar(self.ring.one())
    }

    pub fn scalar(&self, lambda: u64) -> Mat {
        let r = self.r;
        Mat((0..r * r).map(|k| if k % (r + 1) == 0 { lambda } else { 0 }).collect())
    }

    /// `I + b E_{ij}`.
    pub fn elementary(&self, i: usize, j: usize, b: u64) -> Mat {
        let mut m = self.identity();
        let k = i * self.r + j;
        m.0[k] = self.ring.add(m.0[k], b);
        m
    }

    /// `diag(u, 1, ..., 1)`.
    pub fn diag_first(&self, u: u64) -> Mat {
        let mut m = self.identity();
        m.0[0] = u;
        m
    }

    /// Permutation matrix sending basis vector j to perm[j].
    pub fn permutation(&self, perm: &[usize]) -> Mat {
        let r = self.r;
        let mut m = Mat(SmallVec::from_elem(0, r * r));
        for (j, &i) in perm.iter().enumerate() {
            m.0[i * r + j] = self.ring.one();
        }
        m
    }

    pub fn from_entries(&self, entries: &[u64]) -> Result<Mat> {
        if entries.len() != self.r * self.r {
            return Err(Error::Parse(format!(
                "expected {} entries, got {}",
                self.r * self.r,
                entries.len()
            )));
        }
        if let Some(&x) = entries.iter().find(|&&x| x >= self.ring.size()) {
            return Err(Error::Parse(format!("residue code {x} out of range")));
        }
        Ok(Mat::from_entries(entries))
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let r = self.r;
        let ring = &self.ring;
        if r == 2 {
            let (a, b) = (&a.0, &b.0);
            return Mat(SmallVec::from_buf([
                ring.add(ring.mul(a[0], b[0]), ring.mul(a[1], b[2])),
                ring.add(ring.mul(a[0], b[1]), ring.mul(a[1], b[3])),
                ring.add(ring.mul(a[2], b[0]), ring.mul(a[3], b[2])),
                ring.add(ring.mul(a[2], b[1]), ring.mul(a[3], b[3])),
            ]));
        }
        let mut out = SmallVec::from_elem(0, r * r);
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0;
                for k in 0..r {
                    acc = ring.add(acc, ring.mul(a.0[i * r + k], b.0[k * r + j]));
                }
                out[i * r + j] = acc;
            }
        }
        Mat(out)
    }

    /// Determinant. Cofactor expansion up to rank 4, Berkowitz beyond;
    /// neither divides, so both are sound with zero divisors.
    pub fn det(&self, m: &Mat) -> u64 {
        if self.r <= 4 {
            self.det_cofactor(m.entries(), self.r)
        } else {
            self.det_berkowitz(m)
        }
    }

    fn det_cofactor(&self, e: &[u64], n: usize) -> u64 {
        let ring = &self.ring;
        match n {
            1 => e[0],
            2 => ring.sub(ring.mul(e[0], e[3]), ring.mul(e[1], e[2])),
            _ => {
                let mut acc = 0;
                let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                for col in 0..n {
                    if e[col] == 0 {
                        continue;
                    }
                    minor.clear();
                    for i in 1..n {
                        for j in (0..n).filter(|&j| j != col) {
                            minor.push(e[i * n + j]);
                        }
                    }
                    let term = ring.mul(e[col], self.det_cofactor(&minor, n - 1));
                    acc = if col % 2 == 0 {
                        ring.add(acc, term)
                    } else {
                        ring.sub(acc, term)
                    };
                }
                acc
            }
        }
    }

    // Division-free characteristic polynomial; det = (-1)^n * c_n.
    fn det_berkowitz(&self, m: &Mat) -> u64 {
        let ring = &self.ring;
        let n = self.r;
        let a = |i: usize, j: usize| m.0[i * n + j];
        // coefficients of the char poly of the leading k x k block, highest first
        let mut poly = vec![ring.one(), ring.neg(a(0, 0))];
        for k in 1..n {
            // Toeplitz column for step k: [1, -a_kk, -R C, -R A C, ...]
            let row: Vec<u64> = (0..k).map(|j| a(k, j)).collect();
            let mut col: Vec<u64> = (0..k).map(|i| a(i, k)).collect();
            let mut t = vec![ring.one(), ring.neg(a(k, k))];
            for _ in 0..k {
                let dot = row
                    .iter()
                    .zip(&col)
                    .fold(0, |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)));
                t.push(ring.neg(dot));
                let next: Vec<u64> = (0..k)
                    .map(|i| (0..k).fold(0, |acc, j| ring.add(acc, ring.mul(a(i, j), col[j]))))
                    .collect();
                col = next;
            }
            // new poly = T * poly, T lower-triangular Toeplitz of size (k+2) x (k+1)
            let mut next = vec![0u64; k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = 0;
                for (j, &pj) in poly.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        acc = ring.add(acc, ring.mul(t[i - j], pj));
                    }
                }
                *slot = acc;
            }
            poly = next;
        }
        let c = poly[n];
        if n.is_multiple_of(2) {
            c
        } else {
            ring.neg(c)
        }
    }

    pub fn is_invertible(&self, m: &Mat) -> bool {
        self.ring.is_unit(self.det(m))
    }

    /// Adjugate times det^{-1}.
    pub fn inverse(&self, m: &Mat) -> Option<Mat> {
        let ring = &self.ring;
        let d_inv = ring.inv(self.det(m))?;
        let r = self.r;
        if r == 1 {
            return Some(Mat::from_entries(&[d_inv]));
        }
        if r == 2 {
            let e = &m.0;
            return Some(Mat(SmallVec::from_buf([
                ring.mul(e[3], d_inv),
                ring.mul(ring.neg(e[1]), d_inv),
                ring.mul(ring.neg(e[2]), d_inv),
                ring.mul(e[0], d_inv),
            ])));
        }
        let minor_alg = MatAlgebra::new(self.ring.clone(), r - 1);
        let mut out = SmallVec::from_elem(0, r * r);
        for i in 0..r {
            for j in 0..r {
                // cofactor C_ij goes to adj[j][i]
                let mut minor = Vec::with_capacity((r - 1) * (r - 1));
                for a in (0..r).filter(|&a| a != i) {
                    for b in (0..r).filter(|&b| b != j) {
                        minor.push(m.0[a * r + b]);
                    }
                }
                let c = minor_alg.det(&Mat::from_entries(&minor));
                let c = if (i + j) % 2 == 0 { c } else { ring.neg(c) };
                out[j * r + i] = ring.mul(c, d_inv);
            }
        }
        Some(Mat(out))
    }

    pub fn is_identity(&self, m: &Mat) -> bool {
        *m == self.identity()
    }

    /// `Some(lambda)` if m = lambda * I.
    pub fn scalar_value(&self, m: &Mat) -> Option<u64> {
        let r = self.r;
        let lambda = m.0[0];
        m.0.iter()
            .enumerate()
            .all(|(k, &x)| if k % (r + 1) == 0 { x == lambda } else { x == 0 })
            .then_some(lambda)
    }

    /// Entrywise reduction into `target` (whose ideal divides ours).
    pub fn reduce(&self, m: &Mat, target: &MatAlgebra) -> Mat {
        Mat(m.0.iter().map(|&x| self.ring.reduce_to(x, &target.ring)).collect())
    }

    /// Entries of a matrix over a quotient ring, read as lifts here.
    pub fn lift(&self, m: &Mat) -> Mat {
        m.clone()
    }

    pub fn format(&self, m: &Mat) -> Vec<String> {
        m.0.iter().map(|&x| self.ring.format_element(x)).collect()
    }

    pub fn parse(&self, entries: &[String]) -> Result<Mat> {
        let codes = entries
            .iter()
            .map(|s| self.ring.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        self.from_entries(&codes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::Ideal;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(n: u64, r: usize) -> MatAlgebra {
        MatAlgebra::new(ResidueRing::new(&Ideal::integer(n).unwrap()).unwrap(), r)
    }

    // Leibniz formula over all permutations, as an independent oracle.
    fn leibniz(alg: &MatAlgebra, m: &Mat) -> u64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let ring = alg.ring();
        let r = alg.rank();
        let mut acc = 0;
        for p in perms(r) {
            let inversions = (0..r)
                .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let term = (0..r).fold(ring.one(), |t, i| ring.mul(t, m.entries()[i * r + p[i]]));
            acc = if inversions % 2 == 0 {
                ring.add(acc, term)
            } else {
                ring.sub(acc, term)
            };
        }
        acc
    }

    #[test]
    fn det_matches_leibniz_all_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in 1..=6 {
            let a = alg(12, r);
            for _ in 0..40 {
                let entries: Vec<u64> = (0..r * r).map(|_| rng.gen_range(0..12)).collect();
                let m = Mat::from_entries(&entries);
                assert_eq!(a.det(&m), leibniz(&a, &m), "r={r} {m:?}");
                assert_eq!(a.det_berkowitz(&m), leibniz(&a, &m), "berkowitz r={r}");
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in [2, 3, 5] {
            let a = alg(36, r);
            for _ in 0..30 {
                let x = Mat::from_entries(&(0..r * r).map(|_| rng.gen_range(0..36)).collect::<Vec<_>>());
                let y = Mat::from_entries(&(0..r * r).map(|_| rng.gen_range(0..36)).collect::<Vec<_>>());
                let ring = a.ring();
                assert_eq!(a.det(&a.mul(&x, &y)), ring.mul(a.det(&x), a.det(&y)));
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for r in [1, 2, 3, 4] {
            let a = alg(20, r);
            let mut found = 0;
            while found < 20 {
                let x = Mat::from_entries(&(0..r * r).map(|_| rng.gen_range(0..20)).collect::<Vec<_>>());
                match a.inverse(&x) {
                    Some(inv) => {
                        assert!(a.is_identity(&a.mul(&x, &inv)));
                        assert!(a.is_identity(&a.mul(&inv, &x)));
                        found += 1;
                    }
                    None => assert!(!a.is_invertible(&x)),
                }
            }
        }
    }

    #[test]
    fn zero_divisor_determinant() {
        // det = 2*3 = 6 = 0 mod 6: not invertible though no entry is zero mod p
        let a = alg(6, 2);
        let m = Mat::from_entries(&[2, 0, 0, 3]);
        assert_eq!(a.det(&m), 0);
        assert!(a.inverse(&m).is_none());
    }

    #[test]
    fn scalars_and_reduction() {
        let a4 = alg(4, 2);
        let a2 = alg(2, 2);
        assert_eq!(a4.scalar_value(&a4.scalar(3)), Some(3));
        assert_eq!(a4.scalar_value(&a4.elementary(0, 1, 2)), None);
        assert!(a2.is_identity(&a4.reduce(&a4.elementary(0, 1, 2), &a2)));
        assert_eq!(a4.permutation(&[1, 0]).entries(), &[0, 1, 1, 0]);
    }
}
