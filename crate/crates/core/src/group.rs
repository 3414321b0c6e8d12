//! Finite subgroups of GL_r(A/a), always fully enumerated.

use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::matrix::{Mat, MatAlgebra};
use crate::orders::{exact_div, gl_order};
use crate::residue::ResidueRing;

/// Default limit on the number of elements any enumeration may produce.
pub const DEFAULT_CAP: usize = 10_000_000;

pub struct MatGroup {
    alg: MatAlgebra,
    /// Sorted by the canonical (row-major) order.
    elements: Vec<Mat>,
    generators: OnceLock<Vec<Mat>>,
}

impl std::fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatGroup(order {} in GL over {:?})", self.order(), self.alg)
    }
}

/// Images of a group under the two CRT reductions A/(bc) -> A/b, A/c.
pub struct CrtSplit {
    pub left: MatGroup,
    pub right: MatGroup,
    /// `|H| = |left| * |right|`: H is the full direct product.
    pub is_direct_product: bool,
}

fn bfs_extend(
    alg: &MatAlgebra,
    set: &mut HashSet<Mat>,
    list: &mut Vec<Mat>,
    gens: &[Mat],
    start: usize,
    cap: usize,
) -> Result<()> {
    let mut queue: VecDeque<usize> = (start..list.len()).collect();
    while let Some(idx) = queue.pop_front() {
        for s in gens {
            let y = alg.mul(&list[idx], s);
            if !set.contains(&y) {
                if list.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                set.insert(y.clone());
                list.push(y);
                queue.push_back(list.len() - 1);
            }
        }
    }
    Ok(())
}

/// A generating set for the units of a finite ring: walk units in code
/// order and keep each one not already in the span of the earlier picks.
pub fn unit_generators(ring: &ResidueRing) -> Vec<u64> {
    let size = ring.size() as usize;
    let mut in_span = vec![false; size];
    in_span[ring.one() as usize] = true;
    let mut span = vec![ring.one()];
    let mut gens = Vec::new();
    for u in ring.units() {
        if in_span[u as usize] {
            continue;
        }
        gens.push(u);
        let mut i = 0;
        // extend: multiply every existing element by u, then close
        let existing = span.len();
        for k in 0..existing {
            let y = ring.mul(span[k], u);
            if !in_span[y as usize] {
                in_span[y as usize] = true;
                span.push(y);
            }
        }
        i += existing;
        while i < span.len() {
            for &g in &gens {
                let y = ring.mul(span[i], g);
                if !in_span[y as usize] {
                    in_span[y as usize] = true;
                    span.push(y);
                }
            }
            i += 1;
        }
    }
    gens
}

/// The fixed generating set of GL_r(A/a): elementary transvections
/// `I + b E_ij` over an additive basis b of A/a, the transposition and
/// cycle permutation matrices, and `diag(u, 1, ..., 1)` over a unit
/// generating set.
pub fn gl_generators(alg: &MatAlgebra) -> Vec<Mat> {
    let ring = alg.ring();
    let r = alg.rank();
    let unit = Ideal::unit(ring.ideal().ring());
    let basis = ring.ideal_additive_generators(&unit);
    let mut gens = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                for &b in &basis {
                    gens.push(alg.elementary(i, j, b));
                }
            }
        }
    }
    if r >= 2 {
        let mut swap: Vec<usize> = (0..r).collect();
        swap.swap(0, 1);
        gens.push(alg.permutation(&swap));
        if r >= 3 {
            let cycle: Vec<usize> = (0..r).map(|j| (j + 1) % r).collect();
            gens.push(alg.permutation(&cycle));
        }
    }
    for u in unit_generators(ring) {
        gens.push(alg.diag_first(u));
    }
    gens.retain(|g| !alg.is_identity(g));
    gens.sort();
    gens.dedup();
    gens
}

/// All `g` in GL_r(A/a) with `g = I mod d`, for d | a, sorted.
pub fn congruence_kernel(alg: &MatAlgebra, d: &Ideal, cap: usize) -> Result<Vec<Mat>> {
    let ring = alg.ring();
    let offsets = ring.ideal_elements(d);
    let r2 = alg.rank() * alg.rank();
    let candidates = (offsets.len() as u128).checked_pow(r2 as u32).unwrap_or(u128::MAX);
    if candidates > cap as u128 {
        return Err(Error::CapExceeded { cap });
    }
    let identity = alg.identity();
    let mut out = Vec::new();
    let mut idx = vec![0usize; r2];
    loop {
        let entries: Vec<u64> = (0..r2)
            .map(|k| ring.add(identity.entries()[k], offsets[idx[k]]))
            .collect();
        let m = Mat::from_entries(&entries);
        if alg.is_invertible(&m) {
            out.push(m);
        }
        // odometer
        let mut k = r2;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < offsets.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl MatGroup {
    pub fn trivial(alg: MatAlgebra) -> MatGroup {
        let id = alg.identity();
        MatGroup {
            alg,
            elements: vec![id],
            generators: OnceLock::from(Vec::new()),
        }
    }

    /// Breadth-first closure of `generators`.
    pub fn closure(alg: MatAlgebra, generators: Vec<Mat>, cap: usize) -> Result<MatGroup> {
        for g in &generators {
            if g.entries().len() != alg.rank() * alg.rank() {
                return Err(Error::Parse(format!("generator {g:?} has the wrong shape")));
            }
            if !alg.is_invertible(g) {
                return Err(Error::NotInvertible(format!("{:?}", alg.format(g))));
            }
        }
        let id = alg.identity();
        let mut set = HashSet::from([id.clone()]);
        let mut list = vec![id];
        bfs_extend(&alg, &mut set, &mut list, &generators, 0, cap)?;
        list.sort();
        Ok(MatGroup {
            alg,
            elements: list,
            generators: OnceLock::from(generators),
        })
    }

    /// GL_r(A/a) by closure of the standard generating set.
    pub fn full_linear(alg: MatAlgebra, cap: usize) -> Result<MatGroup> {
        let gens = gl_generators(&alg);
        MatGroup::closure(alg, gens, cap)
    }

    /// Wraps an explicit element list, checking that it is a subgroup.
    pub fn from_elements(alg: MatAlgebra, mut elements: Vec<Mat>) -> Result<MatGroup> {
        elements.sort();
        elements.dedup();
        let gens = extract_generators(&alg, &elements)?;
        Ok(MatGroup {
            alg,
            elements,
            generators: OnceLock::from(gens),
        })
    }

    // Caller guarantees `elements` is a sorted, duplicate-free subgroup.
    fn from_sorted_subgroup(alg: MatAlgebra, elements: Vec<Mat>) -> MatGroup {
        MatGroup {
            alg,
            elements,
            generators: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &MatAlgebra {
        &self.alg
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        self.alg.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        self.alg.ring().ideal()
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.elements.len())
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.index_of(m).is_some()
    }

    /// Generators as supplied, or extracted greedily for groups built by
    /// enumeration.
    pub fn generators(&self) -> &[Mat] {
        self.generators
            .get_or_init(|| extract_generators(&self.alg, &self.elements).expect("enumerated sets are subgroups"))
    }

    /// Image under entrywise reduction to A/b, for b | a.
    pub fn reduce(&self, b: &Ideal, cap: usize) -> Result<MatGroup> {
        let a = self.ideal();
        if !b.divides(a)? {
            return Err(Error::NotDivisible {
                divisor: b.to_string(),
                dividend: a.to_string(),
            });
        }
        let target = MatAlgebra::new(ResidueRing::new(b)?, self.rank());
        let gens: Vec<Mat> = self
            .generators()
            .iter()
            .map(|g| self.alg.reduce(g, &target))
            .filter(|g| !target.is_identity(g))
            .collect();
        let image = MatGroup::closure(target, gens, cap)?;
        if !self.order().is_multiple_of(image.order()) {
            return Err(Error::IdentityFailed(format!(
                "image order {} does not divide {}",
                image.order(),
                self.order()
            )));
        }
        Ok(image)
    }

    /// Image under reduction computed elementwise (no generators involved).
    pub fn reduce_elementwise(&self, b: &Ideal) -> Result<MatGroup> {
        if !b.divides(self.ideal())? {
            return Err(Error::NotDivisible {
                divisor: b.to_string(),
                dividend: self.ideal().to_string(),
            });
        }
        let target = MatAlgebra::new(ResidueRing::new(b)?, self.rank());
        let mut image: Vec<Mat> = self.elements.iter().map(|g| self.alg.reduce(g, &target)).collect();
        image.sort();
        image.dedup();
        Ok(MatGroup::from_sorted_subgroup(target, image))
    }

    /// Full preimage in GL_r(A/a) under reduction A/a -> A/b (b the ring of
    /// self), enumerated as cosets `K * lift(h)` of the congruence kernel K.
    pub fn preimage(&self, a: &Ideal, cap: usize) -> Result<MatGroup> {
        let b = self.ideal();
        if !b.divides(a)? {
            return Err(Error::NotDivisible {
                divisor: b.to_string(),
                dividend: a.to_string(),
            });
        }
        let kernel_order = exact_div(&gl_order(self.rank(), a)?, &gl_order(self.rank(), b)?, "|ker|")?;
        let expected = kernel_order.clone() * self.order_big();
        if expected > BigUint::from(cap) {
            return Err(Error::CapExceeded { cap });
        }
        let target = MatAlgebra::new(ResidueRing::new(a)?, self.rank());
        let kernel = congruence_kernel(&target, b, cap)?;
        if BigUint::from(kernel.len()) != kernel_order {
            return Err(Error::IdentityFailed(format!(
                "congruence kernel has {} elements, expected {kernel_order}",
                kernel.len()
            )));
        }
        let mut elements = Vec::with_capacity(kernel.len() * self.order());
        let offsets = target.ring().ideal_elements(b);
        for h in &self.elements {
            let lift = invertible_lift(&target, h, &offsets);
            for k in &kernel {
                elements.push(target.mul(k, &lift));
            }
        }
        elements.sort();
        let before = elements.len();
        elements.dedup();
        if elements.len() != before || BigUint::from(elements.len()) != expected {
            return Err(Error::IdentityFailed(format!(
                "preimage has {} elements, expected {expected}",
                elements.len()
            )));
        }
        Ok(MatGroup::from_sorted_subgroup(target, elements))
    }

    /// Full preimage in GL_r(A/a) found by testing every r x r matrix over
    /// A/a: keeps the invertible ones whose reduction lies in `self`.
    pub fn preimage_by_filter(&self, a: &Ideal, cap: usize) -> Result<MatGroup> {
        let b = self.ideal();
        if !b.divides(a)? {
            return Err(Error::NotDivisible {
                divisor: b.to_string(),
                dividend: a.to_string(),
            });
        }
        let target = MatAlgebra::new(ResidueRing::new(a)?, self.rank());
        let size = target.ring().size();
        let n = self.rank() * self.rank();
        if (size as u128).checked_pow(n as u32).is_none_or(|c| c > cap as u128) {
            return Err(Error::CapExceeded { cap });
        }
        let mut entries = vec![0u64; n];
        let mut elements = Vec::new();
        // odometer order is ascending in the canonical order
        loop {
            let m = Mat::from_entries(&entries);
            if target.is_invertible(&m) && self.contains(&target.reduce(&m, &self.alg)) {
                elements.push(m);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(MatGroup::from_sorted_subgroup(target, elements));
                }
                k -= 1;
                entries[k] += 1;
                if entries[k] < size {
                    break;
                }
                entries[k] = 0;
            }
        }
    }

    /// `{lambda unit : lambda I in H}` via membership tests, ascending.
    pub fn scalar_subgroup(&self) -> Vec<u64> {
        self.ring()
            .units()
            .into_iter()
            .filter(|&u| self.contains(&self.alg.scalar(u)))
            .collect()
    }

    /// Scalar matrices found by scanning every element, ascending.
    pub fn scalar_scan(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.elements.iter().filter_map(|m| self.alg.scalar_value(m)).collect();
        out.sort_unstable();
        out
    }

    /// Splits along A/(bc) = A/b x A/c for coprime b, c.
    pub fn crt_split(&self, b: &Ideal, c: &Ideal) -> Result<CrtSplit> {
        if !b.gcd(c)?.is_unit() {
            return Err(Error::NotCoprime(b.to_string(), c.to_string()));
        }
        if b.mul(c)? != *self.ideal() {
            return Err(Error::NotDivisible {
                divisor: format!("{b} * {c}"),
                dividend: self.ideal().to_string(),
            });
        }
        let left = self.reduce_elementwise(b)?;
        let right = self.reduce_elementwise(c)?;
        let is_direct_product = self.order() == left.order() * right.order();
        Ok(CrtSplit {
            left,
            right,
            is_direct_product,
        })
    }

    /// `true` if every element of `self` lies in `other` (same ambient).
    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.alg == other.alg && self.elements.iter().all(|g| other.contains(g))
    }
}

impl PartialEq for MatGroup {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.elements == other.elements
    }
}

/// An invertible matrix over A/a reducing to `h`, found by adding multiples
/// of b (`offsets`) to the entries of the naive lift in odometer order.
/// The naive lift may be singular when a has primes not dividing b.
fn invertible_lift(target: &MatAlgebra, h: &Mat, offsets: &[u64]) -> Mat {
    let ring = target.ring();
    let base = target.lift(h);
    let n = base.entries().len();
    let mut idx = vec![0usize; n];
    loop {
        let entries: Vec<u64> = (0..n).map(|k| ring.add(base.entries()[k], offsets[idx[k]])).collect();
        let m = Mat::from_entries(&entries);
        if target.is_invertible(&m) {
            return m;
        }
        let mut k = n;
        loop {
            assert!(k > 0, "reduction GL(A/a) -> GL(A/b) is onto");
            k -= 1;
            idx[k] += 1;
            if idx[k] < offsets.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Greedy generating set: scan `elements` in order, keep every element not
/// yet in the span of those kept. Fails if the span leaves `elements`.
fn extract_generators(alg: &MatAlgebra, elements: &[Mat]) -> Result<Vec<Mat>> {
    let id = alg.identity();
    if elements.binary_search(&id).is_err() {
        return Err(Error::SubgroupViolation("identity missing".into()));
    }
    let mut set = HashSet::from([id.clone()]);
    let mut list = vec![id];
    let mut gens: Vec<Mat> = Vec::new();
    for x in elements {
        if set.contains(x) {
            continue;
        }
        gens.push(x.clone());
        let start = list.len();
        for k in 0..start {
            let y = alg.mul(&list[k], x);
            if set.insert(y.clone()) {
                list.push(y);
            }
        }
        bfs_extend(alg, &mut set, &mut list, &gens, start, usize::MAX)?;
        if list[start..].iter().any(|y| elements.binary_search(y).is_err()) {
            return Err(Error::SubgroupViolation(
                "set is not closed under multiplication".into(),
            ));
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::RingSpec;
    use crate::orders::gl_order;

    fn alg(n: u64) -> MatAlgebra {
        MatAlgebra::new(ResidueRing::new(&Ideal::integer(n).unwrap()).unwrap(), 2)
    }

    fn z(n: u64) -> Ideal {
        Ideal::integer(n).unwrap()
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = MatGroup::closure(alg(5), vec![], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn gl2_mod2_from_transvection_and_swap() {
        let a = alg(2);
        let gens = vec![Mat::from_entries(&[1, 1, 0, 1]), Mat::from_entries(&[0, 1, 1, 0])];
        assert_eq!(MatGroup::closure(a, gens, DEFAULT_CAP).unwrap().order(), 6);
    }

    #[test]
    fn order_two_transvection_mod4() {
        let a = alg(4);
        let g = a.elementary(0, 1, 2);
        assert_eq!(MatGroup::closure(a, vec![g], DEFAULT_CAP).unwrap().order(), 2);
    }

    #[test]
    fn non_invertible_generator_rejected() {
        let a = alg(4);
        let err = MatGroup::closure(a, vec![Mat::from_entries(&[2, 0, 0, 1])], DEFAULT_CAP);
        assert!(matches!(err, Err(Error::NotInvertible(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let err = MatGroup::full_linear(alg(5), 100).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 100 });
    }

    #[test]
    fn standard_generators_match_order_formula() {
        for n in 1..=16 {
            let g = MatGroup::full_linear(alg(n), DEFAULT_CAP).unwrap();
            assert_eq!(g.order_big(), gl_order(2, &z(n)).unwrap(), "n={n}");
        }
    }

    #[test]
    fn reduction_examples() {
        let gl4 = MatGroup::full_linear(alg(4), DEFAULT_CAP).unwrap();
        assert_eq!(gl4.reduce(&z(2), DEFAULT_CAP).unwrap().order(), 6);
        let trivial = MatGroup::trivial(alg(4));
        assert_eq!(trivial.reduce(&z(2), DEFAULT_CAP).unwrap().order(), 1);
        let kernel = MatGroup::from_elements(alg(4), congruence_kernel(&alg(4), &z(2), DEFAULT_CAP).unwrap()).unwrap();
        assert_eq!(kernel.order(), 16);
        assert_eq!(kernel.reduce(&z(2), DEFAULT_CAP).unwrap().order(), 1);
        assert!(matches!(
            gl4.reduce(&z(3), DEFAULT_CAP),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn preimage_examples() {
        let trivial2 = MatGroup::trivial(alg(2));
        assert_eq!(trivial2.preimage(&z(4), DEFAULT_CAP).unwrap().order(), 16);
        let gl2 = MatGroup::full_linear(alg(2), DEFAULT_CAP).unwrap();
        let pre = gl2.preimage(&z(4), DEFAULT_CAP).unwrap();
        assert_eq!(pre.order(), 96);
        assert_eq!(pre, MatGroup::full_linear(alg(4), DEFAULT_CAP).unwrap());
        assert_eq!(gl2.preimage(&z(2), DEFAULT_CAP).unwrap(), gl2);
        // a prime of a not dividing b: kernel is GL_2(Z/3)
        assert_eq!(trivial2.preimage(&z(6), DEFAULT_CAP).unwrap().order(), 48);
    }

    #[test]
    fn preimage_with_singular_naive_lift() {
        // diag(2, 1) is invertible mod 7 but not mod 14
        let h = MatGroup::closure(alg(7), vec![Mat::from_entries(&[2, 0, 0, 1])], DEFAULT_CAP).unwrap();
        let pre = h.preimage(&z(14), DEFAULT_CAP).unwrap();
        assert_eq!(pre.order(), 3 * 6);
        assert!(pre.elements().iter().all(|m| pre.algebra().is_invertible(m)));
        assert_eq!(pre.reduce_elementwise(&z(7)).unwrap(), h);
        let zero_ring = MatGroup::trivial(alg(1));
        assert_eq!(zero_ring.preimage(&z(5), DEFAULT_CAP).unwrap().order(), 480);
    }

    #[test]
    fn preimage_routes_agree() {
        let swap = MatGroup::closure(alg(2), vec![Mat::from_entries(&[0, 1, 1, 0])], DEFAULT_CAP).unwrap();
        for a in [2, 4, 6, 10] {
            assert_eq!(
                swap.preimage(&z(a), DEFAULT_CAP).unwrap(),
                swap.preimage_by_filter(&z(a), DEFAULT_CAP).unwrap()
            );
        }
        assert!(matches!(
            swap.preimage_by_filter(&z(40), 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn reduce_after_preimage_is_identity() {
        let gl2 = MatGroup::full_linear(alg(2), DEFAULT_CAP).unwrap();
        let swap = MatGroup::closure(alg(2), vec![Mat::from_entries(&[0, 1, 1, 0])], DEFAULT_CAP).unwrap();
        for h in [gl2, swap, MatGroup::trivial(alg(2))] {
            for a in [4, 6, 8, 12] {
                let back = h
                    .preimage(&z(a), DEFAULT_CAP)
                    .unwrap()
                    .reduce(&z(2), DEFAULT_CAP)
                    .unwrap();
                assert_eq!(back, h);
            }
        }
    }

    #[test]
    fn scalar_examples() {
        let gl12 = MatGroup::full_linear(alg(12), DEFAULT_CAP).unwrap();
        assert_eq!(gl12.scalar_subgroup(), vec![1, 5, 7, 11]);
        assert_eq!(gl12.scalar_scan(), vec![1, 5, 7, 11]);
        let kernel = MatGroup::trivial(alg(2)).preimage(&z(4), DEFAULT_CAP).unwrap();
        assert_eq!(kernel.scalar_subgroup(), vec![1, 3]);
        assert_eq!(MatGroup::trivial(alg(7)).scalar_subgroup(), vec![1]);
    }

    #[test]
    fn crt_split_of_gl2_mod6() {
        let gl6 = MatGroup::full_linear(alg(6), DEFAULT_CAP).unwrap();
        let split = gl6.crt_split(&z(2), &z(3)).unwrap();
        assert_eq!((split.left.order(), split.right.order()), (6, 48));
        assert!(split.is_direct_product);
        assert_eq!(gl6.order(), 288);
        assert!(matches!(gl6.crt_split(&z(2), &z(2)), Err(Error::NotCoprime(..))));
        let t = MatGroup::trivial(alg(6)).crt_split(&z(3), &z(2)).unwrap();
        assert_eq!((t.left.order(), t.right.order()), (1, 1));
    }

    #[test]
    fn from_elements_rejects_non_groups() {
        let a = alg(3);
        let not_closed = vec![a.identity(), a.elementary(0, 1, 1)];
        assert!(matches!(
            MatGroup::from_elements(a.clone(), not_closed),
            Err(Error::SubgroupViolation(_))
        ));
        let no_identity = vec![a.elementary(0, 1, 1)];
        assert!(MatGroup::from_elements(a, no_identity).is_err());
    }

    #[test]
    fn extracted_generators_regenerate() {
        let gl = MatGroup::full_linear(alg(6), DEFAULT_CAP).unwrap();
        let rebuilt = MatGroup::from_elements(gl.algebra().clone(), gl.elements().to_vec()).unwrap();
        let again = MatGroup::closure(gl.algebra().clone(), rebuilt.generators().to_vec(), DEFAULT_CAP).unwrap();
        assert_eq!(again, gl);
    }

    #[test]
    fn polynomial_ring_gl() {
        let ring = RingSpec::polynomial(2).unwrap();
        let t2 = Ideal::polynomial(&ring, vec![0, 0, 1]).unwrap();
        let a = MatAlgebra::new(ResidueRing::new(&t2).unwrap(), 2);
        let g = MatGroup::full_linear(a, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 96);
        assert_eq!(g.scalar_subgroup().len(), 2);
    }
}
