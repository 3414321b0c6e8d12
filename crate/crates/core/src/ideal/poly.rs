//! Dense univariate polynomials over F_q and their factorization.
//!
//! Factoring follows the usual pipeline: squarefree decomposition,
//! distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting
//! driven by a PRNG seeded from the polynomial itself so results are
//! reproducible run to run.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::FiniteField;

/// Polynomial with ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// Order by degree, then coefficients from the top down. For monic
/// polynomials of equal degree this is the order of `encode`.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: u32) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Base-q integer `sum c_i q^i`, if it fits in 64 bits.
    pub fn encode(&self, q: u32) -> Option<u64> {
        let mut acc: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(q as u64)?.checked_add(c as u64)?;
        }
        Some(acc)
    }

    pub fn decode(mut code: u64, q: u32) -> Self {
        let mut v = Vec::new();
        while code > 0 {
            v.push((code % q as u64) as u32);
            code /= q as u64;
        }
        Poly { coeffs: v }
    }

    pub fn add(&self, other: &Poly, f: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: u32, f: &FiniteField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &FiniteField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, divisor: &Poly, f: &FiniteField) -> (Poly, Poly) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + db], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, b));
            }
        }
        rem.truncate(db);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &FiniteField) -> Poly {
        self.divrem(divisor, f).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly, f: &FiniteField) -> Poly {
        let (q, r) = self.divrem(divisor, f);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, f: &FiniteField) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(f.inv(self.lead()), f)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly, f: &FiniteField) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s * self = g mod m`.
    pub fn ext_gcd(&self, m: &Poly, f: &FiniteField) -> (Poly, Poly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m, f));
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            let s = s0.sub(&q.mul(&s1, f), f);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero());
        }
        let c = f.inv(r0.lead());
        (r0.scale(c, f), s0.scale(c, f).rem(m, f))
    }

    pub fn derivative(&self, f: &FiniteField) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as u64), c))
                .collect(),
        )
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly, f: &FiniteField) -> Poly {
        self.mul(other, f).rem(m, f)
    }

    pub fn pow_mod(&self, mut exp: u64, m: &Poly, f: &FiniteField) -> Poly {
        let mut base = self.rem(m, f);
        let mut acc = Poly::one().rem(m, f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, m, f);
            }
            base = base.mul_mod(&base, m, f);
            exp >>= 1;
        }
        acc
    }

    /// Rabin's test. Units and zero are not irreducible.
    pub fn is_irreducible(&self, f: &FiniteField) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let m = self.monic(f);
        let q = f.order() as u64;
        let x = Poly::x();
        // frob[k] = x^{q^k} mod m
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(x.rem(&m, f));
        for k in 1..=n {
            let next = frob[k - 1].pow_mod(q, &m, f);
            frob.push(next);
        }
        if frob[n] != x.rem(&m, f) {
            return false;
        }
        prime_divisors(n).into_iter().all(|p| {
            let h = frob[n / p].sub(&x, f);
            m.gcd(&h, f).is_one()
        })
    }

    /// Complete factorization of a nonzero polynomial into monic irreducibles,
    /// sorted. The leading coefficient is dropped.
    pub fn factor(&self, f: &FiniteField) -> Vec<(Poly, u32)> {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let m = self.monic(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed_from(&m, f.order()));
        let mut out = Vec::new();
        for (sqfree, mult) in squarefree_decomposition(&m, f) {
            for (block, d) in distinct_degree(&sqfree, f) {
                for irreducible in equal_degree(&block, d, f, &mut rng) {
                    out.push((irreducible, mult));
                }
            }
        }
        out.sort();
        out
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn seed_from(p: &Poly, q: u32) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    q.hash(&mut h);
    p.coeffs.hash(&mut h);
    h.finish()
}

// p-th root of a polynomial whose derivative vanishes.
fn pth_root(c: &Poly, f: &FiniteField) -> Poly {
    let p = f.characteristic() as usize;
    let root_exp = (f.order() / f.characteristic()) as u64;
    Poly::new(c.coeffs.iter().step_by(p).map(|&a| f.pow(a, root_exp)).collect())
}

/// Squarefree parts with multiplicities for a monic polynomial.
pub fn squarefree_decomposition(m: &Poly, f: &FiniteField) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if m.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = m.derivative(f);
    let mut c = m.gcd(&d, f);
    let mut w = m.div_exact(&c, f);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, f);
        let fac = w.div_exact(&y, f);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w, f);
        i += 1;
    }
    if !c.is_one() {
        let p = f.characteristic();
        for (g, j) in squarefree_decomposition(&pth_root(&c, f), f) {
            out.push((g, j * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of a
/// common degree.
pub fn distinct_degree(g: &Poly, f: &FiniteField) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    let q = f.order() as u64;
    let mut h = Poly::x().rem(&rest, f);
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(q, &rest, f);
        let d = rest.gcd(&h.sub(&Poly::x(), f), f);
        if !d.is_one() {
            rest = rest.div_exact(&d, f);
            h = h.rem(&rest, f);
            out.push((d, i));
        }
        i += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

fn random_poly_below(deg: usize, f: &FiniteField, rng: &mut ChaCha8Rng) -> Poly {
    Poly::new((0..deg).map(|_| rng.gen_range(0..f.order())).collect())
}

// Cantor-Zassenhaus on a product of distinct irreducibles of degree d.
fn equal_degree(g: &Poly, d: usize, f: &FiniteField, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = g.degree().expect("nonzero");
    if n == d {
        return vec![g.clone()];
    }
    let q = f.order() as u64;
    loop {
        let a = random_poly_below(n, f, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.characteristic() == 2 {
            // absolute trace to F_2: sum of a^{2^i}, i < e*d
            let mut term = a.rem(g, f);
            let mut acc = term.clone();
            for _ in 1..(f.degree() as usize * d) {
                term = term.mul_mod(&term, g, f);
                acc = acc.add(&term, f);
            }
            acc
        } else {
            // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
            let mut conj = a.rem(g, f);
            let mut norm = conj.clone();
            for _ in 1..d {
                conj = conj.pow_mod(q, g, f);
                norm = norm.mul_mod(&conj, g, f);
            }
            norm.pow_mod((q - 1) / 2, g, f).sub(&Poly::one(), f)
        };
        let h = g.gcd(&b, f);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let mut out = equal_degree(&h, d, f, rng);
            out.extend(equal_degree(&g.div_exact(&h, f), d, f, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> FiniteField {
        FiniteField::new(q).unwrap()
    }

    fn expand(factors: &[(Poly, u32)], field: &FiniteField) -> Poly {
        factors
            .iter()
            .fold(Poly::one(), |acc, (p, e)| (0..*e).fold(acc, |a, _| a.mul(p, field)))
    }

    #[test]
    fn t3_plus_t_over_f2() {
        let f2 = f(2);
        let g = Poly::new(vec![0, 1, 0, 1]);
        let factors = g.factor(&f2);
        assert_eq!(factors, vec![(Poly::new(vec![0, 1]), 1), (Poly::new(vec![1, 1]), 2)]);
        assert_eq!(expand(&factors, &f2), g);
    }

    #[test]
    fn gcd_is_monic() {
        let f2 = f(2);
        let a = Poly::new(vec![0, 0, 1]);
        let b = Poly::new(vec![0, 1, 1]);
        assert_eq!(a.gcd(&b, &f2), Poly::x());
        let f5 = f(5);
        let a = Poly::new(vec![0, 3]);
        let b = Poly::new(vec![0, 0, 2]);
        assert_eq!(a.gcd(&b, &f5), Poly::x());
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for q in [2u32, 3, 4] {
            let field = f(q);
            for deg in 1..=4usize {
                let count = (q as u64).pow(deg as u32);
                for idx in 0..count {
                    let mut c = Poly::decode(idx, q).coeffs().to_vec();
                    c.resize(deg, 0);
                    c.push(1);
                    let p = Poly::new(c);
                    let factors = p.factor(&field);
                    let by_factor = factors.len() == 1 && factors[0].1 == 1;
                    assert_eq!(p.is_irreducible(&field), by_factor, "{p:?} over F_{q}");
                    assert_eq!(expand(&factors, &field), p);
                }
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n over F_q = (1/n) sum_{d|n} mu(d) q^{n/d}
        let mobius = |n: usize| -> i64 {
            let ps = prime_divisors(n);
            let sq = ps.iter().product::<usize>();
            if sq != n {
                0
            } else if ps.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        };
        for q in [2u32, 3, 5] {
            let field = f(q);
            for n in 1..=5usize {
                let expected: i64 = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| mobius(d) * (q as i64).pow((n / d) as u32))
                    .sum::<i64>()
                    / n as i64;
                let count = (0..(q as u64).pow(n as u32))
                    .filter(|&idx| {
                        let mut c = Poly::decode(idx, q).coeffs().to_vec();
                        c.resize(n, 0);
                        c.push(1);
                        Poly::new(c).is_irreducible(&field)
                    })
                    .count() as i64;
                assert_eq!(count, expected, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn inseparable_factors() {
        // (T^2 + 1)^3 over F_3 needs the p-th root step
        let f3 = f(3);
        let base = Poly::new(vec![1, 0, 1]);
        let cube = base.mul(&base, &f3).mul(&base, &f3);
        assert_eq!(cube.factor(&f3), vec![(base, 3)]);
    }

    #[test]
    fn ext_gcd_inverse() {
        let f3 = f(3);
        let m = Poly::new(vec![1, 0, 1]);
        for code in 1..9u64 {
            let a = Poly::decode(code, 3);
            let (g, s) = a.ext_gcd(&m, &f3);
            assert!(g.is_one());
            assert!(s.mul_mod(&a, &m, &f3).is_one());
        }
    }

    #[test]
    fn encode_roundtrip() {
        let p = Poly::new(vec![1, 0, 2]);
        assert_eq!(p.encode(3), Some(19));
        assert_eq!(Poly::decode(19, 3), p);
    }
}
