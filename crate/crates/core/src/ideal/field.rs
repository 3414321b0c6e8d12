//! Finite fields F_q for prime-power q.
//!
//! An element of F_{p^e} is stored as the integer `sum d_i p^i` of its
//! coordinate vector in F_p[x]/(g), where g is the lexicographically least
//! monic irreducible of degree e. Multiplication goes through discrete
//! log/exp tables built from the smallest primitive element.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order we build tables for.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over F_p, ascending coefficients, length e + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for FiniteField {}

/// Returns `(p, e)` with `q = p^e`, or `None` if q is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        return Some((q, 1));
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

// Polynomial remainder over the prime field, used only during table setup.
fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - c as u64 * bi as u64 % p as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    trim(&mut out);
    out
}

fn monic_of_degree(p: u32, d: u32, index: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(d as usize + 1);
    let mut idx = index;
    for _ in 0..d {
        v.push(idx % p);
        idx /= p;
    }
    v.push(1);
    v
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let d = (f.len() - 1) as u32;
    for dd in 1..=d / 2 {
        for idx in 0..p.pow(dd) {
            let g = monic_of_degree(p, dd, idx);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidRing(format!("q = {q} is not a prime power")))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::InvalidRing(format!(
                "q = {q} exceeds supported field order {MAX_FIELD_ORDER}"
            )));
        }
        // Index order of `monic_of_degree` is lexicographic on (c_{e-1}, ..., c_0).
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(e))
                .map(|idx| monic_of_degree(p, e, idx))
                .find(|cand| fp_is_irreducible(cand, p))
                .expect("an irreducible polynomial of every degree exists")
        };

        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let prod = fp_mul(&pa, &pb, self.p);
        let rem = if self.e == 1 {
            prod
        } else {
            fp_rem(&prod, &self.modulus, self.p)
        };
        self.undigits(&rem)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let mut generator = None;
        'search: for g in 1..self.q {
            let mut x = 1u32;
            for k in 1..=order {
                x = self.slow_mul(x, g);
                if x == 1 {
                    if k == order {
                        generator = Some(g);
                        break 'search;
                    }
                    continue 'search;
                }
            }
        }
        let g = generator.expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = self.slow_mul(x, g);
        }
        self.exp = exp;
        self.log = log;
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut rest = a;
        for _ in 0..self.e {
            v.push(rest % self.p);
            rest /= self.p;
        }
        trim(&mut v);
        v
    }

    fn undigits(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Defining polynomial of F_q over F_p (ascending coefficients).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (mut x, mut out, mut place) = (a, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.q);
        let order = self.q - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    /// The element `k * 1` of the prime subfield.
    pub fn from_int(&self, k: u64) -> u32 {
        (k % self.p as u64) as u32
    }

    /// An F_p-basis of F_q: the codes of 1, x, ..., x^{e-1}.
    pub fn additive_basis(&self) -> Vec<u32> {
        (0..self.e).map(|i| self.p.pow(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn rejects_non_prime_power() {
        assert!(matches!(FiniteField::new(6), Err(Error::InvalidRing(_))));
        assert!(FiniteField::new(1).is_err());
    }

    #[test]
    fn lexicographically_least_moduli() {
        // x^2 + 1 is irreducible over F_3 and is the least monic quadratic
        // without roots (x^2 has root 0).
        assert_eq!(FiniteField::new(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn field_axioms_small_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for c in 0..q.min(5) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = FiniteField::new(27).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                assert_eq!(f.pow(f.add(a, b), 3), f.add(f.pow(a, 3), f.pow(b, 3)));
            }
        }
    }
}
