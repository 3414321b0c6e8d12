//! Finite quotient rings A/a.
//!
//! Every element is a `u64` code in `[0, |a|)`: the least nonnegative residue
//! for Z/n, and `sum c_i q^i` for a polynomial residue of degree below
//! `deg a`. Codes of a quotient ring are also valid lifts into any larger
//! ring A/b with a | b.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::{format_poly, int, parse_poly, FiniteField, Ideal, Poly, RingSpec};

// Build add/mul tables for polynomial quotients up to this size.
const TABLE_LIMIT: u64 = 1024;

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

enum Repr {
    Int {
        n: u64,
    },
    Poly {
        field: Arc<FiniteField>,
        modulus: Poly,
        tables: Option<Tables>,
    },
}

pub struct ResidueRing {
    ideal: Ideal,
    size: u64,
    repr: Repr,
}

impl fmt::Debug for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/({})", self.ideal.ring(), self.ideal)
    }
}

impl PartialEq for ResidueRing {
    fn eq(&self, other: &Self) -> bool {
        self.ideal == other.ideal
    }
}

impl Eq for ResidueRing {}

impl ResidueRing {
    pub fn new(ideal: &Ideal) -> Result<Arc<Self>> {
        let size = ideal
            .norm_u64()
            .ok_or_else(|| Error::Overflow(format!("|A/({ideal})| exceeds 64 bits")))?;
        let repr = match ideal.ring() {
            RingSpec::Integers => Repr::Int { n: size },
            RingSpec::Polynomial(field) => {
                let modulus = ideal.poly_generator().unwrap().clone();
                let mut repr = Repr::Poly {
                    field: field.clone(),
                    modulus,
                    tables: None,
                };
                if size <= TABLE_LIMIT {
                    let tmp = ResidueRing {
                        ideal: ideal.clone(),
                        size,
                        repr,
                    };
                    let tables = tmp.build_tables();
                    repr = tmp.repr;
                    if let Repr::Poly { tables: t, .. } = &mut repr {
                        *t = Some(tables);
                    }
                }
                repr
            }
        };
        Ok(Arc::new(ResidueRing {
            ideal: ideal.clone(),
            size,
            repr,
        }))
    }

    fn build_tables(&self) -> Tables {
        let n = self.size as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..n {
            neg[a] = self.slow_neg(a as u64) as u32;
            for b in 0..n {
                add[a * n + b] = self.slow_add(a as u64, b as u64) as u32;
                mul[a * n + b] = self.slow_mul(a as u64, b as u64) as u32;
            }
        }
        Tables { add, mul, neg }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// `|A/a|`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn zero(&self) -> u64 {
        0
    }

    /// In the zero ring 1 = 0.
    pub fn one(&self) -> u64 {
        if self.size == 1 {
            0
        } else {
            1
        }
    }

    fn q(&self) -> u32 {
        match &self.repr {
            Repr::Poly { field, .. } => field.order(),
            Repr::Int { .. } => unreachable!(),
        }
    }

    pub fn to_poly(&self, x: u64) -> Poly {
        Poly::decode(x, self.q())
    }

    fn encode_poly(&self, p: &Poly) -> u64 {
        match &self.repr {
            Repr::Poly { field, modulus, .. } => p.rem(modulus, field).encode(field.order()).unwrap(),
            Repr::Int { .. } => unreachable!(),
        }
    }

    fn slow_add(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Int { n } => ((a as u128 + b as u128) % *n as u128) as u64,
            Repr::Poly { field, .. } => self.encode_poly(&self.to_poly(a).add(&self.to_poly(b), field)),
        }
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Int { n } => int::mul_mod(a, b, *n),
            Repr::Poly { field, .. } => self.encode_poly(&self.to_poly(a).mul(&self.to_poly(b), field)),
        }
    }

    fn slow_neg(&self, a: u64) -> u64 {
        match &self.repr {
            Repr::Int { n } => {
                if a == 0 {
                    0
                } else {
                    n - a
                }
            }
            Repr::Poly { field, .. } => self.encode_poly(&Poly::zero().sub(&self.to_poly(a), field)),
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Int { n } => {
                let (s, over) = a.overflowing_add(b);
                if over || s >= *n {
                    s.wrapping_sub(*n)
                } else {
                    s
                }
            }
            Repr::Poly { tables: Some(t), .. } => t.add[(a * self.size + b) as usize] as u64,
            Repr::Poly { .. } => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match &self.repr {
            Repr::Poly { tables: Some(t), .. } => t.neg[a as usize] as u64,
            _ => self.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Int { n } => {
                if *n <= u32::MAX as u64 {
                    a * b % n
                } else {
                    int::mul_mod(a, b, *n)
                }
            }
            Repr::Poly { tables: Some(t), .. } => t.mul[(a * self.size + b) as usize] as u64,
            Repr::Poly { .. } => self.slow_mul(a, b),
        }
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Unit test: gcd(representative, generator) = (1).
    pub fn is_unit(&self, a: u64) -> bool {
        match &self.repr {
            Repr::Int { n } => int::gcd(a, *n) == 1 || *n == 1,
            Repr::Poly { field, modulus, .. } => modulus.is_one() || self.to_poly(a).gcd(modulus, field).is_one(),
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if self.size == 1 {
            return Some(0);
        }
        match &self.repr {
            Repr::Int { n } => {
                // extended Euclid on i128
                let (mut r0, mut r1) = (*n as i128, a as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                (r0 == 1).then(|| s0.rem_euclid(*n as i128) as u64)
            }
            Repr::Poly { field, modulus, .. } => {
                let (g, s) = self.to_poly(a).ext_gcd(modulus, field);
                g.is_one().then(|| s.encode(field.order()).unwrap())
            }
        }
    }

    /// Codes of all units, ascending.
    pub fn units(&self) -> Vec<u64> {
        (0..self.size).filter(|&x| self.is_unit(x)).collect()
    }

    /// Image of an element under A/self -> A/target, where target | self.
    pub fn reduce_to(&self, x: u64, target: &ResidueRing) -> u64 {
        match (&self.repr, &target.repr) {
            (Repr::Int { .. }, Repr::Int { n }) => x % n,
            (Repr::Poly { .. }, Repr::Poly { .. }) => target.encode_poly(&self.to_poly(x)),
            _ => unreachable!("reduction across ring kinds"),
        }
    }

    /// Additive generators of the ideal (d)/(a) inside A/a, for d | a.
    /// For Z this is {d}; for F_q[T] it is an F_p-basis `d * c * T^k`.
    pub fn ideal_additive_generators(&self, d: &Ideal) -> Vec<u64> {
        match &self.repr {
            Repr::Int { n } => {
                let d = d.int_generator().unwrap();
                if d.is_multiple_of(*n) {
                    Vec::new()
                } else {
                    vec![d % n]
                }
            }
            Repr::Poly { field, modulus, .. } => {
                let dp = d.poly_generator().unwrap();
                let span = modulus.degree().unwrap() - dp.degree().unwrap();
                let mut out = Vec::new();
                for k in 0..span {
                    for c in field.additive_basis() {
                        out.push(self.encode_poly(&Poly::monomial(c, k).mul(dp, field)));
                    }
                }
                out
            }
        }
    }

    /// All elements of (d)/(a) inside A/a, ascending, for d | a.
    pub fn ideal_elements(&self, d: &Ideal) -> Vec<u64> {
        match &self.repr {
            Repr::Int { n } => {
                let d = d.int_generator().unwrap();
                (0..n / d).map(|t| t * d).collect()
            }
            Repr::Poly { field, modulus, .. } => {
                let dp = d.poly_generator().unwrap();
                let span = modulus.degree().unwrap() - dp.degree().unwrap();
                let count = (field.order() as u64).pow(span as u32);
                let mut out: Vec<u64> = (0..count)
                    .map(|t| self.encode_poly(&Poly::decode(t, field.order()).mul(dp, field)))
                    .collect();
                out.sort_unstable();
                out
            }
        }
    }

    pub fn format_element(&self, x: u64) -> String {
        match &self.repr {
            Repr::Int { .. } => x.to_string(),
            Repr::Poly { field, .. } => format_poly(field.order(), self.to_poly(x).coeffs()),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<u64> {
        match &self.repr {
            Repr::Int { n } => {
                let s = s.trim();
                let v: i128 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("not an integer residue: {s:?}")))?;
                Ok(v.rem_euclid(*n as i128) as u64)
            }
            Repr::Poly { field, .. } => {
                let (q, coeffs) = parse_poly(s)?;
                if q != field.order() {
                    return Err(Error::RingMismatch(format!(
                        "residue over F_{q} in a ring over F_{}",
                        field.order()
                    )));
                }
                Ok(self.encode_poly(&Poly::new(coeffs)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_units() {
        let r = ResidueRing::new(&Ideal::integer(12).unwrap()).unwrap();
        assert_eq!(r.units(), vec![1, 5, 7, 11]);
        for u in r.units() {
            assert_eq!(r.mul(u, r.inv(u).unwrap()), 1);
        }
        assert_eq!(r.inv(4), None);
    }

    #[test]
    fn poly_units_t2_plus_t() {
        let ring = RingSpec::polynomial(2).unwrap();
        let r = ResidueRing::new(&Ideal::polynomial(&ring, vec![0, 1, 1]).unwrap()).unwrap();
        assert_eq!(r.size(), 4);
        // only 1 is a unit: T and T+1 are zero divisors, T^2+T = 0
        assert_eq!(r.units(), vec![1]);
    }

    #[test]
    fn tables_agree_with_direct_arithmetic() {
        let ring = RingSpec::polynomial(3).unwrap();
        let r = ResidueRing::new(&Ideal::polynomial(&ring, vec![1, 0, 1]).unwrap()).unwrap();
        for a in 0..r.size() {
            for b in 0..r.size() {
                assert_eq!(r.mul(a, b), r.slow_mul(a, b));
                assert_eq!(r.add(a, b), r.slow_add(a, b));
            }
        }
        // F_9: all nonzero elements are units
        assert_eq!(r.units().len(), 8);
    }

    #[test]
    fn zero_ring() {
        let r = ResidueRing::new(&Ideal::integer(1).unwrap()).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.one(), r.zero());
        assert!(r.is_unit(0));
        assert_eq!(r.inv(0), Some(0));
    }

    #[test]
    fn reduction_and_ideal_elements() {
        let r12 = ResidueRing::new(&Ideal::integer(12).unwrap()).unwrap();
        let r4 = ResidueRing::new(&Ideal::integer(4).unwrap()).unwrap();
        assert_eq!(r12.reduce_to(11, &r4), 3);
        assert_eq!(r12.ideal_elements(&Ideal::integer(4).unwrap()), vec![0, 4, 8]);

        let ring = RingSpec::polynomial(2).unwrap();
        let t3 = ResidueRing::new(&Ideal::polynomial(&ring, vec![0, 0, 0, 1]).unwrap()).unwrap();
        let t = Ideal::polynomial(&ring, vec![0, 1]).unwrap();
        // multiples of T mod T^3: 0, T, T^2, T + T^2 -> codes 0, 2, 4, 6
        assert_eq!(t3.ideal_elements(&t), vec![0, 2, 4, 6]);
        assert_eq!(t3.ideal_additive_generators(&t), vec![2, 4]);
    }

    #[test]
    fn element_strings() {
        let ring = RingSpec::polynomial(3).unwrap();
        let r = ResidueRing::new(&Ideal::polynomial(&ring, vec![1, 0, 1]).unwrap()).unwrap();
        assert_eq!(r.format_element(5), "q=3;[2,1]");
        assert_eq!(r.parse_element("q=3;[2,1]").unwrap(), 5);
        // T^2 = -1 mod T^2 + 1
        assert_eq!(r.parse_element("q=3;[0,0,1]").unwrap(), 2);
        assert!(r.parse_element("q=5;[1]").is_err());
        let z = ResidueRing::new(&Ideal::integer(7).unwrap()).unwrap();
        assert_eq!(z.parse_element("-1").unwrap(), 6);
    }
}
