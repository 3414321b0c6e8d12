//! Nonzero ideals of Z and F_q[T].
//!
//! Both rings are principal, so an ideal is stored by its canonical
//! generator: a positive integer, or a monic polynomial. Factorizations are
//! computed on demand and cached once per value.

pub mod field;
pub mod int;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
pub use field::FiniteField;
pub use int::FactorBudget;
pub use poly::Poly;

/// The base ring A: either Z or F_q[T].
#[derive(Clone)]
pub enum RingSpec {
    Integers,
    Polynomial(Arc<FiniteField>),
}

impl RingSpec {
    pub fn polynomial(q: u32) -> Result<Self> {
        Ok(RingSpec::Polynomial(Arc::new(FiniteField::new(q)?)))
    }

    pub fn q(&self) -> Option<u32> {
        match self {
            RingSpec::Integers => None,
            RingSpec::Polynomial(f) => Some(f.order()),
        }
    }

    pub fn field(&self) -> Option<&Arc<FiniteField>> {
        match self {
            RingSpec::Integers => None,
            RingSpec::Polynomial(f) => Some(f),
        }
    }

    /// All ideals of norm at most `bound`, ascending by norm and then by
    /// generator.
    pub fn ideals_up_to_norm(&self, bound: u64) -> Vec<Ideal> {
        match self {
            RingSpec::Integers => (1..=bound).map(Ideal::int_unchecked).collect(),
            RingSpec::Polynomial(f) => {
                let q = f.order() as u64;
                let mut out = Vec::new();
                let (mut deg, mut norm) = (0u32, 1u64);
                while norm <= bound {
                    for idx in 0..norm {
                        let mut c = Poly::decode(idx, f.order()).coeffs().to_vec();
                        c.resize(deg as usize, 0);
                        c.push(1);
                        out.push(Ideal::from_poly(f.clone(), Poly::new(c)));
                    }
                    deg += 1;
                    norm = match norm.checked_mul(q) {
                        Some(n) => n,
                        None => break,
                    };
                }
                out
            }
        }
    }

    /// Prime ideals of norm at most `bound`, in iteration order.
    pub fn primes_up_to_norm(&self, bound: u64) -> Vec<Ideal> {
        match self {
            RingSpec::Integers => int::primes_up_to(bound).into_iter().map(Ideal::int_unchecked).collect(),
            RingSpec::Polynomial(f) => self
                .ideals_up_to_norm(bound)
                .into_iter()
                .filter(|i| i.poly_generator().is_some_and(|p| p.is_irreducible(f)))
                .collect(),
        }
    }
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
    }
}

impl Eq for RingSpec {}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Polynomial(fq) => write!(f, "F_{}[T]", fq.order()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Generator {
    Int(u64),
    Poly(Poly),
}

/// A nonzero ideal, stored by canonical generator.
#[derive(Clone)]
pub struct Ideal {
    ring: RingSpec,
    generator: Generator,
    factors: OnceLock<Vec<(Ideal, u32)>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.generator == other.generator
    }
}

impl Eq for Ideal {}

impl Hash for Ideal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.q().hash(state);
        self.generator.hash(state);
    }
}

impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring.q().cmp(&other.ring.q()).then_with(|| {
            match (&self.generator, &other.generator) {
                (Generator::Int(a), Generator::Int(b)) => a.cmp(b),
                // equal degree means equal norm; Poly's order is degree first
                (Generator::Poly(a), Generator::Poly(b)) => a.cmp(b),
                _ => unreachable!("rings compared equal"),
            }
        })
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.generator {
            Generator::Int(n) => write!(f, "{n}"),
            Generator::Poly(p) => {
                write!(f, "{}", format_poly(self.ring.q().unwrap(), p.coeffs()))
            }
        }
    }
}

/// `q=3;[1,0,1]` for 1 + T^2. The zero polynomial is `q=3;[]`.
pub fn format_poly(q: u32, coeffs: &[u32]) -> String {
    let body: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("q={q};[{}]", body.join(","))
}

/// Parses `q=<q>;[c0,c1,...]` into `(q, coefficients)`.
pub fn parse_poly(s: &str) -> Result<(u32, Vec<u32>)> {
    let bad = || Error::Parse(format!("expected q=<q>;[c0,c1,...], got {s:?}"));
    let s = s.trim();
    let rest = s.strip_prefix("q=").ok_or_else(bad)?;
    let (q, list) = rest.split_once(';').ok_or_else(bad)?;
    let q: u32 = q.trim().parse().map_err(|_| bad())?;
    let list = list
        .trim()
        .strip_prefix('[')
        .and_then(|l| l.strip_suffix(']'))
        .ok_or_else(bad)?;
    let coeffs = if list.trim().is_empty() {
        Vec::new()
    } else {
        list.split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?
    };
    if let Some(&c) = coeffs.iter().find(|&&c| c >= q) {
        return Err(Error::Parse(format!("coefficient {c} out of range for q = {q}")));
    }
    Ok((q, coeffs))
}

impl FromStr for Ideal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with("q=") {
            let (q, coeffs) = parse_poly(s)?;
            let ring = RingSpec::polynomial(q)?;
            Ideal::polynomial(&ring, coeffs)
        } else {
            let digits = s.strip_prefix('-').unwrap_or(s);
            let n: u64 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("not an ideal: {s:?}")))?;
            Ideal::integer(n)
        }
    }
}

impl Ideal {
    /// Parses an ideal of `ring`. Polynomial generators may be written as a
    /// bare coefficient list `[c0,c1,...]`.
    pub fn parse_in(ring: &RingSpec, s: &str) -> Result<Ideal> {
        let s = s.trim();
        let ideal: Ideal = match ring.q() {
            Some(q) if s.starts_with('[') => format!("q={q};{s}").parse()?,
            _ => s.parse()?,
        };
        if ideal.ring() != ring {
            return Err(Error::RingMismatch(format!("{ideal} is not an ideal of {ring}")));
        }
        Ok(ideal)
    }
}

/// The triple `a = a11 * a12 * a2` relative to a conductor m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDecomposition {
    /// Primes of m appearing in a with exponent above their exponent in m.
    pub a11: Ideal,
    /// Primes of m appearing in a with exponent at most their exponent in m.
    pub a12: Ideal,
    /// The part of a coprime to m.
    pub a2: Ideal,
}

impl IdealDecomposition {
    pub fn a1(&self) -> Ideal {
        self.a11.mul(&self.a12).expect("a1 divides a")
    }

    /// Every defining property that fails for `(a, m)`; empty when valid.
    pub fn violations(&self, a: &Ideal, m: &Ideal) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if self.a1().mul(&self.a2)? != *a {
            out.push(format!("a11*a12*a2 = {} != {a}", self.a1().mul(&self.a2)?));
        }
        if !self.a2.gcd(m)?.is_unit() {
            out.push("gcd(a2, m) != 1".into());
        }
        if !self.a1().divides_power(m)? {
            out.push("a1 does not divide m^inf".into());
        }
        if !self.a11.divides_power(m)? {
            out.push("a11 does not divide m^inf".into());
        }
        if !self.a11.gcd(&self.a12)?.is_unit() {
            out.push("gcd(a11, a12) != 1".into());
        }
        if !self.a1().gcd(&self.a2)?.is_unit() {
            out.push("gcd(a1, a2) != 1".into());
        }
        if !self.a12.divides(m)? {
            out.push("a12 does not divide m".into());
        }
        for (p, e) in self.a11.factor()? {
            let v = m.valuation(p)?;
            if *e <= v {
                out.push(format!("prime {p} has exponent {e} <= v_p(m) = {v} in a11"));
            }
        }
        Ok(out)
    }
}

impl Ideal {
    fn int_unchecked(n: u64) -> Ideal {
        Ideal {
            ring: RingSpec::Integers,
            generator: Generator::Int(n),
            factors: OnceLock::new(),
        }
    }

    pub(crate) fn from_poly(field: Arc<FiniteField>, p: Poly) -> Ideal {
        let p = p.monic(&field);
        Ideal {
            ring: RingSpec::Polynomial(field),
            generator: Generator::Poly(p),
            factors: OnceLock::new(),
        }
    }

    pub fn integer(n: u64) -> Result<Ideal> {
        if n == 0 {
            return Err(Error::ZeroIdeal);
        }
        Ok(Ideal::int_unchecked(n))
    }

    /// The ideal generated by `sum coeffs[i] T^i`, normalized to monic.
    pub fn polynomial(ring: &RingSpec, coeffs: Vec<u32>) -> Result<Ideal> {
        let field = ring
            .field()
            .ok_or_else(|| Error::RingMismatch("polynomial generator over Z".into()))?;
        if let Some(&c) = coeffs.iter().find(|&&c| c >= field.order()) {
            return Err(Error::Parse(format!(
                "coefficient {c} out of range for q = {}",
                field.order()
            )));
        }
        let p = Poly::new(coeffs);
        if p.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Ideal::from_poly(field.clone(), p))
    }

    pub fn unit(ring: &RingSpec) -> Ideal {
        match ring {
            RingSpec::Integers => Ideal::int_unchecked(1),
            RingSpec::Polynomial(f) => Ideal::from_poly(f.clone(), Poly::one()),
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn int_generator(&self) -> Option<u64> {
        match self.generator {
            Generator::Int(n) => Some(n),
            Generator::Poly(_) => None,
        }
    }

    pub fn poly_generator(&self) -> Option<&Poly> {
        match &self.generator {
            Generator::Int(_) => None,
            Generator::Poly(p) => Some(p),
        }
    }

    fn field(&self) -> &FiniteField {
        self.ring.field().expect("polynomial ideal")
    }

    pub fn is_unit(&self) -> bool {
        match &self.generator {
            Generator::Int(n) => *n == 1,
            Generator::Poly(p) => p.is_one(),
        }
    }

    /// `|A / a|`.
    pub fn norm(&self) -> BigUint {
        match &self.generator {
            Generator::Int(n) => BigUint::from(*n),
            Generator::Poly(p) => BigUint::from(self.ring.q().unwrap()).pow(p.degree().unwrap() as u32),
        }
    }

    pub fn norm_u64(&self) -> Option<u64> {
        match &self.generator {
            Generator::Int(n) => Some(*n),
            Generator::Poly(p) => (self.ring.q().unwrap() as u64).checked_pow(p.degree().unwrap() as u32),
        }
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    /// Prime factorization, sorted by prime, using the default budget.
    pub fn factor(&self) -> Result<&[(Ideal, u32)]> {
        self.factor_with(FactorBudget::default())
    }

    pub fn factor_with(&self, budget: FactorBudget) -> Result<&[(Ideal, u32)]> {
        if let Some(f) = self.factors.get() {
            return Ok(f);
        }
        let computed = match &self.generator {
            Generator::Int(n) => int::factor_u64(*n, budget)?
                .into_iter()
                .map(|(p, e)| (Ideal::int_unchecked(p), e))
                .collect(),
            Generator::Poly(p) => {
                let field = self.ring.field().unwrap();
                p.factor(field)
                    .into_iter()
                    .map(|(g, e)| (Ideal::from_poly(field.clone(), g), e))
                    .collect()
            }
        };
        Ok(self.factors.get_or_init(|| computed))
    }

    pub fn is_prime(&self) -> Result<bool> {
        let f = self.factor()?;
        Ok(f.len() == 1 && f[0].1 == 1)
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        match (&self.generator, &other.generator) {
            (Generator::Int(a), Generator::Int(b)) => a
                .checked_mul(*b)
                .map(Ideal::int_unchecked)
                .ok_or_else(|| Error::Overflow(format!("{a} * {b}"))),
            (Generator::Poly(a), Generator::Poly(b)) => Ok(Ideal::from_poly(
                self.ring.field().unwrap().clone(),
                a.mul(b, self.field()),
            )),
            _ => unreachable!(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Ideal> {
        (0..e).try_fold(Ideal::unit(&self.ring), |acc, _| acc.mul(self))
    }

    /// `self | other` as ideals, i.e. `other` is contained in `self`.
    pub fn divides(&self, other: &Ideal) -> Result<bool> {
        self.same_ring(other)?;
        Ok(match (&self.generator, &other.generator) {
            (Generator::Int(a), Generator::Int(b)) => b % a == 0,
            (Generator::Poly(a), Generator::Poly(b)) => b.rem(a, self.field()).is_zero(),
            _ => unreachable!(),
        })
    }

    /// `other / self`, when `self | other`.
    pub fn cofactor_in(&self, other: &Ideal) -> Result<Ideal> {
        if !self.divides(other)? {
            return Err(Error::NotDivisible {
                divisor: self.to_string(),
                dividend: other.to_string(),
            });
        }
        Ok(match (&self.generator, &other.generator) {
            (Generator::Int(a), Generator::Int(b)) => Ideal::int_unchecked(b / a),
            (Generator::Poly(a), Generator::Poly(b)) => {
                Ideal::from_poly(self.ring.field().unwrap().clone(), b.div_exact(a, self.field()))
            }
            _ => unreachable!(),
        })
    }

    pub fn gcd(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        Ok(match (&self.generator, &other.generator) {
            (Generator::Int(a), Generator::Int(b)) => Ideal::int_unchecked(int::gcd(*a, *b)),
            (Generator::Poly(a), Generator::Poly(b)) => {
                Ideal::from_poly(self.ring.field().unwrap().clone(), a.gcd(b, self.field()))
            }
            _ => unreachable!(),
        })
    }

    pub fn lcm(&self, other: &Ideal) -> Result<Ideal> {
        let g = self.gcd(other)?;
        g.cofactor_in(self)?.mul(other)
    }

    /// Exponent of the prime `p` in this ideal.
    pub fn valuation(&self, p: &Ideal) -> Result<u32> {
        self.same_ring(p)?;
        if p.is_unit() {
            return Err(Error::Parse("valuation at the unit ideal".into()));
        }
        let mut v = 0;
        let mut rest = self.clone();
        while p.divides(&rest)? {
            rest = p.cofactor_in(&rest)?;
            v += 1;
        }
        Ok(v)
    }

    /// `self | other^inf`: every prime factor of self divides other.
    pub fn divides_power(&self, other: &Ideal) -> Result<bool> {
        self.same_ring(other)?;
        for (p, _) in self.factor()? {
            if !p.divides(other)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pairwise coprime prime-power factors whose product is self.
    pub fn crt_split(&self) -> Result<Vec<Ideal>> {
        self.factor()?.iter().map(|(p, e)| p.pow(*e)).collect()
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Result<Vec<Ideal>> {
        let mut out = vec![Ideal::unit(&self.ring)];
        for (p, e) in self.factor()? {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for d in &out {
                let mut acc = d.clone();
                next.push(acc.clone());
                for _ in 0..*e {
                    acc = acc.mul(p)?;
                    next.push(acc.clone());
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Splits `self` relative to the conductor `m`.
    pub fn decompose(&self, m: &Ideal) -> Result<IdealDecomposition> {
        self.same_ring(m)?;
        let unit = Ideal::unit(&self.ring);
        let (mut a11, mut a12, mut a2) = (unit.clone(), unit.clone(), unit);
        for (p, e) in self.factor()? {
            let pe = p.pow(*e)?;
            let v = m.valuation(p)?;
            if v == 0 {
                a2 = a2.mul(&pe)?;
            } else if *e > v {
                a11 = a11.mul(&pe)?;
            } else {
                a12 = a12.mul(&pe)?;
            }
        }
        Ok(IdealDecomposition { a11, a12, a2 })
    }

    /// Product of `(1 - 1/|p|^i)` for `i` in `exponents` over primes p | self.
    pub(crate) fn local_factor(
        &self,
        exponents: impl Iterator<Item = u32> + Clone,
    ) -> Result<num_rational::BigRational> {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let mut acc = BigRational::one();
        for (p, _) in self.factor()? {
            let np = BigInt::from(p.norm());
            for i in exponents.clone() {
                let denom = Pow::pow(&np, i);
                acc *= BigRational::new(&denom - BigInt::one(), denom);
            }
        }
        Ok(acc)
    }
}
