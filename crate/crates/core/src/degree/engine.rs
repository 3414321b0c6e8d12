//! Degrees `|G(a) / Scal G(a)|` from a spec, by order bookkeeping at the
//! conductor and by explicit enumeration.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use super::spec::GaloisImageSpec;
use crate::error::{Error, Result};
use crate::group::MatGroup;
use crate::ideal::{Ideal, RingSpec};
use crate::orders::{exact_div, gl_order, ratio_of, units_order};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fast,
    Brute,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fast => "fast",
            Method::Brute => "brute",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub a: Ideal,
    pub norm: BigUint,
    pub group_order: BigUint,
    pub scalar_order: BigUint,
    pub degree: BigUint,
    /// `degree / norm^(r^2 - 1)`.
    pub ratio: BigRational,
    pub method: Method,
}

impl DegreeReport {
    fn new(a: &Ideal, r: usize, group_order: BigUint, scalar_order: BigUint, method: Method) -> Result<Self> {
        let degree = exact_div(&group_order, &scalar_order, "|G(a)| / |Scal|")?;
        let norm = a.norm();
        let ratio = ratio_of(&degree, &Pow::pow(&norm, (r * r - 1) as u32));
        Ok(DegreeReport {
            a: a.clone(),
            norm,
            group_order,
            scalar_order,
            degree,
            ratio,
            method,
        })
    }

    /// Same numbers, ignoring how they were obtained.
    pub fn agrees_with(&self, other: &DegreeReport) -> bool {
        self.a == other.a
            && self.group_order == other.group_order
            && self.scalar_order == other.scalar_order
            && self.degree == other.degree
    }
}

fn check_ring(spec: &GaloisImageSpec, a: &Ideal) -> Result<()> {
    if a.ring() != spec.ring() {
        return Err(Error::RingMismatch(format!("{a} is not an ideal of {}", spec.ring())));
    }
    Ok(())
}

/// G(a), enumerated, as the preimage of G(gcd(a, m)).
pub fn image_mod(spec: &GaloisImageSpec, a: &Ideal, cap: usize) -> Result<MatGroup> {
    check_ring(spec, a)?;
    let g = a.gcd(spec.conductor())?;
    spec.image_at_divisor(&g)?.preimage(a, cap)
}

/// Fast path: only G(gcd(a, m)) is ever enumerated.
///
/// `|G(a)| = |G(g)| |GL_r(A/a)| / |GL_r(A/g)|`, and the scalars of a full
/// preimage are the whole unit fiber over the scalars of G(g).
pub fn j_degree(spec: &GaloisImageSpec, a: &Ideal) -> Result<DegreeReport> {
    check_ring(spec, a)?;
    let r = spec.rank();
    let g = a.gcd(spec.conductor())?;
    let base = spec.base_data(&g)?;
    let fiber = exact_div(&gl_order(r, a)?, &gl_order(r, &g)?, "|GL(A/a)| / |GL(A/g)|")?;
    let unit_fiber = exact_div(&units_order(a)?, &units_order(&g)?, "|(A/a)^x| / |(A/g)^x|")?;
    DegreeReport::new(
        a,
        r,
        base.group_order * fiber,
        base.scalar_order * unit_fiber,
        Method::Fast,
    )
}

/// Oracle: enumerates G(a) and scans it for scalar matrices.
///
/// G(a) is obtained as the elementwise reduction of G(lcm(a, m)), itself
/// the preimage of G(m). When that group is over `cap`, G(a) is instead
/// filtered out of all matrices mod a by membership of the reduction mod
/// gcd(a, m) in the reduced conductor image.
pub fn j_degree_bruteforce(spec: &GaloisImageSpec, a: &Ideal, cap: usize) -> Result<DegreeReport> {
    check_ring(spec, a)?;
    let top = a.lcm(spec.conductor())?;
    let image = match spec.image().preimage(&top, cap) {
        Ok(big) => big.reduce_elementwise(a)?,
        Err(Error::CapExceeded { .. }) => {
            let g = a.gcd(spec.conductor())?;
            spec.image_at_divisor(&g)?.preimage_by_filter(a, cap)?
        }
        Err(e) => return Err(e),
    };
    let scalars = image.scalar_scan();
    DegreeReport::new(
        a,
        spec.rank(),
        image.order_big(),
        BigUint::from(scalars.len()),
        Method::Brute,
    )
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub rows: Vec<DegreeReport>,
    pub min_ratio: BigRational,
    /// First ideal in iteration order attaining `min_ratio`.
    pub argmin: Ideal,
    /// Rows with ratio outside (0, 1].
    pub violations: Vec<Ideal>,
}

/// `j_degree` for every ideal of norm at most `norm_bound`, in ascending
/// norm then canonical generator order.
pub fn bound_scan(spec: &GaloisImageSpec, norm_bound: u64) -> Result<ScanResult> {
    let ideals = spec.ring().ideals_up_to_norm(norm_bound.max(1));
    let rows = ideals
        .par_iter()
        .map(|a| j_degree(spec, a))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, row) in rows.iter().enumerate() {
        if row.ratio < rows[best].ratio {
            best = i;
        }
    }
    let violations = rows
        .iter()
        .filter(|row| row.ratio > BigRational::one() || row.ratio <= BigRational::zero())
        .map(|row| row.a.clone())
        .collect();
    Ok(ScanResult {
        min_ratio: rows[best].ratio.clone(),
        argmin: rows[best].a.clone(),
        rows,
        violations,
    })
}

/// `prod_{|p| <= bound} prod_{i=2}^{r} (1 - |p|^{-i})` over the primes of
/// the ring.
pub fn pgl_lower_bound_constant(r: usize, ring: &RingSpec, prime_norm_bound: u64) -> Result<BigRational> {
    if r < 2 {
        return Err(Error::InvalidSpec(format!("rank must be at least 2, got {r}")));
    }
    let mut value = BigRational::one();
    for p in ring.primes_up_to_norm(prime_norm_bound) {
        let norm = BigInt::from(p.norm());
        for i in 2..=r as u32 {
            let power: BigInt = Pow::pow(&norm, i);
            value *= BigRational::new(&power - 1, power);
        }
    }
    Ok(value)
}

/// Decimal rendering of a rational, rounded half away from zero.
pub fn decimal(value: &BigRational, digits: usize) -> String {
    let negative = value < &BigRational::zero();
    let abs = if negative { -value.clone() } else { value.clone() };
    let scale = Pow::pow(&BigInt::from(10), digits as u32);
    let scaled = (abs * BigRational::from(scale.clone())).round().to_integer();
    let int_part = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let sign = if negative && scaled != BigInt::zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
    }
}
