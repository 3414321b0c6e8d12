//! Closed-form orders of (A/a)^x, GL_r(A/a) and PGL_r(A/a).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::ideal::Ideal;

fn to_natural(value: BigRational, what: &str) -> Result<BigUint> {
    if !value.is_integer() {
        return Err(Error::IdentityFailed(format!("{what} = {value} is not integral")));
    }
    value
        .to_integer()
        .to_biguint()
        .ok_or_else(|| Error::IdentityFailed(format!("{what} is negative")))
}

/// `|a| * prod_{p | a} (1 - 1/|p|)`.
pub fn units_order(a: &Ideal) -> Result<BigUint> {
    let value = BigRational::from(BigInt::from(a.norm())) * a.local_factor(1..=1)?;
    to_natural(value, "|(A/a)^x|")
}

/// `|a|^{r^2} * prod_{p | a} prod_{i=1}^{r} (1 - |p|^{-i})`.
pub fn gl_order(r: usize, a: &Ideal) -> Result<BigUint> {
    let n = BigInt::from(a.norm());
    let value = BigRational::from(Pow::pow(&n, (r * r) as u32)) * a.local_factor(1..=r as u32)?;
    to_natural(value, "|GL_r(A/a)|")
}

/// `|GL_r| / |(A/a)^x|`, cross-checked against the direct product
/// `|a|^{r^2-1} prod_{p|a} prod_{i=2}^{r} (1 - |p|^{-i})`.
pub fn pgl_order(r: usize, a: &Ideal) -> Result<BigUint> {
    let gl = gl_order(r, a)?;
    let units = units_order(a)?;
    if (&gl % &units) != BigUint::from(0u32) {
        return Err(Error::IdentityFailed(format!(
            "|(A/a)^x| = {units} does not divide |GL| = {gl}"
        )));
    }
    let quotient = gl / units;
    let n = BigInt::from(a.norm());
    let direct = to_natural(
        BigRational::from(Pow::pow(&n, (r * r - 1) as u32)) * a.local_factor(2..=r as u32)?,
        "|PGL_r(A/a)|",
    )?;
    if direct != quotient {
        return Err(Error::IdentityFailed(format!(
            "|PGL| via quotient {quotient} != direct product {direct}"
        )));
    }
    Ok(quotient)
}

/// `|PGL_r(A/a)| / |a|^{r^2-1}`, exactly.
pub fn pgl_ratio(r: usize, a: &Ideal) -> Result<BigRational> {
    a.local_factor(2..=r as u32)
}

pub(crate) fn ratio_of(value: &BigUint, denom: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(value.clone()), BigInt::from(denom.clone()))
}

pub(crate) fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    if den == &BigUint::from(0u32) || (num % den) != BigUint::from(0u32) {
        return Err(Error::IdentityFailed(format!("{what}: {den} does not divide {num}")));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::RingSpec;

    fn z(n: u64) -> Ideal {
        Ideal::integer(n).unwrap()
    }

    #[test]
    fn units_examples() {
        assert_eq!(units_order(&z(12)).unwrap(), BigUint::from(4u32));
        assert_eq!(units_order(&z(1)).unwrap(), BigUint::from(1u32));
        let r = RingSpec::polynomial(2).unwrap();
        let t2t = Ideal::polynomial(&r, vec![0, 1, 1]).unwrap();
        assert_eq!(units_order(&t2t).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn gl_examples() {
        assert_eq!(gl_order(2, &z(2)).unwrap(), BigUint::from(6u32));
        assert_eq!(gl_order(2, &z(12)).unwrap(), BigUint::from(4608u32));
        assert_eq!(gl_order(2, &z(4)).unwrap(), BigUint::from(96u32));
        for n in 1..50 {
            assert_eq!(gl_order(1, &z(n)).unwrap(), units_order(&z(n)).unwrap());
        }
    }

    #[test]
    fn pgl_examples() {
        assert_eq!(pgl_order(2, &z(3)).unwrap(), BigUint::from(24u32));
        assert_eq!(pgl_order(2, &z(12)).unwrap(), BigUint::from(1152u32));
        let r = RingSpec::polynomial(3).unwrap();
        let f9 = Ideal::polynomial(&r, vec![1, 0, 1]).unwrap();
        assert_eq!(gl_order(2, &f9).unwrap(), BigUint::from(5760u32));
        assert_eq!(pgl_order(2, &f9).unwrap(), BigUint::from(720u32));
    }

    #[test]
    fn pgl_never_exceeds_norm_power() {
        for n in 1..500u64 {
            for r in 2..=3 {
                let bound = BigUint::from(n).pow((r * r - 1) as u32);
                assert!(pgl_order(r, &z(n)).unwrap() <= bound);
            }
        }
    }
}
