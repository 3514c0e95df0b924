use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AlgError;

/// Which coefficient ring a polynomial or a verdict lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoefficientDomain {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl CoefficientDomain {
    pub fn prime_field(p: u64) -> Result<Self, AlgError> {
        if is_prime(p) {
            Ok(Self::PrimeField(p))
        } else {
            Err(AlgError::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Self::Integers)
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "zz"),
            Self::Rationals => write!(f, "qq"),
            Self::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for CoefficientDomain {
    type Err = AlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "zz" | "ZZ" => Ok(Self::Integers),
            "qq" | "QQ" => Ok(Self::Rationals),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| AlgError::Parse(format!("unknown domain `{other}`")))?;
                Self::prime_field(p)
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A coefficient ring for sparse polynomials.
///
/// Implementors are small descriptor values (`Integers`, `Rationals`,
/// `PrimeField`); elements are plain data and all arithmetic goes through
/// the descriptor so that the prime-field modulus does not have to be
/// stored per coefficient.
pub trait Domain: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn kind(&self) -> CoefficientDomain;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// `None` when the rational has no image (fractional over ℤ, or a
    /// denominator divisible by p).
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// A rational representative (`0..p` for prime fields).
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// Whether the canonical text form starts with a minus sign.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        fmt_rational(&self.to_rational(a))
    }
}

/// Domains with exact division by nonzero elements.
pub trait FieldDomain: Domain {
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// ℤ with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Domain for Integers {
    type Elem = BigInt;

    fn kind(&self) -> CoefficientDomain {
        CoefficientDomain::Integers
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigInt> {
        q.is_integer().then(|| q.numer().clone())
    }
    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn is_negative(&self, a: &BigInt) -> bool {
        a.is_negative()
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// ℚ, always in lowest terms with positive denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Domain for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> CoefficientDomain {
        CoefficientDomain::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

impl FieldDomain for Rationals {
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
}

/// 𝔽_p for a prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgError> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }
}

impl Domain for PrimeField {
    type Elem = u64;

    fn kind(&self) -> CoefficientDomain {
        CoefficientDomain::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced below p")
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.from_bigint(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.from_bigint(q.numer()), &self.inv(&d)))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl FieldDomain for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_tags_round_trip() {
        for d in [
            CoefficientDomain::Integers,
            CoefficientDomain::Rationals,
            CoefficientDomain::PrimeField(7),
        ] {
            assert_eq!(d.to_string().parse::<CoefficientDomain>().unwrap(), d);
        }
        assert!("fp:9".parse::<CoefficientDomain>().is_err());
        assert!("rr".parse::<CoefficientDomain>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(&2), 3);
        assert_eq!(f.neg(&0), 0);
        assert_eq!(f.sub(&1, &3), 3);
        assert_eq!(f.from_i64(-1), 4);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert_eq!(f.from_rational(&fifth), None);
        assert!(PrimeField::new(4).is_err());
    }

    #[test]
    fn rationals_stay_normalised() {
        let q = Rationals;
        let a = BigRational::new(BigInt::from(2), BigInt::from(-4));
        assert_eq!(*a.denom(), BigInt::from(2));
        assert_eq!(q.fmt_elem(&a), "-1/2");
        assert!(q.is_negative(&a));
    }
}
