use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinAlgError;

/// Coefficient ring of every module and matrix in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Rationals,
    /// Residues modulo a prime `p < 2^31`.
    PrimeField(u32),
    Integers,
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self, LinAlgError> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(RingSpec::PrimeField(p as u32))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => *p as u64,
            _ => 0,
        }
    }

    /// Canonical representative of `value` in this ring: reduced fraction,
    /// residue in `0..p`, or integer.
    pub fn reduce(&self, value: &BigRational) -> Result<BigRational, LinAlgError> {
        match self {
            RingSpec::Rationals => Ok(value.clone()),
            RingSpec::Integers => {
                if value.is_integer() {
                    Ok(value.clone())
                } else {
                    Err(LinAlgError::NotInRing(value.to_string(), *self))
                }
            }
            RingSpec::PrimeField(p) => {
                let p = *p as u64;
                let num = mod_big(value.numer(), p);
                let den = mod_big(value.denom(), p);
                if den == 0 {
                    return Err(LinAlgError::NotInRing(value.to_string(), *self));
                }
                let r = mul_mod(num, inv_mod(den, p), p);
                Ok(BigRational::from_integer(BigInt::from(r)))
            }
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(&(a + b)).expect("closed under addition")
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(&(a * b)).expect("closed under multiplication")
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(&-a).expect("closed under negation")
    }

    pub fn from_i64(&self, v: i64) -> BigRational {
        self.reduce(&BigRational::from_integer(BigInt::from(v))).expect("integers map into every ring")
    }

    /// Multiplicative inverse, if it exists in the ring.
    pub fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match self {
            RingSpec::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            _ => self.reduce(&a.recip()).ok(),
        }
    }

    /// Textual entry format: `a/b` for Q, residues for F_p, integers for Z.
    pub fn format_scalar(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    pub fn parse_scalar(&self, s: &str) -> Result<BigRational, LinAlgError> {
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| LinAlgError::BadScalar(s.into()))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| LinAlgError::BadScalar(s.into()))?;
            if d.is_zero() {
                return Err(LinAlgError::BadScalar(s.into()));
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(BigInt::from_str(s).map_err(|_| LinAlgError::BadScalar(s.into()))?)
        };
        self.reduce(&value)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "Fp:{p}"),
            RingSpec::Integers => write!(f, "Z"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Q" => Ok(RingSpec::Rationals),
            "Z" => Ok(RingSpec::Integers),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .or_else(|| other.strip_prefix('F'))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| LinAlgError::BadRing(other.into()))?;
                RingSpec::prime_field(p)
            }
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_big(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    result
}

/// Element arithmetic for one storage type; the generic elimination code is
/// written once against this trait.
pub(crate) trait Arith: Copy + Send + Sync {
    type E: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn to_rational(&self, a: &Self::E) -> BigRational;
    fn from_rational(&self, a: &BigRational) -> Self::E;
}

pub(crate) trait FieldArith: Arith {
    fn inv(&self, a: &Self::E) -> Self::E;
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct QArith;

#[derive(Clone, Copy, Debug)]
pub(crate) struct FpArith {
    pub p: u64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ZArith;

impl Arith for QArith {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
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
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn from_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

impl FieldArith for QArith {
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

impl Arith for FpArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn from_rational(&self, a: &BigRational) -> u64 {
        let num = mod_big(a.numer(), self.p);
        let den = mod_big(a.denom(), self.p);
        mul_mod(num, inv_mod(den, self.p), self.p)
    }
}

impl FieldArith for FpArith {
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p)
    }
}

impl Arith for ZArith {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
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
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn from_rational(&self, a: &BigRational) -> BigInt {
        a.to_integer()
    }
}
