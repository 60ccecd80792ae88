//! Prime fields and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinError;

/// Coefficient field: `F_ell` for a prime `ell`, or the rationals when `ell = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    ell: u64,
}

impl TryFrom<u64> for FieldSpec {
    type Error = LinError;

    fn try_from(ell: u64) -> Result<Self, LinError> {
        FieldSpec::new(ell)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.ell
    }
}

/// Trial-division primality; characteristics in scope are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(ell: u64) -> Result<Self, LinError> {
        if ell == 0 || (is_prime(ell) && ell < (1 << 31)) {
            Ok(FieldSpec { ell })
        } else {
            Err(LinError::BadCharacteristic(ell))
        }
    }

    pub fn rationals() -> Self {
        FieldSpec { ell: 0 }
    }

    /// Panics unless `p` is prime; intended for literals.
    pub fn prime(p: u64) -> Self {
        FieldSpec::new(p).expect("characteristic must be prime")
    }

    pub fn characteristic(&self) -> u64 {
        self.ell
    }

    pub fn is_rational(&self) -> bool {
        self.ell == 0
    }

    pub fn zero(&self) -> Scalar {
        if self.ell == 0 {
            Scalar::Rat(BigRational::zero())
        } else {
            Scalar::Mod(0)
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        if self.ell == 0 {
            Scalar::Rat(BigRational::from_integer(BigInt::from(v)))
        } else {
            let m = self.ell as i128;
            Scalar::Mod((((v as i128) % m + m) % m) as u64)
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        if self.ell == 0 {
            Scalar::Rat(BigRational::from_integer(v.clone()))
        } else {
            let m = BigInt::from(self.ell);
            let r = ((v % &m) + &m) % &m;
            Scalar::Mod(r.to_u64().expect("residue fits"))
        }
    }

    /// Parses an integer, a residue, or a fraction `a/b`.
    pub fn parse(&self, s: &str) -> Result<Scalar, LinError> {
        let s = s.trim();
        let bad = || LinError::Parse(format!("bad scalar `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            let num = self.from_bigint(&a);
            let den = self.from_bigint(&b);
            if self.is_zero(&den) {
                return Err(LinError::DivisionByZero);
            }
            Ok(self.mul(&num, &self.inv(&den)))
        } else {
            let a: BigInt = s.parse().map_err(|_| bad())?;
            Ok(self.from_bigint(&a))
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % self.ell),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Mod(x) => Scalar::Mod((self.ell - x) % self.ell),
            Scalar::Rat(x) => Scalar::Rat(-x),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(((*x as u128 * *y as u128) % self.ell as u128) as u64),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Mod(x) => {
                assert!(*x != 0, "inverse of zero");
                Scalar::Mod(pow_mod(*x, self.ell - 2, self.ell))
            }
            Scalar::Rat(x) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rat(x.recip())
            }
        }
    }

    /// `(-1)^e`.
    pub fn sign(&self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b128 = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m as u128;
        }
        b128 = b128 * b128 % m as u128;
        e >>= 1;
    }
    r as u64
}

/// A field element. Residues are reduced; fractions are in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 1,
            Scalar::Rat(x) => x.is_one(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(x) => write!(f, "{x}"),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else if x.is_negative() {
                    write!(f, "-{}/{}", x.numer().abs(), x.denom())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_characteristic() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(7).is_ok());
        assert!(FieldSpec::new(0).is_ok());
    }

    #[test]
    fn residues_are_reduced() {
        let f = FieldSpec::prime(5);
        assert_eq!(f.from_i64(-1), Scalar::Mod(4));
        assert_eq!(f.mul(&f.from_i64(3), &f.inv(&f.from_i64(3))), f.one());
    }

    #[test]
    fn fractions_parse_and_print() {
        let q = FieldSpec::rationals();
        let x = q.parse("6/-4").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        let f = FieldSpec::prime(7);
        assert_eq!(f.parse("1/2").unwrap(), Scalar::Mod(4));
    }
}
