//! Exact rational arithmetic: arbitrary-precision rationals, exact binomials
//! and univariate polynomials in the crossover probability.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Exact `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Parses `"a/b"`, an integer, or a finite decimal such as `"0.25"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut digits = String::from(int_part);
    digits.push_str(frac_part);
    let num: BigInt = digits.parse().map_err(|_| err())?;
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Correctly scaled conversion of an exact rational to the nearest-ish
/// double (within one ulp), including values far outside `i64` range.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let neg = r.is_negative();
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    // shift so that the integer quotient carries at least 64 significant bits
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let v = libm::ldexp(qf, -shift as i32);
    if neg {
        -v
    } else {
        v
    }
}

/// Exact rational value of a double.
pub fn from_f64(x: f64) -> Rational {
    BigRational::from_float(x).expect("finite double")
}

/// Polynomial in the crossover probability with exact rational coefficients,
/// stored lowest degree first with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(alloc::vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = alloc::vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_integer_coeffs<I: IntoIterator<Item = BigInt>>(coeffs: I) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// `(1 - eps)^k`.
    pub fn one_minus_eps_pow(k: usize) -> Self {
        Self::from_integer_coeffs((0..=k).map(|j| {
            let c = BigInt::from_biguint(Sign::Plus, binomial(k as u64, j as u64));
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        }))
    }

    /// `eps^w (1 - eps)^(n - w)` as a polynomial.
    pub fn pattern(n: usize, w: usize) -> Self {
        Self::one_minus_eps_pow(n - w).shift(w)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies by `eps^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = alloc::vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RationalPoly { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates exactly at the rational value of `x`, then rounds once.
    pub fn eval_f64(&self, x: f64) -> f64 {
        to_f64(&self.eval(&from_f64(x)))
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = alloc::vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for RationalPoly {
    /// Renders as e.g. `3/8*eps^2 - 3/8*eps^3 + 15/64*eps^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("eps")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl serde::Serialize for RationalPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}
