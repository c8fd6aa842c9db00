use crate::model::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadExtError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeRadicand,
    #[error("values live in incompatible quadratic extensions")]
    IncompatibleRadicands,
    #[error("square root of an irrational value")]
    NestedRadical,
}

/// Exact real number `u + v·√d` with rational `u, v` and `d >= 0`.
///
/// Normal form: `v = 0` implies `d = 0`, and `d` is never a perfect rational
/// square while `v != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExtValue {
    u: Rational,
    v: Rational,
    d: Rational,
}

/// Exact square root of a rational, when it is rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let int_sqrt = |n: &BigInt| -> Option<BigInt> {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(int_sqrt(r.numer())?, int_sqrt(r.denom())?))
}

impl QuadExtValue {
    pub fn new(u: Rational, v: Rational, d: Rational) -> Result<Self, QuadExtError> {
        if d.is_negative() {
            return Err(QuadExtError::NegativeRadicand);
        }
        if v.is_zero() || d.is_zero() {
            return Ok(Self::rational(u));
        }
        if let Some(r) = rational_sqrt(&d) {
            return Ok(Self::rational(u + v * r));
        }
        Ok(QuadExtValue { u, v, d })
    }

    pub fn rational(u: Rational) -> Self {
        QuadExtValue {
            u,
            v: Rational::zero(),
            d: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.u)
    }

    /// Exact sign, computed by comparing `u²` with `v²d`.
    pub fn signum(&self) -> Ordering {
        let su = self.u.cmp(&Rational::zero());
        let sv = self.v.cmp(&Rational::zero());
        if sv == Ordering::Equal || su == sv {
            return if su == Ordering::Equal { sv } else { su };
        }
        if su == Ordering::Equal {
            return sv;
        }
        let uu = &self.u * &self.u;
        let vvd = &self.v * &self.v * &self.d;
        match uu.cmp(&vvd) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Rewrites both operands over a common radicand.
    fn align(a: &Self, b: &Self) -> Result<(Rational, Self, Self), QuadExtError> {
        if a.v.is_zero() {
            return Ok((b.d.clone(), a.clone(), b.clone()));
        }
        if b.v.is_zero() || a.d == b.d {
            return Ok((a.d.clone(), a.clone(), b.clone()));
        }
        // √(d_b) = r·√(d_a) when d_b / d_a = r².
        let r = rational_sqrt(&(&b.d / &a.d)).ok_or(QuadExtError::IncompatibleRadicands)?;
        let b2 = QuadExtValue {
            u: b.u.clone(),
            v: &b.v * r,
            d: a.d.clone(),
        };
        Ok((a.d.clone(), a.clone(), b2))
    }

    fn raw(u: Rational, v: Rational, d: Rational) -> Self {
        if v.is_zero() {
            Self::rational(u)
        } else {
            QuadExtValue { u, v, d }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, QuadExtError> {
        let (d, a, b) = Self::align(self, o)?;
        Ok(Self::raw(a.u + b.u, a.v + b.v, d))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, QuadExtError> {
        let (d, a, b) = Self::align(self, o)?;
        Ok(Self::raw(a.u - b.u, a.v - b.v, d))
    }

    pub fn mul(&self, o: &Self) -> Result<Self, QuadExtError> {
        let (d, a, b) = Self::align(self, o)?;
        let u = &a.u * &b.u + &a.v * &b.v * &d;
        let v = &a.u * &b.v + &a.v * &b.u;
        Ok(Self::raw(u, v, d))
    }

    pub fn div(&self, o: &Self) -> Result<Self, QuadExtError> {
        if o.is_zero() {
            return Err(QuadExtError::DivisionByZero);
        }
        let (d, a, b) = Self::align(self, o)?;
        // (x + y√d)⁻¹ = (x − y√d) / (x² − y²d); the norm is nonzero because
        // d is not a square.
        let norm = &b.u * &b.u - &b.v * &b.v * &d;
        let conj = QuadExtValue::raw(b.u.clone(), -b.v.clone(), d.clone());
        let p = a.mul(&conj)?;
        Ok(Self::raw(p.u / &norm, p.v / &norm, d))
    }

    pub fn neg(&self) -> Self {
        Self::raw(-self.u.clone(), -self.v.clone(), self.d.clone())
    }

    /// Non-negative square root of a rational value.
    pub fn sqrt(&self) -> Result<Self, QuadExtError> {
        if !self.is_rational() {
            return Err(QuadExtError::NestedRadical);
        }
        if self.u.is_negative() {
            return Err(QuadExtError::NegativeRadicand);
        }
        Self::new(Rational::zero(), Rational::from_integer(1.into()), self.u.clone())
    }
}

impl std::fmt::Display for QuadExtValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.u)
        } else {
            write!(f, "{} + {}·√{}", self.u, self.v, self.d)
        }
    }
}
