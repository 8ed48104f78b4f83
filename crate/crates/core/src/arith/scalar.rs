//! Exact elements of `R = k[t]_(t)` and `K = k((t))`, represented inside `k(t)`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;

use super::field::{BaseField, Fe};
use super::series::TruncatedSeries;
use super::upoly::UPoly;
use crate::error::{GalError, Result};

/// A `t`-adic valuation: a rational number or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational64),
    Infinite,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Rational64::from_integer(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<Rational64> {
        match self {
            Valuation::Finite(q) => Some(*q),
            Valuation::Infinite => None,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `t^shift · num / den` with `num(0) ≠ 0`, `den(0) = 1` and `gcd(num, den) = 1`.
///
/// The zero scalar has `num = 0` and `shift = 0`. Non-negative shift means the
/// element lies in `R`; a negative shift is the Laurent mode.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    shift: i64,
    num: UPoly,
    den: UPoly,
}

impl Scalar {
    pub fn zero(field: BaseField) -> Self {
        Scalar { shift: 0, num: UPoly::zero(field), den: UPoly::one(field) }
    }

    pub fn one(field: BaseField) -> Self {
        Self::from_fe(field.one())
    }

    pub fn from_fe(c: Fe) -> Self {
        let field = c.field();
        Self::new(0, UPoly::constant(c), UPoly::one(field))
    }

    pub fn int(field: BaseField, n: i64) -> Self {
        Self::from_fe(field.int(n))
    }

    pub fn from_upoly(p: UPoly) -> Self {
        let field = p.field();
        Self::new(0, p, UPoly::one(field))
    }

    /// `c · t^k` for any integer `k`.
    pub fn t_pow(field: BaseField, k: i64) -> Self {
        Scalar { shift: k, num: UPoly::one(field), den: UPoly::one(field) }
    }

    pub fn fraction(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(GalError::InvalidInput("zero denominator".into()));
        }
        Ok(Self::new(0, num, den))
    }

    fn new(mut shift: i64, num: UPoly, den: UPoly) -> Self {
        let field = num.field();
        if num.is_zero() {
            return Self::zero(field);
        }
        let kn = num.ord().unwrap();
        let kd = den.ord().unwrap();
        shift += kn as i64 - kd as i64;
        let mut num = num.shift_down(kn);
        let mut den = den.shift_down(kd);
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
            let c = den.coeff(0).inv().unwrap();
            num = num.scale(&c);
            den = den.scale(&c);
        }
        Scalar { shift, num, den }
    }

    pub fn field(&self) -> BaseField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the element lies in `R` (valuation ≥ 0).
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.shift >= 0
    }

    /// True for units of `R`.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.shift == 0
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }

    /// The `t`-adic valuation, normalised so that `v(t) = 1`.
    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::int(self.shift)
        }
    }

    /// Valuation as an integer, `None` for zero.
    pub fn val(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.shift)
        }
    }

    /// Leading `t`-adic coefficient (in `k`).
    pub fn leading_coeff(&self) -> Fe {
        if self.is_zero() {
            return self.field().zero();
        }
        self.num.coeff(0)
    }

    /// Reduction modulo `t` of an element of `R`.
    pub fn residue(&self) -> Fe {
        if self.is_zero() || self.shift > 0 {
            return self.field().zero();
        }
        assert!(self.shift == 0, "residue of a non-integral scalar");
        self.num.coeff(0)
    }

    /// The constant term in `k` if the scalar is a constant.
    pub fn as_constant(&self) -> Option<Fe> {
        if self.is_zero() {
            return Some(self.field().zero());
        }
        if self.shift == 0 && self.den.is_one() && self.num.degree() == Some(0) {
            return Some(self.num.coeff(0));
        }
        None
    }

    /// The element as a polynomial in `t`, if it is one.
    pub fn as_upoly(&self) -> Option<UPoly> {
        if self.is_zero() {
            return Some(UPoly::zero(self.field()));
        }
        if self.den.is_one() && self.shift >= 0 {
            return Some(self.num.shift_up(self.shift as usize));
        }
        None
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - m) as usize);
        let b = other.num.shift_up((other.shift - m) as usize);
        if self.den.is_one() && other.den.is_one() {
            return Self::new(m, a.add(&b), UPoly::one(self.field()));
        }
        if self.den == other.den {
            return Self::new(m, a.add(&b), self.den.clone());
        }
        let num = a.mul(&other.den).add(&b.mul(&self.den));
        Self::new(m, num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        Scalar { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar {
                shift: self.shift + other.shift,
                num: self.num.mul(&other.num),
                den: self.den.clone(),
            };
        }
        Self::new(self.shift + other.shift, self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale_fe(&self, c: &Fe) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        Scalar { shift: self.shift, num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_t_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Scalar { shift: self.shift + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `t`-adic expansion to absolute precision `n`.
    pub fn truncate_series(&self, n: usize) -> Result<TruncatedSeries> {
        let field = self.field();
        if self.is_zero() {
            return TruncatedSeries::from_coeffs(field, vec![field.zero(); n], n, 1);
        }
        if self.shift < 0 {
            return Err(GalError::Precision(format!(
                "scalar has Laurent shift {} below the series origin",
                self.shift
            )));
        }
        let s = self.shift as usize;
        let mut coeffs = vec![field.zero(); n];
        if s < n {
            let m = n - s;
            let inv = TruncatedSeries::inverse_of_unit(&self.den.truncated(m), m)?;
            let num = self.num.truncated(m);
            for i in 0..m {
                let mut acc = field.zero();
                for j in 0..=i {
                    acc = &acc + &(&num[j] * &inv[i - j]);
                }
                coeffs[s + i] = acc;
            }
        }
        TruncatedSeries::from_coeffs(field, coeffs, n, 1)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den.is_one() {
            if self.shift >= 0 {
                return write!(f, "{}", self.num.shift_up(self.shift as usize));
            }
            let k = -self.shift;
            let tp = if k == 1 { "t".to_string() } else { format!("t^{k}") };
            return if self.num.degree() == Some(0) {
                write!(f, "{}/{tp}", self.num)
            } else {
                write!(f, "({})/{tp}", self.num)
            };
        }
        let num = if self.shift >= 0 {
            self.num.shift_up(self.shift as usize)
        } else {
            self.num.clone()
        };
        let den = if self.shift < 0 {
            self.den.shift_up((-self.shift) as usize)
        } else {
            self.den.clone()
        };
        write!(f, "({num})/({den})")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
