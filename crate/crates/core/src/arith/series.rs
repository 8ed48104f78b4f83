//! Power series truncated at a fixed absolute precision, optionally in `u = t^(1/e)`.

use std::fmt;

use num_rational::Rational64;

use super::field::{BaseField, Fe};
use super::scalar::{Scalar, Valuation};
use super::upoly::UPoly;
use crate::error::{GalError, Result};

/// `Σ_{i < prec} c_i u^i + O(u^prec)` with `u^ram = t`.
#[derive(Clone)]
pub struct TruncatedSeries {
    field: BaseField,
    coeffs: Vec<Fe>,
    ram: u32,
}

impl TruncatedSeries {
    pub fn from_coeffs(field: BaseField, mut coeffs: Vec<Fe>, prec: usize, ram: u32) -> Result<Self> {
        if prec == 0 {
            return Err(GalError::InvalidInput("series precision must be at least 1".into()));
        }
        if ram == 0 {
            return Err(GalError::InvalidInput("ramification index must be at least 1".into()));
        }
        coeffs.resize(prec, field.zero());
        Ok(TruncatedSeries { field, coeffs, ram })
    }

    pub fn zero(field: BaseField, prec: usize, ram: u32) -> Self {
        TruncatedSeries { field, coeffs: vec![field.zero(); prec], ram }
    }

    pub fn constant(c: Fe, prec: usize, ram: u32) -> Self {
        let mut s = Self::zero(c.field(), prec, ram);
        s.coeffs[0] = c;
        s
    }

    /// `c · u^k`, zero if `k ≥ prec`.
    pub fn monomial(c: Fe, k: usize, prec: usize, ram: u32) -> Self {
        let mut s = Self::zero(c.field(), prec, ram);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Fe {
        &self.coeffs[i]
    }

    /// Index of the first nonzero coefficient (in units of `u`).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Valuation in units of `t`; `Infinite` means "zero to the known precision".
    pub fn valuation(&self) -> Valuation {
        match self.order() {
            Some(i) => Valuation::Finite(Rational64::new(i as i64, self.ram as i64)),
            None => Valuation::Infinite,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.ram, other.ram, "ramification mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.prec().min(other.prec());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        TruncatedSeries { field: self.field, coeffs, ram: self.ram }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect(), ram: self.ram }
    }

    /// Product; the precision of `a·b` is `min(prec a + ord b, prec b + ord a)`
    /// capped at the smaller input precision.
    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.prec().min(other.prec());
        let mut coeffs = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        TruncatedSeries { field: self.field, coeffs, ram: self.ram }
    }

    pub fn scale(&self, c: &Fe) -> Self {
        TruncatedSeries { field: self.field, coeffs: self.coeffs.iter().map(|a| a * c).collect(), ram: self.ram }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.field.one(), self.prec(), self.ram);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `u^k`, keeping the precision.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.prec();
        let mut coeffs = vec![self.field.zero(); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        TruncatedSeries { field: self.field, coeffs, ram: self.ram }
    }

    /// Divide by `u^k`; the first `k` coefficients must vanish. Precision drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k >= self.prec() {
            return Err(GalError::Precision(format!("cannot divide by u^{k} at precision {}", self.prec())));
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(GalError::InvalidInput(format!("series not divisible by u^{k}")));
        }
        Ok(TruncatedSeries { field: self.field, coeffs: self.coeffs[k..].to_vec(), ram: self.ram })
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(prec.max(1));
        s
    }

    /// Re-express in `u' = t^(1/(ram·m))`.
    pub fn ramify(&self, m: u32) -> Self {
        let n = self.prec() * m as usize;
        let mut coeffs = vec![self.field.zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = c.clone();
        }
        TruncatedSeries { field: self.field, coeffs, ram: self.ram * m }
    }

    /// Inverse of a unit power series given by its first `n` coefficients.
    pub(crate) fn inverse_of_unit(c: &[Fe], n: usize) -> Result<Vec<Fe>> {
        let c0 = c[0].inv().ok_or_else(|| GalError::InvalidInput("series is not a unit".into()))?;
        let field = c0.field();
        let mut out = vec![field.zero(); n];
        out[0] = c0.clone();
        for i in 1..n {
            let mut acc = field.zero();
            for j in 1..=i {
                if j < c.len() {
                    acc = &acc + &(&c[j] * &out[i - j]);
                }
            }
            out[i] = -(&acc * &c0);
        }
        Ok(out)
    }

    pub fn inv(&self) -> Result<Self> {
        let coeffs = Self::inverse_of_unit(&self.coeffs, self.prec())?;
        Ok(TruncatedSeries { field: self.field, coeffs, ram: self.ram })
    }

    /// Exact scalar represented by the known coefficients (unramified only).
    pub fn to_scalar(&self) -> Result<Scalar> {
        if self.ram != 1 {
            return Err(GalError::Unsupported("ramified series have no k(t) representative".into()));
        }
        Ok(Scalar::from_upoly(UPoly::from_coeffs(self.field, self.coeffs.clone())))
    }

    /// Equality on the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.ram == other.ram
            && self.coeffs.iter().zip(other.coeffs.iter()).all(|(a, b)| a == b)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.ram == 1 { "t".to_string() } else { format!("t^(1/{})", self.ram) };
        let p = UPoly::from_coeffs(self.field, self.coeffs.clone());
        let body = p.fmt_in("u");
        let body = if self.ram == 1 { body.replace('u', "t") } else { body };
        let o = if self.ram == 1 {
            format!("O(t^{})", self.prec())
        } else {
            format!("O(u^{}), u = {var}", self.prec())
        };
        write!(f, "{body} + {o}")
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_is_minimum() {
        let q = BaseField::Rationals;
        let a = TruncatedSeries::constant(q.one(), 5, 1);
        let b = TruncatedSeries::monomial(q.int(2), 1, 3, 1);
        let c = a.add(&b);
        assert_eq!(c.prec(), 3);
        assert_eq!(a.mul(&b).valuation(), Valuation::int(1));
        assert_eq!(format!("{}", c), "1 + 2*t + O(t^3)");
    }

    #[test]
    fn ramified_valuation() {
        let q = BaseField::Rationals;
        let u = TruncatedSeries::monomial(q.one(), 1, 6, 2);
        assert_eq!(u.valuation(), Valuation::Finite(Rational64::new(1, 2)));
        assert_eq!(u.mul(&u).valuation(), Valuation::int(1));
    }
}
