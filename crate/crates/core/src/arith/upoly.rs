//! Dense univariate polynomials over the base field (the variable is `t` unless stated otherwise).

use std::fmt;

use super::field::{BaseField, Fe};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    field: BaseField,
    /// Coefficient of `t^i` at index `i`; no trailing zeros.
    coeffs: Vec<Fe>,
}

impl UPoly {
    pub fn zero(field: BaseField) -> Self {
        UPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: BaseField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Fe) -> Self {
        let field = c.field();
        Self::from_coeffs(field, vec![c])
    }

    pub fn monomial(c: Fe, deg: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); deg];
        coeffs.push(c);
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: BaseField, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Fe> {
        self.coeffs.last()
    }

    /// Order of vanishing at `t = 0`.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Fe) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift_down(&self, k: usize) -> Self {
        UPoly { field: self.field, coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { field: self.field, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::from_coeffs(self.field, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::from_coeffs(self.field, coeffs)
    }

    pub fn neg(&self) -> Self {
        UPoly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::from_coeffs(self.field, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().expect("division by zero polynomial").inv().unwrap();
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = &r[top] * &dl;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    let idx = top - dd + j;
                    r[idx] = &r[idx] - &(&c * b);
                }
                q[top - dd] = c;
            }
            r.pop();
        }
        (Self::from_coeffs(self.field, q), Self::from_coeffs(self.field, r))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.int(i as i64))
            .collect();
        Self::from_coeffs(self.field, coeffs)
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self(t) mod t^n` truncated coefficient vector of length `n`.
    pub fn truncated(&self, n: usize) -> Vec<Fe> {
        (0..n).map(|i| self.coeff(i)).collect()
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative_literal();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&format!("{mag}"));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_in("t"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
