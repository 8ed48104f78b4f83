//! The coefficient field `k`: either `Q` or a prime field `F_p`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GalError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    /// Builds `F_p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(GalError::InvalidInput(format!("{p} is not a supported prime modulus")));
        }
        Ok(BaseField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseField::Prime(_))
    }

    pub fn zero(&self) -> Fe {
        self.int(0)
    }

    pub fn one(&self) -> Fe {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Fe {
        match self {
            BaseField::Rationals => Fe::Q(BigRational::from_integer(BigInt::from(n))),
            BaseField::Prime(p) => Fe::P(n.rem_euclid(*p as i64) as u64, *p),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Fe {
        match self {
            BaseField::Rationals => Fe::Q(BigRational::from_integer(n.clone())),
            BaseField::Prime(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                Fe::P(r.to_u64().unwrap_or(0), *p)
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Fe {
        self.int(num) / self.int(den)
    }

    /// All elements of a finite field, or `None` for `Q`.
    pub fn elements(&self) -> Option<Vec<Fe>> {
        match self {
            BaseField::Rationals => None,
            BaseField::Prime(p) => Some((0..*p).map(|v| Fe::P(v, *p)).collect()),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the coefficient field. Elements of `F_p` carry their modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Fe {
    Q(BigRational),
    P(u64, u64),
}

impl Fe {
    pub fn field(&self) -> BaseField {
        match self {
            Fe::Q(_) => BaseField::Rationals,
            Fe::P(_, p) => BaseField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Fe::Q(q) => q.is_zero(),
            Fe::P(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Fe::Q(q) => q.is_one(),
            Fe::P(v, _) => *v == 1,
        }
    }

    pub fn zero_like(&self) -> Fe {
        self.field().zero()
    }

    pub fn one_like(&self) -> Fe {
        self.field().one()
    }

    pub fn inv(&self) -> Option<Fe> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Fe::Q(q) => Fe::Q(q.recip()),
            Fe::P(v, p) => Fe::P(pow_mod(*v, p - 2, *p), *p),
        })
    }

    pub fn pow(&self, mut e: u64) -> Fe {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Value as a small signed integer when it is one (used for printing and literals).
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Fe::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            Fe::Q(_) => None,
            Fe::P(v, p) => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
        }
    }

    /// Representative in `0..p` for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Fe::P(v, _) => Some(*v),
            Fe::Q(_) => None,
        }
    }

    pub fn is_negative_literal(&self) -> bool {
        match self {
            Fe::Q(q) => q.is_negative(),
            Fe::P(v, p) => *v > p / 2,
        }
    }

    /// A cheap size measure used by pivot heuristics.
    pub fn height(&self) -> u64 {
        match self {
            Fe::Q(q) => (q.numer().bits() + q.denom().bits()) as u64,
            Fe::P(..) => 1,
        }
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fe::Q(q) => write!(f, "{q}"),
            Fe::P(..) => write!(f, "{}", self.as_i64().unwrap_or(0)),
        }
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn mismatch(a: &Fe, b: &Fe) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add<&Fe> for &Fe {
    type Output = Fe;
    fn add(self, rhs: &Fe) -> Fe {
        match (self, rhs) {
            (Fe::Q(a), Fe::Q(b)) => Fe::Q(a + b),
            (Fe::P(a, p), Fe::P(b, q)) if p == q => {
                let s = a + b;
                Fe::P(if s >= *p { s - p } else { s }, *p)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub<&Fe> for &Fe {
    type Output = Fe;
    fn sub(self, rhs: &Fe) -> Fe {
        match (self, rhs) {
            (Fe::Q(a), Fe::Q(b)) => Fe::Q(a - b),
            (Fe::P(a, p), Fe::P(b, q)) if p == q => Fe::P(if a >= b { a - b } else { a + p - b }, *p),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul<&Fe> for &Fe {
    type Output = Fe;
    fn mul(self, rhs: &Fe) -> Fe {
        match (self, rhs) {
            (Fe::Q(a), Fe::Q(b)) => Fe::Q(a * b),
            (Fe::P(a, p), Fe::P(b, q)) if p == q => Fe::P(mul_mod(*a, *b, *p), *p),
            _ => mismatch(self, rhs),
        }
    }
}

impl Div<&Fe> for &Fe {
    type Output = Fe;
    fn div(self, rhs: &Fe) -> Fe {
        let inv = rhs.inv().expect("division by zero in base field");
        self * &inv
    }
}

impl Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        match self {
            Fe::Q(a) => Fe::Q(-a),
            Fe::P(0, p) => Fe::P(0, *p),
            Fe::P(a, p) => Fe::P(p - a, *p),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Fe> for Fe {
            type Output = Fe;
            fn $m(self, rhs: Fe) -> Fe {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Fe> for Fe {
            type Output = Fe;
            fn $m(self, rhs: &Fe) -> Fe {
                (&self).$m(rhs)
            }
        }
        impl $tr<Fe> for &Fe {
            type Output = Fe;
            fn $m(self, rhs: Fe) -> Fe {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        -&self
    }
}
