//! Characteristic polynomials of lattice endomorphisms and quasi-unipotence of their reductions.

use std::fmt;

use super::linalg::charpoly;
use crate::arith::{BaseField, Fe, Scalar, UPoly};
use crate::error::{GalError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CharpolyReport {
    /// Coefficients of `det(T − A)`, constant term first.
    pub coeffs: Vec<Scalar>,
    /// All coefficients lie in `R`.
    pub integral: bool,
}

impl fmt::Display for CharpolyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            let cs = c.to_string();
            let simple = !cs[1..].contains(['+', '-', '/']);
            let term = if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if simple {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => s.push_str(&format!(" - {rest}")),
                None => s.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{s}")
    }
}

/// Characteristic polynomial of a square matrix over `K`, with an integrality check.
pub fn charpoly_integrality(field: BaseField, m: &[Vec<Scalar>]) -> CharpolyReport {
    let coeffs = charpoly(field, m);
    let integral = coeffs.iter().all(|c| c.is_integral());
    CharpolyReport { coeffs, integral }
}

/// Reduction of an integral characteristic polynomial modulo `t`.
#[derive(Clone, Debug)]
pub struct QuasiUnipotence {
    pub reduction: UPoly,
    /// Every root of the reduction is a root of unity.
    pub quasi_unipotent: bool,
    /// Least `M` such that `A^M` is unipotent modulo `t`.
    pub order: Option<u64>,
}

impl fmt::Display for QuasiUnipotence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "reduction {}", self.reduction.fmt_in("T"))?;
        match self.order {
            Some(m) if self.quasi_unipotent => write!(f, ", quasi-unipotent with M = {m}"),
            _ => write!(f, ", not quasi-unipotent"),
        }
    }
}

fn powmod(base: &UPoly, mut e: u128, m: &UPoly) -> UPoly {
    let mut acc = UPoly::one(m.field()).divrem(m).1;
    let mut b = base.divrem(m).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).divrem(m).1;
        }
        b = b.mul(&b).divrem(m).1;
        e >>= 1;
    }
    acc
}

/// Product of the distinct monic irreducible factors.
fn radical_fp(f: &UPoly) -> UPoly {
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return f;
    }
    let p = f.field().characteristic() as usize;
    let df = f.derivative();
    if df.is_zero() {
        // f = h(T^p) = h(T)^p over F_p
        let coeffs: Vec<Fe> = f.coeffs().iter().step_by(p).cloned().collect();
        return radical_fp(&UPoly::from_coeffs(f.field(), coeffs));
    }
    let g = f.gcd(&df);
    let part = f.divrem(&g).0.monic();
    let rest = radical_fp(&g);
    let common = part.gcd(&rest);
    part.mul(&rest).divrem(&common).0.monic()
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduce an integral characteristic polynomial mod `t` and decide whether all
/// eigenvalues are roots of unity, with the least `M` making `A^M` unipotent.
pub fn quasi_unipotence_check(coeffs: &[Scalar]) -> Result<QuasiUnipotence> {
    let Some(field) = coeffs.first().map(|c| c.field()) else {
        return Err(GalError::InvalidInput("empty characteristic polynomial".into()));
    };
    if !field.is_finite() {
        return Err(GalError::Unsupported("quasi-unipotence is decided over finite residue fields only".into()));
    }
    if coeffs.iter().any(|c| !c.is_integral()) {
        return Err(GalError::Precondition("characteristic polynomial is not integral".into()));
    }
    let reduction = UPoly::from_coeffs(field, coeffs.iter().map(|c| c.residue()).collect());
    if reduction.coeff(0).is_zero() {
        return Ok(QuasiUnipotence { reduction, quasi_unipotent: false, order: None });
    }
    let q = field.characteristic() as u128;
    let rad = radical_fp(&reduction);
    let x = UPoly::monomial(field.one(), 1);
    // distinct-degree factorization bounds the order by lcm(q^d - 1)
    let mut bound: u128 = 1;
    let mut rest = rad.clone();
    let mut d = 0u32;
    while rest.degree().unwrap_or(0) > 0 {
        d += 1;
        let qd = q.checked_pow(d).ok_or_else(|| GalError::Unsupported("field extension too large".into()))?;
        let xq = powmod(&x, qd, &rest);
        let g = rest.gcd(&xq.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            let e = qd - 1;
            bound = bound / gcd(bound, e) * e;
            rest = rest.divrem(&g).0;
        }
    }
    let one = UPoly::one(field).divrem(&rad).1;
    let mut m = bound;
    for l in prime_factors(bound) {
        while m % l == 0 && powmod(&x, m / l, &rad) == one {
            m /= l;
        }
    }
    let order = u64::try_from(m).ok();
    Ok(QuasiUnipotence { reduction, quasi_unipotent: true, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: BaseField, c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&v| Scalar::int(field, v)).collect()
    }

    #[test]
    fn orders_of_roots_of_unity() {
        let f7 = BaseField::prime(7).unwrap();
        // T - 2: 2 has order 3 mod 7
        let q = quasi_unipotence_check(&poly(f7, &[-2, 1])).unwrap();
        assert_eq!(q.order, Some(3));
        // (T - 1)^2 is unipotent
        assert_eq!(quasi_unipotence_check(&poly(f7, &[1, -2, 1])).unwrap().order, Some(1));
        // T^2 + 1 over F_7 is irreducible, roots of order 4
        assert_eq!(quasi_unipotence_check(&poly(f7, &[1, 0, 1])).unwrap().order, Some(4));
        // T is not
        assert!(!quasi_unipotence_check(&poly(f7, &[0, 1])).unwrap().quasi_unipotent);
        // (T^7 - 1) = (T - 1)^7
        let mut c = vec![0i64; 8];
        c[0] = -1;
        c[7] = 1;
        assert_eq!(quasi_unipotence_check(&poly(f7, &c)).unwrap().order, Some(1));
        assert!(quasi_unipotence_check(&poly(BaseField::Rationals, &[-1, 1])).is_err());
    }

    #[test]
    fn display() {
        let f7 = BaseField::prime(7).unwrap();
        let r = charpoly_integrality(f7, &[vec![Scalar::int(f7, 2)]]);
        assert!(r.integral);
        assert_eq!(r.to_string(), "T - 2");
    }
}
