//! Laurent polynomials with truncated-series coefficients on products of discs and annuli.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::arith::{BaseField, TruncatedSeries, Valuation};
use crate::error::{GalError, Result};

/// One factor of a generalized polydisc, in valuation coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `v(z) ≥ q`: the disc of radius `c^q`.
    Disc(Rational64),
    /// `q1 ≤ v(z) ≤ q2`: radii between `c^{q2}` and `c^{q1}`.
    Annulus(Rational64, Rational64),
}

impl Factor {
    pub fn unit_disc() -> Self {
        Factor::Disc(Rational64::zero())
    }

    pub fn circle(q: Rational64) -> Self {
        Factor::Annulus(q, q)
    }

    fn allows(&self, e: i32) -> bool {
        e >= 0 || matches!(self, Factor::Annulus(..))
    }

    /// Sup valuation of `z^e` on the factor.
    fn monomial_valuation(&self, e: i32) -> Rational64 {
        let e = Rational64::from_integer(e as i64);
        match *self {
            Factor::Disc(q) => e * q,
            Factor::Annulus(q1, q2) => (e * q1).min(e * q2),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Disc(q) => write!(f, "disc(v >= {q})"),
            Factor::Annulus(a, b) => write!(f, "annulus({a} <= v <= {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolydiscDomain {
    pub factors: Vec<Factor>,
}

impl PolydiscDomain {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            match *f {
                Factor::Disc(q) if q < Rational64::zero() => {
                    return Err(GalError::InvalidInput("disc radius must be at most 1".into()))
                }
                Factor::Annulus(a, b) if a < Rational64::zero() || a > b => {
                    return Err(GalError::InvalidInput(format!("annulus bounds need 0 <= {a} <= {b}")))
                }
                _ => {}
            }
        }
        Ok(PolydiscDomain { factors })
    }

    /// The closed unit polydisc `B^d`.
    pub fn unit_polydisc(d: usize) -> Self {
        PolydiscDomain { factors: vec![Factor::unit_disc(); d] }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }
}

/// A finite Laurent polynomial `Σ a_e z^e` with coefficients known to a common precision.
#[derive(Clone)]
pub struct TateChunk {
    field: BaseField,
    nvars: usize,
    prec: usize,
    terms: BTreeMap<Vec<i32>, TruncatedSeries>,
}

impl TateChunk {
    pub fn zero(field: BaseField, nvars: usize, prec: usize) -> Self {
        TateChunk { field, nvars, prec, terms: BTreeMap::new() }
    }

    /// Build from `(exponent, t-adic coefficients)` pairs.
    pub fn from_terms(field: BaseField, nvars: usize, prec: usize, terms: Vec<(Vec<i32>, Vec<i64>)>) -> Result<Self> {
        let mut c = Self::zero(field, nvars, prec);
        for (e, coeffs) in terms {
            let s = TruncatedSeries::from_coeffs(field, coeffs.iter().map(|&x| field.int(x)).collect(), prec, 1)?;
            c.add_term(e, s)?;
        }
        Ok(c)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &TruncatedSeries)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: TruncatedSeries) -> Result<()> {
        if e.len() != self.nvars {
            return Err(GalError::RingMismatch { expected: self.nvars, found: e.len() });
        }
        if c.ram() != 1 {
            return Err(GalError::Unsupported("ramified coefficients".into()));
        }
        let c = c.truncate(self.prec);
        if c.prec() < self.prec {
            return Err(GalError::Precision("coefficient precision below the chunk precision".into()));
        }
        let v = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.prec = self.prec.min(other.prec);
        out.terms = out.terms.into_iter().map(|(e, c)| (e, c.truncate(out.prec))).filter(|(_, c)| !c.is_zero()).collect();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.truncate(out.prec)).expect("matching shapes");
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut out = Self::zero(self.field, self.nvars, prec);
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a.truncate(prec).mul(&b.truncate(prec))).expect("matching shapes");
            }
        }
        out
    }

    /// Multiply every coefficient by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.terms = out.terms.into_iter().map(|(e, c)| (e, c.shift_up(k))).filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    /// Keep the terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&[i32]) -> bool) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| keep(e));
        out
    }

    /// Equality on the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Substitute `z_var ↦ a + b·z_var`, for a variable with non-negative exponents only.
    pub fn substitute_affine(&self, var: usize, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<Self> {
        if self.terms.keys().any(|e| e[var] < 0) {
            return Err(GalError::InvalidInput("affine substitution needs a disc variable".into()));
        }
        let mut out = Self::zero(self.field, self.nvars, self.prec);
        let (a, b) = (a.truncate(self.prec), b.truncate(self.prec));
        for (e, c) in &self.terms {
            let n = e[var] as u64;
            // (a + b z)^n = Σ binom(n, j) a^{n-j} b^j z^j
            let mut binom: i128 = 1;
            for j in 0..=n {
                let mut ee = e.clone();
                ee[var] = j as i32;
                let scale = self.field.from_bigint(&num_bigint::BigInt::from(binom));
                out.add_term(ee, c.mul(&a.pow((n - j) as u32)).mul(&b.pow(j as u32)).scale(&scale))?;
                binom = binom * (n - j) as i128 / (j + 1) as i128;
            }
        }
        Ok(out)
    }
}

/// Minimum coefficient valuation on the unit polydisc.
pub fn gauss_valuation(f: &TateChunk) -> Result<Valuation> {
    sup_valuation(f, &PolydiscDomain::unit_polydisc(f.nvars))
}

/// Sup valuation on a generalized polydisc: `min over terms of v(a_e) + Σ_i v_i(z_i^{e_i})`.
pub fn sup_valuation(f: &TateChunk, dom: &PolydiscDomain) -> Result<Valuation> {
    if dom.dim() != f.nvars {
        return Err(GalError::RingMismatch { expected: dom.dim(), found: f.nvars });
    }
    let mut best = Valuation::Infinite;
    for (e, c) in &f.terms {
        let mut extra = Rational64::zero();
        for (fac, &x) in dom.factors.iter().zip(e) {
            if !fac.allows(x) {
                return Err(GalError::InvalidInput(format!("exponent {x} not allowed on {fac}")));
            }
            extra += fac.monomial_valuation(x);
        }
        if let Valuation::Finite(v) = c.valuation() {
            best = best.min(Valuation::Finite(v + extra));
        }
    }
    Ok(best)
}

/// `f ∈ 𝒪(c^q)(dom)`, i.e. the sup valuation exceeds `q` strictly.
pub fn vq_membership(f: &TateChunk, dom: &PolydiscDomain, q: Rational64) -> Result<bool> {
    Ok(match sup_valuation(f, dom)? {
        Valuation::Infinite => true,
        Valuation::Finite(v) => v > q,
    })
}

impl fmt::Display for TateChunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(t^{})", self.prec);
        }
        let names: Vec<String> = (1..=self.nvars).map(|i| if self.nvars == 1 { "z".into() } else { format!("z{i}") }).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let poly = crate::arith::UPoly::from_coeffs(self.field, c.coeffs().to_vec()).fmt_in("t");
                let mono: Vec<String> = e
                    .iter()
                    .zip(&names)
                    .filter(|(x, _)| **x != 0)
                    .map(|(x, n)| if *x == 1 { n.clone() } else { format!("{n}^{x}") })
                    .collect();
                if mono.is_empty() {
                    format!("({poly})")
                } else {
                    format!("({poly})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{} + O(t^{})", parts.join(" + "), self.prec)
    }
}

impl fmt::Debug for TateChunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn chunk(terms: Vec<(Vec<i32>, Vec<i64>)>) -> TateChunk {
        let n = terms.first().map(|t| t.0.len()).unwrap_or(1);
        TateChunk::from_terms(BaseField::Rationals, n, 8, terms).unwrap()
    }

    #[test]
    fn gauss_examples() {
        // t z1 + t^3
        let f = chunk(vec![(vec![1, 0], vec![0, 1]), (vec![0, 0], vec![0, 0, 0, 1])]);
        assert_eq!(gauss_valuation(&f).unwrap(), Valuation::int(1));
        assert_eq!(gauss_valuation(&chunk(vec![(vec![0], vec![1])])).unwrap(), Valuation::int(0));
        let f = chunk(vec![(vec![0], vec![0, 0, 1]), (vec![2], vec![0, 1])]);
        assert_eq!(gauss_valuation(&f).unwrap(), Valuation::int(1));
        assert!(gauss_valuation(&chunk(vec![(vec![-1], vec![1])])).is_err());
    }

    #[test]
    fn annulus_examples() {
        let ann = PolydiscDomain::new(vec![Factor::Annulus(r(0), r(1))]).unwrap();
        assert_eq!(sup_valuation(&chunk(vec![(vec![-1], vec![1])]), &ann).unwrap(), Valuation::int(-1));
        assert_eq!(sup_valuation(&chunk(vec![(vec![1], vec![1])]), &ann).unwrap(), Valuation::int(0));
        assert_eq!(sup_valuation(&chunk(vec![(vec![-1], vec![0, 1])]), &ann).unwrap(), Valuation::int(0));
        assert!(PolydiscDomain::new(vec![Factor::Annulus(r(2), r(1))]).is_err());
    }

    #[test]
    fn membership_examples() {
        let b1 = PolydiscDomain::unit_polydisc(1);
        let t = chunk(vec![(vec![0], vec![0, 1])]);
        assert!(vq_membership(&t, &b1, r(0)).unwrap());
        assert!(!vq_membership(&t, &b1, r(1)).unwrap());
        assert!(!vq_membership(&chunk(vec![(vec![1], vec![1])]), &b1, r(0)).unwrap());
    }

    #[test]
    fn affine_substitution() {
        // z^2 with z ↦ 1 + t z
        let f = chunk(vec![(vec![2], vec![1])]);
        let q = BaseField::Rationals;
        let one = TruncatedSeries::constant(q.one(), 8, 1);
        let t = TruncatedSeries::monomial(q.one(), 1, 8, 1);
        let g = f.substitute_affine(0, &one, &t).unwrap();
        let want = chunk(vec![(vec![0], vec![1]), (vec![1], vec![0, 2]), (vec![2], vec![0, 0, 1])]);
        assert!(g.agrees_with(&want));
    }
}
