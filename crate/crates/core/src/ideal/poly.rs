//! Sparse multivariate polynomials over the base field.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::arith::{BaseField, Fe};
use crate::error::{GalError, Result};

/// An exponent vector. The derived order is lexicographic and is only used
/// for canonical iteration; term orders live in [`super::order`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::var_pow(n, i, 1)
    }

    pub fn var_pow(n: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(n);
        m.0[i] = e;
        m
    }

    pub fn from_slice(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming divisibility.
    pub fn div(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, e: u16) -> Self {
        Monomial(self.0.iter().map(|a| a * e).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
    }
}

/// A polynomial in a fixed number of variables; the variable names live in a [`PolyRing`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: BaseField,
    nvars: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl MultiPoly {
    pub fn zero(field: BaseField, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Fe, nvars: usize) -> Self {
        Self::term(c, Monomial::one(nvars))
    }

    pub fn one(field: BaseField, nvars: usize) -> Self {
        Self::constant(field.one(), nvars)
    }

    pub fn term(c: Fe, m: Monomial) -> Self {
        let field = c.field();
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { field, nvars, terms }
    }

    pub fn var(field: BaseField, nvars: usize, i: usize) -> Self {
        Self::term(field.one(), Monomial::var(nvars, i))
    }

    pub fn from_terms(field: BaseField, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Fe)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic, increasing) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Fe)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Fe {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: Fe) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Fe> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Fe) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, c: &Fe, mono: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c * &self.field.int(e as i64));
        }
        out
    }

    /// Substitute polynomials (all in a common target ring) for every variable.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target_n = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = MultiPoly::zero(self.field, target_n);
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(self.field, target_n), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone(), target_n);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluate at a point of `k^n`.
    pub fn eval(&self, point: &[Fe]) -> Fe {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v = &v * &point[i].pow(e as u64);
                }
            }
            acc = &acc + &v;
        }
        acc
    }

    /// Re-embed into a ring with more variables: variable `i` goes to `map[i]`.
    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(self.field, new_nvars);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(new_nvars);
            for (i, &x) in m.0.iter().enumerate() {
                e.0[map[i]] += x;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Append `k` fresh variables at the end.
    pub fn extend(&self, k: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(self.nvars + k, &map)
    }

    /// Drop variables that do not occur; `keep` lists the surviving indices in order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Self::zero(self.field, keep.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !keep.contains(&i) {
                    return Err(GalError::InvalidInput("polynomial involves a dropped variable".into()));
                }
            }
            let e = Monomial(keep.iter().map(|&i| m.0[i]).collect());
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Collect terms as a univariate polynomial in `var` with coefficients in the other variables.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.field, self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    /// Multidegree with respect to a grading: `grading[i]` is the weight vector of variable `i`.
    pub fn multidegree_of(m: &Monomial, grading: &[Vec<i64>]) -> Vec<i64> {
        let g = grading.first().map(|v| v.len()).unwrap_or(0);
        let mut d = vec![0i64; g];
        for (i, &e) in m.0.iter().enumerate() {
            for (j, w) in grading[i].iter().enumerate() {
                d[j] += w * e as i64;
            }
        }
        d
    }

    /// The common multidegree of all terms, or `None` if not homogeneous.
    pub fn homogeneous_degree(&self, grading: &[Vec<i64>]) -> Option<Vec<i64>> {
        let mut degs = self.terms.keys().map(|m| Self::multidegree_of(m, grading));
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Monic normalisation with respect to the canonical (largest lex) term.
    pub fn monic_lex(&self) -> Self {
        match self.terms.iter().next_back() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", format_poly(self, &names))
    }
}

/// Variables and coefficient field of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: BaseField,
    pub vars: Vec<String>,
}

impl PolyRing {
    pub fn new(field: BaseField, vars: &[&str]) -> Self {
        PolyRing { field, vars: vars.iter().map(|s| s.to_string()).collect() }
    }

    pub fn from_names(field: BaseField, vars: Vec<String>) -> Self {
        PolyRing { field, vars }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.field, self.nvars(), i)
    }

    pub fn var_named(&self, name: &str) -> Result<MultiPoly> {
        self.index_of(name)
            .map(|i| self.var(i))
            .ok_or_else(|| GalError::InvalidInput(format!("unknown variable {name}")))
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.field, self.nvars())
    }

    pub fn one(&self) -> MultiPoly {
        MultiPoly::one(self.field, self.nvars())
    }

    pub fn constant(&self, c: Fe) -> MultiPoly {
        MultiPoly::constant(c, self.nvars())
    }

    pub fn int(&self, n: i64) -> MultiPoly {
        self.constant(self.field.int(n))
    }

    /// A ring with extra variables appended; fresh names get a numeric suffix on clashes.
    pub fn extended(&self, names: &[&str]) -> PolyRing {
        let mut vars = self.vars.clone();
        for n in names {
            let mut name = n.to_string();
            let mut k = 1;
            while vars.contains(&name) {
                name = format!("{n}{k}");
                k += 1;
            }
            vars.push(name);
        }
        PolyRing { field: self.field, vars }
    }

    pub fn check(&self, p: &MultiPoly) -> Result<()> {
        if p.nvars() != self.nvars() {
            return Err(GalError::RingMismatch { expected: self.nvars(), found: p.nvars() });
        }
        Ok(())
    }

    pub fn parse(&self, text: &str) -> Result<MultiPoly> {
        super::parse::parse_poly(self, text)
    }

    pub fn parse_list(&self, items: &[&str]) -> Result<Vec<MultiPoly>> {
        items.iter().map(|s| self.parse(s)).collect()
    }

    pub fn fmt(&self, p: &MultiPoly) -> String {
        format_poly(p, &self.vars)
    }
}

/// Canonical printing: terms by decreasing total degree, then decreasing lex exponent.
pub fn format_poly(p: &MultiPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Monomial, &Fe)> = p.terms().collect();
    terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| b.0.cmp(a.0)));
    let mut out = String::new();
    for (m, c) in terms {
        let neg = c.is_negative_literal();
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{}", names[i], e)),
            }
        }
        let mono = factors.join("*");
        let mag_s = match &mag {
            Fe::Q(q) if !q.is_integer() => format!("({mag})"),
            _ => format!("{mag}"),
        };
        if mono.is_empty() {
            out.push_str(&mag_s);
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag_s}*{mono}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_printing() {
        let r = PolyRing::new(BaseField::Rationals, &["t", "x", "y"]);
        let f = r.parse("(x + y)^2 - 2*x*y").unwrap();
        assert_eq!(r.fmt(&f), "x^2 + y^2");
        let g = r.parse("x - t").unwrap();
        assert_eq!(r.fmt(&f.mul(&g)), "-t*x^2 - t*y^2 + x^3 + x*y^2");
        assert_eq!(f.derivative(1), r.parse("2*x").unwrap());
        let sub = f.substitute(&[r.var(0), r.var(0), r.one()]);
        assert_eq!(r.fmt(&sub), "t^2 + 1");
    }

    #[test]
    fn homogeneity() {
        let r = PolyRing::new(BaseField::Rationals, &["t", "X", "Y"]);
        let grading = vec![vec![0], vec![1], vec![1]];
        assert_eq!(r.parse("X^2 - t*X*Y").unwrap().homogeneous_degree(&grading), Some(vec![2]));
        assert_eq!(r.parse("X^2 - Y").unwrap().homogeneous_degree(&grading), None);
    }
}
