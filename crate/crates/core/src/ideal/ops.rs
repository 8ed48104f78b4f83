//! Ideals with cached Gröbner bases, and the standard ideal operations.

use std::fmt;
use std::sync::OnceLock;

use super::groebner::{buchberger, reduce_full, SPoly};
use super::order::MonomialOrder;
use super::poly::{Monomial, MultiPoly, PolyRing};
use crate::arith::BaseField;
use crate::error::{GalError, Result};

/// A reduced Gröbner basis for a fixed order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    field: BaseField,
    nvars: usize,
    polys: Vec<SPoly>,
}

impl GroebnerBasis {
    pub fn compute(field: BaseField, nvars: usize, gens: &[MultiPoly], order: &MonomialOrder) -> Self {
        GroebnerBasis { order: order.clone(), field, nvars, polys: buchberger(gens, order) }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Elements in decreasing order of leading monomial.
    pub fn elements(&self) -> Vec<MultiPoly> {
        self.polys.iter().map(|p| p.to_poly(self.field, self.nvars)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lm().is_one()
    }

    /// Normal form with respect to the basis.
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let s = SPoly::from_poly(f, &self.order);
        reduce_full(&s, &self.polys, &self.order).to_poly(self.field, self.nvars)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Whether the monomial is standard (not a multiple of any leading monomial).
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.polys.iter().any(|p| p.lm().divides(m))
    }

    /// Leading monomial and leading coefficient of `f` under this order.
    pub fn leading_term(&self, f: &MultiPoly) -> Option<(Monomial, crate::arith::Fe)> {
        SPoly::from_poly(f, &self.order).terms.into_iter().next()
    }
}

/// An ideal of a polynomial ring over `k`, with a lazily computed grevlex basis.
#[derive(Clone)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<MultiPoly>,
    gb: OnceLock<GroebnerBasis>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| self.ring.fmt(p)).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &PolyRing, gens: Vec<MultiPoly>) -> Result<Self> {
        for g in &gens {
            ring.check(g)?;
        }
        Ok(Self::new_unchecked(ring, gens))
    }

    pub(crate) fn new_unchecked(ring: &PolyRing, gens: Vec<MultiPoly>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring: ring.clone(), gens, gb: OnceLock::new() }
    }

    pub fn parse(ring: &PolyRing, gens: &[&str]) -> Result<Self> {
        Ok(Self::new_unchecked(ring, ring.parse_list(gens)?))
    }

    pub fn zero(ring: &PolyRing) -> Self {
        Self::new_unchecked(ring, Vec::new())
    }

    pub fn unit(ring: &PolyRing) -> Self {
        Self::new_unchecked(ring, vec![ring.one()])
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> BaseField {
        self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// The cached reduced grevlex basis.
    pub fn groebner(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| GroebnerBasis::compute(self.field(), self.nvars(), &self.gens, &MonomialOrder::Grevlex))
    }

    pub fn groebner_with(&self, order: &MonomialOrder) -> Result<GroebnerBasis> {
        order.validate(self.nvars())?;
        if *order == MonomialOrder::Grevlex {
            return Ok(self.groebner().clone());
        }
        Ok(GroebnerBasis::compute(self.field(), self.nvars(), &self.gens, order))
    }

    /// The same ideal presented by its reduced grevlex basis.
    pub fn minimized(&self) -> Ideal {
        let gb = self.groebner().clone();
        let out = Self::new_unchecked(&self.ring, gb.elements());
        let _ = out.gb.set(gb);
        out
    }

    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        self.groebner().reduce(f)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        debug_assert_eq!(f.nvars(), self.nvars());
        self.groebner().contains(f)
    }

    pub fn member(&self, f: &MultiPoly) -> Result<bool> {
        self.ring.check(f)?;
        Ok(self.contains(f))
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_as(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Self::new_unchecked(&self.ring, g)
    }

    pub fn with(&self, extra: &[MultiPoly]) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(extra.iter().cloned());
        Self::new_unchecked(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.mul(b));
            }
        }
        Self::new_unchecked(&self.ring, g)
    }

    /// `I ∩ k[remaining variables]`, still presented in the full ring.
    pub fn eliminate(&self, drop: &[usize]) -> Ideal {
        if drop.is_empty() {
            return self.clone();
        }
        let ord = MonomialOrder::elimination(self.nvars(), drop);
        let gb = GroebnerBasis::compute(self.field(), self.nvars(), &self.gens, &ord);
        let keep: Vec<MultiPoly> =
            gb.elements().into_iter().filter(|p| drop.iter().all(|&i| p.degree_in(i) == 0)).collect();
        Self::new_unchecked(&self.ring, keep)
    }

    /// Lift into a ring with `k` extra variables appended.
    fn lifted(&self, names: &[&str]) -> (PolyRing, Vec<MultiPoly>) {
        let ring = self.ring.extended(names);
        let gens = self.gens.iter().map(|g| g.extend(names.len())).collect();
        (ring, gens)
    }

    /// Drop the trailing `k` variables from generators that do not involve them.
    fn contract(&self, gens: Vec<MultiPoly>, k: usize) -> Ideal {
        let n = self.nvars();
        let keep: Vec<usize> = (0..n).collect();
        let out = gens
            .into_iter()
            .filter(|p| (n..n + k).all(|i| p.degree_in(i) == 0))
            .map(|p| p.restrict(&keep).unwrap())
            .collect();
        Self::new_unchecked(&self.ring, out)
    }

    /// `I : f^∞` via a Rabinowitsch variable.
    pub fn saturate(&self, f: &MultiPoly) -> Result<Ideal> {
        self.ring.check(f)?;
        if f.is_zero() {
            return Err(GalError::ZeroPolynomial("saturation"));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let n = self.nvars();
        let (ring, mut gens) = self.lifted(&["w_"]);
        let w = ring.var(n);
        gens.push(ring.one().sub(&w.mul(&f.extend(1))));
        let tmp = Ideal::new_unchecked(&ring, gens);
        let el = tmp.eliminate(&[n]);
        Ok(self.contract(el.gens, 1).minimized())
    }

    /// `I ∩ J` via `y·I + (1 − y)·J` with `y` eliminated.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let n = self.nvars();
        let ring = self.ring.extended(&["y_"]);
        let y = ring.var(n);
        let one_minus_y = ring.one().sub(&y);
        let mut gens: Vec<MultiPoly> = self.gens.iter().map(|g| y.mul(&g.extend(1))).collect();
        gens.extend(other.gens.iter().map(|g| one_minus_y.mul(&g.extend(1))));
        let tmp = Ideal::new_unchecked(&ring, gens);
        let el = tmp.eliminate(&[n]);
        self.contract(el.gens, 1).minimized()
    }

    /// `I : f`.
    pub fn quotient(&self, f: &MultiPoly) -> Result<Ideal> {
        self.ring.check(f)?;
        if f.is_zero() {
            return Ok(Self::unit(&self.ring));
        }
        let principal = Ideal::new_unchecked(&self.ring, vec![f.clone()]);
        let inter = self.intersect(&principal);
        let gens = inter
            .gens
            .iter()
            .map(|g| divide_exact(g, f).ok_or_else(|| GalError::InvalidInput("quotient division failed".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new_unchecked(&self.ring, gens).minimized())
    }

    /// `I : J`.
    pub fn quotient_ideal(&self, other: &Ideal) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.gens {
            acc = acc.intersect(&self.quotient(g)?);
        }
        Ok(acc)
    }

    /// `f ∈ √I`, decided by `1 ∈ I + ⟨1 − w·f⟩`.
    pub fn radical_contains(&self, f: &MultiPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        let n = self.nvars();
        let (ring, mut gens) = self.lifted(&["w_"]);
        let w = ring.var(n);
        gens.push(ring.one().sub(&w.mul(&f.extend(1))));
        GroebnerBasis::compute(self.field(), n + 1, &gens, &MonomialOrder::Grevlex).is_unit()
    }

    /// A maximal set of variables independent modulo the leading ideal, of maximum size.
    pub fn independent_set(&self) -> Vec<usize> {
        let gb = self.groebner();
        if gb.is_unit() {
            return Vec::new();
        }
        let lms = gb.leading_monomials();
        let n = self.nvars();
        let supports: Vec<u64> =
            lms.iter().map(|m| m.support().iter().fold(0u64, |acc, &i| acc | (1 << i))).collect();
        let mut best: Option<u64> = None;
        // search subsets of the variables by decreasing size
        let mut masks: Vec<u64> = (0..(1u64 << n)).collect();
        masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        for m in masks {
            if supports.iter().all(|s| s & !m != 0) {
                best = Some(m);
                break;
            }
        }
        let m = best.unwrap_or(0);
        (0..n).filter(|i| m & (1 << i) != 0).collect()
    }

    /// Krull dimension of the quotient ring (−1 for the unit ideal).
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        self.independent_set().len() as i64
    }
}

/// `f / g` when `g` divides `f` exactly.
pub fn divide_exact(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    if g.is_zero() {
        return None;
    }
    let ord = MonomialOrder::Lex;
    let gs = SPoly::from_poly(g, &ord);
    let mut p = SPoly::from_poly(f, &ord);
    let mut q = MultiPoly::zero(f.field(), f.nvars());
    while !p.is_zero() {
        let (m, c) = p.terms[0].clone();
        if !gs.lm().divides(&m) {
            return None;
        }
        let mq = m.div(gs.lm());
        let cq = &c / gs.lc();
        q.add_term(mq.clone(), cq.clone());
        p = p.sub_mul(&cq, &mq, &gs, &ord);
    }
    Some(q)
}

/// Least common multiple of two nonzero polynomials (monic for grevlex).
pub fn poly_lcm(ring: &PolyRing, f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let a = Ideal::new_unchecked(ring, vec![f.clone()]);
    let b = Ideal::new_unchecked(ring, vec![g.clone()]);
    let i = a.intersect(&b);
    i.gens.into_iter().next().unwrap_or_else(|| ring.zero())
}

/// Greatest common divisor, monic with respect to grevlex.
pub fn poly_gcd(ring: &PolyRing, f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return monic(g);
    }
    if g.is_zero() {
        return monic(f);
    }
    if f.is_constant() || g.is_constant() {
        return ring.one();
    }
    let l = poly_lcm(ring, f, g);
    monic(&divide_exact(&f.mul(g), &l).expect("lcm divides the product"))
}

fn monic(f: &MultiPoly) -> MultiPoly {
    let s = SPoly::from_poly(f, &MonomialOrder::Grevlex);
    match s.terms.first() {
        Some((_, c)) => f.scale(&c.inv().unwrap()),
        None => f.clone(),
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` for `order`.
pub fn groebner_basis(ideal: &Ideal, order: &MonomialOrder) -> Result<Vec<MultiPoly>> {
    Ok(ideal.groebner_with(order)?.elements())
}

pub fn ideal_membership(f: &MultiPoly, ideal: &Ideal) -> Result<bool> {
    ideal.member(f)
}

pub fn eliminate(ideal: &Ideal, drop: &[usize]) -> Ideal {
    ideal.eliminate(drop)
}

pub fn saturate(ideal: &Ideal, f: &MultiPoly) -> Result<Ideal> {
    ideal.saturate(f)
}

pub fn radical_membership(f: &MultiPoly, ideal: &Ideal) -> Result<bool> {
    ideal.ring().check(f)?;
    Ok(ideal.radical_contains(f))
}
