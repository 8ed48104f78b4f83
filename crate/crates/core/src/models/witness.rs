//! Search for points `x` of a curve chart over `k((t^{1/e}))` with `v_x(a) ≤ r`.
//!
//! Only points with coordinates in `k[[t^{1/e}]]` are considered (the residue
//! field is `k` itself). Roots are lifted by Newton–Puiseux steps and every
//! candidate is re-checked by series evaluation and a Hensel bound before
//! being reported.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};

use super::chart::Chart;
use super::ga::LaurentElement;
use crate::arith::{BaseField, Fe, NewtonPolygon, TruncatedSeries, UPoly, Valuation};
use crate::error::{GalError, Result};
use crate::ideal::MultiPoly;

const DIVISOR_BOUND: i128 = 10_000_000;
const PRIME_ENUM_BOUND: u64 = 100_000;

/// A verified point with `v(a) ≤ r`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub ramification: u32,
    /// Coordinates in `u = t^(1/ramification)`, in chart-variable order.
    pub coords: Vec<TruncatedSeries>,
    pub value: Rational64,
    /// Lower bound for the valuation of the chart equations at the approximate point.
    pub equation_valuation: Valuation,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "e = {}, point ({}), v(a) = {}", self.ramification, cs.join("; "), self.value)
    }
}

#[derive(Clone, Debug)]
pub enum WitnessSearch {
    Found(Witness),
    /// Nothing found within the bounds; this is not a proof that no witness exists.
    NotFound { e_max: u32, points_tried: usize },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            WitnessSearch::NotFound { .. } => None,
        }
    }
}

enum Shape {
    Line,
    Plane,
    Points(MultiPoly),
    Curve(MultiPoly),
}

fn trunc(p: &UPoly, n: usize) -> UPoly {
    UPoly::from_coeffs(p.field(), p.truncated(n.min(p.coeffs().len())))
}

fn ord(p: &UPoly) -> Option<usize> {
    p.ord()
}

/// `f(u^e, coords)` modulo `u^n`.
fn eval_at(f: &MultiPoly, e: u32, coords: &[UPoly], n: usize) -> UPoly {
    let field = f.field();
    let mut acc = UPoly::zero(field);
    let mut powers: Vec<Vec<UPoly>> = coords.iter().map(|c| vec![UPoly::one(field), trunc(c, n)]).collect();
    for (m, c) in f.terms() {
        let tdeg = m.0[0] as usize * e as usize;
        if tdeg >= n {
            continue;
        }
        let mut term = UPoly::monomial(c.clone(), tdeg);
        for (i, &ex) in m.0.iter().enumerate().skip(1) {
            let ex = ex as usize;
            if ex == 0 {
                continue;
            }
            let pw = &mut powers[i - 1];
            while pw.len() <= ex {
                let next = trunc(&pw.last().unwrap().mul(&pw[1]), n);
                pw.push(next);
            }
            term = trunc(&term.mul(&pw[ex]), n);
        }
        acc = acc.add(&term);
    }
    trunc(&acc, n)
}

/// Nonzero roots in `k` of a univariate polynomial.
fn roots_in_field(p: &UPoly) -> Vec<Fe> {
    let field = p.field();
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    match field {
        BaseField::Prime(q) => {
            if q > PRIME_ENUM_BOUND {
                return Vec::new();
            }
            (1..q as i64).map(|v| field.int(v)).filter(|v| p.eval(v).is_zero()).collect()
        }
        BaseField::Rationals => {
            // integer coefficients
            let mut den = BigInt::from(1);
            for c in p.coeffs() {
                if let Fe::Q(q) = c {
                    den = den.lcm(q.denom());
                }
            }
            let ints: Vec<BigInt> = p
                .coeffs()
                .iter()
                .map(|c| match c {
                    Fe::Q(q) => q.numer() * (&den / q.denom()),
                    Fe::P(..) => unreachable!(),
                })
                .collect();
            let lo = p.ord().unwrap();
            let a0 = ints[lo].abs().to_i128();
            let an = ints[deg].abs().to_i128();
            let (Some(a0), Some(an)) = (a0, an) else { return Vec::new() };
            if a0 > DIVISOR_BOUND || an > DIVISOR_BOUND {
                return Vec::new();
            }
            let divs = |n: i128| (1..=n).filter(|d| n % d == 0).collect::<Vec<_>>();
            let mut out: Vec<Fe> = Vec::new();
            for pn in divs(a0) {
                for qd in divs(an) {
                    if pn.gcd(&qd) != 1 {
                        continue;
                    }
                    for sgn in [1i64, -1] {
                        let v = field.from_ratio(sgn * pn as i64, qd as i64);
                        if !out.contains(&v) && p.eval(&v).is_zero() {
                            out.push(v);
                        }
                    }
                }
            }
            out
        }
    }
}

/// Approximate roots `y ∈ k[[u]]` with `ord(y) ≥ min_val` of `Σ g_j(u) y^j`, accurate to about `u^remaining`.
fn puiseux_roots(g: &[UPoly], min_val: usize, remaining: i64, depth: usize) -> Vec<UPoly> {
    let field = g[0].field();
    let mut g: Vec<UPoly> = g.to_vec();
    while g.len() > 1 && g.last().unwrap().is_zero() {
        g.pop();
    }
    if remaining <= 0 || depth > 64 {
        return vec![UPoly::zero(field)];
    }
    if g.len() <= 1 {
        return if g[0].is_zero() { vec![UPoly::zero(field)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    if g[0].is_zero() {
        out.push(UPoly::zero(field));
    }
    let pts: Vec<(usize, Valuation)> =
        g.iter().enumerate().map(|(j, c)| (j, c.ord().map(|o| Valuation::int(o as i64)).unwrap_or(Valuation::Infinite))).collect();
    let Ok(np) = NewtonPolygon::from_points(&pts) else { return out };
    let cutoff = (4 * remaining + 8) as usize;
    for w in np.vertices.windows(2) {
        let (j1, v1) = w[0];
        let (j2, v2) = w[1];
        let slope = (v2 - v1) / Rational64::from_integer((j2 - j1) as i64);
        let gamma = -slope;
        if !gamma.is_integer() || gamma.is_negative() || (gamma.to_integer() as usize) < min_val {
            continue;
        }
        let gam = gamma.to_integer() as usize;
        let beta = (v1 + gamma * Rational64::from_integer(j1 as i64)).to_integer() as usize;
        let mut phi = vec![field.zero(); j2 - j1 + 1];
        for (j, c) in g.iter().enumerate().take(j2 + 1).skip(j1) {
            if let Some(o) = c.ord() {
                if o + gam * j == beta {
                    phi[j - j1] = c.coeff(o);
                }
            }
        }
        let phi = UPoly::from_coeffs(field, phi);
        for c in roots_in_field(&phi) {
            // h(y1) = u^{-beta} g(u^gam (c + y1))
            let n = g.len();
            let mut h = vec![UPoly::zero(field); n];
            // (c + y1)^j expanded via binomials
            let mut binom = vec![field.one()];
            for (j, gj) in g.iter().enumerate() {
                if j > 0 {
                    let mut next = vec![field.zero(); j + 1];
                    for (i, b) in binom.iter().enumerate() {
                        next[i] = &next[i] + &(b * &c);
                        next[i + 1] = &next[i + 1] + b;
                    }
                    binom = next;
                }
                if gj.is_zero() {
                    continue;
                }
                let base = gj.shift_up(gam * j);
                for (i, b) in binom.iter().enumerate() {
                    if !b.is_zero() {
                        h[i] = h[i].add(&base.scale(b));
                    }
                }
            }
            let h: Vec<UPoly> = h.iter().map(|p| trunc(&p.shift_down(beta), cutoff)).collect();
            for s in puiseux_roots(&h, 1, remaining - gam as i64, depth + 1) {
                let y = UPoly::constant(c.clone()).add(&s).shift_up(gam);
                out.push(y);
            }
        }
    }
    out
}

fn as_upoly_in_var(f: &MultiPoly, var: usize, e: u32, fixed: &[(usize, UPoly)], n: usize) -> Vec<UPoly> {
    // coefficients of f as a polynomial in chart variable `var` after substituting the others
    let field = f.field();
    let coeffs = f.coefficients_in(var);
    let nv = f.nvars() - 1;
    coeffs
        .iter()
        .map(|c| {
            let mut coords = vec![UPoly::zero(field); nv];
            for (i, v) in fixed {
                coords[*i - 1] = v.clone();
            }
            eval_at(c, e, &coords, n)
        })
        .collect()
}

fn candidates(field: BaseField, e: u32) -> Vec<UPoly> {
    let mut out: Vec<UPoly> = Vec::new();
    for v in [0i64, 1, -1, 2, -2, 3, -3] {
        let p = UPoly::constant(field.int(v));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    for j in 1..=(2 * e as usize) {
        for c in [1i64, -1, 2] {
            let p = UPoly::monomial(field.int(c), j);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

struct Ctx<'a> {
    a: &'a LaurentElement,
    e: u32,
    threshold: i64,
    n: usize,
}

impl Ctx<'_> {
    /// Check a candidate point; `eq` is the chart equation and `solved` the variable solved for.
    fn check(&self, coords: &[UPoly], eq: Option<(&MultiPoly, usize)>) -> Option<Witness> {
        let field = self.a.num.field();
        let va = ord(&eval_at(&self.a.num, self.e, coords, self.n)).map(|o| o as i64).unwrap_or(i64::MAX);
        if va > self.threshold {
            return None;
        }
        let mut eqv = Valuation::Infinite;
        if let Some((f, var)) = eq {
            let vf = ord(&eval_at(f, self.e, coords, self.n)).map(|o| o as i64).unwrap_or(self.n as i64);
            let vd = ord(&eval_at(&f.derivative(var), self.e, coords, self.n)).map(|o| o as i64)?;
            // Hensel: a true root agrees with the approximation to order vf - vd
            if vf <= 2 * vd || va >= vf - vd {
                return None;
            }
            eqv = Valuation::Finite(Rational64::new(vf, self.e as i64));
        }
        let coords = coords
            .iter()
            .map(|c| TruncatedSeries::from_coeffs(field, c.truncated(self.n), self.n, self.e).unwrap())
            .collect();
        Some(Witness {
            ramification: self.e,
            coords,
            value: Rational64::new(va, self.e as i64) - Rational64::from_integer(self.a.t_pow),
            equation_valuation: eqv,
        })
    }
}

/// Bounded search for a point with `v(a) ≤ r` on a chart with at most two chart variables.
pub fn place_witness_search(a: &LaurentElement, chart: &Chart, r: Rational64, e_max: u32) -> Result<WitnessSearch> {
    chart.ring().check(&a.num)?;
    let field = chart.field();
    let gens = chart.ideal().minimized().gens().to_vec();
    let shape = match (chart.chart_vars(), gens.len()) {
        (1, 0) => Shape::Line,
        (2, 0) => Shape::Plane,
        (1, 1) => Shape::Points(gens[0].clone()),
        (2, 1) => Shape::Curve(gens[0].clone()),
        _ => {
            return Err(GalError::Unsupported(
                "witness search needs a principal chart in at most two variables".into(),
            ))
        }
    };
    let mut tried = 0usize;
    for e in 1..=e_max.max(1) {
        let bound = r + Rational64::from_integer(a.t_pow);
        let threshold = (bound * Rational64::from_integer(e as i64)).floor().to_integer();
        if threshold < 0 {
            continue;
        }
        let n = (threshold.max(0) as usize) * 2 + 4 * e as usize + 8;
        let ctx = Ctx { a, e, threshold, n };
        let cands = candidates(field, e);
        match &shape {
            Shape::Line => {
                for x in &cands {
                    tried += 1;
                    if let Some(w) = ctx.check(std::slice::from_ref(x), None) {
                        return Ok(WitnessSearch::Found(w));
                    }
                }
            }
            Shape::Plane => {
                for x in &cands {
                    for y in &cands {
                        tried += 1;
                        if let Some(w) = ctx.check(&[x.clone(), y.clone()], None) {
                            return Ok(WitnessSearch::Found(w));
                        }
                    }
                }
            }
            Shape::Points(f) => {
                let g = as_upoly_in_var(f, 1, e, &[], n);
                for x in puiseux_roots(&g, 0, n as i64 / 2, 0) {
                    tried += 1;
                    if let Some(w) = ctx.check(&[x], Some((f, 1))) {
                        return Ok(WitnessSearch::Found(w));
                    }
                }
            }
            Shape::Curve(f) => {
                for (free, solved) in [(1usize, 2usize), (2, 1)] {
                    for c in &cands {
                        let g = as_upoly_in_var(f, solved, e, &[(free, c.clone())], n);
                        if g.iter().all(|p| p.is_zero()) {
                            continue;
                        }
                        for s in puiseux_roots(&g, 0, n as i64 / 2, 0) {
                            tried += 1;
                            let mut coords = vec![UPoly::zero(field); 2];
                            coords[free - 1] = c.clone();
                            coords[solved - 1] = s;
                            if let Some(w) = ctx.check(&coords, Some((f, solved))) {
                                return Ok(WitnessSearch::Found(w));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(WitnessSearch::NotFound { e_max, points_tried: tried })
}
