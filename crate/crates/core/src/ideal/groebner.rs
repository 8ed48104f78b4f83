//! Buchberger's algorithm with normal selection, the product and chain
//! criteria (Gebauer-Möller update) and full inter-reduction.

use std::cmp::Ordering;

use super::order::MonomialOrder;
use super::poly::{Monomial, MultiPoly};
use crate::arith::{BaseField, Fe};

/// A polynomial as a term list sorted decreasingly for a fixed order.
#[derive(Clone, Debug)]
pub(crate) struct SPoly {
    pub terms: Vec<(Monomial, Fe)>,
}

impl SPoly {
    pub fn from_poly(p: &MultiPoly, ord: &MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, Fe)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        SPoly { terms }
    }

    pub fn to_poly(&self, field: BaseField, nvars: usize) -> MultiPoly {
        MultiPoly::from_terms(field, nvars, self.terms.iter().cloned())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Fe {
        &self.terms[0].1
    }

    pub fn make_monic(&mut self) {
        if let Some(c) = self.terms.first().map(|t| t.1.inv().unwrap()) {
            if !c.is_one() {
                for t in &mut self.terms {
                    t.1 = &t.1 * &c;
                }
            }
        }
    }

    /// `self - c * m * g`.
    pub(crate) fn sub_mul(&self, c: &Fe, m: &Monomial, g: &SPoly, ord: &MonomialOrder) -> SPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Monomial, Fe)> = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc * c)).collect();
        while i < self.terms.len() && j < shifted.len() {
            match ord.cmp(&self.terms[i].0, &shifted[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), -&shifted[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &self.terms[i].1 - &shifted[j].1;
                    if !v.is_zero() {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (m, c) in &shifted[j..] {
            out.push((m.clone(), -c));
        }
        SPoly { terms: out }
    }
}

/// Full reduction of `f` modulo the (monic) list `basis`.
pub(crate) fn reduce_full(f: &SPoly, basis: &[SPoly], ord: &MonomialOrder) -> SPoly {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, Fe)> = Vec::new();
    while !p.is_zero() {
        let (m, c) = p.terms[0].clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = m.div(g.lm());
                let coef = &c / g.lc();
                p = p.sub_mul(&coef, &q, g, ord);
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    SPoly { terms: rem }
}

/// Reduction that only removes the leading term repeatedly (faster during Buchberger).
fn reduce_top(f: &SPoly, basis: &[SPoly], ord: &MonomialOrder) -> SPoly {
    let mut p = f.clone();
    while !p.is_zero() {
        let m = p.lm().clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = m.div(g.lm());
                let coef = p.lc() / g.lc();
                p = p.sub_mul(&coef, &q, g, ord);
            }
            None => break,
        }
    }
    p
}

fn spoly(f: &SPoly, g: &SPoly, ord: &MonomialOrder) -> SPoly {
    let l = f.lm().lcm(g.lm());
    let a = l.div(f.lm());
    let b = l.div(g.lm());
    let fa = SPoly { terms: f.terms.iter().map(|(m, c)| (m.mul(&a), c / f.lc())).collect() };
    fa.sub_mul(&g.lc().inv().unwrap(), &b, g, ord)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis (monic, sorted by decreasing leading monomial).
pub(crate) fn buchberger(gens: &[MultiPoly], ord: &MonomialOrder) -> Vec<SPoly> {
    let mut input: Vec<SPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| SPoly::from_poly(g, ord)).collect();
    if input.is_empty() {
        return Vec::new();
    }
    // Process small inputs first; this does not affect the result, only the running time.
    input.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut basis: Vec<SPoly> = Vec::new();
    let mut live: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add = |h: SPoly, basis: &mut Vec<SPoly>, live: &mut Vec<bool>, pairs: &mut Vec<Pair>| {
        let hn = basis.len();
        let hl = h.lm().clone();
        // new candidate pairs
        let mut cand: Vec<(usize, Monomial, bool)> = (0..hn)
            .filter(|&i| live[i])
            .map(|i| (i, basis[i].lm().lcm(&hl), basis[i].lm().coprime(&hl)))
            .collect();
        // criterion M: drop pairs whose lcm is properly divisible by another new lcm
        let survivors: Vec<(usize, Monomial, bool)> = cand
            .iter()
            .filter(|a| !cand.iter().any(|b| b.1 != a.1 && b.1.divides(&a.1)))
            .cloned()
            .collect();
        cand.clear();
        // criterion F and the product criterion: one pair per lcm, none if any is coprime
        let coprime_lcms: Vec<Monomial> = survivors.iter().filter(|c| c.2).map(|c| c.1.clone()).collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for c in survivors {
            if !kept.iter().any(|k| k.1 == c.1) {
                kept.push(c);
            }
        }
        // old pairs: drop (i,j) when lm(h) | lcm(i,j) strictly on both sides
        pairs.retain(|p| {
            !(hl.divides(&p.lcm)
                && basis[p.i].lm().lcm(&hl) != p.lcm
                && basis[p.j].lm().lcm(&hl) != p.lcm)
        });
        for (i, l, cop) in kept {
            if cop || coprime_lcms.contains(&l) {
                continue;
            }
            pairs.push(Pair { i, j: hn, lcm: l });
        }
        for i in 0..hn {
            if live[i] && hl.divides(basis[i].lm()) {
                live[i] = false;
            }
        }
        basis.push(h);
        live.push(true);
    };

    for g in input {
        let live_basis: Vec<SPoly> = basis.iter().zip(&live).filter(|(_, l)| **l).map(|(b, _)| b.clone()).collect();
        let mut h = reduce_top(&g, &live_basis, ord);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        add(h, &mut basis, &mut live, &mut pairs);
    }

    while !pairs.is_empty() {
        // normal selection: smallest lcm
        let mut best = 0;
        for k in 1..pairs.len() {
            let o = ord.cmp(&pairs[k].lcm, &pairs[best].lcm);
            if o == Ordering::Less || (o == Ordering::Equal && (pairs[k].j, pairs[k].i) < (pairs[best].j, pairs[best].i)) {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let s = spoly(&basis[p.i], &basis[p.j], ord);
        let live_basis: Vec<&SPoly> = basis.iter().zip(&live).filter(|(_, l)| **l).map(|(b, _)| b).collect();
        let mut h = s;
        while !h.is_zero() {
            let m = h.lm().clone();
            match live_basis.iter().find(|g| g.lm().divides(&m)) {
                Some(g) => {
                    let q = m.div(g.lm());
                    let coef = h.lc() / g.lc();
                    h = h.sub_mul(&coef, &q, g, ord);
                }
                None => break,
            }
        }
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        add(h, &mut basis, &mut live, &mut pairs);
    }

    interreduce(basis.into_iter().zip(live).filter(|(_, l)| *l).map(|(b, _)| b).collect(), ord)
}

/// Minimalize and fully reduce a Gröbner basis; output sorted by decreasing leading monomial.
pub(crate) fn interreduce(mut g: Vec<SPoly>, ord: &MonomialOrder) -> Vec<SPoly> {
    g.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<SPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<SPoly> =
            minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
        let lead = SPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail = SPoly { terms: minimal[k].terms[1..].to_vec() };
        let mut r = reduce_full(&tail, &others, ord);
        let mut terms = lead.terms;
        terms.append(&mut r.terms);
        let mut p = SPoly { terms };
        p.make_monic();
        out.push(p);
    }
    out.sort_by(|a, b| ord.cmp(b.lm(), a.lm()));
    out
}
