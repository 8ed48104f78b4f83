//! Sections of the twisted tame sheaf `G_a(r)` on a chart.
//!
//! On a chart with normalization `Ā`, an element `a ∈ A[1/t]` is a section of
//! `G_a(n/m)` iff `a^m / t^n ∈ √(t·Ā)`. For integral twists the sections form the
//! `Ā`-module `t^r · √(t·Ā)`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Signed;

use super::chart::Chart;
use super::normalize::NormalizationData;
use crate::error::{GalError, Result};
use crate::ideal::{radical, Ideal, MultiPoly, PolyRing};

/// An element `num / t^t_pow` of `A[1/t]`, with `num` in the chart ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentElement {
    pub num: MultiPoly,
    pub t_pow: i64,
}

impl LaurentElement {
    pub fn new(num: MultiPoly, t_pow: i64) -> Self {
        LaurentElement { num, t_pow }
    }

    pub fn poly(num: MultiPoly) -> Self {
        LaurentElement { num, t_pow: 0 }
    }

    pub fn fmt_in(&self, ring: &PolyRing) -> String {
        let n = ring.fmt(&self.num);
        match self.t_pow {
            0 => n,
            k if k > 0 => format!("({n})/t^{k}"),
            k => format!("({n})*t^{}", -k),
        }
    }
}

/// Generators of `G_a(r)` on a chart, as the `Ā`-ideal `t^r · √(t·Ā)`.
#[derive(Clone, Debug)]
pub struct GaSectionModule {
    pub twist: i64,
    /// Presentation ring of `Ā`.
    pub ring: PolyRing,
    pub normalization_ideal: Ideal,
    /// `√(t·Ā)`, an ideal of the presentation ring containing the presentation ideal.
    pub radical: Ideal,
    /// Minimal generators of `√(t·Ā)` modulo the presentation; sections are `t^twist · g`.
    pub generators: Vec<MultiPoly>,
}

impl GaSectionModule {
    /// Whether `num / t^t_pow` (with `num` in the presentation ring of `Ā`) is a section.
    pub fn contains(&self, num: &MultiPoly, t_pow: i64) -> bool {
        let s = t_pow + self.twist;
        let t = self.ring.var(0);
        if s <= 0 {
            return self.radical.contains(&num.mul(&t.pow((-s) as u32)));
        }
        let ts = t.pow(s as u32);
        let scaled = Ideal::new_unchecked(&self.ring, self.radical.gens().iter().map(|g| g.mul(&ts)).collect());
        scaled.sum(&self.normalization_ideal).contains(num)
    }

    /// Section generators as Laurent elements `g · t^twist`.
    pub fn sections(&self) -> Vec<(MultiPoly, i64)> {
        self.generators.iter().map(|g| (g.clone(), -self.twist)).collect()
    }

    pub fn fmt_generators(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| {
                let s = self.ring.fmt(g);
                match self.twist {
                    0 => s,
                    1 => format!("t*({s})"),
                    r if r > 0 => format!("t^{r}*({s})"),
                    r => format!("({s})/t^{}", -r),
                }
            })
            .collect()
    }
}

fn radical_of_special_fiber(norm: &NormalizationData) -> Result<Ideal> {
    let t = norm.ring.var(0);
    radical(&norm.ideal.with(&[t]))
}

/// `G_a(r)` on a chart for an integral twist `r`.
pub fn ga_sections(chart: &Chart, r: i64) -> Result<GaSectionModule> {
    chart.require_good()?;
    let norm = chart.normalization()?;
    let rad = radical_of_special_fiber(norm)?;
    let mut gens: Vec<MultiPoly> =
        rad.gens().iter().map(|g| norm.ideal.reduce(g)).filter(|g| !g.is_zero()).collect();
    // drop generators that are redundant modulo the presentation
    let mut k = 0;
    while k < gens.len() {
        let others: Vec<MultiPoly> = gens.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        if norm.ideal.with(&others).contains(&gens[k]) {
            gens.remove(k);
        } else {
            k += 1;
        }
    }
    Ok(GaSectionModule {
        twist: r,
        ring: norm.ring.clone(),
        normalization_ideal: norm.ideal.clone(),
        radical: rad,
        generators: gens,
    })
}

/// Outcome of a membership test together with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaMembership {
    pub member: bool,
    pub certificate: MembershipCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipCertificate {
    /// `b = a^m / t^n` lies in `√(t·Ā)`; `power` is the least `e ≤ 16` with `b^e ∈ t·Ā`, if any.
    Radical { power: Option<u32> },
    /// `b` is not even integral: its numerator is not divisible by `t^s` in `Ā`.
    NotIntegral { s: i64 },
    /// `b ∈ Ā` but `1 ∉ (presentation) + ⟨t, 1 − w·b⟩`.
    NotInRadical,
}

impl fmt::Display for MembershipCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipCertificate::Radical { power: Some(e) } => write!(f, "b^{e} lies in t*Abar"),
            MembershipCertificate::Radical { power: None } => write!(f, "1 in (I, t, 1 - w*b) (Rabinowitsch)"),
            MembershipCertificate::NotIntegral { s } => write!(f, "numerator of b not divisible by t^{s} in Abar"),
            MembershipCertificate::NotInRadical => write!(f, "1 not in (I, t, 1 - w*b)"),
        }
    }
}

/// Decide `a ∈ G_a(r)(chart)` for `r = n/m`, `m ≥ 1`.
pub fn ga_membership(a: &LaurentElement, chart: &Chart, r: Rational64) -> Result<GaMembership> {
    chart.ring().check(&a.num)?;
    if !r.denom().is_positive() {
        return Err(GalError::InvalidInput("twist denominator must be positive".into()));
    }
    chart.require_good()?;
    let (n, m) = (*r.numer(), *r.denom());
    let norm = chart.normalization()?;
    let ring = &norm.ring;
    let t = ring.var(0);
    let q = norm.embed(&a.num).pow(m as u32);
    // b = q / t^s
    let s = a.t_pow * m + n;
    let (ideal, y) = if s <= 0 {
        let b = q.mul(&t.pow((-s) as u32));
        (norm.ideal.clone(), b)
    } else {
        let ts = t.pow(s as u32);
        if !norm.ideal.with(&[ts.clone()]).contains(&q) {
            return Ok(GaMembership { member: false, certificate: MembershipCertificate::NotIntegral { s } });
        }
        // present Ā[y]/(t^s y − q) saturated at t, which is Ā with y = b
        let r2 = ring.extended(&["y"]);
        let nv = ring.nvars();
        let mut gens: Vec<MultiPoly> = norm.ideal.gens().iter().map(|g| g.extend(1)).collect();
        gens.push(ts.extend(1).mul(&r2.var(nv)).sub(&q.extend(1)));
        let k = Ideal::new(&r2, gens)?.saturate(&r2.var(0))?;
        (k, r2.var(nv))
    };
    let t = ideal.ring().var(0);
    let special = ideal.with(&[t]);
    if !special.radical_contains(&y) {
        return Ok(GaMembership { member: false, certificate: MembershipCertificate::NotInRadical });
    }
    let mut power = None;
    let mut p = y.clone();
    for e in 1..=16 {
        if special.contains(&p) {
            power = Some(e);
            break;
        }
        p = p.mul(&y);
    }
    Ok(GaMembership { member: true, certificate: MembershipCertificate::Radical { power } })
}
