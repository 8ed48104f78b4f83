//! Normalization by the Grauert–Remmert criterion.
//!
//! With `J` a radical ideal containing the non-normal locus and a
//! nonzerodivisor `d ∈ J`, the ring `A` is normal iff `Hom(J, J) = A`, and
//! `Hom(J, J) ≅ (dJ : J)/d`. Each round adjoins the fractions `u/d` for the
//! generators `u` of `(dJ : J)` outside `dA`.

use super::chart::{jacobian_minors, Chart};
use crate::error::{GalError, Result};
use crate::ideal::{radical, Ideal, MonomialOrder, MultiPoly, PolyRing};

pub const NORMALIZATION_CAP: usize = 16;

/// A fraction `num / den` of elements of the chart ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

/// The normalization `Ā` of a chart `A`.
#[derive(Clone, Debug)]
pub struct NormalizationData {
    /// Chart variables followed by the adjoined `T_1, …, T_s`.
    pub ring: PolyRing,
    /// Presentation of `Ā` in `ring`.
    pub ideal: Ideal,
    /// Number of variables of the original chart ring.
    pub base_vars: usize,
    /// `T_i` as a fraction over the chart ring.
    pub fractions: Vec<Fraction>,
    /// A monic equation of `T_i` over `A`, as an element of `ring`.
    pub integral_equations: Vec<MultiPoly>,
    /// The test ideal and denominator of the last round.
    pub test_ideal: Ideal,
    pub denominator: MultiPoly,
    pub rounds: usize,
}

impl NormalizationData {
    /// Algebra generators of `Ā` over `A`: `1` followed by the adjoined fractions.
    pub fn generators(&self, chart_ring: &PolyRing) -> Vec<Fraction> {
        let mut out = vec![Fraction { num: chart_ring.one(), den: chart_ring.one() }];
        out.extend(self.fractions.iter().cloned());
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.fractions.is_empty()
    }

    /// Image of an element of the chart ring in the presentation ring of `Ā`.
    pub fn embed(&self, f: &MultiPoly) -> MultiPoly {
        f.extend(self.ring.nvars() - self.base_vars)
    }

    /// Re-check the Grauert–Remmert criterion and the integral equations.
    pub fn verify(&self) -> bool {
        let d = &self.denominator;
        let dj = Ideal::new_unchecked(&self.ring, self.test_ideal.gens().iter().map(|g| g.mul(d)).collect());
        let lhs = match dj.sum(&self.ideal).quotient_ideal(&self.test_ideal) {
            Ok(q) => q,
            Err(_) => return false,
        };
        let target = self.ideal.with(&[d.clone()]);
        if !target.contains_ideal(&lhs) || self.ideal.contains(d) {
            return false;
        }
        for (i, eq) in self.integral_equations.iter().enumerate() {
            let v = self.base_vars + i;
            if !self.ideal.contains(eq) || !is_monic_in(eq, v, self.base_vars) {
                return false;
            }
        }
        // each T_i really is num/den
        for (i, fr) in self.fractions.iter().enumerate() {
            let rel = self.ring.var(self.base_vars + i).mul(&self.embed(&fr.den)).sub(&self.embed(&fr.num));
            if !self.ideal.contains(&rel) {
                return false;
            }
        }
        true
    }
}

fn is_monic_in(p: &MultiPoly, v: usize, base_vars: usize) -> bool {
    let deg = p.degree_in(v);
    if deg == 0 {
        return false;
    }
    let nv = p.nvars();
    if (base_vars..nv).any(|w| w != v && p.degree_in(w) > 0) {
        return false;
    }
    let lead = &p.coefficients_in(v)[deg as usize];
    lead.as_constant().is_some_and(|c| c.is_one())
}

fn test_ideal(ideal: &Ideal) -> Result<Ideal> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let dim = ideal.dimension();
    let c = n as i64 - dim;
    let vars: Vec<usize> = (0..n).collect();
    let gens = ideal.minimized().gens().to_vec();
    let minors = jacobian_minors(ring, &gens, &vars, c.max(0) as usize);
    radical(&ideal.with(&minors))
}

fn choose_denominator(j: &Ideal, ideal: &Ideal) -> Option<MultiPoly> {
    let t = j.ring().var(0);
    if j.contains(&t) {
        return Some(t);
    }
    j.groebner().elements().into_iter().rev().find(|g| !ideal.contains(g))
}

/// Express an element of the enlarged ring as a fraction over the chart ring.
fn to_fraction(p: &MultiPoly, base_vars: usize, fractions: &[Fraction], base_ring: &PolyRing) -> Fraction {
    let nv = p.nvars();
    let degs: Vec<u16> = (base_vars..nv).map(|v| p.degree_in(v)).collect();
    let mut num = base_ring.zero();
    let keep: Vec<usize> = (0..base_vars).collect();
    for (m, c) in p.terms() {
        let mut base = m.clone();
        for v in base_vars..nv {
            base.0[v] = 0;
        }
        let mut term = MultiPoly::term(c.clone(), base).restrict(&keep).unwrap();
        for (k, fr) in fractions.iter().enumerate() {
            let e = m.0[base_vars + k] as u32;
            term = term.mul(&fr.num.pow(e)).mul(&fr.den.pow(degs[k] as u32 - e));
        }
        num = num.add(&term);
    }
    let mut den = base_ring.one();
    for (k, fr) in fractions.iter().enumerate() {
        den = den.mul(&fr.den.pow(degs[k] as u32));
    }
    Fraction { num, den }
}

/// Normalization of a chart whose ring is a domain (asserted, not checked).
pub fn normalize(chart: &Chart) -> Result<NormalizationData> {
    let base_ring = chart.ring().clone();
    let base_vars = base_ring.nvars();
    let mut ring = base_ring.clone();
    let mut ideal = chart.ideal().minimized();
    if ideal.is_unit() {
        return Err(GalError::Precondition("the chart ring is zero".into()));
    }
    let mut fractions: Vec<Fraction> = Vec::new();
    let mut j = test_ideal(&ideal)?;
    for round in 0..NORMALIZATION_CAP {
        let d = if j.is_unit() {
            ring.one()
        } else {
            choose_denominator(&j, &ideal)
                .ok_or_else(|| GalError::Precondition("no nonzerodivisor in the test ideal; is the chart a domain?".into()))?
        };
        let dj = Ideal::new_unchecked(&ring, j.gens().iter().map(|g| g.mul(&d)).collect());
        let q = dj.sum(&ideal).quotient_ideal(&j)?;
        let base = ideal.with(&[d.clone()]);
        let new: Vec<MultiPoly> = q.gens().iter().filter(|u| !base.contains(u)).cloned().collect();
        if new.is_empty() {
            let integral_equations = integral_equations(&ideal, base_vars)?;
            return Ok(NormalizationData {
                ring,
                ideal,
                base_vars,
                fractions,
                integral_equations,
                test_ideal: j,
                denominator: d,
                rounds: round,
            });
        }
        // adjoin T_i = u_i / d
        let start = ring.nvars();
        let names: Vec<String> = (0..new.len()).map(|k| format!("T{}", fractions.len() + k + 1)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let r2 = ring.extended(&refs);
        let s = new.len();
        let mut gens: Vec<MultiPoly> = ideal.gens().iter().map(|g| g.extend(s)).collect();
        let d2 = d.extend(s);
        for (k, u) in new.iter().enumerate() {
            gens.push(d2.mul(&r2.var(start + k)).sub(&u.extend(s)));
        }
        let ideal2 = Ideal::new(&r2, gens)?.saturate(&d2)?;
        for u in &new {
            let fu = to_fraction(u, base_vars, &fractions, &base_ring);
            let fd = to_fraction(&d, base_vars, &fractions, &base_ring);
            // (fu.num / fu.den) / (fd.num / fd.den)
            fractions.push(Fraction { num: fu.num.mul(&fd.den), den: fu.den.mul(&fd.num) });
        }
        let j2 = Ideal::new_unchecked(&r2, j.gens().iter().map(|g| g.extend(s)).collect());
        j = radical(&j2.sum(&ideal2))?;
        ring = r2;
        ideal = ideal2;
    }
    Err(GalError::IterationCap { what: "normalization", cap: NORMALIZATION_CAP })
}

fn integral_equations(ideal: &Ideal, base_vars: usize) -> Result<Vec<MultiPoly>> {
    let n = ideal.nvars();
    let mut out = Vec::new();
    for v in base_vars..n {
        let others: Vec<usize> = (base_vars..n).filter(|&w| w != v).collect();
        let base: Vec<usize> = (0..base_vars).collect();
        let blocks: Vec<Vec<usize>> = [others, vec![v], base].into_iter().filter(|b| !b.is_empty()).collect();
        let gb = ideal.groebner_with(&MonomialOrder::Blocks(blocks))?;
        let eq = gb
            .elements()
            .into_iter()
            .filter(|p| is_monic_in(p, v, base_vars))
            .min_by_key(|p| p.degree_in(v))
            .ok_or_else(|| GalError::Precondition(format!("no monic equation found for {}", ideal.ring().vars[v])))?;
        out.push(eq);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;

    #[test]
    fn regular_chart_is_normal() {
        let c = Chart::new(BaseField::Rationals, &["x"], &[]).unwrap();
        let n = normalize(&c).unwrap();
        assert!(n.is_trivial());
        assert_eq!(n.generators(c.ring()).len(), 1);
    }

    #[test]
    fn cusp() {
        let c = Chart::new(BaseField::Rationals, &["x", "y"], &["y^2 - x^3"]).unwrap();
        let n = normalize(&c).unwrap();
        assert_eq!(n.fractions.len(), 1);
        let fr = &n.fractions[0];
        let r = c.ring();
        // the fraction equals y/x
        assert!(c.ideal().contains(&fr.num.mul(&r.parse("x").unwrap()).sub(&fr.den.mul(&r.parse("y").unwrap()))));
        assert!(n.verify());
    }
}
