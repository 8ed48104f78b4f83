//! Proper models `X̃ ⊂ P^{m_1}_R × … × P^{m_s}_R` with their affine covers.

use std::fmt;

use crate::arith::BaseField;
use crate::error::{GalError, Result};
use crate::ideal::{Ideal, Monomial, MultiPoly, PolyRing};
use crate::models::{verify_chart, Chart, ChartDiagnostics};

/// A multihomogeneous ideal in `k[t][T]`, graded by one factor per variable group,
/// together with an affine cover by `D₊(m)` for monomials `m` taking one variable per group.
#[derive(Clone)]
pub struct ProjModel {
    name: String,
    ring: PolyRing,
    groups: Vec<Vec<usize>>,
    ideal: Ideal,
    /// For each cover monomial, the chosen variable of every group.
    cover: Vec<Vec<usize>>,
    charts: Vec<Chart>,
}

impl fmt::Debug for ProjModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjModel({}, {} charts)", self.name, self.cover.len())
    }
}

/// Chart `j` coordinates written as fractions in chart `i` coordinates.
#[derive(Clone, Debug)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// `(numerator, denominator)` in the ring of chart `from`, one per chart variable of `to`.
    pub images: Vec<(MultiPoly, MultiPoly)>,
}

impl ProjModel {
    /// Model cut out by `gens` in the product of projective spaces with the given variable groups.
    pub fn new(field: BaseField, groups: &[Vec<&str>], gens: &[&str]) -> Result<Self> {
        let mut names = vec!["t".to_string()];
        let mut idx = Vec::new();
        for g in groups {
            if g.is_empty() {
                return Err(GalError::InvalidInput("empty variable group".into()));
            }
            let mut gi = Vec::new();
            for v in g {
                if *v == "t" || names.iter().any(|n| n == v) {
                    return Err(GalError::InvalidInput(format!("duplicate or reserved variable {v}")));
                }
                gi.push(names.len());
                names.push(v.to_string());
            }
            idx.push(gi);
        }
        let ring = PolyRing::from_names(field, names);
        let ideal = Ideal::parse(&ring, gens)?;
        Self::from_parts("model".into(), ring, idx, ideal, None)
    }

    fn from_parts(
        name: String,
        ring: PolyRing,
        groups: Vec<Vec<usize>>,
        ideal: Ideal,
        cover: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let grading = grading(&ring, &groups);
        for g in ideal.gens() {
            if g.homogeneous_degree(&grading).is_none() {
                return Err(GalError::InvalidInput(format!("generator {} is not homogeneous", ring.fmt(g))));
            }
        }
        let sat = ideal.saturate(&ring.var(0))?;
        if !sat.same_as(&ideal) {
            return Err(GalError::NotFlat("the ideal has t-torsion".into()));
        }
        let cover = cover.unwrap_or_else(|| all_cover_monomials(&groups));
        let mut m = ProjModel { name, ring, groups, ideal, cover, charts: Vec::new() };
        m.charts = (0..m.cover.len()).map(|k| m.dehomogenize(k)).collect::<Result<_>>()?;
        Ok(m)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        let charts: Vec<Chart> = (0..self.cover.len()).map(|k| self.dehomogenize(k).unwrap()).collect();
        self.charts = charts;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> BaseField {
        self.ring.field
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn cover_len(&self) -> usize {
        self.cover.len()
    }

    /// The variables chosen by cover monomial `k`, one per group.
    pub fn cover_vars(&self, k: usize) -> &[usize] {
        &self.cover[k]
    }

    pub fn cover_monomial(&self, k: usize) -> Monomial {
        let mut e = vec![0u16; self.ring.nvars()];
        for &v in &self.cover[k] {
            e[v] += 1;
        }
        Monomial::from_slice(&e)
    }

    pub fn grading(&self) -> Vec<Vec<i64>> {
        grading(&self.ring, &self.groups)
    }

    /// Relative dimension of the generic fiber.
    pub fn dimension(&self) -> i64 {
        let dim = self.ideal.saturate(&self.ring.var(0)).map(|s| s.dimension()).unwrap_or(-1);
        dim - 1 - self.groups.len() as i64
    }

    pub fn diagnostics(&self) -> Vec<ChartDiagnostics> {
        self.charts.iter().map(verify_chart).collect()
    }

    fn dehomogenize(&self, k: usize) -> Result<Chart> {
        let chosen = &self.cover[k];
        let mut names = vec!["t".to_string()];
        let n = self.ring.nvars();
        let mut images: Vec<Option<usize>> = vec![None; n];
        images[0] = Some(0);
        for (g, vars) in self.groups.iter().enumerate() {
            for &v in vars {
                if v != chosen[g] {
                    images[v] = Some(names.len());
                    names.push(format!("{}_{}", self.ring.vars[v], self.ring.vars[chosen[g]]));
                }
            }
        }
        let cring = PolyRing::from_names(self.field(), names);
        let subs: Vec<MultiPoly> = images.iter().map(|i| i.map(|i| cring.var(i)).unwrap_or_else(|| cring.one())).collect();
        let gens: Vec<MultiPoly> = self.ideal.gens().iter().map(|g| g.substitute(&subs)).filter(|g| !g.is_zero()).collect();
        let label: Vec<&str> = chosen.iter().map(|&v| self.ring.vars[v].as_str()).collect();
        Ok(Chart::from_ideal(Ideal::new(&cring, gens)?)?.named(format!("{}:D({})", self.name, label.join("*"))))
    }

    /// Substitution sending the model ring into chart `k` (chosen variables become 1).
    pub fn chart_map(&self, k: usize) -> Vec<MultiPoly> {
        let cring = self.charts[k].ring();
        let chosen = &self.cover[k];
        let mut out = vec![cring.var(0)];
        let mut next = 1;
        for v in 1..self.ring.nvars() {
            let g = self.groups.iter().position(|gr| gr.contains(&v)).unwrap();
            if chosen[g] == v {
                out.push(cring.one());
            } else {
                out.push(cring.var(next));
                next += 1;
            }
        }
        out
    }

    /// Transition from chart `i` to chart `j`: `T_v / T_{c_j}` = `x_v / x_{c_j}` in chart `i`.
    pub fn transition(&self, i: usize, j: usize) -> Transition {
        let map = self.chart_map(i);
        let mut images = Vec::new();
        for (g, vars) in self.groups.iter().enumerate() {
            let cj = self.cover[j][g];
            for &v in vars {
                if v != cj {
                    images.push((map[v].clone(), map[cj].clone()));
                }
            }
        }
        Transition { from: i, to: j, images }
    }

    /// Check `(i → j) ∘ (j → k) = (i → k)` on all triples, as fractions in chart `i`.
    pub fn verify_transitions(&self) -> bool {
        let n = self.cover.len();
        for i in 0..n {
            for j in 0..n {
                let tij = self.transition(i, j);
                for k in 0..n {
                    let tjk = self.transition(j, k);
                    let tik = self.transition(i, k);
                    // substitute chart-j coordinates, clearing denominators by homogeneity
                    for (a, b) in tjk.images.iter().zip(&tik.images) {
                        let (na, da) = eval_fraction(a, &tij);
                        if !na.mul(&b.1).sub(&da.mul(&b.0)).is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn eval_fraction(f: &(MultiPoly, MultiPoly), t: &Transition) -> (MultiPoly, MultiPoly) {
    let ev = |p: &MultiPoly| -> (MultiPoly, MultiPoly) {
        // p is a monomial (or 1) in the target chart variables
        let field = p.field();
        let nv = t.images.first().map(|x| x.0.nvars()).unwrap_or(1);
        let mut num = MultiPoly::one(field, nv);
        let mut den = MultiPoly::one(field, nv);
        for (m, c) in p.terms() {
            num = num.scale(c);
            for (v, &e) in m.0.iter().enumerate().skip(1) {
                if e > 0 {
                    num = num.mul(&t.images[v - 1].0.pow(e as u32));
                    den = den.mul(&t.images[v - 1].1.pow(e as u32));
                }
            }
        }
        (num, den)
    };
    let (a, b) = ev(&f.0);
    let (c, d) = ev(&f.1);
    (a.mul(&d), b.mul(&c))
}

fn grading(ring: &PolyRing, groups: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; groups.len()]; ring.nvars()];
    for (k, vars) in groups.iter().enumerate() {
        for &v in vars {
            g[v][k] = 1;
        }
    }
    g
}

fn all_cover_monomials(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for g in groups {
        let mut next = Vec::new();
        for prefix in &out {
            for &v in g {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Projective model with one group of variables and its standard cover.
pub fn build_proj_model(field: BaseField, vars: &[&str], gens: &[&str]) -> Result<ProjModel> {
    ProjModel::new(field, &[vars.to_vec()], gens)
}

fn monomial_poly(ring: &PolyRing, vars: &[usize]) -> MultiPoly {
    vars.iter().fold(ring.one(), |acc, &v| acc.mul(&ring.var(v)))
}

/// Drop cover monomials greedily while the rest still cover the model.
fn prune_cover(ring: &PolyRing, ideal: &Ideal, groups: &[Vec<usize>], cover: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let all = all_cover_monomials(groups);
    let covers = |c: &[Vec<usize>]| {
        let gens: Vec<MultiPoly> = c.iter().map(|m| monomial_poly(ring, m)).collect();
        let test = ideal.with(&gens);
        all.iter().all(|m| test.radical_contains(&monomial_poly(ring, m)))
    };
    let mut kept = cover;
    let mut k = 0;
    while k < kept.len() {
        let mut trial = kept.clone();
        trial.remove(k);
        if !trial.is_empty() && covers(&trial) {
            kept = trial;
        } else {
            k += 1;
        }
    }
    kept
}

/// Blowup of `model` in the homogeneous ideal generated by `center`.
///
/// The result lives in `model × P^s` with new variables `W_0..W_s`; the cover
/// consists of products of old cover monomials with the `W_j`, pruned greedily.
pub fn blowup_model(model: &ProjModel, center: &[MultiPoly]) -> Result<ProjModel> {
    if center.is_empty() {
        return Err(GalError::InvalidInput("empty center".into()));
    }
    let ring = model.ring();
    for g in center {
        ring.check(g)?;
    }
    let cideal = Ideal::new(ring, center.to_vec())?;
    if cideal.is_unit() {
        return Ok(model.clone());
    }
    let grading = model.grading();
    let deg = center[0].homogeneous_degree(&grading);
    if deg.is_none() || center.iter().any(|g| g.homogeneous_degree(&grading) != deg) {
        return Err(GalError::InvalidInput("center generators must be homogeneous of one multidegree".into()));
    }
    if center.iter().any(|g| model.ideal().contains(g)) {
        return Err(GalError::InvalidInput("a center generator vanishes on the model".into()));
    }
    let n = ring.nvars();
    let s = center.len();
    let wnames: Vec<String> = (0..s).map(|j| format!("W{j}")).collect();
    let mut refs: Vec<&str> = wnames.iter().map(|x| x.as_str()).collect();
    refs.push("u_");
    let big = ring.extended(&refs);
    let u = big.var(n + s);
    let mut gens: Vec<MultiPoly> = model.ideal().gens().iter().map(|g| g.extend(s + 1)).collect();
    for (j, g) in center.iter().enumerate() {
        gens.push(big.var(n + j).sub(&g.extend(s + 1).mul(&u)));
    }
    let rees = Ideal::new(&big, gens)?.eliminate(&[n + s]);
    let keep: Vec<usize> = (0..n + s).collect();
    let new_ring = PolyRing::from_names(model.field(), big.vars[..n + s].to_vec());
    let rgens: Vec<MultiPoly> = rees.minimized().gens().iter().map(|g| g.restrict(&keep)).collect::<Result<_>>()?;
    let ideal = Ideal::new(&new_ring, rgens)?.minimized();
    let mut groups = model.groups().to_vec();
    groups.push((n..n + s).collect());
    let mut cover = Vec::new();
    for k in 0..model.cover_len() {
        for j in 0..s {
            let mut c = model.cover_vars(k).to_vec();
            c.push(n + j);
            cover.push(c);
        }
    }
    let cover = prune_cover(&new_ring, &ideal, &groups, cover);
    ProjModel::from_parts(format!("Bl({})", model.name()), new_ring, groups, ideal, Some(cover))
}

/// `P¹_R × model`, with the new coordinates `W0, W1` placed first.
pub fn product_with_p1(model: &ProjModel) -> Result<ProjModel> {
    let ring = model.ring();
    let n = ring.nvars();
    let mut names = vec!["t".to_string()];
    let mut w = Vec::new();
    for base in ["W0", "W1"] {
        let mut nm = base.to_string();
        while ring.vars.contains(&nm) || names.contains(&nm) {
            nm.push('\'');
        }
        w.push(nm.clone());
        names.push(nm);
    }
    names.extend(ring.vars[1..].iter().cloned());
    let new_ring = PolyRing::from_names(model.field(), names);
    // old variable v ≥ 1 moves to v + 2
    let map: Vec<usize> = (0..n).map(|v| if v == 0 { 0 } else { v + 2 }).collect();
    let gens: Vec<MultiPoly> = model.ideal().gens().iter().map(|g| g.remap(n + 2, &map)).collect();
    let ideal = Ideal::new(&new_ring, gens)?;
    let mut groups = vec![vec![1, 2]];
    groups.extend(model.groups().iter().map(|g| g.iter().map(|&v| v + 2).collect()));
    let mut cover = Vec::new();
    for a in [1usize, 2] {
        for k in 0..model.cover_len() {
            let mut c = vec![a];
            c.extend(model.cover_vars(k).iter().map(|&v| v + 2));
            cover.push(c);
        }
    }
    ProjModel::from_parts(format!("P1x{}", model.name()), new_ring, groups, ideal, Some(cover))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_covers() {
        let q = BaseField::Rationals;
        let p2 = build_proj_model(q, &["X", "Y", "Z"], &[]).unwrap();
        assert_eq!(p2.charts().len(), 3);
        assert_eq!(p2.charts()[2].ring().vars, vec!["t", "X_Z", "Y_Z"]);
        assert!(p2.verify_transitions());
        assert_eq!(p2.dimension(), 2);
        assert!(build_proj_model(q, &["X", "Y", "Z"], &["Y^2 - X^3"]).is_err());
        assert!(build_proj_model(q, &["X", "Y"], &["t*X"]).is_err());
        let f5 = BaseField::prime(5).unwrap();
        let e = build_proj_model(f5, &["X", "Y", "Z"], &["Y^2*Z - X^3 - X*Z^2 - Z^3"]).unwrap();
        assert_eq!(e.charts()[2].ideal().gens()[0], e.charts()[2].parse("Y_Z^2 - X_Z^3 - X_Z - 1").unwrap());
        assert_eq!(e.dimension(), 1);
    }

    #[test]
    fn blowup_of_p2_at_a_point() {
        let q = BaseField::Rationals;
        let p2 = build_proj_model(q, &["X", "Y", "Z"], &[]).unwrap();
        let r = p2.ring();
        let bl = blowup_model(&p2, &[r.parse("X").unwrap(), r.parse("Y").unwrap()]).unwrap();
        assert_eq!(bl.cover_len(), 4);
        assert!(bl.ideal().contains(&bl.ring().parse("X*W1 - Y*W0").unwrap()));
        assert!(bl.diagnostics().iter().all(|d| d.all_pass()));
        assert!(bl.verify_transitions());
        let same = blowup_model(&p2, &[r.one()]).unwrap();
        assert_eq!(same.cover_len(), 3);
    }

    #[test]
    fn p1_products() {
        let q = BaseField::Rationals;
        let p1 = build_proj_model(q, &["X", "Y"], &[]).unwrap();
        let pp = product_with_p1(&p1).unwrap();
        assert_eq!(pp.cover_len(), 4);
        assert_eq!(pp.dimension(), 2);
    }
}
