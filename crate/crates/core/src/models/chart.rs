//! Affine charts `A = k[t, x_1..x_n]/I` of flat models over `R`.

use std::fmt;
use std::sync::OnceLock;

use super::normalize::{normalize, NormalizationData};
use crate::arith::BaseField;
use crate::error::{GalError, Result};
use crate::ideal::{Ideal, MultiPoly, PolyRing};

/// A finitely presented `R`-algebra. Variable 0 of the ring is always `t`.
#[derive(Clone)]
pub struct Chart {
    name: String,
    ideal: Ideal,
    normalization: OnceLock<Result<NormalizationData>>,
    diagnostics: OnceLock<ChartDiagnostics>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: k[{}]/{}", self.name, self.ring().vars.join(","), self.ideal)
    }
}

impl Chart {
    /// Chart with variables `t, vars…` and the given relations.
    pub fn new(field: BaseField, vars: &[&str], gens: &[&str]) -> Result<Self> {
        let mut names = vec!["t".to_string()];
        for v in vars {
            if *v == "t" || names.iter().any(|n| n == v) {
                return Err(GalError::InvalidInput(format!("duplicate chart variable {v}")));
            }
            names.push(v.to_string());
        }
        let ring = PolyRing::from_names(field, names);
        Self::from_ideal(Ideal::parse(&ring, gens)?)
    }

    pub fn from_ideal(ideal: Ideal) -> Result<Self> {
        if ideal.ring().vars.first().map(|s| s.as_str()) != Some("t") {
            return Err(GalError::InvalidInput("the first chart variable must be t".into()));
        }
        Ok(Chart { name: "chart".into(), ideal, normalization: OnceLock::new(), diagnostics: OnceLock::new() })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &PolyRing {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn field(&self) -> BaseField {
        self.ring().field
    }

    pub fn t(&self) -> MultiPoly {
        self.ring().var(0)
    }

    /// Number of chart variables, not counting `t`.
    pub fn chart_vars(&self) -> usize {
        self.ring().nvars() - 1
    }

    pub fn parse(&self, s: &str) -> Result<MultiPoly> {
        self.ring().parse(s)
    }

    /// The normalization, computed once and cached.
    pub fn normalization(&self) -> Result<&NormalizationData> {
        self.normalization.get_or_init(|| normalize(self)).as_ref().map_err(|e| e.clone())
    }

    /// [`verify_chart`], computed once and cached.
    pub fn diagnostics(&self) -> &ChartDiagnostics {
        self.diagnostics.get_or_init(|| verify_chart(self))
    }

    /// Fails unless the chart is `t`-torsion-free with a generic fiber not known to be singular.
    pub fn require_good(&self) -> Result<()> {
        let d = self.diagnostics();
        if !d.t_torsion_free {
            return Err(GalError::Precondition(format!("chart {} has t-torsion", self.name)));
        }
        if d.generic_fiber_smooth == Some(false) {
            return Err(GalError::Precondition(format!("chart {} has a singular generic fiber", self.name)));
        }
        Ok(())
    }

    /// The localization `A[1/f]`, presented with one extra variable.
    pub fn localize(&self, f: &MultiPoly) -> Result<Chart> {
        self.ring().check(f)?;
        let ring = self.ring().extended(&["z"]);
        let n = self.ring().nvars();
        let mut gens: Vec<MultiPoly> = self.ideal.gens().iter().map(|g| g.extend(1)).collect();
        gens.push(ring.var(n).mul(&f.extend(1)).sub(&ring.one()));
        Ok(Chart::from_ideal(Ideal::new(&ring, gens)?)?.named(format!("{}[1/f]", self.name)))
    }

    /// Dimension of the generic fiber `A[1/t]`.
    pub fn generic_dimension(&self) -> i64 {
        match self.ideal.saturate(&self.t()) {
            Ok(s) if !s.is_unit() => s.dimension() - 1,
            _ => -1,
        }
    }
}

/// Result of [`verify_chart`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDiagnostics {
    pub t_torsion_free: bool,
    /// `Some(true)` when the Jacobian criterion certifies smoothness, `Some(false)`
    /// when it certifies a singular point, `None` when it is inconclusive.
    pub generic_fiber_smooth: Option<bool>,
    pub generic_dimension: i64,
}

impl ChartDiagnostics {
    pub fn all_pass(&self) -> bool {
        self.t_torsion_free && self.generic_fiber_smooth == Some(true)
    }
}

impl fmt::Display for ChartDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let smooth = match self.generic_fiber_smooth {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        write!(
            f,
            "t-torsion-free: {}; generic fiber smooth: {}; generic dimension: {}",
            if self.t_torsion_free { "yes" } else { "no" },
            smooth,
            self.generic_dimension
        )
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub(crate) fn det(m: &[Vec<MultiPoly>], ring: &PolyRing) -> MultiPoly {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&det(&minor, ring));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All `c × c` minors of the Jacobian of `gens` with respect to `vars`.
pub(crate) fn jacobian_minors(ring: &PolyRing, gens: &[MultiPoly], vars: &[usize], c: usize) -> Vec<MultiPoly> {
    if c == 0 {
        return vec![ring.one()];
    }
    let jac: Vec<Vec<MultiPoly>> = gens.iter().map(|g| vars.iter().map(|&v| g.derivative(v)).collect()).collect();
    let mut out = Vec::new();
    for rows in subsets(gens.len(), c) {
        for cols in subsets(vars.len(), c) {
            let m: Vec<Vec<MultiPoly>> =
                rows.iter().map(|&r| cols.iter().map(|&cc| jac[r][cc].clone()).collect()).collect();
            let d = det(&m, ring);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Flatness and generic smoothness diagnostics.
pub fn verify_chart(chart: &Chart) -> ChartDiagnostics {
    let ideal = chart.ideal();
    let t = chart.t();
    let sat = ideal.saturate(&t).expect("t is nonzero");
    let t_torsion_free = sat.same_as(ideal);
    if sat.is_unit() {
        return ChartDiagnostics { t_torsion_free, generic_fiber_smooth: Some(true), generic_dimension: -1 };
    }
    let d = sat.dimension() - 1;
    let n = chart.chart_vars();
    let c = n as i64 - d;
    let gens = sat.gens().to_vec();
    let smooth = if c <= 0 {
        Some(true)
    } else {
        let vars: Vec<usize> = (1..=n).collect();
        let minors = jacobian_minors(chart.ring(), &gens, &vars, c as usize);
        let test = sat.with(&minors);
        if test.radical_contains(&t) {
            Some(true)
        } else if gens.len() as i64 == c {
            Some(false)
        } else {
            None
        }
    };
    ChartDiagnostics { t_torsion_free, generic_fiber_smooth: smooth, generic_dimension: d }
}

/// Affine charts of the blowup of `chart` in the ideal generated by `center`.
/// Chart `i` adjoins `s_j = g_j / g_i` for `j ≠ i`.
pub fn blowup_chart(chart: &Chart, center: &[MultiPoly]) -> Result<Vec<Chart>> {
    if center.is_empty() {
        return Err(GalError::InvalidInput("empty center".into()));
    }
    let ring = chart.ring();
    let n = ring.nvars();
    let mut out = Vec::new();
    for (i, gi) in center.iter().enumerate() {
        let names: Vec<String> = (0..center.len()).filter(|&j| j != i).map(|j| format!("s{j}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let r2 = ring.extended(&refs);
        let mut gens: Vec<MultiPoly> = chart.ideal().gens().iter().map(|g| g.extend(refs.len())).collect();
        let gi2 = gi.extend(refs.len());
        let mut k = 0;
        for (j, gj) in center.iter().enumerate() {
            if j == i {
                continue;
            }
            gens.push(gi2.mul(&r2.var(n + k)).sub(&gj.extend(refs.len())));
            k += 1;
        }
        let ideal = Ideal::new(&r2, gens)?.saturate(&gi2)?;
        if ideal.is_unit() {
            continue;
        }
        out.push(Chart::from_ideal(ideal)?.named(format!("{}.b{i}", chart.name())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagnostics() {
        let q = BaseField::Rationals;
        let c = Chart::new(q, &["x"], &["x^2 - t"]).unwrap();
        let d = verify_chart(&c);
        assert!(d.t_torsion_free && d.generic_fiber_smooth == Some(true));
        assert_eq!(d.generic_dimension, 0);
        let c = Chart::new(q, &["x"], &["t*x"]).unwrap();
        assert!(!verify_chart(&c).t_torsion_free);
        let c = Chart::new(q, &["x", "y"], &[]).unwrap();
        assert!(verify_chart(&c).all_pass());
        let c = Chart::new(q, &["x", "y"], &["y^2 - x^3"]).unwrap();
        assert_eq!(verify_chart(&c).generic_fiber_smooth, Some(false));
    }

    #[test]
    fn blowup_of_the_plane() {
        let q = BaseField::Rationals;
        let c = Chart::new(q, &["x", "y"], &[]).unwrap();
        let center = vec![c.parse("x").unwrap(), c.parse("y").unwrap()];
        let charts = blowup_chart(&c, &center).unwrap();
        assert_eq!(charts.len(), 2);
        for (i, ch) in charts.iter().enumerate() {
            let r = ch.ring();
            let gi = center[i].extend(1);
            let gj = center[1 - i].extend(1);
            // Rees relation and principality of the exceptional ideal
            assert!(ch.ideal().contains(&gi.mul(&r.var(3)).sub(&gj)));
            assert!(ch.ideal().with(&[gi.clone()]).contains(&gj));
            assert!(verify_chart(ch).all_pass());
        }
    }
}
