//! Executable invariance checks: blowups, products with `P¹`, twist shifts and the
//! sandwich `t·L_𝒪 → Λ → L_𝒪`.

use std::fmt;
use std::sync::Arc;

use super::cech::{CechEngine, Window};
use super::cohomology::{format_matrix, invertible_cols, transpose, unimodular_cols, window_sequence, WindowData};
use super::linalg::SparseVec;
use super::model::{blowup_model, product_with_p1, ProjModel};
use super::morphism::Morphism;
use crate::arith::Scalar;
use crate::error::Result;
use crate::ideal::MultiPoly;

#[derive(Clone, Debug)]
pub struct InvarianceConfig {
    pub window: Window,
    pub rounds: usize,
    pub twist: i64,
    /// Blowup center; defaults to the point `[0:…:0:1]` of the first variable group.
    pub center: Option<Vec<MultiPoly>>,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        InvarianceConfig { window: Window::default(), rounds: 1, twist: 0, center: None }
    }
}

#[derive(Clone, Debug)]
pub struct InvarianceCheck {
    pub name: String,
    pub passed: bool,
    /// One entry per degree, with the witnessing matrices.
    pub details: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub model: String,
    pub checks: Vec<InvarianceCheck>,
}

impl InvarianceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invariance suite for {}", self.model)?;
        for c in &self.checks {
            writeln!(f, "  {}: {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            for d in &c.details {
                for line in d.lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// Matrices of a cochain map on lattices and generic cohomology in one degree.
struct Induced {
    lattice: Vec<Vec<Scalar>>,
    generic: Vec<Vec<Scalar>>,
    integral: bool,
}

fn induced(src: &WindowData, dst: &WindowData, degree: usize, map: impl Fn(&SparseVec) -> SparseVec) -> Induced {
    let field = src.structure.field();
    let mut integral = true;
    let lcols: Vec<Vec<Scalar>> = src
        .h_ga
        .basis
        .iter()
        .map(|b| {
            let y = dst.ga.from_ambient(degree, &map(&src.ga.to_ambient(degree, b)));
            integral &= y.iter().all(|(_, v)| v.is_integral());
            dst.h_ga.class_coords(&y)
        })
        .collect();
    let gcols: Vec<Vec<Scalar>> = src.h_o.basis.iter().map(|b| dst.h_o.class_coords(&map(b))).collect();
    Induced {
        lattice: transpose(dst.h_ga.rank, &lcols, field),
        generic: transpose(dst.h_o.rank, &gcols, field),
        integral,
    }
}

fn columns(m: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn describe(w: &WindowData) -> String {
    let tors: Vec<String> = w.h_ga.torsion.iter().map(|v| format!("R/t^{v}")).collect();
    if tors.is_empty() {
        format!("R^{}", w.h_ga.rank)
    } else {
        format!("R^{} + {}", w.h_ga.rank, tors.join(" + "))
    }
}

/// Lattices of `model` and `other` agree in every degree, identified through `pi: other → model`.
pub fn pullback_check(name: &str, model: &ProjModel, other: &ProjModel, pi: &Morphism, cfg: &InvarianceConfig) -> Result<InvarianceCheck> {
    let window = *window_sequence(cfg.window, cfg.rounds).last().unwrap();
    let mut em = CechEngine::new(model)?;
    let mut eo = CechEngine::new(other)?;
    let am = Arc::new(em.structure_complex(window)?);
    let ao = Arc::new(eo.structure_complex(window)?);
    let top = am.top().max(ao.top());
    let mut passed = true;
    let mut details = Vec::new();
    for i in 0..=top {
        let wm = WindowData::on(&mut em, i, cfg.twist, am.clone())?;
        let wo = WindowData::on(&mut eo, i, cfg.twist, ao.clone())?;
        let same = wm.h_ga.rank == wo.h_ga.rank && wm.h_ga.torsion == wo.h_ga.torsion && wm.h_o.rank == wo.h_o.rank;
        let mut line = format!("H^{i}: {} vs {}", describe(&wm), describe(&wo));
        let mut ok = same;
        if same && wm.h_o.rank > 0 {
            let pull = pi.pullback(&am, &ao, i)?;
            let ind = induced(&wm, &wo, i, |x| pull.apply(x));
            let field = model.field();
            let uni = ind.integral && unimodular_cols(field, wo.h_ga.rank, &columns(&ind.lattice, wm.h_ga.rank));
            let iso = invertible_cols(field, wo.h_o.rank, &columns(&ind.generic, wm.h_o.rank));
            ok &= uni && iso;
            line.push_str(&format!("\npullback on lattice:\n{}\npullback on H_K:\n{}", format_matrix(&ind.lattice), format_matrix(&ind.generic)));
        }
        line.push_str(if ok { "\nok" } else { "\nmismatch" });
        passed &= ok;
        details.push(line);
    }
    Ok(InvarianceCheck { name: name.into(), passed, details })
}

fn default_center(model: &ProjModel) -> Vec<MultiPoly> {
    let g = &model.groups()[0];
    g[..g.len() - 1].iter().map(|&v| model.ring().var(v)).collect()
}

pub fn shift_and_sandwich(model: &ProjModel, cfg: &InvarianceConfig) -> Result<(InvarianceCheck, InvarianceCheck)> {
    let window = *window_sequence(cfg.window, cfg.rounds).last().unwrap();
    let mut e = CechEngine::new(model)?;
    let amb = Arc::new(e.structure_complex(window)?);
    let field = model.field();
    let t = Scalar::t_pow(field, 1);
    let times_t = |x: &SparseVec| -> SparseVec { x.iter().map(|(i, v)| (*i, v.mul(&t))).collect() };
    let (mut shift_ok, mut sand_ok) = (true, true);
    let (mut shift_d, mut sand_d) = (Vec::new(), Vec::new());
    for i in 0..=amb.top() {
        let lo = WindowData::on(&mut e, i, cfg.twist, amb.clone())?;
        let hi = WindowData::on(&mut e, i, cfg.twist + 1, amb.clone())?;
        // multiplication by t identifies Λ(r) with Λ(r+1)
        let ind = induced(&lo, &hi, i, times_t);
        let ok = lo.h_ga.torsion == hi.h_ga.torsion
            && ind.integral
            && unimodular_cols(field, hi.h_ga.rank, &columns(&ind.lattice, lo.h_ga.rank));
        shift_ok &= ok;
        shift_d.push(format!("H^{i}: t: Λ({}) → Λ({}):\n{}", cfg.twist, cfg.twist + 1, format_matrix(&ind.lattice)));

        // t·L_𝒪 → Λ(0) → L_𝒪
        let z = if cfg.twist == 0 { lo } else { WindowData::on(&mut e, i, 0, amb.clone())? };
        let n_o = z.h_o.rank;
        let n_l = z.h_ga.rank;
        let mut integral = true;
        let a_cols: Vec<Vec<Scalar>> = z
            .h_o
            .basis
            .iter()
            .map(|b| {
                let y = z.ga.from_ambient(i, &times_t(b));
                integral &= y.iter().all(|(_, v)| v.is_integral());
                z.h_ga.class_coords(&y)
            })
            .collect();
        let b_cols: Vec<Vec<Scalar>> = z.h_ga.basis.iter().map(|b| z.h_o.class_coords(&z.ga.to_ambient(i, b))).collect();
        let a = transpose(n_l, &a_cols, field);
        let b = transpose(n_o, &b_cols, field);
        let mut ba_ok = integral;
        for r in 0..n_o {
            for c in 0..n_o {
                let v = (0..n_l).fold(Scalar::zero(field), |acc, k| acc.add(&b[r][k].mul(&a[k][c])));
                let want = if r == c { t.clone() } else { Scalar::zero(field) };
                ba_ok &= v == want;
            }
        }
        sand_ok &= ba_ok;
        sand_d.push(format!("H^{i}: t·L_O → Λ:\n{}\nΛ → L_O:\n{}", format_matrix(&a), format_matrix(&b)));
    }
    Ok((
        InvarianceCheck { name: "shift".into(), passed: shift_ok, details: shift_d },
        InvarianceCheck { name: "sandwich".into(), passed: sand_ok, details: sand_d },
    ))
}

/// Run the blowup, `P¹`-product, shift and sandwich checks on `model`.
pub fn invariance_suite(model: &ProjModel, cfg: &InvarianceConfig) -> Result<InvarianceReport> {
    let center = cfg.center.clone().unwrap_or_else(|| default_center(model));
    let bl = blowup_model(model, &center)?;
    let n = model.ring().nvars();
    let old: Vec<MultiPoly> = (1..n).map(|v| bl.ring().var(v)).collect();
    let pi = Morphism::new(&bl, model, old)?.named("blowdown");
    let blowup = pullback_check("blowup", model, &bl, &pi, cfg)?;

    let prod = product_with_p1(model)?;
    let proj: Vec<MultiPoly> = (1..n).map(|v| prod.ring().var(v + 2)).collect();
    let pr = Morphism::new(&prod, model, proj)?.named("projection");
    let p1 = pullback_check("p1-product", model, &prod, &pr, cfg)?;

    let (shift, sandwich) = shift_and_sandwich(model, cfg)?;
    Ok(InvarianceReport { model: model.name().to_string(), checks: vec![blowup, p1, shift, sandwich] })
}
