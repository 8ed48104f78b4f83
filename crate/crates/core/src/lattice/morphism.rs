//! Morphisms of projective models given by substitutions, and their action on cohomology.

use std::fmt;

use super::cech::{CechEngine, StructureComplex, Window};
use super::charpoly::{charpoly_integrality, CharpolyReport};
use super::cohomology::{transpose, window_sequence, WindowData};
use super::linalg::{collect, ColMatrix, SparseVec};
use super::model::ProjModel;
use crate::arith::Scalar;
use crate::error::{GalError, Result};
use crate::ideal::{Monomial, MultiPoly};

/// A morphism `source → target` given by polynomials in the source coordinates,
/// one for each coordinate of the target (with `t ↦ t`).
#[derive(Clone)]
pub struct Morphism {
    pub name: String,
    source: ProjModel,
    target: ProjModel,
    images: Vec<MultiPoly>,
    /// For each source cover monomial `m'_k`: the target cover index `i` and `h_k = m'_k / φ(m_i)`.
    charts: Vec<(usize, MultiPoly)>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({}: {} -> {})", self.name, self.source.name(), self.target.name())
    }
}

/// Exact quotient of a monomial by a single term, if any.
fn divide_by_term(m: &Monomial, d: &MultiPoly) -> Option<MultiPoly> {
    if d.len() != 1 {
        return None;
    }
    let (dm, dc) = d.terms().next()?;
    if !dm.divides(m) {
        return None;
    }
    Some(MultiPoly::term(dc.inv()?, m.div(dm)))
}

impl Morphism {
    /// `images[v - 1]` is the image of target variable `v`, a polynomial in the source ring.
    pub fn new(source: &ProjModel, target: &ProjModel, images: Vec<MultiPoly>) -> Result<Self> {
        let (sr, tr) = (source.ring(), target.ring());
        if sr.field != tr.field {
            return Err(GalError::InvalidInput("morphism between models over different fields".into()));
        }
        if images.len() + 1 != tr.nvars() {
            return Err(GalError::RingMismatch { expected: tr.nvars() - 1, found: images.len() });
        }
        for p in &images {
            sr.check(p)?;
            if p.degree_in(0) > 0 {
                return Err(GalError::InvalidInput("morphism images must not involve t".into()));
            }
        }
        let mut full = vec![sr.var(0)];
        full.extend(images.iter().cloned());
        let grading = source.grading();
        for g in target.groups() {
            let degs: Vec<Option<Vec<i64>>> = g.iter().map(|&v| full[v].homogeneous_degree(&grading)).collect();
            if degs.iter().any(|d| d.is_none()) || degs.windows(2).any(|w| w[0] != w[1]) {
                return Err(GalError::InvalidInput(
                    "images of a variable group must be homogeneous of a common degree".into(),
                ));
            }
        }
        for g in target.ideal().gens() {
            if !source.ideal().contains(&g.substitute(&full)) {
                return Err(GalError::InvalidInput(format!(
                    "the image of {} does not vanish on {}",
                    tr.fmt(g),
                    source.name()
                )));
            }
        }
        let mut charts = Vec::new();
        for k in 0..source.cover_len() {
            let mk = source.cover_monomial(k);
            let found = (0..target.cover_len()).find_map(|i| {
                let img = MultiPoly::term(sr.field.one(), target.cover_monomial(i)).substitute(&full);
                divide_by_term(&mk, &img).map(|h| (i, h))
            });
            match found {
                Some(x) => charts.push(x),
                None => {
                    return Err(GalError::Unsupported(format!(
                        "chart {} of {} does not map into a standard chart of {}",
                        source.charts()[k].name(),
                        source.name(),
                        target.name()
                    )))
                }
            }
        }
        Ok(Morphism { name: "f".into(), source: source.clone(), target: target.clone(), images, charts })
    }

    pub fn parse(source: &ProjModel, target: &ProjModel, images: &[&str]) -> Result<Self> {
        let imgs = source.ring().parse_list(images)?;
        Morphism::new(source, target, imgs)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn identity(model: &ProjModel) -> Self {
        let images = (1..model.ring().nvars()).map(|v| model.ring().var(v)).collect();
        Morphism::new(model, model, images).expect("identity is a morphism").named("id")
    }

    pub fn source(&self) -> &ProjModel {
        &self.source
    }

    pub fn target(&self) -> &ProjModel {
        &self.target
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    fn full_images(&self) -> Vec<MultiPoly> {
        let mut full = vec![self.source.ring().var(0)];
        full.extend(self.images.iter().cloned());
        full
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Morphism) -> Result<Morphism> {
        let full = self.full_images();
        let images = then.images.iter().map(|g| g.substitute(&full)).collect();
        Ok(Morphism::new(&self.source, &then.target, images)?.named(format!("{}*{}", then.name, self.name)))
    }

    /// Pullback `C^p(target) → C^p(source)` on structure complexes of the same window level.
    pub fn pullback(&self, target: &StructureComplex, source: &StructureComplex, p: usize) -> Result<ColMatrix> {
        let field = source.field;
        let d = source.window.d;
        if target.window.d != d {
            return Err(GalError::InvalidInput("pullback needs equal window levels".into()));
        }
        let full = self.full_images();
        let mut m = ColMatrix::zero(field, source.dims[p], target.dims[p]);
        if p > target.top() || p > source.top() {
            return Ok(m);
        }
        for (sbi, sb) in source.blocks[p].iter().enumerate() {
            let taus: Vec<usize> = sb.sigma.iter().map(|&k| self.charts[k].0).collect();
            let mut sorted = taus.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let inversions = (0..taus.len())
                .flat_map(|a| (a + 1..taus.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| taus[a] > taus[b])
                .count();
            let sign = if inversions % 2 == 0 { Scalar::one(field) } else { Scalar::int(field, -1) };
            let Some(tbi) = target.block_index(p, &sorted) else { continue };
            let tb = &target.blocks[p][tbi];
            let h = sb.sigma.iter().fold(source.ring.one(), |acc, &k| acc.mul(&self.charts[k].1.pow(d)));
            for (j, mono) in tb.basis.iter().enumerate() {
                let img = MultiPoly::term(field.one(), mono.clone()).substitute(&full).mul(&h);
                let coords = source.coords(p, sbi, &img)?;
                let col = &mut m.cols[tb.offset + j];
                *col = collect(field, col.drain(..).chain(coords.into_iter().map(|(i, v)| (i, v.mul(&sign)))));
            }
        }
        Ok(m)
    }
}

/// The action of an endomorphism on `H^i(X, 𝐆_a(r))` and on the generic cohomology.
#[derive(Clone, Debug)]
pub struct ActionReport {
    pub morphism: String,
    pub degree: usize,
    pub twist: i64,
    /// Matrix on the lattice basis (columns are images).
    pub lattice: Vec<Vec<Scalar>>,
    /// Matrix on the generic cohomology basis.
    pub generic: Vec<Vec<Scalar>>,
    /// The pullback maps `𝐆_a(r)`-cochains to `𝐆_a(r)`-cochains.
    pub preserves: bool,
    /// The two matrices agree through the lattice inclusion.
    pub commutes: bool,
    pub charpoly: CharpolyReport,
    /// The characteristic polynomial is the same in every window.
    pub certified: bool,
}

impl fmt::Display for ActionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}^* on H^{}(G_a({})):", self.morphism, self.degree, self.twist)?;
        for row in &self.lattice {
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        writeln!(f, "  charpoly {}", self.charpoly)?;
        writeln!(f, "  preserves lattice: {}", self.preserves)?;
        write!(f, "  compatible with generic action: {}", self.commutes)
    }
}

fn matmul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], inner: usize, field: crate::arith::BaseField) -> Vec<Vec<Scalar>> {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Scalar::zero(field), |acc, k| acc.add(&row[k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn action_in_window(engine: &mut CechEngine, f: &Morphism, degree: usize, r: i64, window: Window) -> Result<ActionReport> {
    let field = f.source.field();
    let data = WindowData::compute(engine, degree, r, window)?;
    let amb = &data.structure.ambient;
    let pull = f.pullback(amb, amb, degree)?;
    let mut preserves = true;
    if degree <= data.ga.top() {
        for j in 0..data.ga.dims[degree] {
            let x = data.ga.to_ambient(degree, &[(j, Scalar::one(field))]);
            let y: SparseVec = data.ga.from_ambient(degree, &pull.apply(&x));
            preserves &= y.iter().all(|(_, v)| v.is_integral());
        }
    }
    let lcols: Vec<Vec<Scalar>> = data
        .h_ga
        .basis
        .iter()
        .map(|b| {
            let x = pull.apply(&data.ga.to_ambient(degree, b));
            data.h_ga.class_coords(&data.ga.from_ambient(degree, &x))
        })
        .collect();
    let gcols: Vec<Vec<Scalar>> = data.h_o.basis.iter().map(|b| data.h_o.class_coords(&pull.apply(b))).collect();
    let lattice = transpose(data.h_ga.rank, &lcols, field);
    let generic = transpose(data.h_o.rank, &gcols, field);
    let image = data.image();
    let commutes = matmul(&image, &lattice, data.h_ga.rank, field) == matmul(&generic, &image, data.h_o.rank, field);
    let charpoly = charpoly_integrality(field, &lattice);
    Ok(ActionReport {
        morphism: f.name.clone(),
        degree,
        twist: r,
        lattice,
        generic,
        preserves,
        commutes,
        charpoly,
        certified: false,
    })
}

/// Action of an endomorphism `f` on `H^i(X, 𝐆_a(r))`, checked across `rounds + 1` windows.
pub fn morphism_action(f: &Morphism, degree: usize, r: i64, window: Window, rounds: usize) -> Result<ActionReport> {
    if f.source.ring().vars != f.target.ring().vars || !f.source.ideal().same_as(f.target.ideal()) {
        return Err(GalError::InvalidInput("morphism_action needs an endomorphism".into()));
    }
    let mut engine = CechEngine::new(&f.source)?;
    let mut reports = Vec::new();
    for w in window_sequence(window, rounds) {
        reports.push(action_in_window(&mut engine, f, degree, r, w)?);
    }
    let mut last = reports.pop().unwrap();
    last.certified = rounds > 0 && reports.iter().all(|p| p.charpoly.coeffs == last.charpoly.coeffs);
    Ok(last)
}
