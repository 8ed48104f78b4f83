//! Cohomology of truncated Čech complexes over `R = k[[t]]`, with certification
//! by window doubling.

use std::fmt;
use std::sync::Arc;

use super::cech::{CechEngine, Sheaf, StructureComplex, TruncatedCechComplex, Window};
use super::linalg::{dot, ColMatrix, Echelon, SparseVec};
use super::model::ProjModel;
use crate::arith::{BaseField, Scalar};
use crate::error::Result;

/// `H^i` of a complex of free `R`-modules, with a class-coordinate map on cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    pub rank: usize,
    /// Valuations of the torsion invariants, increasing.
    pub torsion: Vec<i64>,
    /// Representative cocycles of a basis of the free part.
    pub basis: Vec<SparseVec>,
    field: BaseField,
    /// position in the cocycle coordinates for each column of `C^i`
    zpos: Vec<Option<usize>>,
    phi: Vec<SparseVec>,
}

impl Cohomology {
    pub fn compute(field: BaseField, d_prev: Option<&ColMatrix>, d_next: Option<&ColMatrix>, dim: usize, degree: usize) -> Self {
        let (ech_d, free) = match d_next {
            Some(d) => {
                let e = Echelon::new(field, d.transpose_rows(), dim);
                let f = e.free.clone();
                (Some(e), f)
            }
            None => (None, (0..dim).collect()),
        };
        let mut zpos = vec![None; dim];
        for (k, &c) in free.iter().enumerate() {
            zpos[c] = Some(k);
        }
        let rows: Vec<SparseVec> = match d_prev {
            Some(d) => d
                .cols
                .iter()
                .map(|col| col.iter().filter_map(|(i, v)| zpos[*i].map(|k| (k, v.clone()))).collect())
                .collect(),
            None => Vec::new(),
        };
        let ech_y = Echelon::new(field, rows, free.len());
        let mut torsion: Vec<i64> = ech_y.invariant_valuations().into_iter().filter(|&v| v > 0).collect();
        torsion.sort();
        let phi = ech_y.kernel_basis();
        let one = Scalar::one(field);
        let basis = ech_y
            .free
            .iter()
            .map(|&f| match &ech_d {
                Some(e) => e.kernel_vector(&[(free[f], one.clone())]),
                None => vec![(free[f], one.clone())],
            })
            .collect();
        Cohomology { degree, rank: ech_y.free.len(), torsion, basis, field, zpos, phi }
    }

    pub fn of_complex(c: &TruncatedCechComplex, degree: usize) -> Self {
        if degree > c.top() {
            return Cohomology {
                degree,
                rank: 0,
                torsion: Vec::new(),
                basis: Vec::new(),
                field: c.field(),
                zpos: Vec::new(),
                phi: Vec::new(),
            };
        }
        let prev = degree.checked_sub(1).map(|p| &c.d[p]);
        Cohomology::compute(c.field(), prev, c.d.get(degree), c.dims[degree], degree)
    }

    /// Coordinates of the class of a cocycle in the free part.
    pub fn class_coords(&self, x: &[(usize, Scalar)]) -> Vec<Scalar> {
        let z: SparseVec = x.iter().filter_map(|(i, v)| self.zpos.get(*i).copied().flatten().map(|k| (k, v.clone()))).collect();
        self.phi.iter().map(|w| dot(w, &z, self.field)).collect()
    }
}

/// Both Čech complexes of one window and their cohomology in one degree.
pub(crate) struct WindowData {
    pub structure: TruncatedCechComplex,
    pub ga: TruncatedCechComplex,
    pub h_o: Cohomology,
    pub h_ga: Cohomology,
}

impl WindowData {
    pub fn compute(engine: &mut CechEngine, degree: usize, r: i64, window: Window) -> Result<Self> {
        let amb = Arc::new(engine.structure_complex(window)?);
        Self::on(engine, degree, r, amb)
    }

    pub fn on(engine: &mut CechEngine, degree: usize, r: i64, amb: Arc<StructureComplex>) -> Result<Self> {
        let structure = engine.complex_on(Sheaf::Structure, amb.clone())?;
        let ga = engine.complex_on(Sheaf::Ga(r), amb)?;
        let h_o = Cohomology::of_complex(&structure, degree);
        let h_ga = Cohomology::of_complex(&ga, degree);
        Ok(WindowData { structure, ga, h_o, h_ga })
    }

    /// Generic coordinates of the lattice basis (`dim × rank`).
    pub fn image(&self) -> Vec<Vec<Scalar>> {
        let cols: Vec<Vec<Scalar>> = self
            .h_ga
            .basis
            .iter()
            .map(|b| self.h_o.class_coords(&self.ga.to_ambient(self.h_o.degree, b)))
            .collect();
        transpose(self.h_o.rank, &cols, self.structure.field())
    }
}

pub(crate) fn transpose(rows: usize, cols: &[Vec<Scalar>], field: BaseField) -> Vec<Vec<Scalar>> {
    (0..rows)
        .map(|i| cols.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| Scalar::zero(field))).collect())
        .collect()
}

fn dense_cols(field: BaseField, cols: &[Vec<Scalar>]) -> Vec<SparseVec> {
    cols.iter().map(|c| super::linalg::collect(field, c.iter().cloned().enumerate())).collect()
}

/// Is the square matrix with these columns invertible over `R`?
pub fn unimodular_cols(field: BaseField, n: usize, cols: &[Vec<Scalar>]) -> bool {
    cols.len() == n && Echelon::new(field, dense_cols(field, cols), n).is_unimodular(n)
}

/// Is the square matrix with these columns invertible over `K`?
pub fn invertible_cols(field: BaseField, n: usize, cols: &[Vec<Scalar>]) -> bool {
    cols.len() == n && Echelon::new(field, dense_cols(field, cols), n).rank() == n
}

/// Map between the lattices of two windows in one degree: columns are
/// the images of the basis of `small` in the coordinates of `big`.
fn window_transfer(engine: &CechEngine, small: &WindowData, big: &WindowData, ga: bool) -> Result<Vec<Vec<Scalar>>> {
    let p = small.h_o.degree;
    if p > small.structure.top() {
        return Ok(Vec::new());
    }
    let iota = engine.window_map(&small.structure.ambient, &big.structure.ambient, p)?;
    let (hs, hb, cs, cb) = if ga {
        (&small.h_ga, &big.h_ga, &small.ga, &big.ga)
    } else {
        (&small.h_o, &big.h_o, &small.structure, &big.structure)
    };
    Ok(hs
        .basis
        .iter()
        .map(|b| hb.class_coords(&cb.from_ambient(p, &iota.apply(&cs.to_ambient(p, b)))))
        .collect())
}

/// A cohomology lattice `H^i(X, 𝐆_a(r))` with its certification record.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    pub model: String,
    pub degree: usize,
    pub twist: i64,
    pub rank: usize,
    pub torsion: Vec<i64>,
    /// Representative cocycles, one line per basis element.
    pub basis: Vec<String>,
    /// The largest window computed.
    pub window: Window,
    pub windows: Vec<Window>,
    pub certified: bool,
    /// Dimension of `H^i` of the generic fiber.
    pub generic_dimension: usize,
    /// Coordinates of the lattice basis in the generic cohomology (`generic_dimension × rank`).
    pub image: Vec<Vec<Scalar>>,
}

impl fmt::Display for LatticeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "H^{}({}, G_a({})):", self.degree, self.model, self.twist)?;
        let tors: Vec<String> = self.torsion.iter().map(|v| format!("R/t^{v}")).collect();
        if tors.is_empty() {
            writeln!(f, "  R^{}", self.rank)?;
        } else {
            writeln!(f, "  R^{} + {}", self.rank, tors.join(" + "))?;
        }
        for (i, b) in self.basis.iter().enumerate() {
            writeln!(f, "  e{}: {}", i + 1, b)?;
        }
        writeln!(f, "  generic dimension {}", self.generic_dimension)?;
        let ws: Vec<String> = self.windows.iter().map(|w| format!("D={}", w.d)).collect();
        write!(f, "  windows {}: {}", ws.join(", "), if self.certified { "certified" } else { "not certified" })
    }
}

/// Generic-fiber cohomology `H^i(X_K, 𝒪)`.
#[derive(Clone, Debug)]
pub struct GenericReport {
    pub model: String,
    pub degree: usize,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub windows: Vec<Window>,
    pub certified: bool,
}

impl fmt::Display for GenericReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "H^{}({}_K, O): dimension {}", self.degree, self.model, self.dimension)?;
        for (i, b) in self.basis.iter().enumerate() {
            writeln!(f, "  e{}: {}", i + 1, b)?;
        }
        write!(f, "  {}", if self.certified { "certified" } else { "not certified" })
    }
}

pub(crate) fn window_sequence(window: Window, rounds: usize) -> Vec<Window> {
    let mut out = vec![window];
    for _ in 0..rounds {
        let w = *out.last().unwrap();
        out.push(w.doubled());
    }
    out
}

/// Compute all rounds, returning the per-window data and whether the last two agree.
pub(crate) fn run_rounds(
    engine: &mut CechEngine,
    degree: usize,
    r: i64,
    window: Window,
    rounds: usize,
) -> Result<(Vec<WindowData>, bool, bool)> {
    let windows = window_sequence(window, rounds);
    let mut data = Vec::new();
    for w in &windows {
        data.push(WindowData::compute(engine, degree, r, *w)?);
    }
    let field = engine.model().field();
    let mut lattice_ok = rounds > 0;
    let mut generic_ok = rounds > 0;
    for pair in data.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.h_o.rank != b.h_o.rank {
            generic_ok = false;
        } else if !invertible_cols(field, b.h_o.rank, &window_transfer(engine, a, b, false)?) {
            generic_ok = false;
        }
        if a.h_ga.rank != b.h_ga.rank || a.h_ga.torsion != b.h_ga.torsion {
            lattice_ok = false;
        } else if !unimodular_cols(field, b.h_ga.rank, &window_transfer(engine, a, b, true)?) {
            lattice_ok = false;
        }
    }
    Ok((data, lattice_ok && generic_ok, generic_ok))
}

pub(crate) fn format_basis(engine: &CechEngine, c: &TruncatedCechComplex, degree: usize, basis: &[SparseVec]) -> Vec<String> {
    basis
        .iter()
        .map(|b| engine.format_cochain(&c.ambient, degree, &c.to_ambient(degree, b)).join("; "))
        .collect()
}

/// The lattice `H^i(X, 𝐆_a(r))` computed in `rounds + 1` windows starting at `window`.
pub fn cohomology_lattice(model: &ProjModel, degree: usize, r: i64, window: Window, rounds: usize) -> Result<LatticeReport> {
    let mut engine = CechEngine::new(model)?;
    lattice_with_engine(&mut engine, degree, r, window, rounds)
}

pub(crate) fn lattice_with_engine(
    engine: &mut CechEngine,
    degree: usize,
    r: i64,
    window: Window,
    rounds: usize,
) -> Result<LatticeReport> {
    let (data, certified, _) = run_rounds(engine, degree, r, window, rounds)?;
    let last = data.last().unwrap();
    let windows = window_sequence(window, rounds);
    Ok(LatticeReport {
        model: engine.model().name().to_string(),
        degree,
        twist: r,
        rank: last.h_ga.rank,
        torsion: last.h_ga.torsion.clone(),
        basis: format_basis(engine, &last.ga, degree, &last.h_ga.basis),
        window: *windows.last().unwrap(),
        windows,
        certified,
        generic_dimension: last.h_o.rank,
        image: last.image(),
    })
}

/// `H^i` of the structure sheaf of the generic fiber.
pub fn generic_fiber_cohomology(model: &ProjModel, degree: usize, window: Window, rounds: usize) -> Result<GenericReport> {
    let mut engine = CechEngine::new(model)?;
    let windows = window_sequence(window, rounds);
    let mut data = Vec::new();
    for w in &windows {
        let c = engine.complex(Sheaf::Structure, *w)?;
        let h = Cohomology::of_complex(&c, degree);
        data.push((c, h));
    }
    let mut certified = rounds > 0;
    for pair in data.windows(2) {
        let ((ca, ha), (cb, hb)) = (&pair[0], &pair[1]);
        if ha.rank != hb.rank {
            certified = false;
            continue;
        }
        if degree <= ca.top() {
            let iota = engine.window_map(&ca.ambient, &cb.ambient, degree)?;
            let cols: Vec<Vec<Scalar>> = ha.basis.iter().map(|b| hb.class_coords(&iota.apply(b))).collect();
            certified &= invertible_cols(model.field(), hb.rank, &cols);
        }
    }
    let (c, h) = data.last().unwrap();
    Ok(GenericReport {
        model: model.name().to_string(),
        degree,
        dimension: h.rank,
        basis: format_basis(&engine, c, degree, &h.basis),
        windows,
        certified,
    })
}

/// Does the lattice span the generic cohomology?
pub fn compare_generic(lattice: &LatticeReport, generic: &GenericReport) -> bool {
    if lattice.degree != generic.degree || lattice.rank != generic.dimension || lattice.generic_dimension != generic.dimension {
        return false;
    }
    let field = lattice.image.first().and_then(|r| r.first()).map(|s| s.field());
    let Some(field) = field else { return lattice.rank == 0 };
    let cols: Vec<Vec<Scalar>> = (0..lattice.rank).map(|j| lattice.image.iter().map(|row| row[j].clone()).collect()).collect();
    invertible_cols(field, lattice.rank, &cols)
}

/// Render a matrix of scalars, one row per line.
pub fn format_matrix(m: &[Vec<Scalar>]) -> String {
    m.iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::model::build_proj_model;

    #[test]
    fn projective_space_lattices() {
        let p2 = build_proj_model(BaseField::Rationals, &["X", "Y", "Z"], &[]).unwrap();
        let h0 = cohomology_lattice(&p2, 0, 0, Window::new(1, 4).unwrap(), 1).unwrap();
        assert_eq!(h0.rank, 1);
        assert!(h0.torsion.is_empty());
        assert!(h0.certified);
        assert_eq!(h0.image, vec![vec![Scalar::t_pow(BaseField::Rationals, 1)]]);
        for i in 1..=2 {
            let h = cohomology_lattice(&p2, i, 0, Window::new(1, 4).unwrap(), 1).unwrap();
            assert_eq!((h.rank, h.torsion.len()), (0, 0));
        }
        let g = generic_fiber_cohomology(&p2, 0, Window::new(1, 4).unwrap(), 1).unwrap();
        assert_eq!(g.dimension, 1);
        assert!(compare_generic(&h0, &g));
    }
}
