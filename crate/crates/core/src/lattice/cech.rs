//! Truncated Čech complexes of `𝒪` and `𝐆_a(r)` on a projective model.
//!
//! For a set `σ` of cover monomials with product `m_σ`, the window of level
//! `D` on `D₊(m_σ)` is the free `R`-module of fractions `f / m_σ^D`, where `f`
//! runs over the degree `D·deg(m_σ)` part of `k[t][T]/(I : m_σ^∞)`. Its basis
//! is the set of standard monomials of the special fiber in that degree.
//! Restriction multiplies numerators by `m_j^D`, so each window is an honest
//! subcomplex and the union over `D` is the full Čech complex.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::linalg::{axpy, collect, ColMatrix, SparseVec};
use super::model::ProjModel;
use crate::arith::{BaseField, Fe, Scalar, UPoly};
use crate::error::{GalError, Result};
use crate::ideal::{radical, GroebnerBasis, Ideal, Monomial, MultiPoly, PolyRing};

/// Truncation window: denominator level `D` and the `t`-precision `N` used for
/// `k`-dimension bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub d: u32,
    pub n: u32,
}

impl Window {
    pub fn new(d: u32, n: u32) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(GalError::InvalidInput("window bounds must be positive".into()));
        }
        Ok(Window { d, n })
    }

    pub fn doubled(self) -> Window {
        Window { d: 2 * self.d, n: 2 * self.n }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { d: 1, n: 4 }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D={}, N={}", self.d, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheaf {
    Structure,
    /// `𝐆_a(r)` for an integral twist.
    Ga(i64),
}

/// Ideal data of `D₊(m_σ)`, shared by all windows.
struct SigmaData {
    /// Groebner basis of `I : m_σ^∞`.
    gb: GroebnerBasis,
    t_free: bool,
    /// Groebner basis of the special fiber `(I : m_σ^∞) + (t)`, without `t`.
    special: GroebnerBasis,
    /// Generators of the special fiber of `√(I + t) : m_σ^∞`, when it differs from `special`.
    ga_extra: Vec<MultiPoly>,
    /// Same as `gb.elements()`, kept for the linear-algebra path.
    gens: Vec<MultiPoly>,
}

/// A summand `D₊(m_σ)` of a cochain space.
pub struct Block {
    pub sigma: Vec<usize>,
    pub offset: usize,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    data: Arc<SigmaData>,
    /// Coordinates of non-standard monomials (only for ideals involving `t`).
    table: HashMap<Monomial, SparseVec>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of a numerator `f` of the right degree, relative to the block.
    fn coords(&self, f: &MultiPoly) -> Result<SparseVec> {
        let field = f.field();
        let mut acc: BTreeMap<usize, Vec<Fe>> = BTreeMap::new();
        let mut add = |i: usize, tpow: usize, c: &Fe| {
            let v = acc.entry(i).or_default();
            if v.len() <= tpow {
                v.resize(tpow + 1, field.zero());
            }
            v[tpow] = &v[tpow] + c;
        };
        let mut extra: Vec<(usize, Scalar)> = Vec::new();
        let reduced;
        let f = if self.data.t_free {
            reduced = self.data.gb.reduce(f);
            &reduced
        } else {
            f
        };
        for (m, c) in f.terms() {
            let tpow = m.0[0] as usize;
            let mut tm = m.clone();
            tm.0[0] = 0;
            if let Some(&i) = self.index.get(&tm) {
                add(i, tpow, c);
            } else if let Some(row) = self.table.get(&tm) {
                let s = Scalar::from_upoly(UPoly::monomial(c.clone(), tpow));
                extra.extend(row.iter().map(|(i, v)| (*i, v.mul(&s))));
            } else {
                return Err(GalError::InvalidInput("numerator outside the window degree".into()));
            }
        }
        let base = acc.into_iter().map(|(i, v)| (i, Scalar::from_upoly(UPoly::from_coeffs(field, v))));
        Ok(collect(field, base.chain(extra)))
    }
}

/// The `𝐆_a` lattice inside one block: the preimage of a subspace `V` of the
/// special fiber, spanned by `v_j` (unit at `pivots[j]`) and `t·e_c` for `c` outside the pivots.
#[derive(Clone, Debug)]
pub struct GaBlock {
    pub pivots: Vec<usize>,
    pub vecs: Vec<Vec<(usize, Fe)>>,
    pub others: Vec<usize>,
}

impl GaBlock {
    fn trivial(n: usize) -> Self {
        GaBlock { pivots: Vec::new(), vecs: Vec::new(), others: (0..n).collect() }
    }

    fn len(&self) -> usize {
        self.pivots.len() + self.others.len()
    }
}

/// The full Čech complex of `𝒪` in a window.
pub struct StructureComplex {
    pub window: Window,
    pub field: BaseField,
    /// Blocks of `C^p`, for `p = 0..cover`.
    pub blocks: Vec<Vec<Block>>,
    pub dims: Vec<usize>,
    /// `d[p] : C^p → C^{p+1}`.
    pub d: Vec<ColMatrix>,
    pub ring: PolyRing,
}

impl StructureComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn block_index(&self, p: usize, sigma: &[usize]) -> Option<usize> {
        self.blocks[p].iter().position(|b| b.sigma == sigma)
    }

    /// Coordinates of `f / m_σ^D` in `C^p`.
    pub fn coords(&self, p: usize, block: usize, f: &MultiPoly) -> Result<SparseVec> {
        let b = &self.blocks[p][block];
        Ok(b.coords(f)?.into_iter().map(|(i, v)| (i + b.offset, v)).collect())
    }
}

/// A Čech complex of `𝒪` or `𝐆_a(r)` in a window, with the structure complex it sits in.
pub struct TruncatedCechComplex {
    pub sheaf: Sheaf,
    pub ambient: Arc<StructureComplex>,
    /// Differentials in the sheaf's own bases.
    pub d: Vec<ColMatrix>,
    pub dims: Vec<usize>,
    ga: Option<(i64, Vec<Vec<GaBlock>>)>,
}

impl TruncatedCechComplex {
    pub fn window(&self) -> Window {
        self.ambient.window
    }

    pub fn field(&self) -> BaseField {
        self.ambient.field
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// Dimension over `k` of `C^p ⊗ R/t^N`.
    pub fn k_dimension(&self, p: usize) -> usize {
        self.dims[p] * self.window().n as usize
    }

    /// Multiplication by `t` on `C^p`, in the sheaf's basis.
    pub fn t_action(&self, p: usize) -> ColMatrix {
        let t = Scalar::t_pow(self.field(), 1);
        let mut m = ColMatrix::zero(self.field(), self.dims[p], self.dims[p]);
        for (j, c) in m.cols.iter_mut().enumerate() {
            c.push((j, t.clone()));
        }
        m
    }

    /// Sheaf coordinates to structure-complex coordinates (over `K`).
    pub fn to_ambient(&self, p: usize, y: &[(usize, Scalar)]) -> SparseVec {
        let Some((r, ga)) = &self.ga else { return y.to_vec() };
        let field = self.field();
        let mut out = Vec::new();
        let tr = Scalar::t_pow(field, *r);
        let tr1 = Scalar::t_pow(field, r + 1);
        let mut start = 0;
        for (b, g) in self.ambient.blocks[p].iter().zip(&ga[p]) {
            let np = g.pivots.len();
            for (i, v) in y.iter().filter(|(i, _)| *i >= start && *i < start + g.len()) {
                let k = i - start;
                if k < np {
                    let s = v.mul(&tr);
                    out.extend(g.vecs[k].iter().map(|(c, a)| (b.offset + c, s.mul(&Scalar::from_fe(a.clone())))));
                } else {
                    out.push((b.offset + g.others[k - np], v.mul(&tr1)));
                }
            }
            start += g.len();
        }
        collect(field, out)
    }

    /// Structure-complex coordinates to sheaf coordinates (over `K`).
    pub fn from_ambient(&self, p: usize, x: &[(usize, Scalar)]) -> SparseVec {
        let Some((r, ga)) = &self.ga else { return x.to_vec() };
        let field = self.field();
        let inv_r = Scalar::t_pow(field, -r);
        let inv_r1 = Scalar::t_pow(field, -r - 1);
        let mut out = Vec::new();
        let mut start = 0;
        for (b, g) in self.ambient.blocks[p].iter().zip(&ga[p]) {
            let mut local: BTreeMap<usize, Scalar> = x
                .iter()
                .filter(|(i, _)| *i >= b.offset && *i < b.offset + b.len())
                .map(|(i, v)| (i - b.offset, v.clone()))
                .collect();
            for (j, (&pc, vec)) in g.pivots.iter().zip(&g.vecs).enumerate() {
                let a = local.get(&pc).cloned().unwrap_or_else(|| Scalar::zero(field));
                if a.is_zero() {
                    continue;
                }
                for (c, e) in vec {
                    let cur = local.entry(*c).or_insert_with(|| Scalar::zero(field));
                    *cur = cur.sub(&a.mul(&Scalar::from_fe(e.clone())));
                }
                out.push((start + j, a.mul(&inv_r)));
            }
            for (k, c) in g.others.iter().enumerate() {
                if let Some(v) = local.get(c) {
                    if !v.is_zero() {
                        out.push((start + g.pivots.len() + k, v.mul(&inv_r1)));
                    }
                }
            }
            start += g.len();
        }
        collect(field, out)
    }
}

/// Model data reused across windows and sheaves.
pub struct CechEngine {
    model: ProjModel,
    sigma: BTreeMap<Vec<usize>, Arc<SigmaData>>,
    ga_checked: bool,
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Monomials with the given degree in each variable group (variable 0, `t`, excluded).
pub(crate) fn monomials_of_degree(nvars: usize, groups: &[Vec<usize>], degs: &[u32]) -> Vec<Monomial> {
    fn compositions(vars: &[usize], total: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<(usize, u16)>>) {
        if vars.len() == 1 {
            let mut v: Vec<(usize, u16)> = cur.iter().enumerate().map(|(i, &e)| (i, e)).collect();
            v.push((cur.len(), total as u16));
            out.push(v);
            return;
        }
        for e in (0..=total).rev() {
            cur.push(e as u16);
            compositions(&vars[1..], total - e, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![vec![0u16; nvars]];
    for (g, vars) in groups.iter().enumerate() {
        let mut comps = Vec::new();
        compositions(vars, degs[g], &mut Vec::new(), &mut comps);
        let mut next = Vec::new();
        for base in &out {
            for c in &comps {
                let mut e = base.clone();
                for (i, x) in c {
                    e[vars[*i]] = *x;
                }
                next.push(e);
            }
        }
        out = next;
    }
    out.into_iter().map(|e| Monomial::from_slice(&e)).collect()
}

fn monomial_poly(field: BaseField, m: &Monomial) -> MultiPoly {
    MultiPoly::term(field.one(), m.clone())
}

impl CechEngine {
    pub fn new(model: &ProjModel) -> Result<Self> {
        Ok(CechEngine { model: model.clone(), sigma: BTreeMap::new(), ga_checked: false })
    }

    pub fn model(&self) -> &ProjModel {
        &self.model
    }

    fn sigma_monomial(&self, sigma: &[usize]) -> Monomial {
        sigma.iter().fold(Monomial::one(self.model.ring().nvars()), |acc, &k| acc.mul(&self.model.cover_monomial(k)))
    }

    fn sigma_data(&mut self, sigma: &[usize], ga_ideal: Option<&Ideal>) -> Result<Arc<SigmaData>> {
        if let Some(d) = self.sigma.get(sigma) {
            if ga_ideal.is_none() || !self.ga_checked {
                return Ok(d.clone());
            }
        }
        let ring = self.model.ring().clone();
        let field = ring.field;
        let m = monomial_poly(field, &self.sigma_monomial(sigma));
        let sat = self.model.ideal().saturate(&m)?;
        let gens = sat.groebner().elements();
        let t_free = gens.iter().all(|g| g.degree_in(0) == 0);
        let special = if t_free {
            sat.groebner().clone()
        } else {
            let with_t = sat.with(&[ring.var(0)]);
            let g0: Vec<MultiPoly> = with_t.groebner().elements().into_iter().filter(|g| g.degree_in(0) == 0).collect();
            GroebnerBasis::compute(field, ring.nvars(), &g0, &crate::ideal::MonomialOrder::Grevlex)
        };
        let mut ga_extra = Vec::new();
        if let Some(j) = ga_ideal {
            let js = j.saturate(&m)?;
            for g in js.groebner().elements() {
                if g.degree_in(0) == 0 && !special.contains(&g) {
                    ga_extra.push(g);
                }
            }
        }
        let d = Arc::new(SigmaData { gb: sat.groebner().clone(), t_free, special, ga_extra, gens });
        self.sigma.insert(sigma.to_vec(), d.clone());
        Ok(d)
    }

    fn block(&mut self, sigma: &[usize], window: Window, offset: usize) -> Result<Block> {
        let data = self.sigma_data(sigma, None)?;
        let degs = vec![window.d * sigma.len() as u32; self.model.groups().len()];
        let nv = self.model.ring().nvars();
        let all = monomials_of_degree(nv, self.model.groups(), &degs);
        let basis: Vec<Monomial> = all.iter().filter(|m| data.special.is_standard(m)).cloned().collect();
        let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let table = if data.t_free {
            HashMap::new()
        } else {
            reduction_table(self.model.field(), self.model.groups(), &data.gens, &all, &index, &degs)?
        };
        Ok(Block { sigma: sigma.to_vec(), offset, basis, index, data, table })
    }

    /// The Čech complex of `𝒪` in a window.
    pub fn structure_complex(&mut self, window: Window) -> Result<StructureComplex> {
        let field = self.model.field();
        let ncov = self.model.cover_len();
        let mut blocks: Vec<Vec<Block>> = Vec::new();
        let mut dims = Vec::new();
        for p in 0..ncov {
            let mut off = 0;
            let mut bp = Vec::new();
            for s in subsets_of_size(ncov, p + 1) {
                let b = self.block(&s, window, off)?;
                off += b.len();
                bp.push(b);
            }
            dims.push(off);
            blocks.push(bp);
        }
        let nv = self.model.ring().nvars();
        let mut d = Vec::new();
        for p in 0..ncov.saturating_sub(1) {
            let mut m = ColMatrix::zero(field, dims[p + 1], dims[p]);
            for b in &blocks[p] {
                for (bi, mono) in b.basis.iter().enumerate() {
                    let mut col: SparseVec = Vec::new();
                    for j in 0..ncov {
                        if b.sigma.contains(&j) {
                            continue;
                        }
                        let mut tau = b.sigma.clone();
                        tau.push(j);
                        tau.sort();
                        let pos = tau.iter().position(|&x| x == j).unwrap();
                        let target = blocks[p + 1].iter().find(|x| x.sigma == tau).unwrap();
                        let mj = self.model.cover_monomial(j).pow(window.d as u16);
                        let f = monomial_poly(field, &mono.mul(&mj));
                        let cs = target.coords(&f)?;
                        let sign = if pos % 2 == 0 { Scalar::one(field) } else { Scalar::int(field, -1) };
                        let shifted: SparseVec = cs.into_iter().map(|(i, v)| (i + target.offset, v)).collect();
                        col = axpy(&col, &sign, &shifted);
                    }
                    m.cols[b.offset + bi] = col;
                }
            }
            d.push(m);
        }
        let _ = nv;
        Ok(StructureComplex { window, field, blocks, dims, d, ring: self.model.ring().clone() })
    }

    /// `√(I + t)`, checking that the charts are normal.
    fn ga_ideal(&mut self) -> Result<Ideal> {
        for c in self.model.charts() {
            c.require_good().map_err(|e| e.in_chart(c.name()))?;
            let n = c.normalization().map_err(|e| e.in_chart(c.name()))?;
            if !n.is_trivial() {
                return Err(GalError::Unsupported(format!(
                    "lattice computation needs normal charts; {} is not normal",
                    c.name()
                )));
            }
        }
        let ring = self.model.ring();
        let ideal = self.model.ideal();
        let t = ring.var(0);
        let t_free = ideal.gens().iter().all(|g| g.degree_in(0) == 0);
        let smooth = self.model.charts().iter().all(|c| c.diagnostics().generic_fiber_smooth == Some(true));
        // a constant family with smooth generic fiber has a reduced special fiber
        let j = if t_free && smooth {
            ideal.with(&[t])
        } else if t_free {
            radical(ideal)?.with(&[t])
        } else {
            radical(&ideal.with(&[t]))?
        };
        Ok(j)
    }

    /// The Čech complex of `sheaf` in a window.
    pub fn complex(&mut self, sheaf: Sheaf, window: Window) -> Result<TruncatedCechComplex> {
        let amb = Arc::new(self.structure_complex(window)?);
        self.complex_on(sheaf, amb)
    }

    /// The Čech complex of `sheaf` inside an already computed structure complex.
    pub fn complex_on(&mut self, sheaf: Sheaf, amb: Arc<StructureComplex>) -> Result<TruncatedCechComplex> {
        let r = match sheaf {
            Sheaf::Structure => {
                return Ok(TruncatedCechComplex { sheaf, d: amb.d.clone(), dims: amb.dims.clone(), ambient: amb, ga: None })
            }
            Sheaf::Ga(r) => r,
        };
        if !self.ga_checked {
            let j = self.ga_ideal()?;
            let keys: Vec<Vec<usize>> = (1..=self.model.cover_len())
                .flat_map(|k| subsets_of_size(self.model.cover_len(), k))
                .collect();
            for s in keys {
                self.sigma.remove(&s);
                self.sigma_data(&s, Some(&j))?;
            }
            self.ga_checked = true;
        }
        let field = amb.field;
        let mut ga: Vec<Vec<GaBlock>> = Vec::new();
        for bp in &amb.blocks {
            let mut row = Vec::new();
            for b in bp {
                let data = self.sigma.get(&b.sigma).unwrap().clone();
                row.push(ga_block(field, b, &data, self.model.groups(), amb.window)?);
            }
            ga.push(row);
        }
        let dims: Vec<usize> = ga.iter().map(|row| row.iter().map(|g| g.len()).sum()).collect();
        let mut c = TruncatedCechComplex { sheaf, ambient: amb.clone(), d: Vec::new(), dims, ga: Some((r, ga)) };
        let mut d = Vec::new();
        for p in 0..amb.d.len() {
            let mut m = ColMatrix::zero(field, c.dims[p + 1], c.dims[p]);
            for j in 0..c.dims[p] {
                let x = c.to_ambient(p, &[(j, Scalar::one(field))]);
                let y = amb.d[p].apply(&x);
                m.cols[j] = c.from_ambient(p + 1, &y);
            }
            d.push(m);
        }
        c.d = d;
        Ok(c)
    }

    /// Inclusion of the window `small` into the larger window `big`, on `C^p` of the structure complexes.
    pub fn window_map(&self, small: &StructureComplex, big: &StructureComplex, p: usize) -> Result<ColMatrix> {
        let field = small.field;
        if big.window.d < small.window.d {
            return Err(GalError::InvalidInput("window map needs a larger target window".into()));
        }
        let diff = (big.window.d - small.window.d) as u16;
        let mut m = ColMatrix::zero(field, big.dims[p], small.dims[p]);
        for (bi, b) in small.blocks[p].iter().enumerate() {
            let ms = self.sigma_monomial(&b.sigma).pow(diff);
            for (k, mono) in b.basis.iter().enumerate() {
                m.cols[b.offset + k] = big.coords(p, bi, &monomial_poly(field, &mono.mul(&ms)))?;
            }
        }
        Ok(m)
    }

    /// Render a cochain of `C^p` as fractions on the chart intersections.
    pub fn format_cochain(&self, c: &StructureComplex, p: usize, x: &[(usize, Scalar)]) -> Vec<String> {
        let mut out = Vec::new();
        for b in &c.blocks[p] {
            let entries: Vec<(usize, &Scalar)> = x
                .iter()
                .filter(|(i, _)| *i >= b.offset && *i < b.offset + b.len())
                .map(|(i, v)| (i - b.offset, v))
                .collect();
            if entries.is_empty() {
                continue;
            }
            let k0 = b.sigma[0];
            let chart = &self.model.charts()[k0];
            let map = self.model.chart_map(k0);
            let mut terms: Vec<String> = Vec::new();
            for (i, v) in entries {
                let mono = monomial_poly(c.field, &b.basis[i]).substitute(&map);
                let ms = chart.ring().fmt(&mono);
                let vs = v.to_string();
                let vs = if vs.contains(['+', '-']) && !vs.starts_with('-') || vs[1..].contains(['+', '-']) {
                    format!("({vs})")
                } else {
                    vs
                };
                terms.push(if ms == "1" { vs } else { format!("{vs}*{ms}") });
            }
            let den_m = self.sigma_monomial(&b.sigma).pow(c.window.d as u16);
            let den = chart.ring().fmt(&monomial_poly(c.field, &den_m).substitute(&map));
            let mut num = terms[0].clone();
            for term in &terms[1..] {
                match term.strip_prefix('-') {
                    Some(rest) => num.push_str(&format!(" - {rest}")),
                    None => num.push_str(&format!(" + {term}")),
                }
            }
            let labels: Vec<String> = b.sigma.iter().map(|&k| chart_label(&self.model, k)).collect();
            let body = if den == "1" { num } else { format!("({num})/({den})") };
            out.push(format!("[{}] {}", labels.join(","), body));
        }
        out
    }
}

/// The Čech complex of `sheaf` on the cover of `model` in a window.
pub fn cech_complex(model: &ProjModel, sheaf: Sheaf, window: Window) -> Result<TruncatedCechComplex> {
    CechEngine::new(model)?.complex(sheaf, window)
}

fn chart_label(model: &ProjModel, k: usize) -> String {
    let vars: Vec<&str> = model.cover_vars(k).iter().map(|&v| model.ring().vars[v].as_str()).collect();
    vars.join("*")
}

/// Coordinates of non-standard monomials by linear algebra over `K` (ideals involving `t`).
fn reduction_table(
    field: BaseField,
    groups: &[Vec<usize>],
    gens: &[MultiPoly],
    all: &[Monomial],
    index: &HashMap<Monomial, usize>,
    degs: &[u32],
) -> Result<HashMap<Monomial, SparseVec>> {
    let nb = index.len();
    // columns: basis monomials 0..nb, then the others
    let others: Vec<Monomial> = all.iter().filter(|m| !index.contains_key(m)).cloned().collect();
    let oidx: HashMap<Monomial, usize> = others.iter().enumerate().map(|(i, m)| (m.clone(), nb + i)).collect();
    let nv = all.first().map(|m| m.nvars()).unwrap_or(1);
    let grading_of = |m: &Monomial| -> Vec<u32> {
        groups.iter().map(|g| g.iter().map(|&v| m.0[v] as u32).sum()).collect()
    };
    let to_row = |p: &MultiPoly| -> SparseVec {
        let mut acc: BTreeMap<usize, Vec<Fe>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let tp = m.0[0] as usize;
            let mut tm = m.clone();
            tm.0[0] = 0;
            let col = index.get(&tm).copied().or_else(|| oidx.get(&tm).copied()).unwrap();
            let v = acc.entry(col).or_default();
            if v.len() <= tp {
                v.resize(tp + 1, field.zero());
            }
            v[tp] = &v[tp] + c;
        }
        acc.into_iter()
            .map(|(i, v)| (i, Scalar::from_upoly(UPoly::from_coeffs(field, v))))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    };
    // pivot rows keyed by their non-basis pivot column
    let mut piv: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for g in gens {
        let Some(lead) = g.terms().next() else { continue };
        let gd = grading_of(lead.0);
        if gd.iter().zip(degs).any(|(a, b)| a > b) {
            continue;
        }
        let rest: Vec<u32> = degs.iter().zip(&gd).map(|(a, b)| a - b).collect();
        for m in monomials_of_degree(nv, groups, &rest) {
            let mut row = to_row(&g.mul(&monomial_poly(field, &m)));
            // reduce by existing pivots
            for (pc, pr) in &piv {
                if let Some(v) = super::linalg::get(&row, *pc).cloned() {
                    row = axpy(&row, &v.neg(), pr);
                }
            }
            let Some((pc, pv)) = row.iter().filter(|(c, _)| *c >= nb).min_by_key(|(c, v)| (v.val(), *c)).cloned() else {
                if row.is_empty() {
                    continue;
                }
                return Err(GalError::NotFlat("special-fiber monomials are dependent on the generic fiber".into()));
            };
            let row = super::linalg::scale(&row, &pv.inv().unwrap());
            for pr in piv.values_mut() {
                if let Some(v) = super::linalg::get(pr, pc).cloned() {
                    *pr = axpy(pr, &v.neg(), &row);
                }
            }
            piv.insert(pc, row);
        }
    }
    if piv.len() != others.len() {
        return Err(GalError::NotFlat("Hilbert functions of the special and generic fibers differ".into()));
    }
    let mut out = HashMap::new();
    for (m, i) in &oidx {
        let row = &piv[i];
        let coords: SparseVec = row.iter().filter(|(c, _)| *c < nb).map(|(c, v)| (*c, v.neg())).collect();
        if coords.iter().any(|(_, v)| !v.is_integral()) {
            return Err(GalError::NotFlat("a degree piece is not free over R".into()));
        }
        out.insert(m.clone(), coords);
    }
    Ok(out)
}

fn ga_block(field: BaseField, b: &Block, data: &SigmaData, groups: &[Vec<usize>], window: Window) -> Result<GaBlock> {
    if data.ga_extra.is_empty() {
        return Ok(GaBlock::trivial(b.len()));
    }
    let degs = vec![window.d * b.sigma.len() as u32; groups.len()];
    let nv = b.basis.first().map(|m| m.nvars()).unwrap_or(1);
    // reduced echelon form over k of the special-fiber images
    let mut rows: BTreeMap<usize, Vec<(usize, Fe)>> = BTreeMap::new();
    for g in &data.ga_extra {
        let lead = g.terms().next().unwrap().0;
        let gd: Vec<u32> = groups.iter().map(|gr| gr.iter().map(|&v| lead.0[v] as u32).sum()).collect();
        if gd.iter().zip(&degs).any(|(a, b)| a > b) {
            continue;
        }
        let rest: Vec<u32> = degs.iter().zip(&gd).map(|(a, b)| a - b).collect();
        for m in monomials_of_degree(nv, groups, &rest) {
            let nf = data.special.reduce(&g.mul(&monomial_poly(field, &m)));
            let mut v: BTreeMap<usize, Fe> = BTreeMap::new();
            for (mono, c) in nf.terms() {
                v.insert(b.index[mono], c.clone());
            }
            for (pc, pr) in &rows {
                if let Some(a) = v.get(pc).cloned() {
                    for (c, e) in pr {
                        let cur = v.entry(*c).or_insert_with(|| field.zero());
                        *cur = &*cur - &(&a * e);
                    }
                }
            }
            v.retain(|_, x| !x.is_zero());
            let Some((&pc, pa)) = v.iter().next() else { continue };
            let inv = pa.inv().unwrap();
            let nr: Vec<(usize, Fe)> = v.iter().map(|(c, x)| (*c, x * &inv)).collect();
            for pr in rows.values_mut() {
                if let Some(k) = pr.iter().position(|(c, _)| *c == pc) {
                    let a = pr[k].1.clone();
                    let mut acc: BTreeMap<usize, Fe> = pr.iter().cloned().collect();
                    for (c, e) in &nr {
                        let cur = acc.entry(*c).or_insert_with(|| field.zero());
                        *cur = &*cur - &(&a * e);
                    }
                    acc.retain(|_, x| !x.is_zero());
                    *pr = acc.into_iter().collect();
                }
            }
            rows.insert(pc, nr);
        }
    }
    let pivots: Vec<usize> = rows.keys().copied().collect();
    let vecs: Vec<Vec<(usize, Fe)>> = rows.into_values().collect();
    let others = (0..b.len()).filter(|c| !pivots.contains(c)).collect();
    Ok(GaBlock { pivots, vecs, others })
}
