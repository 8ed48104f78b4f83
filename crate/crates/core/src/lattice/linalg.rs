//! Sparse linear algebra over the local PID `R = k[t]_(t)` and its fraction field.
//!
//! Elimination always pivots on an entry of minimal `t`-adic valuation in the
//! remaining submatrix, so the pivot divides everything below it in `R`. One
//! forward pass then yields the Smith invariants (the pivot valuations) and a
//! kernel basis with coefficients in `R`.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{BaseField, Scalar};

/// Sorted `(index, nonzero value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + c·b`.
pub fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.mul(&b[j].1)));
            j += 1;
        } else {
            let v = a[i].1.add(&c.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(a: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v.mul(c))).collect()
}

pub fn get(a: &[(usize, Scalar)], i: usize) -> Option<&Scalar> {
    a.binary_search_by_key(&i, |e| e.0).ok().map(|k| &a[k].1)
}

/// Build a sparse vector from unordered entries, summing duplicates.
pub fn collect(field: BaseField, entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, v) in entries {
        let e = m.entry(i).or_insert_with(|| Scalar::zero(field));
        *e = e.add(&v);
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn dot(a: &[(usize, Scalar)], b: &[(usize, Scalar)], field: BaseField) -> Scalar {
    let (mut i, mut j) = (0, 0);
    let mut acc = Scalar::zero(field);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc.add(&a[i].1.mul(&b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// A matrix stored by columns.
#[derive(Clone, Debug)]
pub struct ColMatrix {
    pub field: BaseField,
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

impl ColMatrix {
    pub fn zero(field: BaseField, rows: usize, ncols: usize) -> Self {
        ColMatrix { field, rows, cols: vec![Vec::new(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// `M · x`.
    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in x {
            acc = axpy(&acc, c, &self.cols[*j]);
        }
        acc
    }

    /// `self · other`.
    pub fn compose(&self, other: &ColMatrix) -> ColMatrix {
        ColMatrix { field: self.field, rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn transpose_rows(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                rows[*i].push((j, v.clone()));
            }
        }
        rows
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(self.field); self.cols.len()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                d[*i][j] = v.clone();
            }
        }
        d
    }

    pub fn from_dense(field: BaseField, d: &[Vec<Scalar>], ncols: usize) -> Self {
        let mut m = ColMatrix::zero(field, d.len(), ncols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.cols[j].push((i, v.clone()));
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct Pivot {
    pub col: usize,
    pub value: Scalar,
    /// The pivot row at the time it was chosen, including the pivot entry.
    pub row: SparseVec,
}

/// Forward elimination with minimal-valuation pivoting.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub field: BaseField,
    pub ncols: usize,
    pub pivots: Vec<Pivot>,
    /// Columns without a pivot, increasing.
    pub free: Vec<usize>,
}

fn min_val(row: &[(usize, Scalar)]) -> i64 {
    row.iter().map(|(_, v)| v.val().unwrap()).min().unwrap_or(i64::MAX)
}

impl Echelon {
    pub fn new(field: BaseField, rows: Vec<SparseVec>, ncols: usize) -> Self {
        let mut active: Vec<Option<SparseVec>> = rows.into_iter().map(|r| (!r.is_empty()).then_some(r)).collect();
        let mut vals: Vec<i64> = active.iter().map(|r| r.as_ref().map(|r| min_val(r)).unwrap_or(i64::MAX)).collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
        for (i, r) in active.iter().enumerate() {
            if let Some(r) = r {
                for (c, _) in r {
                    col_rows[*c].insert(i);
                }
            }
        }
        let mut pivots = Vec::new();
        loop {
            // row of minimal valuation, shortest first
            let mut best: Option<(i64, usize, usize)> = None;
            for (i, r) in active.iter().enumerate() {
                if let Some(r) = r {
                    let key = (vals[i], r.len(), i);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
            let Some((v, _, pr)) = best else { break };
            let row = active[pr].take().unwrap();
            for (c, _) in &row {
                col_rows[*c].remove(&pr);
            }
            let (pc, pv) = row
                .iter()
                .filter(|(_, x)| x.val().unwrap() == v)
                .min_by_key(|(c, _)| (col_rows[*c].len(), *c))
                .map(|(c, x)| (*c, x.clone()))
                .unwrap();
            let inv = pv.inv().unwrap();
            let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
            for i in targets {
                let r = active[i].take().unwrap();
                let f = get(&r, pc).unwrap().mul(&inv).neg();
                let nr = axpy(&r, &f, &row);
                for (c, _) in &r {
                    col_rows[*c].remove(&i);
                }
                for (c, _) in &nr {
                    col_rows[*c].insert(i);
                }
                vals[i] = min_val(&nr);
                if !nr.is_empty() {
                    active[i] = Some(nr);
                }
            }
            pivots.push(Pivot { col: pc, value: pv, row });
        }
        let pivcols: BTreeSet<usize> = pivots.iter().map(|p| p.col).collect();
        let free = (0..ncols).filter(|c| !pivcols.contains(c)).collect();
        Echelon { field, ncols, pivots, free }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Valuations of the Smith invariants.
    pub fn invariant_valuations(&self) -> Vec<i64> {
        self.pivots.iter().map(|p| p.value.val().unwrap()).collect()
    }

    /// The kernel vector with the given values on free columns.
    pub fn kernel_vector(&self, free_values: &[(usize, Scalar)]) -> SparseVec {
        let mut x: BTreeMap<usize, Scalar> = free_values.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        for p in self.pivots.iter().rev() {
            let mut acc = Scalar::zero(self.field);
            for (c, a) in &p.row {
                if *c != p.col {
                    if let Some(xv) = x.get(c) {
                        acc = acc.add(&a.mul(xv));
                    }
                }
            }
            if !acc.is_zero() {
                x.insert(p.col, acc.neg().div(&p.value).unwrap());
            }
        }
        x.into_iter().collect()
    }

    /// Kernel basis, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let one = Scalar::one(self.field);
        self.free.iter().map(|&f| self.kernel_vector(&[(f, one.clone())])).collect()
    }

    /// Square, full rank, and all invariants units.
    pub fn is_unimodular(&self, nrows: usize) -> bool {
        nrows == self.ncols && self.rank() == self.ncols && self.invariant_valuations().iter().all(|&v| v == 0)
    }
}

/// Characteristic polynomial `det(T·I − M)` by Berkowitz's division-free algorithm.
/// Coefficients are returned from the constant term upwards.
pub fn charpoly(field: BaseField, m: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = m.len();
    let zero = Scalar::zero(field);
    let one = Scalar::one(field);
    // c holds the coefficients of the charpoly of the leading r×r block, highest degree first
    let mut c: Vec<Scalar> = vec![one.clone()];
    for r in 0..n {
        // column vector below the diagonal and row to the left
        let a = &m[r][r];
        let row: Vec<Scalar> = (0..r).map(|j| m[r][j].clone()).collect();
        let col: Vec<Scalar> = (0..r).map(|i| m[i][r].clone()).collect();
        // Toeplitz entries: 1, -a, -R·C, -R·A·C, -R·A²·C, ...
        let mut t = vec![one.clone(), a.neg()];
        let mut v = col.clone();
        for _ in 0..r {
            let rv = row.iter().zip(&v).fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y)));
            t.push(rv.neg());
            v = (0..r).map(|i| (0..r).fold(zero.clone(), |acc, j| acc.add(&m[i][j].mul(&v[j])))).collect();
        }
        let mut next = vec![zero.clone(); r + 2];
        for (i, ni) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *ni = ni.add(&t[i - j].mul(cj));
                }
            }
        }
        c = next;
    }
    c.reverse();
    c
}
