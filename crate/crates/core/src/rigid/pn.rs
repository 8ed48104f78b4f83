//! Čech complex of `𝒪(c^q)` on the standard cover of `P^n`, windowed by monomials
//! `T^a` (`Σ a = 0`) and `t`-adic precision, with the explicit contraction of its
//! non-scalar part.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use rand::Rng;

use crate::arith::{BaseField, Scalar, TruncatedSeries, Valuation};
use crate::error::{GalError, Result};
use crate::lattice::linalg::{Echelon, SparseVec};
use crate::lattice::Window;

/// A Čech `p`-cochain: components `c·T^a` on `U_σ`, where `|σ| = p + 1`, `Σ a = 0`
/// and `a_j < 0` only for `j ∈ σ`.
#[derive(Clone)]
pub struct RigidCochain {
    field: BaseField,
    n: usize,
    degree: usize,
    prec: usize,
    comps: BTreeMap<(Vec<usize>, Vec<i32>), TruncatedSeries>,
}

fn negatives(a: &[i32]) -> Vec<usize> {
    (0..a.len()).filter(|&j| a[j] < 0).collect()
}

fn insert_sorted(sigma: &[usize], j: usize) -> (Vec<usize>, usize) {
    let k = sigma.partition_point(|&s| s < j);
    let mut tau = sigma.to_vec();
    tau.insert(k, j);
    (tau, k)
}

fn sign(k: usize) -> bool {
    k % 2 == 1
}

impl RigidCochain {
    pub fn zero(field: BaseField, n: usize, degree: usize, prec: usize) -> Self {
        RigidCochain { field, n, degree, prec, comps: BTreeMap::new() }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<i32>, &TruncatedSeries)> {
        self.comps.iter().map(|((s, a), c)| (s, a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Add `c·T^a` to the component on `U_σ`.
    pub fn add_term(&mut self, sigma: Vec<usize>, a: Vec<i32>, c: TruncatedSeries) -> Result<()> {
        if sigma.len() != self.degree + 1 || sigma.windows(2).any(|w| w[0] >= w[1]) || sigma.iter().any(|&s| s > self.n) {
            return Err(GalError::InvalidInput(format!("{sigma:?} is not a {}-simplex of the cover of P^{}", self.degree, self.n)));
        }
        if a.len() != self.n + 1 || a.iter().map(|&x| x as i64).sum::<i64>() != 0 {
            return Err(GalError::InvalidInput(format!("exponent {a:?} is not a degree-0 monomial in {} variables", self.n + 1)));
        }
        if negatives(&a).iter().any(|j| !sigma.contains(j)) {
            return Err(GalError::InvalidInput(format!("T^{a:?} is not regular on U_{sigma:?}")));
        }
        if c.prec() != self.prec || c.field() != self.field {
            return Err(GalError::InvalidInput("coefficient precision or field mismatch".into()));
        }
        let key = (sigma, a);
        let v = match self.comps.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.comps.insert(key, v);
        }
        Ok(())
    }

    fn push(&mut self, sigma: Vec<usize>, a: Vec<i32>, c: TruncatedSeries, negate: bool) {
        let c = if negate { c.neg() } else { c };
        let key = (sigma, a);
        let v = match self.comps.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.comps.insert(key, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((s, a), c) in &other.comps {
            out.push(s.clone(), a.clone(), c.clone(), false);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((s, a), c) in &other.comps {
            out.push(s.clone(), a.clone(), c.clone(), true);
        }
        out
    }

    /// Components agree to the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.degree == other.degree && self.sub(other).comps.values().all(|c| c.is_zero())
    }

    /// `(dx)_τ = Σ_k (−1)^k x_{τ∖τ_k}`.
    pub fn differential(&self) -> Self {
        let mut out = RigidCochain::zero(self.field, self.n, self.degree + 1, self.prec);
        if self.degree >= self.n {
            return out;
        }
        for ((s, a), c) in &self.comps {
            for j in (0..=self.n).filter(|j| !s.contains(j)) {
                let (tau, k) = insert_sorted(s, j);
                out.push(tau, a.clone(), c.clone(), sign(k));
            }
        }
        out
    }

    /// The part with `a = 0` and the rest.
    pub fn split(&self) -> (Self, Self) {
        let mut scalar = RigidCochain::zero(self.field, self.n, self.degree, self.prec);
        let mut reduced = scalar.clone();
        for (k, c) in &self.comps {
            let dst = if k.1.iter().all(|&x| x == 0) { &mut scalar } else { &mut reduced };
            dst.comps.insert(k.clone(), c.clone());
        }
        (scalar, reduced)
    }

    /// Cone contraction on the non-scalar part: for `a ≠ 0` pick the least `w` with
    /// `a_w ≥ 0` and set `(hx)_σ = (−1)^k x_{σ∪w}`, `k` the position of `w`.
    fn homotopy(&self) -> Option<Self> {
        if self.degree == 0 {
            return None;
        }
        let mut out = RigidCochain::zero(self.field, self.n, self.degree - 1, self.prec);
        for ((s, a), c) in &self.comps {
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            let w = (0..a.len()).find(|&j| a[j] >= 0).unwrap();
            if let Some(k) = s.iter().position(|&j| j == w) {
                let mut tau = s.clone();
                tau.remove(k);
                out.push(tau, a.clone(), c.clone(), sign(k));
            }
        }
        Some(out)
    }

    /// Minimal coefficient valuation, `Infinite` for the zero cochain.
    pub fn valuation(&self) -> Valuation {
        self.comps.values().map(|c| c.valuation()).min().unwrap_or(Valuation::Infinite)
    }

    fn check_window(&self, q: Rational64, window: Window) -> Result<()> {
        if self.prec != window.n as usize {
            return Err(GalError::InvalidInput(format!("cochain precision {} differs from the window precision {}", self.prec, window.n)));
        }
        for ((s, a), c) in &self.comps {
            if a.iter().any(|x| x.unsigned_abs() > window.d) {
                return Err(GalError::InvalidInput(format!("monomial {a:?} on U_{s:?} is outside the window |a_i| <= {}", window.d)));
            }
            if let Valuation::Finite(v) = c.valuation() {
                if v <= q {
                    return Err(GalError::InvalidInput(format!("coefficient on U_{s:?} has valuation {v}, not above {q}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for RigidCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|((s, a), c)| {
                let poly = crate::arith::UPoly::from_coeffs(self.field, c.coeffs().to_vec()).fmt_in("t");
                let mono: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(j, x)| if *x == 1 { format!("T{j}") } else { format!("T{j}^{x}") })
                    .collect();
                let sig: Vec<String> = s.iter().map(|j| j.to_string()).collect();
                if mono.is_empty() {
                    format!("[{}] ({poly})", sig.join(""))
                } else {
                    format!("[{}] ({poly})*{}", sig.join(""), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{} + O(t^{})", parts.join("; "), self.prec)
    }
}

impl fmt::Debug for RigidCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct Contraction {
    pub n: usize,
    pub q: Rational64,
    pub window: Window,
    pub input: RigidCochain,
    pub scalar: RigidCochain,
    pub reduced: RigidCochain,
    /// `h` of the reduced part; absent in degree 0.
    pub h: Option<RigidCochain>,
    /// `dh + hd` applied to the reduced part.
    pub dh_hd: RigidCochain,
    pub identity_holds: bool,
    /// The degree-0 class: the common value of a scalar cocycle.
    pub scalar_class: Option<TruncatedSeries>,
}

impl fmt::Display for Contraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P^{} cover, q = {}, window |a| <= {}, N = {}", self.n, self.q, self.window.d, self.window.n)?;
        writeln!(f, "input (degree {}): {}", self.input.degree, self.input)?;
        writeln!(f, "scalar part: {}", self.scalar)?;
        writeln!(f, "reduced part: {}", self.reduced)?;
        match &self.h {
            Some(h) => writeln!(f, "h: {h}")?,
            None => writeln!(f, "h: 0 (degree 0)")?,
        }
        writeln!(f, "dh + hd = Id on the reduced part: {}", if self.identity_holds { "yes" } else { "NO" })?;
        match &self.scalar_class {
            Some(c) => write!(f, "class in H^0: {}", crate::arith::UPoly::from_coeffs(c.field(), c.coeffs().to_vec()).fmt_in("t")),
            None if self.input.degree == 0 => write!(f, "not a cocycle"),
            None => write!(f, "class 0"),
        }
    }
}

/// Contract `cochain` in the Čech complex of `𝒪(c^q)` on `P^n`, verifying `dh + hd = Id`
/// on its non-scalar part.
pub fn pn_cech_homotopy(n: usize, q: Rational64, window: Window, cochain: &RigidCochain) -> Result<Contraction> {
    if cochain.n != n {
        return Err(GalError::RingMismatch { expected: n + 1, found: cochain.n + 1 });
    }
    cochain.check_window(q, window)?;
    let (scalar, reduced) = cochain.split();
    let h = reduced.homotopy();
    let hd = reduced.differential().homotopy().unwrap();
    let dh_hd = match &h {
        Some(h) => h.differential().add(&hd),
        None => hd,
    };
    let identity_holds = dh_hd.agrees_with(&reduced);
    let scalar_class = if cochain.degree == 0 && scalar.differential().is_zero() && reduced.is_zero() {
        Some(scalar.comps.values().next().cloned().unwrap_or_else(|| TruncatedSeries::zero(cochain.field, cochain.prec, 1)))
    } else {
        None
    };
    Ok(Contraction { n, q, window, input: cochain.clone(), scalar, reduced, h, dh_hd, identity_holds, scalar_class })
}

fn first_allowed(q: Rational64) -> usize {
    (q.floor().to_integer() + 1).max(0) as usize
}

/// A random cochain inside the window with coefficients of valuation above `q`.
pub fn random_cochain(rng: &mut impl Rng, field: BaseField, n: usize, degree: usize, q: Rational64, window: Window) -> Result<RigidCochain> {
    if degree > n {
        return Err(GalError::InvalidInput(format!("P^{n} has no Čech cochains of degree {degree}")));
    }
    let mut x = RigidCochain::zero(field, n, degree, window.n as usize);
    let m0 = first_allowed(q);
    if m0 >= window.n as usize {
        return Ok(x);
    }
    let d = window.d as i32;
    for _ in 0..rng.gen_range(1..5) {
        let mut sigma: Vec<usize> = (0..=n).collect();
        while sigma.len() > degree + 1 {
            sigma.remove(rng.gen_range(0..sigma.len()));
        }
        let mut a = vec![0i32; n + 1];
        if rng.gen_bool(0.8) {
            for _ in 0..50 {
                let cand: Vec<i32> = (0..=n).map(|j| if sigma.contains(&j) { rng.gen_range(-d..=d) } else { rng.gen_range(0..=d) }).collect();
                if cand.iter().sum::<i32>() == 0 {
                    a = cand;
                    break;
                }
            }
        }
        let coeffs = (0..window.n as usize).map(|i| if i < m0 { field.zero() } else { field.int(rng.gen_range(-3..4)) }).collect();
        let c = TruncatedSeries::from_coeffs(field, coeffs, window.n as usize, 1)?;
        if !c.is_zero() {
            x.add_term(sigma, a, c)?;
        }
    }
    Ok(x)
}

/// Dimensions over `k` of the windowed complex's cohomology, computed directly by ranks.
#[derive(Clone, Debug)]
pub struct WindowCohomology {
    pub n: usize,
    pub q: Rational64,
    pub window: Window,
    pub cochain_dims: Vec<usize>,
    pub dims: Vec<usize>,
    /// A basis of `H^0`.
    pub h0: Vec<RigidCochain>,
}

impl fmt::Display for WindowCohomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P^{} with O(c^{}), window |a| <= {}, N = {}", self.n, self.q, self.window.d, self.window.n)?;
        for (i, (c, h)) in self.cochain_dims.iter().zip(&self.dims).enumerate() {
            writeln!(f, "  C^{i}: {c}, H^{i}: {h}")?;
        }
        for b in &self.h0 {
            writeln!(f, "  {b}")?;
        }
        Ok(())
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for j in start..=n {
            cur.push(j);
            go(j + 1, n, size, cur, out);
            cur.pop();
        }
    }
    go(0, n, size, &mut cur, &mut out);
    out
}

fn exponents(n: usize, d: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..=n {
        out = out.into_iter().flat_map(|v| (-d..=d).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|a| a.iter().sum::<i32>() == 0);
    out
}

/// `H^*` of the windowed Čech complex of `𝒪(c^q)` on `P^n` over `k`.
pub fn pn_window_cohomology(field: BaseField, n: usize, q: Rational64, window: Window) -> Result<WindowCohomology> {
    let m0 = first_allowed(q);
    let exps = exponents(n, window.d as i32);
    // k-basis of C^p: (σ, a, m) standing for t^m T^a on U_σ
    let bases: Vec<Vec<(Vec<usize>, Vec<i32>, usize)>> = (0..=n)
        .map(|p| {
            let mut b = Vec::new();
            for s in subsets(n, p + 1) {
                for a in &exps {
                    if negatives(a).iter().all(|j| s.contains(j)) {
                        for m in m0..window.n as usize {
                            b.push((s.clone(), a.clone(), m));
                        }
                    }
                }
            }
            b
        })
        .collect();
    let index: Vec<BTreeMap<&(Vec<usize>, Vec<i32>, usize), usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, k)| (k, i)).collect()).collect();
    let one = Scalar::one(field);
    let mut echelons = Vec::new();
    for p in 0..n {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); bases[p + 1].len()];
        for (col, (s, a, m)) in bases[p].iter().enumerate() {
            for j in (0..=n).filter(|j| !s.contains(j)) {
                let (tau, k) = insert_sorted(s, j);
                let row = index[p + 1][&(tau, a.clone(), *m)];
                rows[row].push((col, if sign(k) { one.neg() } else { one.clone() }));
            }
        }
        echelons.push(Echelon::new(field, rows, bases[p].len()));
    }
    let cochain_dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let dims = (0..=n)
        .map(|p| {
            let out_rank = if p < n { echelons[p].rank() } else { 0 };
            let in_rank = if p > 0 { echelons[p - 1].rank() } else { 0 };
            cochain_dims[p] - out_rank - in_rank
        })
        .collect();
    let kernel = if n > 0 {
        echelons[0].kernel_basis()
    } else {
        (0..cochain_dims[0]).map(|i| vec![(i, one.clone())]).collect()
    };
    let mut h0 = Vec::new();
    for v in kernel {
        let mut x = RigidCochain::zero(field, n, 0, window.n as usize);
        for (i, c) in v {
            let (s, a, m) = &bases[0][i];
            let fe = c.as_constant().ok_or_else(|| GalError::InvalidInput("non-constant kernel entry".into()))?;
            x.push(s.clone(), a.clone(), TruncatedSeries::monomial(fe, *m, window.n as usize, 1), false);
        }
        h0.push(x);
    }
    Ok(WindowCohomology { n, q, window, cochain_dims, dims, h0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn series(c: &[i64], prec: usize) -> TruncatedSeries {
        let f = BaseField::Rationals;
        TruncatedSeries::from_coeffs(f, (0..prec).map(|i| f.int(*c.get(i).unwrap_or(&0))).collect(), prec, 1).unwrap()
    }

    #[test]
    fn constant_zero_cochain() {
        let w = Window::new(2, 6).unwrap();
        let mut x = RigidCochain::zero(BaseField::Rationals, 1, 0, 6);
        for s in [0, 1] {
            x.add_term(vec![s], vec![0, 0], series(&[0, 3], 6)).unwrap();
        }
        let c = pn_cech_homotopy(1, Rational64::from_integer(0), w, &x).unwrap();
        assert!(c.reduced.is_zero() && c.identity_holds);
        assert!(c.scalar_class.unwrap().agrees_with(&series(&[0, 3], 6)));
    }

    #[test]
    fn random_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = Window::new(2, 5).unwrap();
        let q = Rational64::new(1, 2);
        for n in 1..=3 {
            for p in 0..=n {
                for _ in 0..10 {
                    let x = random_cochain(&mut rng, BaseField::Rationals, n, p, q, w).unwrap();
                    assert!(pn_cech_homotopy(n, q, w, &x).unwrap().identity_holds, "{x}");
                }
            }
        }
    }

    #[test]
    fn window_rejections() {
        let w = Window::new(1, 4).unwrap();
        let mut x = RigidCochain::zero(BaseField::Rationals, 1, 1, 4);
        x.add_term(vec![0, 1], vec![2, -2], series(&[0, 1], 4)).unwrap();
        assert!(pn_cech_homotopy(1, Rational64::from_integer(0), w, &x).is_err());
        let mut y = RigidCochain::zero(BaseField::Rationals, 1, 1, 4);
        y.add_term(vec![0, 1], vec![1, -1], series(&[1], 4)).unwrap();
        assert!(pn_cech_homotopy(1, Rational64::from_integer(0), w, &y).is_err());
        let mut z = RigidCochain::zero(BaseField::Rationals, 1, 0, 4);
        assert!(z.add_term(vec![0], vec![1, -1], series(&[1], 4)).is_err());
    }
}
