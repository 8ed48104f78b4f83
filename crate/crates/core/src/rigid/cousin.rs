//! Mittag-Leffler splitting on a circle and Čech vanishing for the two-piece cover of `B¹`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chunk::{sup_valuation, vq_membership, Factor, PolydiscDomain, TateChunk};
use crate::arith::{BaseField, TruncatedSeries, Valuation};
use crate::error::{GalError, Result};

/// `f = plus + minus` with `plus` a power series in `z` and `minus` in `z^{-1}` (no constant term).
#[derive(Clone, Debug)]
pub struct CousinSplit {
    pub plus: TateChunk,
    pub minus: TateChunk,
    /// Sup valuation of `f` on the circle `v(z) = q`.
    pub circle: Valuation,
    /// Sup valuation of `plus` on the disc `v(z) ≥ q`.
    pub plus_valuation: Valuation,
    /// Sup valuation of `minus` on the annulus `0 ≤ v(z) ≤ q`.
    pub minus_valuation: Valuation,
}

impl CousinSplit {
    pub fn bounds_hold(&self) -> bool {
        self.plus_valuation >= self.circle && self.minus_valuation >= self.circle
    }
}

fn disc(q: Rational64) -> PolydiscDomain {
    PolydiscDomain { factors: vec![Factor::Disc(q)] }
}

fn annulus(q: Rational64) -> PolydiscDomain {
    PolydiscDomain { factors: vec![Factor::Annulus(Rational64::zero(), q)] }
}

fn circle(q: Rational64) -> PolydiscDomain {
    PolydiscDomain { factors: vec![Factor::circle(q)] }
}

/// Split a Laurent chunk in one variable on the circle `v(z) = q`.
pub fn cousin_solve(f: &TateChunk, q: Rational64) -> Result<CousinSplit> {
    if f.nvars() != 1 {
        return Err(GalError::InvalidInput("cousin_solve works in one variable".into()));
    }
    if q < Rational64::zero() {
        return Err(GalError::InvalidInput("circle parameter must be non-negative".into()));
    }
    let plus = f.filter(|e| e[0] >= 0);
    let minus = f.filter(|e| e[0] < 0);
    Ok(CousinSplit {
        circle: sup_valuation(f, &circle(q))?,
        plus_valuation: sup_valuation(&plus, &disc(q))?,
        minus_valuation: sup_valuation(&minus, &annulus(q))?,
        plus,
        minus,
    })
}

/// Input cocycles for [`rigid_cech_disc`].
#[derive(Clone, Debug)]
pub enum Cocycles {
    Given(Vec<TateChunk>),
    Random { count: usize, prec: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SplitRecord {
    pub cocycle: TateChunk,
    pub split: CousinSplit,
    /// The input lies in `𝒪(c^{q'})` of the overlap.
    pub admissible: bool,
    /// `plus + minus` re-adds to the input.
    pub readds: bool,
    /// Both cochains lie in `𝒪(c^{q'})` of their pieces.
    pub in_twist: bool,
}

impl SplitRecord {
    pub fn ok(&self) -> bool {
        !self.admissible || (self.readds && self.in_twist && self.split.bounds_hold())
    }
}

#[derive(Clone, Debug)]
pub struct RigidCechReport {
    pub q: Rational64,
    pub twist: Rational64,
    pub seed: Option<u64>,
    pub records: Vec<SplitRecord>,
}

impl RigidCechReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.ok()).count()
    }

    pub fn rejected(&self) -> usize {
        self.records.iter().filter(|r| !r.admissible).count()
    }
}

impl fmt::Display for RigidCechReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cover of B^1 by v(z) >= {q} and 0 <= v(z) <= {q}, twist {}", self.twist, q = self.q)?;
        if let Some(s) = self.seed {
            writeln!(f, "seed {s}")?;
        }
        let shown = self.records.len().min(5);
        for r in &self.records[..shown] {
            writeln!(f, "  {}", r.cocycle)?;
            writeln!(f, "    = ({}) + ({})", r.split.plus, r.split.minus)?;
        }
        if shown < self.records.len() {
            writeln!(f, "  ... {} more", self.records.len() - shown)?;
        }
        write!(
            f,
            "{} cocycles, {} split, {} rejected, {} failures",
            self.records.len(),
            self.records.len() - self.failures() - self.rejected(),
            self.rejected(),
            self.failures()
        )
    }
}

fn ceil(q: Rational64) -> i64 {
    q.ceil().to_integer()
}

/// A random Laurent chunk on the circle `v(z) = q` lying in `𝒪(c^{twist})`.
pub fn random_cocycle(rng: &mut impl Rng, field: BaseField, q: Rational64, twist: Rational64, prec: usize) -> Result<TateChunk> {
    let mut f = TateChunk::zero(field, 1, prec);
    for _ in 0..rng.gen_range(1..6) {
        let j: i32 = rng.gen_range(-6..=6);
        // need v(a) + j q > twist
        let bound = twist - q * Rational64::from_integer(j as i64);
        let lo = (ceil(bound) + if bound.is_integer() { 1 } else { 0 }).max(0) as usize;
        let m = lo + rng.gen_range(0..3);
        if m >= prec {
            continue;
        }
        let coeffs: Vec<_> = (0..prec).map(|i| if i < m { field.zero() } else { field.int(rng.gen_range(-3..4)) }).collect();
        let mut c = TruncatedSeries::from_coeffs(field, coeffs, prec, 1)?;
        if c.is_zero() || c.order() != Some(m) {
            c = c.add(&TruncatedSeries::monomial(field.one(), m, prec, 1));
        }
        f.add_term(vec![j], c)?;
    }
    Ok(f)
}

/// Split 1-cocycles on the overlap of `{v(z) ≥ q}` and `{0 ≤ v(z) ≤ q}` into coboundaries
/// of `𝒪(c^{twist})` cochains, verifying each splitting.
pub fn rigid_cech_disc(field: BaseField, q: Rational64, twist: Rational64, cocycles: Cocycles) -> Result<RigidCechReport> {
    if q < Rational64::zero() {
        return Err(GalError::InvalidInput("circle parameter must be non-negative".into()));
    }
    let (inputs, seed) = match cocycles {
        Cocycles::Given(v) => (v, None),
        Cocycles::Random { count, prec, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = (0..count).map(|_| random_cocycle(&mut rng, field, q, twist, prec)).collect::<Result<Vec<_>>>()?;
            (v, Some(seed))
        }
    };
    let mut records = Vec::new();
    for f in inputs {
        let admissible = vq_membership(&f, &circle(q), twist)?;
        let split = cousin_solve(&f, q)?;
        let readds = split.plus.add(&split.minus).agrees_with(&f);
        let in_twist = vq_membership(&split.plus, &disc(q), twist)? && vq_membership(&split.minus, &annulus(q), twist)?;
        records.push(SplitRecord { cocycle: f, split, admissible, readds, in_twist });
    }
    Ok(RigidCechReport { q, twist, seed, records })
}
