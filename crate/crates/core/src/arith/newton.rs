//! Newton polygons of univariate polynomials over `K`.

use std::fmt;

use num_rational::Rational64;

use super::field::BaseField;
use super::scalar::{Scalar, Valuation};
use crate::error::{GalError, Result};

/// A univariate polynomial over `K`, coefficient of `z^i` at index `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct KPoly {
    field: BaseField,
    coeffs: Vec<Scalar>,
}

impl KPoly {
    pub fn new(field: BaseField, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        KPoly { field, coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return KPoly::new(self.field, vec![]);
        }
        let mut out = vec![Scalar::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        KPoly::new(self.field, out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Slope of the lower hull edge (the negated root valuation).
    pub slope: Rational64,
    /// Horizontal length, i.e. the number of roots with that valuation.
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Edges with strictly increasing slopes.
    pub segments: Vec<Segment>,
    /// Multiplicity of the root `z = 0` (order of vanishing at 0).
    pub zero_roots: usize,
    pub vertices: Vec<(usize, Rational64)>,
}

impl NewtonPolygon {
    /// Lower convex hull of the points `(i, v_i)`; points with infinite valuation are skipped.
    pub fn from_points(points: &[(usize, Valuation)]) -> Result<Self> {
        let mut pts: Vec<(usize, Rational64)> =
            points.iter().filter_map(|(i, v)| v.finite().map(|q| (*i, q))).collect();
        if pts.is_empty() {
            return Err(GalError::ZeroPolynomial("newton polygon"));
        }
        pts.sort_by_key(|p| p.0);
        let zero_roots = pts[0].0;
        let mut hull: Vec<(usize, Rational64)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // drop b if it lies on or above the segment a-p
                let lhs = (b.1 - a.1) * Rational64::from_integer((p.0 - a.0) as i64);
                let rhs = (p.1 - a.1) * Rational64::from_integer((b.0 - a.0) as i64);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                Segment { slope: (w[1].1 - w[0].1) / Rational64::from_integer(len as i64), length: len }
            })
            .collect();
        Ok(NewtonPolygon { segments, zero_roots, vertices: hull })
    }

    /// Root valuations with multiplicities, largest first (`+∞` for the roots at 0).
    pub fn root_valuations(&self) -> Vec<(Valuation, usize)> {
        let mut out = Vec::new();
        if self.zero_roots > 0 {
            out.push((Valuation::Infinite, self.zero_roots));
        }
        for s in &self.segments {
            out.push((Valuation::Finite(-s.slope), s.length));
        }
        out
    }

    pub fn degree_span(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.root_valuations().iter().map(|(v, m)| format!("({v}, {m})")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Newton polygon of a nonzero polynomial over `K`.
pub fn newton_polygon(f: &KPoly) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(GalError::ZeroPolynomial("newton polygon"));
    }
    let pts: Vec<(usize, Valuation)> =
        f.coeffs().iter().enumerate().map(|(i, c)| (i, c.valuation())).collect();
    NewtonPolygon::from_points(&pts)
}
