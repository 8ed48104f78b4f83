//! Radicals by reduction to dimension zero over a field of rational functions
//! and squarefree parts of eliminants.
//!
//! For a maximal independent set `U` and the remaining variables `X`, the
//! extension of `I` to `k(U)[X]` is zero-dimensional. Adding the squarefree
//! part of the eliminant of every `x ∈ X` gives its radical; contracting back
//! is a saturation by a product `h ∈ k[U]` of leading coefficients, and the
//! rest of the variety is handled by recursing on `I + ⟨h⟩`.

use super::ops::{divide_exact, poly_gcd, GroebnerBasis, Ideal};
use super::order::MonomialOrder;
use super::poly::{MultiPoly, PolyRing};
use crate::error::{GalError, Result};

const DEPTH_CAP: usize = 32;

/// `√I`, presented by its reduced grevlex basis.
pub fn radical(ideal: &Ideal) -> Result<Ideal> {
    if ideal.is_zero() || ideal.is_unit() {
        return Ok(ideal.minimized());
    }
    if ideal.groebner().len() == 1 {
        let f = ideal.groebner().elements().remove(0);
        let ring = ideal.ring();
        return Ok(Ideal::new_unchecked(ring, vec![squarefree_part(ring, &f)?]).minimized());
    }
    Ok(radical_rec(ideal, 0)?.minimized())
}

/// Both directions of the radical contract: `I ⊆ J` and every generator of `J` lies in `√I`.
pub fn verify_radical(ideal: &Ideal, rad: &Ideal) -> bool {
    rad.contains_ideal(ideal) && rad.gens().iter().all(|g| ideal.radical_contains(g))
}

fn check_char(ring: &PolyRing, degree: usize) -> Result<()> {
    let p = ring.field.characteristic();
    if p != 0 && p as usize <= degree {
        return Err(GalError::CharacteristicTooSmall { p, bound: degree });
    }
    Ok(())
}

/// Squarefree part of a single polynomial: `f / gcd(f, ∂f/∂x_1, …)`.
pub fn squarefree_part(ring: &PolyRing, f: &MultiPoly) -> Result<MultiPoly> {
    if f.is_constant() {
        return Ok(if f.is_zero() { f.clone() } else { ring.one() });
    }
    check_char(ring, f.total_degree() as usize)?;
    let mut g = f.clone();
    for i in f.support() {
        g = poly_gcd(ring, &g, &f.derivative(i));
        if g.is_constant() {
            break;
        }
    }
    Ok(divide_exact(f, &g).expect("gcd divides f"))
}

/// Squarefree part of `f` as a polynomial in `x` over the fraction field of the other variables.
fn squarefree_in(ring: &PolyRing, f: &MultiPoly, x: usize) -> Result<MultiPoly> {
    check_char(ring, f.degree_in(x) as usize)?;
    let g = poly_gcd(ring, f, &f.derivative(x));
    Ok(divide_exact(f, &g).expect("gcd divides f"))
}

fn blocks(parts: Vec<Vec<usize>>) -> MonomialOrder {
    MonomialOrder::Blocks(parts.into_iter().filter(|b| !b.is_empty()).collect())
}

/// Product of the leading coefficients (in `k[U]`) of a basis for the order `X ≫ U`.
fn leading_coefficient_product(ideal: &Ideal, xs: &[usize], us: &[usize]) -> Result<(GroebnerBasis, MultiPoly)> {
    let ring = ideal.ring();
    let gb = ideal.groebner_with(&blocks(vec![xs.to_vec(), us.to_vec()]))?;
    let mut h = ring.one();
    for g in gb.elements() {
        let (lm, _) = gb.leading_term(&g).unwrap();
        let mut c = ring.zero();
        for (m, a) in g.terms() {
            if xs.iter().all(|&i| m.0[i] == lm.0[i]) {
                let mut u = m.clone();
                for &i in xs {
                    u.0[i] = 0;
                }
                c.add_term(u, a.clone());
            }
        }
        if !c.is_constant() && !h.is_constant() && divide_exact(&h, &c).is_some() {
            continue;
        }
        if !c.is_constant() {
            h = h.mul(&c);
        }
    }
    Ok((gb, h))
}

fn radical_rec(ideal: &Ideal, depth: usize) -> Result<Ideal> {
    if ideal.is_unit() {
        return Ok(Ideal::unit(ideal.ring()));
    }
    if depth > DEPTH_CAP {
        return Err(GalError::IterationCap { what: "radical", cap: DEPTH_CAP });
    }
    let ring = ideal.ring().clone();
    let n = ring.nvars();
    let us = ideal.independent_set();
    let xs: Vec<usize> = (0..n).filter(|i| !us.contains(i)).collect();

    let mut extra = Vec::new();
    for &x in &xs {
        let others: Vec<usize> = xs.iter().copied().filter(|&y| y != x).collect();
        let gb = ideal.groebner_with(&blocks(vec![others.clone(), vec![x], us.clone()]))?;
        let elim = gb
            .elements()
            .into_iter()
            .filter(|p| p.degree_in(x) > 0 && others.iter().all(|&y| p.degree_in(y) == 0))
            .min_by_key(|p| p.degree_in(x));
        let f = elim.ok_or_else(|| GalError::Unsupported("no eliminant over the independent set".into()))?;
        if f.degree_in(x) > 1 {
            extra.push(squarefree_in(&ring, &f, x)?);
        }
    }
    let j = ideal.with(&extra);
    let (_, h1) = leading_coefficient_product(ideal, &xs, &us)?;
    let (_, h2) = leading_coefficient_product(&j, &xs, &us)?;
    let h = h1.mul(&h2);
    let contracted = j.saturate(&h)?;
    if h.is_constant() {
        return Ok(contracted);
    }
    let rest = radical_rec(&ideal.with(&[h]), depth + 1)?;
    Ok(contracted.intersect(&rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;

    fn ring(vars: &[&str]) -> PolyRing {
        PolyRing::new(BaseField::Rationals, vars)
    }

    #[test]
    fn principal_cases() {
        let r = ring(&["x", "y"]);
        let i = Ideal::parse(&r, &["x^2*y^3"]).unwrap();
        let rad = radical(&i).unwrap();
        assert!(rad.same_as(&Ideal::parse(&r, &["x*y"]).unwrap()));
        let i = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(radical(&i).unwrap().same_as(&Ideal::parse(&r, &["x"]).unwrap()));
    }

    #[test]
    fn embedded_component() {
        let r = ring(&["x", "y"]);
        let i = Ideal::parse(&r, &["x^2", "x*y"]).unwrap();
        let rad = radical(&i).unwrap();
        assert!(rad.same_as(&Ideal::parse(&r, &["x"]).unwrap()));
        assert!(verify_radical(&i, &rad));
    }

    #[test]
    fn positive_dimensional_non_principal() {
        let r = ring(&["t", "x", "y"]);
        let i = Ideal::parse(&r, &["y^2 - x^3", "t", "x^2*y"]).unwrap();
        let rad = radical(&i).unwrap();
        assert!(rad.same_as(&Ideal::parse(&r, &["t", "x", "y"]).unwrap()));
        let i = Ideal::parse(&r, &["(x - t)^2", "(y - 1)^3*(x - t)"]).unwrap();
        let rad = radical(&i).unwrap();
        assert!(rad.same_as(&Ideal::parse(&r, &["x - t"]).unwrap()));
        assert!(verify_radical(&i, &rad));
    }

    #[test]
    fn small_characteristic_is_refused() {
        let r = PolyRing::new(BaseField::prime(3).unwrap(), &["x", "y"]);
        let i = Ideal::parse(&r, &["x^3 - y^3"]).unwrap();
        assert!(matches!(radical(&i), Err(GalError::CharacteristicTooSmall { p: 3, bound: 3 })));
    }
}
