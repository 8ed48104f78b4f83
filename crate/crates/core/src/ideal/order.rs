//! Monomial orders.

use std::cmp::Ordering;

use smallvec::SmallVec;

use super::poly::Monomial;
use crate::error::{GalError, Result};

/// A term order on exponent vectors. Variable 0 is the largest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Product order: blocks compared in sequence, grevlex inside each block.
    /// The blocks must partition the variables.
    Blocks(Vec<Vec<usize>>),
    /// Weight vector (non-negative) refined by grevlex.
    Weighted(Vec<u32>),
}

impl MonomialOrder {
    /// Block order that eliminates `drop` (the dropped variables form the first block).
    pub fn elimination(nvars: usize, drop: &[usize]) -> Self {
        let rest: Vec<usize> = (0..nvars).filter(|i| !drop.contains(i)).collect();
        let mut d = drop.to_vec();
        d.sort_unstable();
        d.dedup();
        if d.is_empty() {
            return MonomialOrder::Grevlex;
        }
        MonomialOrder::Blocks(vec![d, rest])
    }

    pub fn validate(&self, nvars: usize) -> Result<()> {
        match self {
            MonomialOrder::Blocks(blocks) => {
                let mut seen = vec![false; nvars];
                for &i in blocks.iter().flatten() {
                    if i >= nvars || seen[i] {
                        return Err(GalError::InvalidInput("elimination blocks must partition the variables".into()));
                    }
                    seen[i] = true;
                }
                if seen.iter().any(|s| !s) {
                    return Err(GalError::InvalidInput("elimination blocks must partition the variables".into()));
                }
                Ok(())
            }
            MonomialOrder::Weighted(w) if w.len() != nvars => {
                Err(GalError::InvalidInput(format!("weight vector has length {}, ring has {nvars} variables", w.len())))
            }
            _ => Ok(()),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Grevlex => grevlex(&a.0, &b.0),
            MonomialOrder::Blocks(blocks) => {
                for blk in blocks {
                    let ea: SmallVec<[u16; 8]> = blk.iter().map(|&i| a.0[i]).collect();
                    let eb: SmallVec<[u16; 8]> = blk.iter().map(|&i| b.0[i]).collect();
                    let o = grevlex(&ea, &eb);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Weighted(w) => {
                let wa: u64 = a.0.iter().zip(w).map(|(&e, &x)| e as u64 * x as u64).sum();
                let wb: u64 = b.0.iter().zip(w).map(|(&e, &x)| e as u64 * x as u64).sum();
                wa.cmp(&wb).then_with(|| grevlex(&a.0, &b.0))
            }
        }
    }
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_slice(e)
    }

    #[test]
    fn standard_orders() {
        // x^2 vs x*y vs y^3
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 1]), &m(&[0, 3])), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[1, 1]), &m(&[0, 3])), Ordering::Less);
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        let el = MonomialOrder::elimination(3, &[2]);
        assert_eq!(el.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        let w = MonomialOrder::Weighted(vec![3, 1]);
        assert_eq!(w.cmp(&m(&[1, 0]), &m(&[0, 2])), Ordering::Greater);
    }
}
