//! Incremental row echelon form over the rationals with sparse rows.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::rational::Rational;

/// Sparse rational vector as sorted `(column, value)` pairs with no zeros.
pub type SparseRow = Vec<(usize, Rational)>;

/// Rows in echelon form keyed by leading column, each normalized to a
/// leading coefficient of 1. Not fully reduced: reduction walks the
/// columns left to right.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon {
    pivots: HashMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Residue of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseRow {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, x) in v {
            if !x.is_zero() {
                *acc.entry(*c).or_insert_with(Rational::zero) += x;
            }
        }
        acc.retain(|_, x| !x.is_zero());
        let mut from = 0usize;
        loop {
            let next = acc
                .range(from..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, f)) = next else { break };
            for (j, y) in &self.pivots[&c] {
                let e = acc.entry(*j).or_insert_with(Rational::zero);
                *e -= &f * y;
                if e.is_zero() {
                    acc.remove(j);
                }
            }
            from = c + 1;
        }
        acc.into_iter().collect()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> bool {
        let mut r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].0;
        let inv = r[0].1.recip();
        for (_, x) in r.iter_mut() {
            *x *= &inv;
        }
        self.pivots.insert(lead, r);
        true
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Exact rank of a family of sparse rows.
pub fn rank_of<'a>(rows: impl IntoIterator<Item = &'a SparseRow>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn rank_and_membership() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(&[(0, int(1)), (2, int(1))]));
        assert!(e.insert(&[(1, int(2)), (2, int(-1))]));
        assert!(!e.insert(&[(0, int(2)), (1, int(2)), (2, int(1))]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[(0, frac(1, 2)), (2, frac(1, 2))]));
        assert!(!e.contains(&[(2, int(1))]));
        assert!(e.contains(&[]));
    }

    #[test]
    fn duplicate_columns_are_summed() {
        let e = SparseEchelon::new();
        assert!(e.reduce(&[(3, int(1)), (3, int(-1))]).is_empty());
    }
}
