//! Direct exact ranks of the generating families; small degrees only.

use crate::error::Result;
use crate::exactla::sparse::SparseEchelon;
use crate::ncalg::{enumerate_words, span_ideal, span_l2, span_l3, Grading, NcPoly};
use crate::rational::Rational;

use super::DegreeReport;

fn rows(polys: &[NcPoly], cols: &[crate::ncalg::Word]) -> Vec<Vec<(usize, Rational)>> {
    polys
        .iter()
        .map(|p| p.terms().map(|(w, c)| (cols.binary_search(w).expect("degree m word"), c.clone())).collect())
        .collect()
}

fn rank(families: &[&[Vec<(usize, Rational)>]]) -> usize {
    let mut e = SparseEchelon::new();
    for f in families {
        for r in f.iter() {
            e.insert(r);
        }
    }
    e.rank()
}

/// Report at degree `m` by stacking the families of `L2`, `L3` and `<P>`.
/// With `p = None` the ideal is zero.
pub fn naive_report(p: Option<&NcPoly>, g: &Grading, m: u32) -> Result<DegreeReport> {
    let cols = enumerate_words(g, m);
    let l2 = rows(&span_l2(g, m), &cols);
    let l3 = rows(&span_l3(g, m), &cols);
    let ideal = match p {
        Some(p) => rows(&span_ideal(p, g, m)?, &cols),
        None => Vec::new(),
    };
    let dim_l2_plus_ideal = rank(&[&l2, &ideal]);
    let dim_l3_plus_ideal = rank(&[&l3, &ideal]);
    Ok(DegreeReport {
        m,
        dim_l2: rank(&[&l2]),
        dim_l3: rank(&[&l3]),
        dim_ideal: rank(&[&ideal]),
        dim_l2_plus_ideal,
        dim_l3_plus_ideal,
        dim_b2: dim_l2_plus_ideal - dim_l3_plus_ideal,
    })
}
