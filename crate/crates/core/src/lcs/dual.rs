//! Annihilators of `L2 + I` and `L3 + I` in `A[m]/I[m]` over `F_p`.
//!
//! With `S` the standard words, `L2 + I` is spanned mod `I` by `[l, z]` for
//! letters `l` and `z` in `S`, because `[ab, c] = [a, bc] + [b, ca]` and
//! `[A, I] ⊂ I`. Likewise `L3 + I` is spanned by `[w, [l, z]]` for `w, z`
//! in `S`. These reduced families are far smaller than the full ones.

use rayon::prelude::*;

use super::tower::{Level, Tower};
use crate::exactla::modp::{Annihilator, Field, ModVec};
use crate::ncalg::{Letter, Word};

/// Canonical annihilator of one block: rows in block-local standard
/// coordinates, their pivot columns, and the row values on every word.
#[derive(Debug, Clone)]
pub struct BlockDual {
    pub pivots: Vec<usize>,
    /// `values[i][w]` is functional `i` on the `w`-th word of the block.
    pub values: Vec<Vec<u64>>,
}

#[derive(Debug, Clone)]
pub struct ModDegree {
    pub l2: Vec<BlockDual>,
    pub l3: Vec<BlockDual>,
}

impl ModDegree {
    pub fn signature(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let piv = |v: &[BlockDual]| v.iter().map(|b| b.pivots.clone()).collect();
        (piv(&self.l2), piv(&self.l3))
    }

    pub fn codims(&self) -> (usize, usize) {
        let c = |v: &[BlockDual]| v.iter().map(|b| b.pivots.len()).sum();
        (c(&self.l2), c(&self.l3))
    }
}

fn letters(t: &Tower) -> [(Letter, Word, u32); 2] {
    [(Letter::X, Word::x(), t.g.s), (Letter::Y, Word::y(), t.g.r)]
}

/// `sum_i sign_i NF(words_i)` at level `m`, split into (block, local vector).
fn combine(f: Field, lvl: &Level, parts: &[(Word, bool)]) -> Option<(u32, ModVec)> {
    let mut acc: Vec<(u32, u64)> = Vec::new();
    for (w, positive) in parts {
        for &(j, a) in lvl.nf_of(w) {
            acc.push((j, if *positive { a } else { f.neg(a) }));
        }
    }
    acc.sort_unstable_by_key(|e| e.0);
    let mut out: ModVec = Vec::with_capacity(acc.len());
    for (j, a) in acc {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 = f.add(last.1, a),
            _ => out.push((j, a)),
        }
    }
    out.retain(|e| e.1 != 0);
    let first = out.first()?.0;
    let b = lvl.std_block[first as usize];
    debug_assert!(out.iter().all(|e| lvl.std_block[e.0 as usize] == b));
    Some((b, out.into_iter().map(|(j, a)| (lvl.std_local[j as usize], a)).collect()))
}

fn l2_generators(t: &Tower, m: u32) -> Vec<(u32, ModVec)> {
    let lvl = t.level(m);
    let mut out = Vec::new();
    for (_, lw, w) in letters(t) {
        if m <= w {
            continue;
        }
        for z in &t.level(m - w).std {
            if let Some(v) = combine(t.field, lvl, &[(lw.concat(z), true), (z.concat(&lw), false)]) {
                out.push(v);
            }
        }
    }
    out
}

fn l3_generators(t: &Tower, m: u32) -> Vec<(u32, ModVec)> {
    let lvl = t.level(m);
    let mut out = Vec::new();
    for a in 1..m {
        for w in &t.level(a).std {
            for (_, lw, wl) in letters(t) {
                if a + wl >= m {
                    continue;
                }
                for z in &t.level(m - a - wl).std {
                    let lz = lw.concat(z);
                    let zl = z.concat(&lw);
                    let parts = [(w.concat(&lz), true), (w.concat(&zl), false), (lz.concat(w), false), (zl.concat(w), true)];
                    if let Some(v) = combine(t.field, lvl, &parts) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

fn block_duals(t: &Tower, m: u32, gens: Vec<(u32, ModVec)>) -> Vec<BlockDual> {
    let lvl = t.level(m);
    let nb = lvl.block_keys.len();
    let mut per_block: Vec<Vec<ModVec>> = vec![Vec::new(); nb];
    for (b, v) in gens {
        per_block[b as usize].push(v);
    }
    // words of each block, in level order
    let mut block_words: Vec<Vec<u32>> = vec![Vec::new(); nb];
    for (i, &b) in lvl.word_block.iter().enumerate() {
        block_words[b as usize].push(i as u32);
    }
    per_block
        .into_par_iter()
        .enumerate()
        .map(|(b, gens)| {
            let f = t.field;
            let mut ann = Annihilator::new(f, lvl.block_std_len[b]);
            for v in &gens {
                if ann.codim() == 0 {
                    break;
                }
                ann.insert(v);
            }
            let (rows, pivots) = ann.canonical();
            let values = rows
                .iter()
                .map(|row| {
                    block_words[b]
                        .iter()
                        .map(|&wi| {
                            lvl.nf[wi as usize].iter().fold(0, |acc, &(j, a)| {
                                f.add(acc, f.mul(row[lvl.std_local[j as usize] as usize], a))
                            })
                        })
                        .collect()
                })
                .collect();
            BlockDual { pivots, values }
        })
        .collect()
}

pub fn mod_degree(t: &Tower, m: u32) -> ModDegree {
    let (l2, l3) = rayon::join(|| block_duals(t, m, l2_generators(t, m)), || block_duals(t, m, l3_generators(t, m)));
    ModDegree { l2, l3 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Grading;

    #[test]
    fn free_b2_dimensions() {
        let f = Field::new(2305843009213693951);
        let mut t = Tower::new(f, Grading::standard(), None, true);
        t.extend_to(8);
        for m in 2..=8 {
            let (k2, k3) = mod_degree(&t, m).codims();
            assert_eq!(k3 - k2, m as usize - 1, "m = {m}");
        }
    }
}
