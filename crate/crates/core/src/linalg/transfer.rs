//! Homotopy transfer of a perturbation along a family of contractions.
//!
//! Given contractions `(i_b, p_b, h_b)` of complexes `C_b` and a perturbation
//! `δ` of `⊕ C_b` such that `⊕ d_b + δ` squares to zero, the small parts
//! carry the transferred differential
//!
//! ```text
//! d' = Σ_{j ≥ 0} (-1)^j p δ (h δ)^j i.
//! ```
//!
//! The sign comes from the convention `1 - i p = d h + h d`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::complex::FreeChainComplex;
use super::contraction::Contraction;
use super::matrix::IntMatrix;
use crate::{Error, Result};

/// Sparse block matrix of degree `-1` maps between the blocks' big complexes.
#[derive(Clone, Debug, Default)]
pub struct BlockPerturbation {
    // source block -> target block -> source degree -> matrix
    maps: BTreeMap<usize, BTreeMap<usize, BTreeMap<i64, IntMatrix>>>,
}

impl BlockPerturbation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `m: C_source(degree) -> C_target(degree - 1)` to the perturbation.
    pub fn add(&mut self, source: usize, target: usize, degree: i64, m: IntMatrix) {
        let slot = self.maps.entry(source).or_default().entry(target).or_default();
        match slot.get_mut(&degree) {
            Some(existing) => *existing = existing.add(&m),
            None => {
                slot.insert(degree, m);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps
            .values()
            .flat_map(BTreeMap::values)
            .flat_map(BTreeMap::values)
            .all(IntMatrix::is_zero)
    }

    fn outgoing(&self, source: usize) -> impl Iterator<Item = (usize, &BTreeMap<i64, IntMatrix>)> {
        self.maps
            .get(&source)
            .into_iter()
            .flat_map(|m| m.iter().map(|(t, d)| (*t, d)))
    }

    /// The perturbation as one matrix on `⊕ C_b` in the given degree.
    pub fn assembled(&self, base: &[Contraction], degree: i64) -> IntMatrix {
        let offsets = |d: i64| block_offsets(base.iter().map(|k| k.big().rank(d)));
        self.assembled_with(&offsets(degree), &offsets(degree - 1), degree)
    }

    /// As [`BlockPerturbation::assembled`], with block offsets given directly
    /// (`offsets[b]` is where block `b` starts, the last entry the total).
    pub fn assembled_with(&self, src_off: &[usize], tgt_off: &[usize], degree: i64) -> IntMatrix {
        let mut out = IntMatrix::zeros(*tgt_off.last().unwrap(), *src_off.last().unwrap());
        for (s, targets) in &self.maps {
            for (t, by_degree) in targets {
                if let Some(m) = by_degree.get(&degree) {
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            out[(tgt_off[*t] + i, src_off[*s] + j)] += &m[(i, j)];
                        }
                    }
                }
            }
        }
        out
    }
}

fn block_offsets(ranks: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut offsets = vec![0];
    for r in ranks {
        offsets.push(offsets.last().unwrap() + r);
    }
    offsets
}

fn degree_span(base: &[Contraction]) -> Option<(i64, i64)> {
    let lo = base
        .iter()
        .filter(|k| k.big().total_rank() > 0)
        .map(|k| k.big().lo())
        .min()?;
    let hi = base
        .iter()
        .filter(|k| k.big().total_rank() > 0)
        .map(|k| k.big().hi())
        .max()?;
    Some((lo, hi))
}

/// Transferred complex on `⊕ small_b`, summands ordered as in `base`.
///
/// `level_bound` is the number of series terms allowed; if `(h δ)^level_bound i`
/// is still nonzero the perturbation was not filtration-lowering and
/// [`Error::NonNilpotent`] is returned.
pub fn perturb_transfer(
    base: &[Contraction],
    delta: &BlockPerturbation,
    level_bound: usize,
) -> Result<FreeChainComplex> {
    perturb_transfer_counted(base, delta, level_bound).map(|(c, _)| c)
}

/// As [`perturb_transfer`], also returning the number of nonzero series terms
/// that were accumulated.
pub fn perturb_transfer_counted(
    base: &[Contraction],
    delta: &BlockPerturbation,
    level_bound: usize,
) -> Result<(FreeChainComplex, usize)> {
    let modulus = base.first().and_then(Contraction::modulus);
    if base.iter().any(|k| k.modulus() != modulus) {
        return Err(Error::Internal("contractions over different rings".into()));
    }
    let Some((lo, hi)) = degree_span(base) else {
        return Ok((FreeChainComplex::zero(), 0));
    };
    let small_offsets = |d: i64| block_offsets(base.iter().map(|k| k.small().rank(d)));
    let ranks: Vec<usize> = (lo..=hi).map(|d| *small_offsets(d).last().unwrap()).collect();

    let mut terms = 0usize;
    let mut differentials = Vec::new();
    for d in lo + 1..=hi {
        let src_off = small_offsets(d);
        let tgt_off = small_offsets(d - 1);
        let mut out = IntMatrix::zeros(*tgt_off.last().unwrap(), *src_off.last().unwrap());
        for (b, k) in base.iter().enumerate() {
            let Some(inc) = k.include_ref(d) else { continue };
            for e in 0..inc.cols() {
                let mut current: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
                current.insert(b, inc.column(e));
                let mut sign = BigInt::from(1);
                for j in 0..=level_bound {
                    let next = apply_delta(delta, &current, d, base);
                    if next.is_empty() {
                        break;
                    }
                    if j == level_bound {
                        return Err(Error::NonNilpotent { terms: level_bound });
                    }
                    let mut contributed = false;
                    for (t, w) in &next {
                        if let Some(p) = base[*t].project_ref(d - 1) {
                            for (row, x) in p.mul_vec(w).into_iter().enumerate() {
                                if !x.is_zero() {
                                    out[(tgt_off[*t] + row, src_off[b] + e)] += &sign * x;
                                    contributed = true;
                                }
                            }
                        }
                    }
                    if contributed {
                        terms += 1;
                    }
                    current = next
                        .into_iter()
                        .filter_map(|(t, w)| {
                            let h = base[t].homotopy_ref(d - 1)?;
                            let v = h.mul_vec(&w);
                            (!v.iter().all(Zero::is_zero)).then_some((t, v))
                        })
                        .collect();
                    if current.is_empty() {
                        break;
                    }
                    sign = -sign;
                }
            }
        }
        if let Some(p) = modulus {
            out = out.reduce_mod(&BigInt::from(p));
        }
        differentials.push(out);
    }
    let complex = FreeChainComplex::new_unchecked(lo, ranks, differentials)?;
    // d' ∘ d' = 0 (mod p where applicable)
    for d in lo + 2..=hi {
        let mut comp = complex.differential(d - 1).mul(&complex.differential(d));
        if let Some(p) = modulus {
            comp = comp.reduce_mod(&BigInt::from(p));
        }
        if !comp.is_zero() {
            return Err(Error::InvalidComplex { degree: d - 1 });
        }
    }
    Ok((complex, terms))
}

fn apply_delta(
    delta: &BlockPerturbation,
    current: &BTreeMap<usize, Vec<BigInt>>,
    degree: i64,
    base: &[Contraction],
) -> BTreeMap<usize, Vec<BigInt>> {
    let mut next: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    for (s, v) in current {
        for (t, by_degree) in delta.outgoing(*s) {
            let Some(m) = by_degree.get(&degree) else { continue };
            let w = m.mul_vec(v);
            let slot = next
                .entry(t)
                .or_insert_with(|| vec![BigInt::zero(); base[t].big().rank(degree - 1)]);
            for (a, b) in slot.iter_mut().zip(w) {
                *a += b;
            }
        }
    }
    next.retain(|_, w| !w.iter().all(Zero::is_zero));
    next
}
