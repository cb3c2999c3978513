//! Finite complexes of direct sums of twists `O(k)` with monomial
//! differentials.
//!
//! A morphism `O(a) -> O(b)` is a finite formal sum `Σ c_u x^u` over lattice
//! points `u ∈ (b - a)P`; on the `F`-component it sends the basis element at
//! multidegree `m` to the one at `m + u`. Composition multiplies
//! coefficients and adds exponents, so `d ∘ d = 0` can be checked as an
//! identity of formal sums.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::FreeChainComplex;
use crate::polytope::{add, LatticePolytope, Point};
use crate::{Error, Result};

/// `Σ c_u x^u` with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialEntry {
    terms: BTreeMap<Point, BigInt>,
}

impl MonomialEntry {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: impl Into<BigInt>, u: Point) -> Self {
        let mut e = Self::zero();
        e.add_term(c.into(), u);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BigInt, Point)>) -> Self {
        let mut e = Self::zero();
        for (c, u) in terms {
            e.add_term(c, u);
        }
        e
    }

    pub fn add_term(&mut self, c: BigInt, u: Point) {
        let slot = self.terms.entry(u).or_insert_with(BigInt::zero);
        *slot += c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(u, c_u)` in ascending `u`.
    pub fn terms(&self) -> impl Iterator<Item = (&Point, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MonomialEntry) -> MonomialEntry {
        let mut out = self.clone();
        for (u, c) in &other.terms {
            out.add_term(c.clone(), u.clone());
        }
        out
    }

    /// The composite "first `other`, then `self`".
    pub fn compose(&self, other: &MonomialEntry) -> MonomialEntry {
        let mut out = MonomialEntry::zero();
        for (u, c) in &self.terms {
            for (v, e) in &other.terms {
                out.add_term(c * e, add(u, v));
            }
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> MonomialEntry {
        MonomialEntry::from_terms(self.terms.iter().map(|(u, c)| (c * s, u.clone())))
    }

    pub fn neg(&self) -> MonomialEntry {
        self.scale(&-BigInt::one())
    }
}

/// A matrix of monomial entries.
pub type MonomialMatrix = Vec<Vec<MonomialEntry>>;

fn zero_matrix(rows: usize, cols: usize) -> MonomialMatrix {
    vec![vec![MonomialEntry::zero(); cols]; rows]
}

/// `a · b` as formal sums; `b` is applied first.
fn compose(a: &MonomialMatrix, b: &MonomialMatrix, inner: usize, cols: usize) -> MonomialMatrix {
    let mut out = zero_matrix(a.len(), cols);
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            for l in 0..inner {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    *slot = slot.add(&a[i][l].compose(&b[l][j]));
                }
            }
        }
    }
    out
}

fn is_zero_matrix(m: &MonomialMatrix) -> bool {
    m.iter().flatten().all(MonomialEntry::is_zero)
}

/// `Y_lo <- Y_{lo+1} <- ... <- Y_hi` with `Y_t = ⊕ O(levels[t])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistComplex {
    lo: i64,
    levels: Vec<Vec<i64>>,
    // differentials[i]: level lo+i+1 -> lo+i, rows = summands of the target
    differentials: Vec<MonomialMatrix>,
}

impl TwistComplex {
    /// Checks matrix shapes only; see [`TwistComplex::validate`] for the rest.
    /// Empty levels at either end are trimmed.
    pub fn new(lo: i64, levels: Vec<Vec<i64>>, differentials: Vec<MonomialMatrix>) -> Result<Self> {
        if levels.len() > 1 && differentials.len() + 1 != levels.len() || levels.len() <= 1 && !differentials.is_empty()
        {
            return Err(Error::MalformedComplex(format!(
                "{} levels need {} differentials, got {}",
                levels.len(),
                levels.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            let (rows, cols) = (levels[i].len(), levels[i + 1].len());
            let level = lo + i as i64 + 1;
            if d.len() != rows || d.iter().any(|r| r.len() != cols) {
                return Err(Error::MalformedComplex(format!(
                    "differential from level {level} must be {rows}×{cols}"
                )));
            }
        }
        let mut c = TwistComplex {
            lo,
            levels,
            differentials,
        };
        c.trim();
        Ok(c)
    }

    pub fn zero() -> Self {
        TwistComplex {
            lo: 0,
            levels: Vec::new(),
            differentials: Vec::new(),
        }
    }

    /// `O(k)` in level 0.
    pub fn line_bundle(k: i64) -> Self {
        TwistComplex {
            lo: 0,
            levels: vec![vec![k]],
            differentials: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.levels.last().is_some_and(Vec::is_empty) {
            self.levels.pop();
            self.differentials.pop();
        }
        while self.levels.first().is_some_and(Vec::is_empty) {
            self.levels.remove(0);
            if !self.differentials.is_empty() {
                self.differentials.remove(0);
            }
            self.lo += 1;
        }
        if self.levels.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.levels.len() as i64 - 1
    }

    /// Twists of the summands at level `t`.
    pub fn level(&self, t: i64) -> &[i64] {
        if t < self.lo || t > self.hi() {
            return &[];
        }
        &self.levels[(t - self.lo) as usize]
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &[i64])> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, l)| (self.lo + i as i64, l.as_slice()))
    }

    /// The differential from level `t` to `t - 1`.
    pub fn differential(&self, t: i64) -> Option<&MonomialMatrix> {
        if t <= self.lo || t > self.hi() {
            return None;
        }
        Some(&self.differentials[(t - self.lo - 1) as usize])
    }

    fn differential_or_zero(&self, t: i64) -> MonomialMatrix {
        self.differential(t)
            .cloned()
            .unwrap_or_else(|| zero_matrix(self.level(t - 1).len(), self.level(t).len()))
    }

    /// Checks every monomial against the facet inequalities of its dilate and
    /// `d ∘ d = 0` as formal sums.
    pub fn validate(&self, p: &LatticePolytope) -> Result<()> {
        for t in self.lo + 1..=self.hi() {
            let d = self.differential(t).expect("inside the range");
            check_entries(p, d, self.level(t), self.level(t - 1), t)?;
        }
        for t in self.lo + 2..=self.hi() {
            let (a, b) = (self.differential(t - 1).unwrap(), self.differential(t).unwrap());
            let dd = compose(a, b, self.level(t - 1).len(), self.level(t).len());
            if !is_zero_matrix(&dd) {
                return Err(Error::NonSquareZero { level: t - 1 });
            }
        }
        Ok(())
    }

    /// `Y(k)`: all twists raised by `k`, entries unchanged.
    pub fn twist(&self, k: i64) -> TwistComplex {
        TwistComplex {
            lo: self.lo,
            levels: self.levels.iter().map(|l| l.iter().map(|a| a + k).collect()).collect(),
            differentials: self.differentials.clone(),
        }
    }

    /// `Y[j]`: levels shifted up by `j`, differentials multiplied by `(-1)^j`.
    pub fn suspend(&self, j: i64) -> TwistComplex {
        let sign = if j.rem_euclid(2) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let mut out = self.clone();
        if !out.is_zero() {
            out.lo += j;
        }
        for e in out.differentials.iter_mut().flatten().flatten() {
            *e = e.scale(&sign);
        }
        out
    }

    pub fn direct_sum(&self, other: &TwistComplex) -> TwistComplex {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let levels = (lo..=hi).map(|t| [self.level(t), other.level(t)].concat()).collect();
        let differentials = (lo + 1..=hi)
            .map(|t| {
                block_diagonal(
                    &self.differential_or_zero(t),
                    self.level(t).len(),
                    &other.differential_or_zero(t),
                    other.level(t).len(),
                )
            })
            .collect();
        TwistComplex::new(lo, levels, differentials).expect("block shapes agree")
    }

    /// `O(k) ⊗ C`: `rank C_t` copies of `O(k)` in level `t`, the integer
    /// differential entries as coefficients of `x^0`.
    pub fn bundle_tensor(k: i64, c: &FreeChainComplex, n: usize) -> TwistComplex {
        if c.total_rank() == 0 {
            return TwistComplex::zero();
        }
        let levels = c.degrees().map(|t| vec![k; c.rank(t)]).collect();
        let differentials = (c.lo() + 1..=c.hi())
            .map(|t| {
                let d = c.differential(t);
                (0..d.rows())
                    .map(|i| {
                        (0..d.cols())
                            .map(|j| MonomialEntry::monomial(d[(i, j)].clone(), vec![0; n]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        TwistComplex::new(c.lo(), levels, differentials).expect("shapes come from a complex")
    }
}

/// Column counts are explicit because a matrix without rows has no row to
/// measure.
fn block_diagonal(a: &MonomialMatrix, a_cols: usize, b: &MonomialMatrix, b_cols: usize) -> MonomialMatrix {
    let mut out = Vec::with_capacity(a.len() + b.len());
    for row in a {
        let mut r = row.clone();
        r.extend(std::iter::repeat_with(MonomialEntry::zero).take(b_cols));
        out.push(r);
    }
    for row in b {
        let mut r: Vec<MonomialEntry> = std::iter::repeat_with(MonomialEntry::zero).take(a_cols).collect();
        r.extend(row.iter().cloned());
        out.push(r);
    }
    out
}

/// `u ∈ (b - a)P` for every term of every entry. Negative dilates are empty.
fn check_entries(p: &LatticePolytope, d: &MonomialMatrix, source: &[i64], target: &[i64], level: i64) -> Result<()> {
    for (row, (entries, b)) in d.iter().zip(target).enumerate() {
        for (col, (e, a)) in entries.iter().zip(source).enumerate() {
            for (u, _) in e.terms() {
                if u.len() != p.dim() || !p.satisfies_dilated(b - a, u) || (b < a && p.dim() == 0) {
                    return Err(Error::InvalidMonomial {
                        level,
                        row,
                        col,
                        u: u.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A map `f: Y -> Z` given level by level; `maps[t]` is `|Z_t| × |Y_t|`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub maps: BTreeMap<i64, MonomialMatrix>,
}

impl ChainMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_level(mut self, t: i64, m: MonomialMatrix) -> Self {
        self.maps.insert(t, m);
        self
    }

    /// The identity of `Y`.
    pub fn identity(y: &TwistComplex, n: usize) -> ChainMap {
        let mut f = ChainMap::new();
        for (t, summands) in y.levels() {
            let mut m = zero_matrix(summands.len(), summands.len());
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = MonomialEntry::monomial(1, vec![0; n]);
            }
            f.maps.insert(t, m);
        }
        f
    }

    fn at(&self, t: i64, rows: usize, cols: usize) -> MonomialMatrix {
        self.maps.get(&t).cloned().unwrap_or_else(|| zero_matrix(rows, cols))
    }
}

/// The mapping cone: level `t` is `Y_{t-1} ⊕ Z_t`, differential
/// `[[-d_Y, 0], [f, d_Z]]`.
pub fn cone(f: &ChainMap, y: &TwistComplex, z: &TwistComplex, p: &LatticePolytope) -> Result<TwistComplex> {
    for (&t, m) in &f.maps {
        let (rows, cols) = (z.level(t).len(), y.level(t).len());
        if m.len() != rows || m.iter().any(|r| r.len() != cols) {
            return Err(Error::MalformedComplex(format!(
                "chain map at level {t} must be {rows}×{cols}"
            )));
        }
        check_entries(p, m, y.level(t), z.level(t), t)?;
    }
    // d_Z f_t = f_{t-1} d_Y
    let (lo, hi) = (y.lo().min(z.lo()), y.hi().max(z.hi()));
    for t in lo + 1..=hi {
        let (yt, yt1, zt, zt1) = (
            y.level(t).len(),
            y.level(t - 1).len(),
            z.level(t).len(),
            z.level(t - 1).len(),
        );
        let left = compose(&z.differential_or_zero(t), &f.at(t, zt, yt), zt, yt);
        let right = compose(&f.at(t - 1, zt1, yt1), &y.differential_or_zero(t), yt1, yt);
        let diff: MonomialMatrix = left
            .iter()
            .zip(&right)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(&y.neg())).collect())
            .collect();
        if !is_zero_matrix(&diff) {
            return Err(Error::NotChainMap { level: t });
        }
    }

    if y.is_zero() && z.is_zero() {
        return Ok(TwistComplex::zero());
    }
    let ys = y.suspend(1);
    let lo = if y.is_zero() {
        z.lo()
    } else if z.is_zero() {
        ys.lo()
    } else {
        ys.lo().min(z.lo())
    };
    let hi = if y.is_zero() {
        z.hi()
    } else if z.is_zero() {
        ys.hi()
    } else {
        ys.hi().max(z.hi())
    };
    let levels = (lo..=hi).map(|t| [y.level(t - 1), z.level(t)].concat()).collect();
    let differentials = (lo + 1..=hi)
        .map(|t| {
            let (y_src, y_tgt) = (y.level(t - 1).len(), y.level(t - 2).len());
            let (z_src, z_tgt) = (z.level(t).len(), z.level(t - 1).len());
            let neg_dy = ys.differential_or_zero(t);
            let f_t = f.at(t - 1, z_tgt, y_src);
            let dz = z.differential_or_zero(t);
            let mut out = Vec::with_capacity(y_tgt + z_tgt);
            for row in neg_dy {
                let mut r = row;
                r.extend(std::iter::repeat_with(MonomialEntry::zero).take(z_src));
                out.push(r);
            }
            for (fr, dr) in f_t.into_iter().zip(dz) {
                let mut r = fr;
                r.extend(dr);
                out.push(r);
            }
            out
        })
        .collect();
    let c = TwistComplex::new(lo, levels, differentials)?;
    c.validate(p)?;
    Ok(c)
}

/// `cone(id_Y)`, which is contractible.
pub fn identity_cone(y: &TwistComplex, p: &LatticePolytope) -> Result<TwistComplex> {
    cone(&ChainMap::identity(y, p.dim()), y, y, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::polytope::{box_points, cone_membership, face_lattice, facets_from_vertices};

    fn mono(c: i64, u: &[i64]) -> MonomialEntry {
        MonomialEntry::monomial(c, u.to_vec())
    }

    fn two_level(p: &LatticePolytope, a: i64, b: i64, u: &[i64]) -> Result<TwistComplex> {
        let y = TwistComplex::new(0, vec![vec![b], vec![a]], vec![vec![vec![mono(1, u)]]])?;
        y.validate(p)?;
        Ok(y)
    }

    /// `x^u: O(a) -> O(b)` is well defined iff for every face `F` the
    /// translate `u + (aF + T_F)` stays inside `bF + T_F`; sampled on a box.
    fn facewise_valid(p: &LatticePolytope, a: i64, b: i64, u: &[i64]) -> bool {
        let l = face_lattice(p);
        let r = 6;
        let pts = box_points(&vec![-r; p.dim()], &vec![r; p.dim()]);
        l.faces().iter().all(|f| {
            pts.iter()
                .filter(|m| cone_membership(p, f, a, m))
                .all(|m| cone_membership(p, f, b, &add(m, u)))
        })
    }

    #[test]
    fn monomial_validity() {
        let tri = LatticePolytope::simplex(2);
        assert!(two_level(&tri, 0, 1, &[1, 0]).is_ok());
        assert!(matches!(
            two_level(&tri, 0, 1, &[2, 0]),
            Err(Error::InvalidMonomial {
                level: 1,
                row: 0,
                col: 0,
                ..
            })
        ));
        assert!(two_level(&tri, 1, 0, &[0, 0]).is_err());
    }

    #[test]
    fn global_validity_matches_facewise_oracle() {
        let polys = [
            LatticePolytope::simplex(1),
            LatticePolytope::simplex(2),
            LatticePolytope::cube(2),
            facets_from_vertices(2, vec![vec![0, 0], vec![2, 0], vec![0, 1], vec![1, 1]]).unwrap(),
        ];
        for p in &polys {
            for (a, b) in [(0, 0), (0, 1), (1, 2), (-1, 1), (2, 1), (0, 2)] {
                for u in box_points(&vec![-3; p.dim()], &vec![3; p.dim()]) {
                    let global = p.satisfies_dilated(b - a, &u);
                    assert_eq!(global, facewise_valid(p, a, b, &u), "{p:?} {a}->{b} u={u:?}");
                }
            }
        }
    }

    #[test]
    fn vacuous_square_check() {
        let y = two_level(&LatticePolytope::simplex(1), 0, 3, &[2]).unwrap();
        assert_eq!(y.lo(), 0);
        assert_eq!(y.hi(), 1);
    }

    #[test]
    fn non_square_zero_detected() {
        let p = LatticePolytope::simplex(1);
        let y = TwistComplex::new(
            0,
            vec![vec![2], vec![1], vec![0]],
            vec![vec![vec![mono(1, &[0])]], vec![vec![mono(1, &[1])]]],
        )
        .unwrap();
        assert!(matches!(y.validate(&p), Err(Error::NonSquareZero { level: 1 })));
    }

    #[test]
    fn twist_laws() {
        let y = two_level(&LatticePolytope::simplex(2), 0, 1, &[0, 1]).unwrap();
        assert_eq!(y.twist(2).twist(-5), y.twist(-3));
        assert_eq!(y.twist(0), y);
        assert_eq!(TwistComplex::line_bundle(1).twist(-1), TwistComplex::line_bundle(0));
        assert!(y.twist(7).validate(&LatticePolytope::simplex(2)).is_ok());
    }

    #[test]
    fn suspension_laws() {
        let y = two_level(&LatticePolytope::simplex(1), 0, 1, &[1]).unwrap();
        assert_eq!(y.suspend(0), y);
        assert_eq!(y.suspend(1).suspend(-1), y);
        let s = y.suspend(1);
        assert_eq!((s.lo(), s.hi()), (1, 2));
        assert_eq!(s.differential(2).unwrap()[0][0], mono(-1, &[1]));
    }

    #[test]
    fn cone_of_zero_is_suspension_plus_target() {
        let p = LatticePolytope::simplex(2);
        let y = two_level(&p, 0, 1, &[1, 0]).unwrap();
        let z = TwistComplex::line_bundle(3).direct_sum(&TwistComplex::line_bundle(-1));
        let c = cone(&ChainMap::new(), &y, &z, &p).unwrap();
        assert_eq!(c, y.suspend(1).direct_sum(&z));
    }

    #[test]
    fn cone_of_monomial() {
        let p = LatticePolytope::simplex(1);
        let f = ChainMap::new().with_level(0, vec![vec![mono(1, &[0])]]);
        let c = cone(&f, &TwistComplex::line_bundle(0), &TwistComplex::line_bundle(1), &p).unwrap();
        assert_eq!(c.level(1), &[0]);
        assert_eq!(c.level(0), &[1]);
        assert_eq!(c.differential(1).unwrap()[0][0], mono(1, &[0]));
        let id = identity_cone(&TwistComplex::line_bundle(2), &p).unwrap();
        assert_eq!(id.level(1), &[2]);
    }

    #[test]
    fn cone_rejects_non_chain_maps() {
        let p = LatticePolytope::simplex(1);
        let y = two_level(&p, 0, 1, &[1]).unwrap();
        // f_1 = 1, f_0 = 0 does not commute with d_Y = x
        let f = ChainMap::new().with_level(1, vec![vec![mono(1, &[0])]]);
        assert!(matches!(cone(&f, &y, &y, &p), Err(Error::NotChainMap { level: 1 })));
        let id = identity_cone(&y, &p).unwrap();
        assert!(id.validate(&p).is_ok());
        assert_eq!(id.levels().count(), 3);
    }

    #[test]
    fn sums_and_tensors() {
        let y = TwistComplex::line_bundle(1);
        assert_eq!(y.direct_sum(&TwistComplex::zero()), y);
        let c = FreeChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let t = TwistComplex::bundle_tensor(0, &c, 2);
        assert_eq!(t.level(0), &[0]);
        assert_eq!(t.level(1), &[0]);
        assert_eq!(t.differential(1).unwrap()[0][0], mono(2, &[0, 0]));
        assert!(TwistComplex::bundle_tensor(3, &FreeChainComplex::zero(), 2).is_zero());
        let s = t.direct_sum(&y);
        assert_eq!(s.level(0).len() + s.level(1).len(), 3);
    }
}
