use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::{Error, Result};

/// The coefficient rings the library computes over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl CoefficientRing {
    /// `F_p`, after checking that `p` is prime.
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientRing::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    /// Rank of an integer matrix after base change to this ring.
    pub fn rank(&self, m: &IntMatrix) -> usize {
        match *self {
            CoefficientRing::Integers | CoefficientRing::Rationals => m.rank(),
            CoefficientRing::PrimeField(p) => m.rank_mod(p),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for CoefficientRing {
    type Err = Error;

    /// Accepts `Z`, `Q` and `Fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                let p = s
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::UnknownRing(s.to_string()))?;
                CoefficientRing::prime_field(p)
            }
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    // residues are multiplied in u128; keep p*p below 2^128
    if p > u32::MAX as u64 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A bounded chain complex of finite free modules with differentials lowering
/// the degree by one.
///
/// The degree range is the closed interval `[lo, lo + ranks.len() - 1]`.
/// `differentials[i]` maps degree `lo + i` to `lo + i - 1`; the first one has
/// zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeChainComplex {
    lo: i64,
    ranks: Vec<usize>,
    differentials: Vec<IntMatrix>,
}

impl FreeChainComplex {
    /// Builds a complex from its ranks and the differentials leaving degrees
    /// `lo + 1, ..., hi`. Checks shapes and `d ∘ d = 0`.
    pub fn new(lo: i64, ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(lo, ranks, differentials)?;
        c.check_square_zero(None)?;
        Ok(c)
    }

    /// Like [`FreeChainComplex::new`] but skips the `d ∘ d = 0` check.
    pub fn new_unchecked(lo: i64, ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if differentials.len() + 1 != ranks.len().max(1) {
            return Err(Error::ShapeMismatch(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                differentials.len()
            )));
        }
        let mut full = Vec::with_capacity(ranks.len());
        if let Some(&r0) = ranks.first() {
            full.push(IntMatrix::zeros(0, r0));
        }
        for (i, d) in differentials.into_iter().enumerate() {
            if d.shape() != (ranks[i], ranks[i + 1]) {
                return Err(Error::ShapeMismatch(format!(
                    "differential from degree {} has shape {:?}, expected {:?}",
                    lo + i as i64 + 1,
                    d.shape(),
                    (ranks[i], ranks[i + 1])
                )));
            }
            full.push(d);
        }
        Ok(FreeChainComplex {
            lo,
            ranks,
            differentials: full,
        })
    }

    pub fn zero() -> Self {
        FreeChainComplex {
            lo: 0,
            ranks: Vec::new(),
            differentials: Vec::new(),
        }
    }

    /// Zero differentials with the given ranks.
    pub fn with_zero_differential(lo: i64, ranks: Vec<usize>) -> Self {
        let differentials = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let below = if i == 0 { 0 } else { ranks[i - 1] };
                IntMatrix::zeros(below, r)
            })
            .collect();
        FreeChainComplex {
            lo,
            ranks,
            differentials,
        }
    }

    /// `d ∘ d = 0`, modulo `modulus` when given.
    fn check_square_zero(&self, modulus: Option<u64>) -> Result<()> {
        for i in 1..self.differentials.len() {
            let mut composite = self.differentials[i - 1].mul(&self.differentials[i]);
            if let Some(p) = modulus {
                composite = composite.reduce_mod(&BigInt::from(p));
            }
            if !composite.is_zero() {
                return Err(Error::InvalidComplex {
                    degree: self.lo + i as i64 - 1,
                });
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree; `lo - 1` for the empty range.
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.index(degree).map_or(0, |i| self.ranks[i])
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    fn index(&self, degree: i64) -> Option<usize> {
        (degree >= self.lo && degree <= self.hi()).then(|| (degree - self.lo) as usize)
    }

    /// The differential leaving `degree`, of shape `rank(degree-1) × rank(degree)`.
    pub fn differential(&self, degree: i64) -> IntMatrix {
        match self.index(degree) {
            Some(0) => IntMatrix::zeros(self.rank(degree - 1), self.ranks[0]),
            Some(i) => self.differentials[i].clone(),
            None => IntMatrix::zeros(self.rank(degree - 1), 0),
        }
    }

    /// Borrowed differential; `None` outside the range or at `lo`.
    pub fn differential_ref(&self, degree: i64) -> Option<&IntMatrix> {
        match self.index(degree) {
            Some(i) if i > 0 => Some(&self.differentials[i]),
            _ => None,
        }
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differentials.iter().all(IntMatrix::is_zero)
    }

    /// Same data, degrees shifted up by `by`. No sign change.
    pub fn shifted(&self, by: i64) -> Self {
        FreeChainComplex {
            lo: self.lo + by,
            ranks: self.ranks.clone(),
            differentials: self.differentials.clone(),
        }
    }

    /// Degree-wise direct sum.
    pub fn direct_sum(&self, other: &FreeChainComplex) -> FreeChainComplex {
        if self.ranks.is_empty() {
            return other.clone();
        }
        if other.ranks.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|d| self.rank(d) + other.rank(d)).collect();
        let differentials = (lo + 1..=hi)
            .map(|d| IntMatrix::block_diagonal(&[self.differential(d), other.differential(d)]))
            .collect();
        FreeChainComplex::new_unchecked(lo, ranks, differentials).expect("shapes agree")
    }
}

/// One homology group `Z^free_rank ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i64,
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Homology of a complex in every degree where it is nonzero, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyResult {
    groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    /// Drops zero groups and sorts by degree. Groups with the same degree are
    /// merged.
    pub fn from_groups(groups: impl IntoIterator<Item = HomologyGroup>) -> Self {
        let mut r = HomologyResult::default();
        for g in groups {
            r.add_group(g);
        }
        r
    }

    fn add_group(&mut self, g: HomologyGroup) {
        if g.is_zero() {
            return;
        }
        match self.groups.binary_search_by_key(&g.degree, |x| x.degree) {
            Ok(i) => {
                let existing = &mut self.groups[i];
                existing.free_rank += g.free_rank;
                let mut torsion = std::mem::take(&mut existing.torsion);
                torsion.extend(g.torsion);
                existing.torsion = normalize_torsion(torsion);
            }
            Err(i) => self.groups.insert(
                i,
                HomologyGroup {
                    torsion: normalize_torsion(g.torsion),
                    ..g
                },
            ),
        }
    }

    pub fn groups(&self) -> &[HomologyGroup] {
        &self.groups
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn free_rank(&self, degree: i64) -> usize {
        self.group(degree).map_or(0, |g| g.free_rank)
    }

    pub fn torsion(&self, degree: i64) -> &[BigInt] {
        self.group(degree).map_or(&[], |g| &g.torsion)
    }

    pub fn group(&self, degree: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    pub fn total_free_rank(&self) -> usize {
        self.groups.iter().map(|g| g.free_rank).sum()
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| {
                let r = g.free_rank as i64;
                if g.degree.rem_euclid(2) == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    /// Degree-wise direct sum.
    pub fn direct_sum(&self, other: &HomologyResult) -> HomologyResult {
        HomologyResult::from_groups(self.groups.iter().chain(&other.groups).cloned())
    }

    pub fn shifted(&self, by: i64) -> HomologyResult {
        HomologyResult {
            groups: self
                .groups
                .iter()
                .map(|g| HomologyGroup {
                    degree: g.degree + by,
                    ..g.clone()
                })
                .collect(),
        }
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.groups.first().map(|g| g.degree)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.groups.last().map(|g| g.degree)
    }
}

/// Re-normalizes a list of cyclic orders `Z/a_1 ⊕ ...` into invariant factors.
pub fn normalize_torsion(orders: Vec<BigInt>) -> Vec<BigInt> {
    let orders: Vec<BigInt> = orders.into_iter().filter(|x| !x.is_one()).collect();
    if orders.len() <= 1 {
        return orders;
    }
    let n = orders.len();
    let mut diag = IntMatrix::zeros(n, n);
    for (i, a) in orders.into_iter().enumerate() {
        diag[(i, i)] = a;
    }
    smith_normal_form(&diag)
        .invariant_factors()
        .into_iter()
        .filter(|x| !x.is_one())
        .collect()
}

/// Homology of `c` over `ring`.
///
/// Over the integers the free rank and torsion come from the Smith normal
/// form of the adjacent differentials; over a field only ranks are needed.
pub fn complex_homology(c: &FreeChainComplex, ring: CoefficientRing) -> Result<HomologyResult> {
    // over F_p the differentials need only square to zero mod p
    c.check_square_zero(match ring {
        CoefficientRing::PrimeField(p) => Some(p),
        _ => None,
    })?;
    // rank and invariant factors of the differential leaving each degree
    let mut ranks = Vec::new();
    let mut torsion = Vec::new();
    for d in c.lo()..=c.hi() + 1 {
        match c.differential_ref(d) {
            Some(m) if !m.is_zero() => match ring {
                CoefficientRing::Integers => {
                    let f = smith_normal_form(m).invariant_factors();
                    ranks.push(f.len());
                    torsion.push(f.into_iter().filter(|x| !x.is_one()).collect());
                }
                _ => {
                    ranks.push(ring.rank(m));
                    torsion.push(Vec::new());
                }
            },
            _ => {
                ranks.push(0);
                torsion.push(Vec::new());
            }
        }
    }
    let groups = c.degrees().enumerate().map(|(i, d)| HomologyGroup {
        degree: d,
        free_rank: c.rank(d) - ranks[i] - ranks[i + 1],
        torsion: torsion[i + 1].clone(),
    });
    Ok(HomologyResult::from_groups(groups))
}

/// Checks the invariant-factor shape of a torsion list.
pub fn is_divisibility_chain(torsion: &[BigInt]) -> bool {
    torsion.iter().all(|x| x > &BigInt::one()) && torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn zero_differential_reports_ranks() {
        let c = FreeChainComplex::with_zero_differential(0, vec![2, 3]);
        let h = complex_homology(&c, CoefficientRing::Integers).unwrap();
        assert_eq!(h.free_rank(0), 2);
        assert_eq!(h.free_rank(1), 3);
    }

    #[test]
    fn multiplication_by_two() {
        let c = FreeChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let h = complex_homology(&c, CoefficientRing::Integers).unwrap();
        assert_eq!(h.groups().len(), 1);
        assert_eq!(h.torsion(0), &[z(2)]);
        assert_eq!(h.free_rank(0), 0);
        assert!(complex_homology(&c, CoefficientRing::Rationals).unwrap().is_zero());
        let h2 = complex_homology(&c, CoefficientRing::PrimeField(2)).unwrap();
        assert_eq!((h2.free_rank(0), h2.free_rank(1)), (1, 1));
    }

    #[test]
    fn exact_complex() {
        let c = FreeChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![1]])]).unwrap();
        assert!(complex_homology(&c, CoefficientRing::Integers).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_complex() {
        let d1 = IntMatrix::from_rows(&[vec![1]]);
        let d2 = IntMatrix::from_rows(&[vec![1]]);
        let err = FreeChainComplex::new(0, vec![1, 1, 1], vec![d1, d2]).unwrap_err();
        assert!(matches!(err, Error::InvalidComplex { degree: 1 }));
    }

    #[test]
    fn square_zero_mod_p_only() {
        let d1 = IntMatrix::from_rows(&[vec![2]]);
        let d2 = IntMatrix::from_rows(&[vec![1]]);
        let c = FreeChainComplex::new_unchecked(0, vec![1, 1, 1], vec![d1, d2]).unwrap();
        assert!(complex_homology(&c, CoefficientRing::Integers).is_err());
        let h = complex_homology(&c, CoefficientRing::PrimeField(2)).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert_eq!(h.free_rank(1), 0);
    }

    #[test]
    fn torsion_normalization() {
        assert_eq!(normalize_torsion(vec![z(2), z(3)]), vec![z(6)]);
        assert_eq!(normalize_torsion(vec![z(4), z(2)]), vec![z(2), z(4)]);
    }

    #[test]
    fn ring_parsing() {
        assert_eq!("Z".parse::<CoefficientRing>().unwrap(), CoefficientRing::Integers);
        assert_eq!(
            "Fp:7".parse::<CoefficientRing>().unwrap(),
            CoefficientRing::PrimeField(7)
        );
        assert!("Fp:8".parse::<CoefficientRing>().is_err());
        assert!("R".parse::<CoefficientRing>().is_err());
    }

    /// Random two- and three-term integer complexes.
    fn arb_complex() -> impl Strategy<Value = FreeChainComplex> {
        (
            1usize..4,
            1usize..4,
            proptest::collection::vec(-3i64..=3, 9),
            any::<bool>(),
        )
            .prop_map(|(r0, r1, vals, three)| {
                let d1 = IntMatrix::from_vec(r0, r1, vals.iter().take(r0 * r1).map(|&x| BigInt::from(x)).collect());
                if !three {
                    return FreeChainComplex::new(0, vec![r0, r1], vec![d1]).unwrap();
                }
                // degree-2 generators: a basis of the rational kernel of d1, scaled
                let kernel = integer_kernel(&d1);
                let r2 = kernel.len();
                let mut d2 = IntMatrix::zeros(r1, r2);
                for (j, v) in kernel.iter().enumerate() {
                    for i in 0..r1 {
                        d2[(i, j)] = v[i].clone() * BigInt::from(1 + (j as i64 % 2));
                    }
                }
                FreeChainComplex::new(0, vec![r0, r1, r2], vec![d1, d2]).unwrap()
            })
    }

    fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
        let s = smith_normal_form(m);
        let r = s.rank();
        (r..m.cols()).map(|j| s.v.column(j)).collect()
    }

    proptest! {
        #[test]
        fn universal_coefficients(c in arb_complex(), pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let hz = complex_homology(&c, CoefficientRing::Integers).unwrap();
            let hp = complex_homology(&c, CoefficientRing::PrimeField(p)).unwrap();
            let pb = BigInt::from(p);
            for d in c.degrees() {
                let count = |deg: i64| hz.torsion(deg).iter().filter(|t| (*t % &pb).is_zero()).count();
                let expected = hz.free_rank(d) + count(d) + count(d - 1);
                prop_assert_eq!(hp.free_rank(d), expected);
            }
            for g in hz.groups() {
                prop_assert!(is_divisibility_chain(&g.torsion));
            }
            let hq = complex_homology(&c, CoefficientRing::Rationals).unwrap();
            for d in c.degrees() {
                prop_assert_eq!(hq.free_rank(d), hz.free_rank(d));
            }
        }
    }
}
