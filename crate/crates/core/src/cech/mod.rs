//! The Čech complex `Γ̌` and its homology.
//!
//! For a diagram `A` on the face lattice, `Γ̌(A)_s = ⊕_{dim F = n - s} A^F`
//! with the incidence-signed maps `A^F -> A^G` for facets `F ⊂ G`. For `O(k)`
//! each component is free on the lattice points of `kF + T_F`, so `Γ̌(O(k))`
//! splits by multidegree into finite *column complexes*. For a complex `Y`
//! of twists the vertical differential mixes multidegrees; its homology is
//! obtained by contracting each column onto its homology and transferring
//! `d_Y` along the contractions.

mod blocks;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use blocks::{BlockKey, BlockSystem};

use crate::linalg::{
    complex_homology, perturb_transfer_counted, CoefficientRing, FreeChainComplex, HomologyGroup, HomologyResult,
    IntMatrix,
};
use crate::orientation::{incidence_numbers_with_order, IncidenceSystem, VertexOrder};
use crate::polytope::{
    box_points, cone_membership, ehrhart_polynomial, face_lattice, lattice_points, EhrhartPolynomial, FaceLattice,
    LatticePolytope, Point,
};
use crate::sheaf::{cone, ChainMap, MonomialEntry, TwistComplex};
use crate::{Error, Result};

/// `Γ̌(O(k))` at one multidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnComplex {
    pub k: i64,
    pub m: Point,
    /// Face ids in each degree `s = 0..=n`, ascending.
    pub faces: Vec<Vec<usize>>,
    pub complex: FreeChainComplex,
}

/// Where the homology of `Γ̌(O(k))` lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTable {
    pub k: i64,
    pub degree: usize,
    pub multidegrees: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechResult {
    pub homology: HomologyResult,
    /// Column blocks that took part in the computation.
    pub active_columns: usize,
    /// Nonzero terms of the perturbation series.
    pub transfer_terms: usize,
}

/// `M[j][l] = χ(Γ̌ O(j - l))` for `0 <= j, l <= n_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingMatrix {
    pub entries: Vec<Vec<BigInt>>,
    pub det: BigInt,
}

/// A polytope together with its face lattice, incidence numbers and
/// Ehrhart polynomial.
#[derive(Clone, Debug)]
pub struct Cech {
    polytope: LatticePolytope,
    lattice: FaceLattice,
    incidence: IncidenceSystem,
    ehrhart: EhrhartPolynomial,
}

impl Cech {
    pub fn new(p: &LatticePolytope) -> Result<Self> {
        Self::with_order(p, VertexOrder::Lexicographic)
    }

    /// Uses the given vertex order for the face orientations.
    pub fn with_order(p: &LatticePolytope, order: VertexOrder) -> Result<Self> {
        let lattice = face_lattice(p);
        let incidence = incidence_numbers_with_order(&lattice, p, order)?;
        Ok(Cech {
            polytope: p.clone(),
            ehrhart: ehrhart_polynomial(p)?,
            lattice,
            incidence,
        })
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn incidence(&self) -> &IncidenceSystem {
        &self.incidence
    }

    pub fn ehrhart(&self) -> &EhrhartPolynomial {
        &self.ehrhart
    }

    fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// `m ∈ kF + T_F` for every face, by face id. Closed upwards.
    pub fn membership(&self, k: i64, m: &[i64]) -> Vec<bool> {
        self.lattice
            .faces()
            .iter()
            .map(|f| cone_membership(&self.polytope, f, k, m))
            .collect()
    }

    fn faces_by_degree(&self, pattern: &[bool]) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut faces = vec![Vec::new(); n + 1];
        for f in self.lattice.faces() {
            if pattern[f.id] {
                faces[n - f.dim].push(f.id);
            }
        }
        faces
    }

    /// The column complex on the faces selected by `pattern`, degrees `0..=n`.
    pub(crate) fn column_from_pattern(&self, pattern: &[bool]) -> FreeChainComplex {
        let faces = self.faces_by_degree(pattern);
        let ranks = faces.iter().map(Vec::len).collect();
        let differentials = (1..faces.len())
            .map(|s| {
                let mut d = IntMatrix::zeros(faces[s - 1].len(), faces[s].len());
                for (i, &g) in faces[s - 1].iter().enumerate() {
                    for (j, &f) in faces[s].iter().enumerate() {
                        d[(i, j)] = BigInt::from(self.incidence.get(f, g));
                    }
                }
                d
            })
            .collect();
        FreeChainComplex::new_unchecked(0, ranks, differentials).expect("shapes follow the face counts")
    }

    pub fn column_complex(&self, k: i64, m: &[i64]) -> ColumnComplex {
        let pattern = self.membership(k, m);
        ColumnComplex {
            k,
            m: m.to_vec(),
            faces: self.faces_by_degree(&pattern),
            complex: self.column_from_pattern(&pattern),
        }
    }

    /// Ground-truth supports: `kP ∩ Z^n` in degree `n` for `k >= 0`,
    /// `int(kP) ∩ Z^n` in degree 0 for `k < 0`.
    pub fn support_table(&self, k: i64) -> SupportTable {
        SupportTable {
            k,
            degree: if k >= 0 { self.dim() } else { 0 },
            multidegrees: lattice_points(&self.polytope, k, k < 0),
        }
    }

    /// Scans every column in the bounding box of `kP`, widened by the
    /// bounding box of `P` on each side, and checks the result against the
    /// closed form.
    pub fn line_bundle_cohomology(&self, k: i64, ring: CoefficientRing) -> Result<CechResult> {
        let (mut lo, mut hi) = self.polytope.bounding_box(k);
        let (p_lo, p_hi) = self.polytope.bounding_box(1);
        for i in 0..self.dim() {
            let w = (p_hi[i] - p_lo[i]).max(1);
            lo[i] -= w;
            hi[i] += w;
        }
        let mut cache: HashMap<Vec<bool>, HomologyResult> = HashMap::new();
        let mut total = HomologyResult::default();
        let mut supports: BTreeSet<Point> = BTreeSet::new();
        for m in box_points(&lo, &hi) {
            let pattern = self.membership(k, &m);
            let h = match cache.get(&pattern) {
                Some(h) => h.clone(),
                None => {
                    let h = complex_homology(&self.column_from_pattern(&pattern), ring)?;
                    cache.insert(pattern, h.clone());
                    h
                }
            };
            if h.is_zero() {
                continue;
            }
            let on_edge = (0..self.dim()).any(|i| m[i] == lo[i] || m[i] == hi[i]);
            if on_edge {
                return Err(Error::SupportEscapesBox { k, m });
            }
            let table_degree = if k >= 0 { self.dim() } else { 0 } as i64;
            let single = HomologyResult::from_groups([HomologyGroup {
                degree: table_degree,
                free_rank: 1,
                torsion: Vec::new(),
            }]);
            if h != single {
                return Err(Error::ClosedFormMismatch { k });
            }
            total = total.direct_sum(&h);
            supports.insert(m);
        }
        let expected: BTreeSet<Point> = self.support_table(k).multidegrees.into_iter().collect();
        if supports != expected {
            return Err(Error::ClosedFormMismatch { k });
        }
        Ok(CechResult {
            homology: total,
            active_columns: supports.len(),
            transfer_terms: 0,
        })
    }

    /// `H_* Γ̌(Y)` by homotopy transfer over the column blocks that connect
    /// supports of the summands.
    pub fn cech_homology(&self, y: &TwistComplex, ring: CoefficientRing) -> Result<CechResult> {
        y.validate(&self.polytope)?;
        if y.is_zero() {
            return Ok(CechResult {
                homology: HomologyResult::default(),
                active_columns: 0,
                transfer_terms: 0,
            });
        }
        let twists: BTreeSet<i64> = y.levels().flat_map(|(_, l)| l.iter().copied()).collect();
        let mut tables = HashMap::new();
        for &k in &twists {
            self.line_bundle_cohomology(k, ring)?;
            tables.insert(k, self.support_table(k));
        }
        let mut seeds = BTreeSet::new();
        for (t, summands) in y.levels() {
            for (c, k) in summands.iter().enumerate() {
                for m in &tables[k].multidegrees {
                    seeds.insert(BlockKey {
                        level: t,
                        summand: c,
                        m: m.clone(),
                    });
                }
            }
        }
        let mut system = BlockSystem::forward_closure(self, y, seeds.iter().cloned());
        system.retain_reaching(&seeds);
        let base = system.contractions(ring)?;
        let delta = system.perturbation();
        let (transferred, terms) = perturb_transfer_counted(&base, &delta, (y.hi() - y.lo()) as usize)?;
        let homology = complex_homology(&transferred, ring)?;
        let (lo, hi) = (y.lo(), y.hi() + self.dim() as i64);
        if homology.min_degree().is_some_and(|d| d < lo) || homology.max_degree().is_some_and(|d| d > hi) {
            return Err(Error::Internal(format!("homology outside degrees [{lo}, {hi}]")));
        }
        Ok(CechResult {
            homology,
            active_columns: system.len(),
            transfer_terms: terms,
        })
    }

    /// `Σ_t (-1)^t Σ_{k ∈ Y_t} (-1)^n E_P(k)`.
    pub fn euler_characteristic(&self, y: &TwistComplex) -> BigInt {
        let sign_n = if self.dim().is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let mut chi = BigInt::zero();
        for (t, summands) in y.levels() {
            let level: BigInt = summands.iter().map(|&k| self.ehrhart.eval_int(k)).sum();
            if t.rem_euclid(2) == 0 {
                chi += level;
            } else {
                chi -= level;
            }
        }
        chi * sign_n
    }

    /// Compares [`Cech::euler_characteristic`] with the alternating rank sum
    /// of the computed homology over `Q`.
    pub fn euler_identity_holds(&self, y: &TwistComplex) -> Result<bool> {
        let h = self.cech_homology(y, CoefficientRing::Rationals)?;
        Ok(BigInt::from(h.homology.euler_characteristic()) == self.euler_characteristic(y))
    }

    /// Entry `k - 1` says whether `O(-k)` is acyclic, for `k = 1..=n+1`.
    pub fn acyclicity_window(&self) -> Result<Vec<bool>> {
        let n = self.dim();
        let mut window = Vec::with_capacity(n + 1);
        for k in 1..=n as i64 + 1 {
            let h = self.cech_homology(&TwistComplex::line_bundle(-k), CoefficientRing::Integers)?;
            window.push(h.homology.is_zero());
        }
        let np = self.ehrhart.np;
        if window.iter().enumerate().any(|(i, &a)| a != (i < np)) {
            return Err(Error::WindowMismatch { np });
        }
        Ok(window)
    }

    /// Whether `Γ̌ Y(j)` is acyclic for `0 <= j <= kmax`.
    pub fn hk_acyclic(&self, y: &TwistComplex, kmax: i64) -> Result<bool> {
        for j in 0..=kmax {
            if !self
                .cech_homology(&y.twist(j), CoefficientRing::Integers)?
                .homology
                .is_zero()
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Euler characteristics of `O(-l)` twisted by `j`; lower triangular with
    /// diagonal `(-1)^n`, hence unimodular.
    pub fn splitting_matrix(&self) -> Result<SplittingMatrix> {
        let n = self.dim();
        let np = self.ehrhart.np;
        let unit = FreeChainComplex::with_zero_differential(0, vec![1]);
        let entries: Vec<Vec<BigInt>> = (0..=np as i64)
            .map(|j| {
                (0..=np as i64)
                    .map(|l| self.euler_characteristic(&TwistComplex::bundle_tensor(-l, &unit, n).twist(j)))
                    .collect()
            })
            .collect();
        let det = IntMatrix::from_rows(&entries).determinant();
        let diagonal = if n.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let triangular = (0..=np).all(|j| (j + 1..=np).all(|l| entries[j][l].is_zero()));
        let unit_diagonal = (0..=np).all(|j| entries[j][j] == diagonal);
        if !triangular || !unit_diagonal || det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular { det });
        }
        Ok(SplittingMatrix { entries, det })
    }

    /// `Γ̌` of the constant diagram with value `C`, assembled directly; checks
    /// that its homology is that of `C` shifted up by `n`.
    pub fn constant_diagram_cech(&self, c: &FreeChainComplex, ring: CoefficientRing) -> Result<CechResult> {
        let total = self.constant_diagram_complex(c);
        let homology = complex_homology(&total, ring)?;
        if homology != complex_homology(c, ring)?.shifted(self.dim() as i64) {
            return Err(Error::SuspensionMismatch);
        }
        Ok(CechResult {
            homology,
            active_columns: self.lattice.len(),
            transfer_terms: 0,
        })
    }

    /// Total complex of `(s, t) ↦ ⊕_{dim F = n - s} C_t`, horizontal maps
    /// `[F:G] · 1`, vertical maps `(-1)^s d_C`.
    pub fn constant_diagram_complex(&self, c: &FreeChainComplex) -> FreeChainComplex {
        let n = self.dim();
        if c.total_rank() == 0 {
            return FreeChainComplex::zero();
        }
        let faces = self.faces_by_degree(&vec![true; self.lattice.len()]);
        let (lo, hi) = (c.lo(), c.hi() + n as i64);
        // blocks of total degree d: (s, t = d - s), each faces[s].len() × rank(C_t)
        let block_offsets = |d: i64| {
            let mut offsets = Vec::with_capacity(n + 2);
            let mut acc = 0;
            for (s, fs) in faces.iter().enumerate() {
                offsets.push(acc);
                acc += fs.len() * c.rank(d - s as i64);
            }
            offsets.push(acc);
            offsets
        };
        let ranks = (lo..=hi).map(|d| *block_offsets(d).last().unwrap()).collect();
        let differentials = (lo + 1..=hi)
            .map(|d| {
                let (src, tgt) = (block_offsets(d), block_offsets(d - 1));
                let mut out = IntMatrix::zeros(tgt[n + 1], src[n + 1]);
                for s in 0..=n {
                    let t = d - s as i64;
                    let r = c.rank(t);
                    if r == 0 {
                        continue;
                    }
                    // horizontal: (s, t) -> (s - 1, t)
                    if s > 0 {
                        for (i, &g) in faces[s - 1].iter().enumerate() {
                            for (j, &f) in faces[s].iter().enumerate() {
                                let e = self.incidence.get(f, g);
                                if e != 0 {
                                    for x in 0..r {
                                        out[(tgt[s - 1] + i * r + x, src[s] + j * r + x)] = BigInt::from(e);
                                    }
                                }
                            }
                        }
                    }
                    // vertical: (s, t) -> (s, t - 1)
                    let dc = c.differential(t);
                    let below = c.rank(t - 1);
                    let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    for j in 0..faces[s].len() {
                        for a in 0..below {
                            for b in 0..r {
                                if !dc[(a, b)].is_zero() {
                                    out[(tgt[s] + j * below + a, src[s] + j * r + b)] = &sign * &dc[(a, b)];
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        FreeChainComplex::new_unchecked(lo, ranks, differentials).expect("block offsets match ranks")
    }

    /// Whether `Γ̌ con(C)` and `Γ̌(O(0) ⊗ C)` have the same homology.
    pub fn con_vs_bundle_check(&self, c: &FreeChainComplex, ring: CoefficientRing) -> Result<bool> {
        let constant = self.constant_diagram_cech(c, ring)?;
        let bundle = self.cech_homology(&TwistComplex::bundle_tensor(0, c, self.dim()), ring)?;
        Ok(constant.homology == bundle.homology)
    }
}

/// `cone(O(k) --x^0--> O(k+1))` on `Δ^n` against `O(k+1)` on `Δ^{n-1}`,
/// one degree up. Meaningful for `n >= 1`, `k >= 0`.
pub fn simplex_cone_check(n: usize, k: i64, ring: CoefficientRing) -> Result<bool> {
    let big = Cech::new(&LatticePolytope::simplex(n))?;
    let small = Cech::new(&LatticePolytope::simplex(n.saturating_sub(1)))?;
    let f = ChainMap::new().with_level(0, vec![vec![MonomialEntry::monomial(1, vec![0; n])]]);
    let y = cone(
        &f,
        &TwistComplex::line_bundle(k),
        &TwistComplex::line_bundle(k + 1),
        big.polytope(),
    )?;
    let lhs = big.cech_homology(&y, ring)?.homology;
    let rhs = small.line_bundle_cohomology(k + 1, ring)?.homology.shifted(1);
    Ok(lhs == rhs)
}

pub fn column_complex(p: &LatticePolytope, k: i64, m: &[i64]) -> Result<ColumnComplex> {
    Ok(Cech::new(p)?.column_complex(k, m))
}

pub fn line_bundle_cohomology(p: &LatticePolytope, k: i64, ring: CoefficientRing) -> Result<CechResult> {
    Cech::new(p)?.line_bundle_cohomology(k, ring)
}

pub fn support_table(p: &LatticePolytope, k: i64) -> Result<SupportTable> {
    Ok(Cech::new(p)?.support_table(k))
}

pub fn cech_homology(p: &LatticePolytope, y: &TwistComplex, ring: CoefficientRing) -> Result<CechResult> {
    Cech::new(p)?.cech_homology(y, ring)
}

pub fn euler_characteristic(p: &LatticePolytope, y: &TwistComplex) -> Result<BigInt> {
    Ok(Cech::new(p)?.euler_characteristic(y))
}

pub fn acyclicity_window(p: &LatticePolytope) -> Result<Vec<bool>> {
    Cech::new(p)?.acyclicity_window()
}

pub fn hk_acyclic(p: &LatticePolytope, y: &TwistComplex, kmax: i64) -> Result<bool> {
    Cech::new(p)?.hk_acyclic(y, kmax)
}

pub fn splitting_matrix(p: &LatticePolytope) -> Result<SplittingMatrix> {
    Cech::new(p)?.splitting_matrix()
}

pub fn constant_diagram_cech(p: &LatticePolytope, c: &FreeChainComplex, ring: CoefficientRing) -> Result<CechResult> {
    Cech::new(p)?.constant_diagram_cech(c, ring)
}

pub fn con_vs_bundle_check(p: &LatticePolytope, c: &FreeChainComplex, ring: CoefficientRing) -> Result<bool> {
    Cech::new(p)?.con_vs_bundle_check(c, ring)
}
