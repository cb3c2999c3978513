//! Contractions of a free complex onto its homology.
//!
//! A contraction of `C` consists of a complex `small` with zero differential
//! and maps `include: small -> C`, `project: C -> small`, `homotopy: C -> C[1]`
//! with
//!
//! ```text
//! p i = 1,    1 - i p = d h + h d,    h i = 0,    p h = 0,    h h = 0.
//! ```

use num_bigint::BigInt;
use num_traits::One;

use super::complex::{CoefficientRing, FreeChainComplex};
use super::matrix::IntMatrix;
use super::snf::{diagonalize_mod, smith_normal_form, SmithForm};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    big: FreeChainComplex,
    small: FreeChainComplex,
    // indexed by degree - big.lo()
    include: Vec<IntMatrix>,
    project: Vec<IntMatrix>,
    // homotopy[i]: degree lo+i -> lo+i+1
    homotopy: Vec<IntMatrix>,
    modulus: Option<u64>,
}

impl Contraction {
    pub fn big(&self) -> &FreeChainComplex {
        &self.big
    }

    pub fn small(&self) -> &FreeChainComplex {
        &self.small
    }

    fn index(&self, degree: i64) -> Option<usize> {
        (degree >= self.big.lo() && degree <= self.big.hi()).then(|| (degree - self.big.lo()) as usize)
    }

    /// `i` at `degree`: `rank_big × rank_small`.
    pub fn include(&self, degree: i64) -> IntMatrix {
        self.index(degree).map_or_else(
            || IntMatrix::zeros(self.big.rank(degree), self.small.rank(degree)),
            |i| self.include[i].clone(),
        )
    }

    pub fn include_ref(&self, degree: i64) -> Option<&IntMatrix> {
        self.index(degree).map(|i| &self.include[i])
    }

    /// `p` at `degree`: `rank_small × rank_big`.
    pub fn project(&self, degree: i64) -> IntMatrix {
        self.index(degree).map_or_else(
            || IntMatrix::zeros(self.small.rank(degree), self.big.rank(degree)),
            |i| self.project[i].clone(),
        )
    }

    pub fn project_ref(&self, degree: i64) -> Option<&IntMatrix> {
        self.index(degree).map(|i| &self.project[i])
    }

    /// `h` leaving `degree`: `rank_big(degree+1) × rank_big(degree)`.
    pub fn homotopy(&self, degree: i64) -> IntMatrix {
        self.index(degree).map_or_else(
            || IntMatrix::zeros(self.big.rank(degree + 1), self.big.rank(degree)),
            |i| self.homotopy[i].clone(),
        )
    }

    pub fn homotopy_ref(&self, degree: i64) -> Option<&IntMatrix> {
        self.index(degree).map(|i| &self.homotopy[i])
    }

    /// `None` over the integers, `Some(p)` when entries are residues mod `p`.
    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// Same contraction with every degree shifted up by `by`.
    pub fn shifted(&self, by: i64) -> Contraction {
        Contraction {
            big: self.big.shifted(by),
            small: self.small.shifted(by),
            ..self.clone()
        }
    }

    /// Checks the five contraction identities as matrix equations, returning a
    /// description of the first failure.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let reduce = |m: IntMatrix| match self.modulus {
            Some(p) => m.reduce_mod(&BigInt::from(p)),
            None => m,
        };
        if !self.small.has_zero_differential() {
            return Err("small complex has a nonzero differential".into());
        }
        for d in self.big.degrees() {
            let (i, p) = (self.include(d), self.project(d));
            let pi = reduce(p.mul(&i));
            if pi != IntMatrix::identity(self.small.rank(d)) {
                return Err(format!("p i != 1 in degree {d}"));
            }
            let n = self.big.rank(d);
            let lhs = reduce(IntMatrix::identity(n).sub(&i.mul(&p)));
            let dh = self.big.differential(d + 1).mul(&self.homotopy(d));
            let hd = self.homotopy(d - 1).mul(&self.big.differential(d));
            if lhs != reduce(dh.add(&hd)) {
                return Err(format!("1 - i p != d h + h d in degree {d}"));
            }
            if !reduce(self.homotopy(d).mul(&i)).is_zero() {
                return Err(format!("h i != 0 in degree {d}"));
            }
            if !reduce(self.project(d + 1).mul(&self.homotopy(d))).is_zero() {
                return Err(format!("p h != 0 in degree {d}"));
            }
            if !reduce(self.homotopy(d + 1).mul(&self.homotopy(d))).is_zero() {
                return Err(format!("h h != 0 in degree {d}"));
            }
        }
        Ok(())
    }
}

/// Per-degree adapted basis `[B | H | L]`: boundaries, homology
/// representatives, and a complement of the cycles.
struct AdaptedBasis {
    basis: IntMatrix,
    inverse: IntMatrix,
    boundaries: usize,
    homology: usize,
}

struct Ops {
    modulus: Option<u64>,
}

impl Ops {
    fn snf(&self, m: &IntMatrix) -> SmithForm {
        match self.modulus {
            None => smith_normal_form(m),
            Some(p) => diagonalize_mod(m, p),
        }
    }

    fn reduce(&self, m: IntMatrix) -> IntMatrix {
        match self.modulus {
            Some(p) => m.reduce_mod(&BigInt::from(p)),
            None => m,
        }
    }

    fn mul(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        self.reduce(a.mul(b))
    }

    fn inverse(&self, m: &IntMatrix) -> Option<IntMatrix> {
        match self.modulus {
            None => m.inverse_unimodular(),
            Some(p) => m.inverse_mod(p),
        }
    }
}

/// Contraction of `c` onto its homology over `ring`.
///
/// Over the integers the homology must be torsion-free; an invariant factor
/// greater than one in some differential is reported as
/// [`Error::TorsionObstruction`]. Over the rationals the integral contraction is
/// returned, so the same condition applies. Over `F_p` the entries of the
/// returned maps are residues in `[0, p)`.
pub fn contraction(c: &FreeChainComplex, ring: CoefficientRing) -> Result<Contraction> {
    let ops = Ops {
        modulus: match ring {
            CoefficientRing::PrimeField(p) => Some(p),
            _ => None,
        },
    };
    let big = match ops.modulus {
        Some(p) => reduce_complex(c, p),
        None => c.clone(),
    };

    let mut bases = Vec::new();
    for d in big.degrees() {
        bases.push(adapted_basis(&big, d, &ops)?);
    }

    let lo = big.lo();
    let mut include = Vec::new();
    let mut project = Vec::new();
    let mut homotopy = Vec::new();
    let mut small_ranks = Vec::new();
    for (k, d) in big.degrees().enumerate() {
        let b = &bases[k];
        let n = big.rank(d);
        let h_range = b.boundaries..b.boundaries + b.homology;
        include.push(b.basis.submatrix(0..n, h_range.clone()));
        project.push(b.inverse.submatrix(h_range, 0..n));
        small_ranks.push(b.homology);

        // h: degree d -> d + 1 sends the boundary part of C_d back along the
        // isomorphism L_{d+1} -> B_d.
        let up = big.rank(d + 1);
        if k + 1 < bases.len() {
            let above = &bases[k + 1];
            let l_start = above.boundaries + above.homology;
            let l_cols = above.basis.submatrix(0..up, l_start..up);
            let q = up - l_start;
            // d(L_{d+1}) in the adapted coordinates of C_d
            let image = ops.mul(&b.inverse, &ops.mul(&big.differential(d + 1), &l_cols));
            let t = image.submatrix(0..b.boundaries, 0..q);
            debug_assert!(image.submatrix(b.boundaries..n, 0..q).is_zero());
            let t_inv = ops
                .inverse(&t)
                .ok_or_else(|| Error::Internal(format!("boundary map not invertible in degree {}", d + 1)))?;
            let b_rows = b.inverse.submatrix(0..b.boundaries, 0..n);
            homotopy.push(ops.mul(&l_cols, &ops.mul(&t_inv, &b_rows)));
        } else {
            homotopy.push(IntMatrix::zeros(up, n));
        }
    }

    let small = FreeChainComplex::with_zero_differential(lo, small_ranks);
    Ok(Contraction {
        big,
        small,
        include,
        project,
        homotopy,
        modulus: ops.modulus,
    })
}

fn reduce_complex(c: &FreeChainComplex, p: u64) -> FreeChainComplex {
    let pb = BigInt::from(p);
    let ranks: Vec<usize> = c.degrees().map(|d| c.rank(d)).collect();
    let diffs = (c.lo() + 1..=c.hi())
        .map(|d| c.differential(d).reduce_mod(&pb))
        .collect();
    FreeChainComplex::new_unchecked(c.lo(), ranks, diffs).expect("shapes unchanged")
}

fn adapted_basis(c: &FreeChainComplex, d: i64, ops: &Ops) -> Result<AdaptedBasis> {
    let n = c.rank(d);
    // boundaries: image of the differential entering degree d
    let incoming = c.differential(d + 1);
    let s = ops.snf(&incoming);
    let factors = s.invariant_factors();
    if let Some(f) = factors.iter().find(|x| !x.is_one()) {
        return Err(Error::TorsionObstruction {
            degree: d,
            factor: f.clone(),
        });
    }
    let r = factors.len();
    let u_inv = ops
        .inverse(&s.u)
        .ok_or_else(|| Error::Internal("SNF transform not invertible".into()))?;
    let b_cols = u_inv.submatrix(0..n, 0..r);
    let rest = u_inv.submatrix(0..n, r..n);

    // split the complement of B into cycles and a complement of the cycles
    let outgoing = ops.mul(&c.differential(d), &rest);
    let s2 = ops.snf(&outgoing);
    let q = s2.rank();
    let l_cols = ops.mul(&rest, &s2.v.submatrix(0..n - r, 0..q));
    let h_cols = ops.mul(&rest, &s2.v.submatrix(0..n - r, q..n - r));

    let basis = b_cols.hconcat(&h_cols).hconcat(&l_cols);
    let inverse = ops
        .inverse(&basis)
        .ok_or_else(|| Error::Internal(format!("adapted basis singular in degree {d}")))?;
    Ok(AdaptedBasis {
        basis,
        inverse,
        boundaries: r,
        homology: n - r - q,
    })
}
