use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{lattice_points, LatticePolytope};
use crate::{Error, Result};

/// `E_P(x)` with exact rational coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub coefficients: Vec<BigRational>,
    pub np: usize,
    /// `{-np, ..., -1}`, ascending.
    pub integral_roots: Vec<i64>,
}

impl EhrhartPolynomial {
    pub fn eval(&self, x: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(x));
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// `E_P(x)` at an integer, which is always an integer.
    pub fn eval_int(&self, x: i64) -> BigInt {
        let v = self.eval(x);
        debug_assert!(v.is_integer());
        v.to_integer()
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Lagrange interpolation through `(k, values[k])` for `k = 0..values.len()`.
fn interpolate(values: &[BigInt]) -> Vec<BigRational> {
    let n = values.len();
    let mut acc = vec![BigRational::zero(); n];
    for (k, yk) in values.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == k {
                continue;
            }
            let root = BigRational::from_integer(BigInt::from(j));
            basis = poly_mul(&basis, &[-root, BigRational::one()]);
            denom *= BigRational::from_integer(BigInt::from(k as i64 - j as i64));
        }
        let scale = BigRational::from_integer(yk.clone()) / denom;
        for (a, b) in acc.iter_mut().zip(basis) {
            *a += b * &scale;
        }
    }
    acc
}

/// Interpolates `N_P(k) = #(kP ∩ Z^n)` at `k = 0..=n`. The count at `n + 1`
/// is kept back as a consistency check.
pub fn ehrhart_polynomial(p: &LatticePolytope) -> Result<EhrhartPolynomial> {
    let n = p.dim();
    let counts: Vec<BigInt> = (0..=n as i64)
        .map(|k| BigInt::from(lattice_points(p, k, false).len()))
        .collect();
    let coefficients = interpolate(&counts);
    let mut e = EhrhartPolynomial {
        coefficients,
        np: 0,
        integral_roots: Vec::new(),
    };
    let guard = n as i64 + 1;
    if e.eval(guard) != BigRational::from_integer(BigInt::from(lattice_points(p, guard, false).len())) {
        return Err(Error::InterpolationInconsistent { k: guard });
    }
    let roots: Vec<i64> = (-(n as i64)..=-1).filter(|&k| e.eval(k).is_zero()).collect();
    let np = roots.len();
    // contiguity: the roots are exactly -np..-1
    if roots != (-(np as i64)..=-1).collect::<Vec<_>>() {
        return Err(Error::Internal(format!("integral roots {roots:?} are not contiguous")));
    }
    e.np = np;
    e.integral_roots = roots;
    Ok(e)
}

/// `n_P`, checked against its second description: the least `k >= 0` such
/// that `(k + 1)P` has an interior lattice point.
pub fn np_index(p: &LatticePolytope) -> Result<usize> {
    let e = ehrhart_polynomial(p)?;
    let interior = (0..=p.dim())
        .find(|&k| !lattice_points(p, k as i64 + 1, true).is_empty())
        .unwrap_or(usize::MAX);
    if interior != e.np {
        return Err(Error::CharacterizationMismatch { roots: e.np, interior });
    }
    Ok(e.np)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::facets_from_vertices;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn triangle() {
        let e = ehrhart_polynomial(&LatticePolytope::simplex(2)).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(3, 2), q(1, 2)]);
        assert_eq!(e.np, 2);
        assert_eq!(e.integral_roots, vec![-2, -1]);
    }

    #[test]
    fn square_and_interval() {
        let e = ehrhart_polynomial(&LatticePolytope::cube(2)).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(2, 1), q(1, 1)]);
        let e = ehrhart_polynomial(&LatticePolytope::simplex(1)).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(1, 1)]);
    }

    #[test]
    fn np_values() {
        for n in 1..=4 {
            assert_eq!(np_index(&LatticePolytope::simplex(n)).unwrap(), n);
        }
        assert_eq!(np_index(&LatticePolytope::cube(2)).unwrap(), 1);
        let big = facets_from_vertices(2, vec![vec![0, 0], vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(np_index(&big).unwrap(), 0);
        assert_eq!(np_index(&facets_from_vertices(0, vec![vec![]]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn reciprocity_and_extrapolation() {
        let polys = [
            LatticePolytope::simplex(2),
            LatticePolytope::simplex(3),
            LatticePolytope::cube(3),
            LatticePolytope::lattice_box(&[1, 2]),
        ];
        for p in &polys {
            let n = p.dim() as i64;
            let e = ehrhart_polynomial(p).unwrap();
            assert!(e.coefficients[0].is_one());
            assert!(e.coefficients[n as usize] > BigRational::zero());
            for k in 1..=n + 1 {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                let interior = lattice_points(p, k, true).len() as i64;
                assert_eq!(e.eval_int(-k) * sign, BigInt::from(interior));
            }
            for k in [n + 1, n + 2] {
                assert_eq!(e.eval_int(k), BigInt::from(lattice_points(p, k, false).len()));
            }
        }
    }
}
