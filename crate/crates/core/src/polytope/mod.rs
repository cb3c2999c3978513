//! Full-dimensional lattice polytopes `P = {x : <a_i, x> >= b_i}`.

mod ehrhart;
mod faces;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::linalg::IntMatrix;
use crate::{Error, Result};

pub use ehrhart::{ehrhart_polynomial, np_index, EhrhartPolynomial};
pub use faces::{face_lattice, Face, FaceLattice};

pub type Point = Vec<i64>;

/// The inequality `<normal, x> >= offset`, with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn eval(&self, x: &[i64]) -> i64 {
        dot(&self.normal, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Affine rank of a point set: the dimension of its affine hull.
pub(crate) fn affine_rank<'a>(points: impl IntoIterator<Item = &'a Point>) -> usize {
    let mut it = points.into_iter();
    let Some(base) = it.next() else { return 0 };
    let rows: Vec<Vec<i64>> = it.map(|p| sub(p, base)).collect();
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    IntMatrix::from_rows(&rows).rank()
}

/// Generalized cross product: a vector orthogonal to the `n - 1` given rows of
/// length `n`, zero when they are dependent.
fn orthogonal_vector(rows: &[Point], n: usize) -> Vec<i64> {
    (0..n)
        .map(|skip| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let det = if minor.is_empty() {
                BigInt::from(1)
            } else {
                IntMatrix::from_rows(&minor).determinant()
            };
            let det = det.to_i64().expect("normal coordinate fits in i64");
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Convex hull of integral points, given by its irredundant facet inequalities.
///
/// Every `n`-subset of the vertices spanning a hyperplane is tested for
/// one-sidedness; this is quadratic-ish in the subset count and meant for
/// small polytopes.
pub fn facets_from_vertices(dim: usize, vertices: Vec<Point>) -> Result<LatticePolytope> {
    for (index, v) in vertices.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::WrongDimension {
                index,
                dim,
                found: v.len(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for (i, v) in vertices.iter().enumerate() {
        if !seen.insert(v.clone()) {
            return Err(Error::DuplicateVertex(i));
        }
    }
    if vertices.len() < dim + 1 || affine_rank(&vertices) < dim {
        return Err(Error::NotFullDimensional { dim });
    }

    let mut facets = BTreeSet::new();
    if dim > 0 {
        for_each_subset(vertices.len(), dim, |subset| {
            let base = &vertices[subset[0]];
            let rows: Vec<Point> = subset[1..].iter().map(|&i| sub(&vertices[i], base)).collect();
            let normal = orthogonal_vector(&rows, dim);
            if normal.iter().all(|&x| x == 0) {
                return;
            }
            let mut normal = primitive(normal);
            let mut offset = dot(&normal, base);
            let (mut above, mut below) = (false, false);
            for v in &vertices {
                let s = dot(&normal, v) - offset;
                above |= s > 0;
                below |= s < 0;
            }
            if above && below {
                return;
            }
            if below {
                normal.iter_mut().for_each(|x| *x = -*x);
                offset = -offset;
            }
            facets.insert(Facet { normal, offset });
        });
    }
    let facets: Vec<Facet> = facets.into_iter().collect();

    // a vertex lies on facets whose normals span R^n
    for (i, v) in vertices.iter().enumerate() {
        let tight: Vec<Vec<i64>> = facets
            .iter()
            .filter(|f| f.eval(v) == f.offset)
            .map(|f| f.normal.clone())
            .collect();
        let rank = if tight.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&tight).rank()
        };
        if rank < dim {
            return Err(Error::NotAVertex(i));
        }
    }

    Ok(LatticePolytope { dim, vertices, facets })
}

impl LatticePolytope {
    /// `conv{0, e_1, ..., e_n}`.
    pub fn simplex(n: usize) -> Self {
        let mut vertices = vec![vec![0; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            vertices.push(e);
        }
        facets_from_vertices(n, vertices).expect("standard simplex is valid")
    }

    /// The box `[0, l_1] × ... × [0, l_n]`.
    pub fn lattice_box(lengths: &[i64]) -> Self {
        let n = lengths.len();
        let mut vertices = Vec::new();
        for mask in 0..(1usize << n) {
            vertices.push(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { lengths[i] } else { 0 })
                    .collect(),
            );
        }
        facets_from_vertices(n, vertices).expect("box with positive side lengths")
    }

    pub fn cube(n: usize) -> Self {
        Self::lattice_box(&vec![1; n])
    }

    /// `k P` for `k >= 1`, vertices in the same order.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k >= 1, "dilation factor must be positive");
        LatticePolytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * k).collect())
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset * k,
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// `conv{0, e_1, ..., e_n}` up to vertex order.
    pub fn is_standard_simplex(&self) -> bool {
        let standard: BTreeSet<Point> = Self::simplex(self.dim).vertices.into_iter().collect();
        let mine: BTreeSet<Point> = self.vertices.iter().cloned().collect();
        standard == mine
    }

    /// Membership of `x` in the inequality set `{<a_i, x> >= k b_i}`, which is
    /// `kP` for `k >= 0` and empty for `k < 0` (for `n >= 1`).
    pub fn satisfies_dilated(&self, k: i64, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(x) >= k * f.offset)
    }

    /// Membership of `x` in the dilate `kP`, for any sign of `k`.
    pub fn dilate_contains(&self, k: i64, x: &[i64], interior: bool) -> bool {
        self.facets.iter().all(|f| {
            let (lhs, rhs) = (f.eval(x), k * f.offset);
            match (k >= 0, interior) {
                (true, false) => lhs >= rhs,
                (true, true) => lhs > rhs,
                (false, false) => lhs <= rhs,
                (false, true) => lhs < rhs,
            }
        })
    }

    /// Integer bounding box `[lo, hi]` of `kP`.
    pub fn bounding_box(&self, k: i64) -> (Point, Point) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                lo[i] = lo[i].min(k * v[i]);
                hi[i] = hi[i].max(k * v[i]);
            }
        }
        (lo, hi)
    }
}

/// Every integer point of the box `[lo, hi]`, lexicographically.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Point> {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                cur[i + 1..n].copy_from_slice(&lo[i + 1..n]);
                break;
            }
        }
    }
}

/// Integral points of `kP` (or of its interior), found by scanning the
/// bounding box. Negative `k` reverses the inequalities.
pub fn lattice_points(p: &LatticePolytope, k: i64, interior: bool) -> Vec<Point> {
    let (lo, hi) = p.bounding_box(k);
    box_points(&lo, &hi)
        .into_iter()
        .filter(|x| p.dilate_contains(k, x, interior))
        .collect()
}

/// `m ∈ kF + T_F`, tested on the facets tight at `F`.
pub fn cone_membership(p: &LatticePolytope, face: &Face, k: i64, m: &[i64]) -> bool {
    face.tight_facets
        .iter()
        .all(|&i| p.facets[i].eval(m) >= k * p.facets[i].offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force facet oracle: all lines through vertex pairs (in R^2) that
    /// leave every vertex on one side.
    fn planar_facets_oracle(vertices: &[Point]) -> BTreeSet<Facet> {
        let mut out = BTreeSet::new();
        for i in 0..vertices.len() {
            for j in 0..vertices.len() {
                if i == j {
                    continue;
                }
                let d = sub(&vertices[j], &vertices[i]);
                let normal = primitive(vec![-d[1], d[0]]);
                let offset = dot(&normal, &vertices[i]);
                if vertices.iter().all(|v| dot(&normal, v) >= offset) {
                    out.insert(Facet { normal, offset });
                }
            }
        }
        out
    }

    #[test]
    fn triangle_facets() {
        let v = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let p = facets_from_vertices(2, v.clone()).unwrap();
        let expected: BTreeSet<Facet> = [
            Facet {
                normal: vec![1, 0],
                offset: 0,
            },
            Facet {
                normal: vec![0, 1],
                offset: 0,
            },
            Facet {
                normal: vec![-1, -1],
                offset: -1,
            },
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<Facet> = p.facets().iter().cloned().collect();
        assert_eq!(got, expected);
        assert_eq!(got, planar_facets_oracle(&v));
    }

    #[test]
    fn square_facets() {
        let v = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let p = facets_from_vertices(2, v.clone()).unwrap();
        assert_eq!(p.facets().len(), 4);
        let got: BTreeSet<Facet> = p.facets().iter().cloned().collect();
        assert_eq!(got, planar_facets_oracle(&v));
    }

    #[test]
    fn degenerate_inputs() {
        let line = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert!(matches!(
            facets_from_vertices(2, line),
            Err(Error::NotFullDimensional { dim: 2 })
        ));
        let dup = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 0]];
        assert!(matches!(facets_from_vertices(2, dup), Err(Error::DuplicateVertex(3))));
        let inner = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 0]];
        assert!(matches!(facets_from_vertices(2, inner), Err(Error::NotAVertex(3))));
    }

    #[test]
    fn point_polytope() {
        let p = facets_from_vertices(0, vec![vec![]]).unwrap();
        assert!(p.facets().is_empty());
        assert_eq!(lattice_points(&p, 5, false), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn lattice_point_counts() {
        let tri = LatticePolytope::simplex(2);
        assert_eq!(lattice_points(&tri, 2, false).len(), 6);
        for p in [LatticePolytope::simplex(3), LatticePolytope::cube(2)] {
            assert_eq!(lattice_points(&p, 0, false), vec![vec![0; p.dim()]]);
        }
        assert_eq!(lattice_points(&LatticePolytope::cube(2), 2, true), vec![vec![1, 1]]);
        assert_eq!(lattice_points(&LatticePolytope::simplex(1), -2, true), vec![vec![-1]]);
    }

    #[test]
    fn cube_has_six_facets() {
        let c = LatticePolytope::cube(3);
        assert_eq!(c.facets().len(), 6);
        assert!(LatticePolytope::simplex(3).is_standard_simplex());
        assert!(!c.is_standard_simplex());
    }
}
