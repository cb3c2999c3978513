//! Incidence numbers `[F:G] ∈ {-1, 0, 1}` for the face lattice.
//!
//! Every face `G` of dimension `e` is oriented by an ordered affine basis
//! read off its sorted vertex list: starting from the first vertex `v_0`,
//! a vertex `v` is taken whenever `v - v_0` is independent of the vectors
//! chosen so far. For a facet `F` of `G` the boundary orientation is
//! "outward vector first": `[F:G]` is the sign of
//! `det(w, B_F)` in the basis `B_G`, with `w` pointing from `G` across `F`.
//! These are the boundary signs of cellular homology, so `∂∂ = 0`.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::linalg::IntMatrix;
use crate::polytope::{for_each_subset, sub, Face, FaceLattice, LatticePolytope, Point};
use crate::{Error, Result};

/// Which vertex order fixes the orientation bases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VertexOrder {
    #[default]
    Lexicographic,
    ReverseLexicographic,
}

/// Signs `[F:G]` for each pair with `F` a facet of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSystem {
    order: VertexOrder,
    signs: BTreeMap<(usize, usize), i8>,
}

impl IncidenceSystem {
    pub fn order(&self) -> VertexOrder {
        self.order
    }

    /// `[F:G]` by face id; zero unless `F` is a facet of `G`.
    pub fn get(&self, f: usize, g: usize) -> i64 {
        self.signs.get(&(f, g)).map_or(0, |&s| s as i64)
    }

    /// All nonzero numbers, keyed by `(facet, face)` ids.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.signs.iter().map(|(&k, &s)| (k, s as i64))
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Codimension-2 flags `H ⊂ K` with `Σ_G [H:G][G:K] ≠ 0`.
    pub fn square_zero_violations(&self, lattice: &FaceLattice) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for k in lattice.faces() {
            for h in lattice.faces() {
                if h.dim + 2 != k.dim || !lattice.contains(k, h) {
                    continue;
                }
                let sum: i64 = lattice
                    .facets_of(k)
                    .filter(|g| lattice.contains(g, h))
                    .map(|g| self.get(h.id, g.id) * self.get(g.id, k.id))
                    .sum();
                if sum != 0 {
                    bad.push((h.id, k.id));
                }
            }
        }
        bad
    }
}

fn sorted_vertices<'a>(p: &'a LatticePolytope, face: &Face, order: VertexOrder) -> Vec<&'a Point> {
    let mut vs: Vec<&Point> = face.vertices.iter().map(|&i| &p.vertices()[i]).collect();
    vs.sort();
    if order == VertexOrder::ReverseLexicographic {
        vs.reverse();
    }
    vs
}

/// Greedy affine basis `v - v_0` from the ordered vertex list.
fn oriented_basis(p: &LatticePolytope, face: &Face, order: VertexOrder) -> Result<Vec<Point>> {
    let vs = sorted_vertices(p, face, order);
    let mut basis: Vec<Point> = Vec::new();
    for v in &vs[1..] {
        if basis.len() == face.dim {
            break;
        }
        let mut candidate = basis.clone();
        candidate.push(sub(v, vs[0]));
        if IntMatrix::from_rows(&candidate).rank() == candidate.len() {
            basis = candidate;
        }
    }
    if basis.len() != face.dim {
        return Err(Error::DegenerateBasis { face: face.id });
    }
    Ok(basis)
}

/// First coordinate subset on which the rows have a nonzero maximal minor,
/// with the sign of that minor.
fn coordinate_chart(rows: &[Point], n: usize) -> Option<(Vec<usize>, i64)> {
    let mut found = None;
    for_each_subset(n, rows.len(), |cols| {
        if found.is_some() {
            return;
        }
        let det = restricted_det(rows, cols);
        if det != 0 {
            found = Some((cols.to_vec(), det));
        }
    });
    found
}

fn restricted_det(rows: &[Point], cols: &[usize]) -> i64 {
    let minor: Vec<Vec<i64>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
    let det = IntMatrix::from_rows(&minor).determinant();
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

pub fn incidence_numbers(lattice: &FaceLattice, p: &LatticePolytope) -> Result<IncidenceSystem> {
    incidence_numbers_with_order(lattice, p, VertexOrder::Lexicographic)
}

pub fn incidence_numbers_with_order(
    lattice: &FaceLattice,
    p: &LatticePolytope,
    order: VertexOrder,
) -> Result<IncidenceSystem> {
    let n = p.dim();
    let bases: Vec<Vec<Point>> = lattice
        .faces()
        .iter()
        .map(|f| oriented_basis(p, f, order))
        .collect::<Result<_>>()?;

    let mut signs = BTreeMap::new();
    for g in lattice.faces().iter().filter(|g| g.dim > 0) {
        let (cols, g_sign) = coordinate_chart(&bases[g.id], n).ok_or(Error::DegenerateBasis { face: g.id })?;
        for f in lattice.facets_of(g) {
            let f0 = sorted_vertices(p, f, order)[0];
            let outside = sorted_vertices(p, g, order)
                .into_iter()
                .find(|v| !f.vertices.iter().any(|&i| &p.vertices()[i] == *v))
                .expect("a facet misses some vertex of the face");
            let mut rows = vec![sub(f0, outside)];
            rows.extend(bases[f.id].iter().cloned());
            let s = restricted_det(&rows, &cols);
            if s == 0 {
                return Err(Error::DegenerateBasis { face: f.id });
            }
            signs.insert((f.id, g.id), (s * g_sign) as i8);
        }
    }
    Ok(IncidenceSystem { order, signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{face_lattice, facets_from_vertices};

    fn system(p: &LatticePolytope, order: VertexOrder) -> (FaceLattice, IncidenceSystem) {
        let l = face_lattice(p);
        let s = incidence_numbers_with_order(&l, p, order).unwrap();
        (l, s)
    }

    #[test]
    fn interval_signs_are_opposite() {
        let (l, s) = system(&LatticePolytope::simplex(1), VertexOrder::Lexicographic);
        let top = l.top().id;
        let signs: Vec<i64> = l.of_dim(0).map(|v| s.get(v.id, top)).collect();
        assert_eq!(signs.len(), 2);
        assert_eq!(signs[0], -signs[1]);
    }

    #[test]
    fn square_counts_and_flags() {
        let (l, s) = system(&LatticePolytope::cube(2), VertexOrder::Lexicographic);
        assert_eq!(s.len(), 8 + 4);
        assert!(s.square_zero_violations(&l).is_empty());
    }

    #[test]
    fn square_zero_on_samples() {
        let octahedron = facets_from_vertices(
            3,
            vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ],
        )
        .unwrap();
        let samples = [
            LatticePolytope::simplex(3),
            LatticePolytope::cube(3),
            LatticePolytope::simplex(4),
            LatticePolytope::lattice_box(&[1, 2]),
            octahedron,
        ];
        for p in &samples {
            for order in [VertexOrder::Lexicographic, VertexOrder::ReverseLexicographic] {
                let (l, s) = system(p, order);
                assert!(s.square_zero_violations(&l).is_empty(), "{p:?}");
                for ((f, g), sign) in s.pairs() {
                    assert_eq!(l.face(f).dim + 1, l.face(g).dim);
                    assert!(sign == 1 || sign == -1);
                }
            }
        }
    }

    #[test]
    fn reversal_flips_some_signs() {
        let p = LatticePolytope::simplex(2);
        let (_, a) = system(&p, VertexOrder::Lexicographic);
        let (_, b) = system(&p, VertexOrder::ReverseLexicographic);
        assert_eq!(a.len(), b.len());
        assert_ne!(a, b);
    }
}
