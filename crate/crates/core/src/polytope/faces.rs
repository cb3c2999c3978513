use std::collections::{BTreeSet, HashMap};

use super::{affine_rank, LatticePolytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub dim: usize,
    /// Sorted indices into `LatticePolytope::vertices`.
    pub vertices: Vec<usize>,
    /// Sorted indices of the facets whose hyperplanes contain the face.
    pub tight_facets: Vec<usize>,
}

/// The nonempty faces of `P` ordered by dimension, then by vertex set. The
/// polytope itself is the last face.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
    by_vertices: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn top(&self) -> &Face {
        self.faces.last().expect("a polytope has at least one face")
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    pub fn find_by_vertices(&self, vertices: &[usize]) -> Option<&Face> {
        self.by_vertices.get(vertices).map(|&i| &self.faces[i])
    }

    /// `f ⊆ g`.
    pub fn contains(&self, g: &Face, f: &Face) -> bool {
        is_subset(&f.vertices, &g.vertices)
    }

    /// The smallest face containing both: the face on which exactly the
    /// common tight facets are tight.
    pub fn join(&self, f: &Face, g: &Face) -> &Face {
        let common: BTreeSet<usize> = f
            .tight_facets
            .iter()
            .filter(|i| g.tight_facets.contains(i))
            .copied()
            .collect();
        self.faces
            .iter()
            .find(|h| h.tight_facets.iter().copied().collect::<BTreeSet<_>>() == common)
            .expect("the face lattice is closed under joins")
    }

    /// Faces of `g` of dimension `dim g - 1`.
    pub fn facets_of<'a>(&'a self, g: &'a Face) -> impl Iterator<Item = &'a Face> + 'a {
        self.faces
            .iter()
            .filter(move |f| f.dim + 1 == g.dim && is_subset(&f.vertices, &g.vertices))
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Enumerates all nonempty faces as intersections of `P` with sets of facet
/// hyperplanes, deduplicated by vertex set.
pub fn face_lattice(p: &LatticePolytope) -> FaceLattice {
    let on_facet: Vec<Vec<usize>> = p
        .facets()
        .iter()
        .map(|f| {
            (0..p.vertices().len())
                .filter(|&v| f.eval(&p.vertices()[v]) == f.offset)
                .collect()
        })
        .collect();

    let all: Vec<usize> = (0..p.vertices().len()).collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![all.clone()];
    found.insert(all);
    while let Some(vs) = stack.pop() {
        for facet_vertices in &on_facet {
            let meet: Vec<usize> = vs.iter().copied().filter(|v| facet_vertices.contains(v)).collect();
            if !meet.is_empty() && found.insert(meet.clone()) {
                stack.push(meet);
            }
        }
    }

    let mut faces: Vec<Face> = found
        .into_iter()
        .map(|vertices| {
            let coords = vertices.iter().map(|&v| &p.vertices()[v]);
            let dim = affine_rank(coords);
            let tight_facets = (0..p.facets().len())
                .filter(|&i| vertices.iter().all(|v| on_facet[i].contains(v)))
                .collect();
            Face {
                id: 0,
                dim,
                vertices,
                tight_facets,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let mut by_vertices = HashMap::new();
    for (i, f) in faces.iter_mut().enumerate() {
        f.id = i;
        by_vertices.insert(f.vertices.clone(), i);
    }
    FaceLattice {
        dim: p.dim(),
        faces,
        by_vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cone_membership, facets_from_vertices, LatticePolytope};

    #[test]
    fn face_counts() {
        assert_eq!(face_lattice(&LatticePolytope::simplex(2)).len(), 7);
        assert_eq!(face_lattice(&LatticePolytope::cube(2)).len(), 9);
        assert_eq!(face_lattice(&LatticePolytope::simplex(3)).len(), 15);
        assert_eq!(face_lattice(&LatticePolytope::cube(3)).len(), 27);
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
        // 6 + 12 + 8 + 1
        assert_eq!(face_lattice(&octahedron).len(), 27);
    }

    #[test]
    fn exactly_one_top_face() {
        let l = face_lattice(&LatticePolytope::cube(3));
        assert_eq!(l.of_dim(3).count(), 1);
        assert!(l.top().tight_facets.is_empty());
        assert_eq!(l.top().vertices.len(), 8);
    }

    #[test]
    fn join_in_triangle() {
        let p = LatticePolytope::simplex(2);
        let l = face_lattice(&p);
        let v0 = l.find_by_vertices(&[0]).unwrap();
        let v1 = l.find_by_vertices(&[1]).unwrap();
        let edge = l.find_by_vertices(&[0, 1]).unwrap();
        assert_eq!(l.join(v0, v1), edge);
        assert_eq!(l.join(v0, v0), v0);
        for f in l.faces() {
            assert_eq!(l.join(f, l.top()), l.top());
        }
    }

    #[test]
    fn join_is_closed_commutative_associative() {
        let l = face_lattice(&LatticePolytope::cube(3));
        for f in l.faces() {
            for g in l.faces() {
                let j = l.join(f, g);
                assert_eq!(j, l.join(g, f));
                assert!(l.contains(j, f) && l.contains(j, g));
                // minimality: every face containing both contains the join
                for h in l.faces() {
                    if l.contains(h, f) && l.contains(h, g) {
                        assert!(l.contains(h, j));
                    }
                }
            }
        }
        for f in l.faces().iter().step_by(3) {
            for g in l.faces().iter().step_by(2) {
                for h in l.faces().iter().step_by(5) {
                    assert_eq!(l.join(l.join(f, g), h), l.join(f, l.join(g, h)));
                }
            }
        }
    }

    #[test]
    fn dilation_preserves_lattice_and_cones() {
        let p = facets_from_vertices(2, vec![vec![0, 0], vec![2, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let q = p.dilate(2);
        let (lp, lq) = (face_lattice(&p), face_lattice(&q));
        assert_eq!(lp.len(), lq.len());
        for (f, g) in lp.faces().iter().zip(lq.faces()) {
            assert_eq!(f.vertices, g.vertices);
            assert_eq!(f.tight_facets, g.tight_facets);
            for m in crate::polytope::box_points(&[-3, -3], &[3, 3]) {
                assert_eq!(cone_membership(&p, f, 0, &m), cone_membership(&q, g, 0, &m));
            }
        }
    }
}
