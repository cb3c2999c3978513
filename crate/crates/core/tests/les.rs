//! Two-level complexes against the long exact sequence of their columns.

mod common;

use toric_cech::cech::Cech;
use toric_cech::linalg::CoefficientRing;
use toric_cech::sheaf::{cone, ChainMap, MonomialEntry, TwistComplex};

#[test]
fn random_two_level_complexes() {
    let mut rng = common::rng(23);
    for (name, p) in common::sample_polytopes() {
        if name == "cube" || name == "tetrahedron" {
            continue;
        }
        let c = Cech::new(&p).unwrap();
        for _ in 0..8 {
            let y = common::random_two_level(&mut rng, &p);
            for ring in [CoefficientRing::Integers, CoefficientRing::prime_field(2).unwrap()] {
                assert_eq!(
                    c.cech_homology(&y, ring).unwrap().homology,
                    common::les_oracle(&p, &y, ring),
                    "{name}: {y:?}"
                );
            }
        }
    }
}

#[test]
fn monomial_multiplication_on_the_triangle() {
    let p = toric_cech::polytope::LatticePolytope::simplex(2);
    let c = Cech::new(&p).unwrap();
    // x^u : O(-3) -> O(0) hits no interior point class, x^0 : O(0) -> O(1) injects
    for (a, b, u) in [
        (-3, 0, vec![1, 1]),
        (0, 1, vec![0, 0]),
        (-3, -2, vec![0, 1]),
        (1, 2, vec![1, 0]),
    ] {
        let f = ChainMap::new().with_level(0, vec![vec![MonomialEntry::monomial(2, u)]]);
        let y = cone(&f, &TwistComplex::line_bundle(a), &TwistComplex::line_bundle(b), &p).unwrap();
        let z = CoefficientRing::Integers;
        assert_eq!(c.cech_homology(&y, z).unwrap().homology, common::les_oracle(&p, &y, z));
    }
}
