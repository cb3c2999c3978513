//! The perturbed transfer against homology of the directly assembled
//! total complex of the same column blocks.

mod common;

use std::collections::BTreeSet;

use toric_cech::cech::{BlockKey, BlockSystem, Cech};
use toric_cech::linalg::{complex_homology, CoefficientRing, HomologyResult};
use toric_cech::polytope::LatticePolytope;
use toric_cech::sheaf::TwistComplex;

fn support_seeds(c: &Cech, y: &TwistComplex) -> BTreeSet<BlockKey> {
    let mut seeds = BTreeSet::new();
    for (t, summands) in y.levels() {
        for (i, &k) in summands.iter().enumerate() {
            for m in c.support_table(k).multidegrees {
                seeds.insert(BlockKey {
                    level: t,
                    summand: i,
                    m,
                });
            }
        }
    }
    seeds
}

/// Everything reachable from the supports is a subcomplex whose quotient is
/// filtered by acyclic columns, so its homology is the full answer.
fn direct(c: &Cech, y: &TwistComplex, ring: CoefficientRing) -> HomologyResult {
    let system = BlockSystem::forward_closure(c, y, support_seeds(c, y));
    complex_homology(&system.total_complex(), ring).unwrap()
}

fn polytopes() -> Vec<LatticePolytope> {
    vec![
        LatticePolytope::simplex(1),
        LatticePolytope::simplex(2),
        LatticePolytope::cube(2),
        LatticePolytope::lattice_box(&[1, 2]),
    ]
}

#[test]
fn random_complexes_over_the_integers() {
    let mut rng = common::rng(7);
    for p in polytopes() {
        let c = Cech::new(&p).unwrap();
        for _ in 0..6 {
            let y = common::random_twist_complex(&mut rng, &p);
            let via_transfer = c.cech_homology(&y, CoefficientRing::Integers).unwrap().homology;
            assert_eq!(via_transfer, direct(&c, &y, CoefficientRing::Integers), "{y:?}");
        }
    }
}

#[test]
fn random_complexes_over_prime_fields() {
    let mut rng = common::rng(11);
    for p in polytopes() {
        let c = Cech::new(&p).unwrap();
        for prime in [2, 3] {
            let ring = CoefficientRing::prime_field(prime).unwrap();
            for _ in 0..3 {
                let y = common::random_twist_complex(&mut rng, &p);
                assert_eq!(c.cech_homology(&y, ring).unwrap().homology, direct(&c, &y, ring));
            }
        }
    }
}

#[test]
fn rationals_see_only_free_ranks() {
    let mut rng = common::rng(13);
    let p = LatticePolytope::simplex(2);
    let c = Cech::new(&p).unwrap();
    for _ in 0..6 {
        let y = common::random_twist_complex(&mut rng, &p);
        let z = c.cech_homology(&y, CoefficientRing::Integers).unwrap().homology;
        let q = c.cech_homology(&y, CoefficientRing::Rationals).unwrap().homology;
        for d in -3..=6 {
            assert_eq!(z.free_rank(d), q.free_rank(d));
            assert!(q.torsion(d).is_empty());
        }
    }
}

#[test]
fn pruning_only_drops_blocks() {
    let mut rng = common::rng(17);
    let p = LatticePolytope::cube(2);
    let c = Cech::new(&p).unwrap();
    for _ in 0..5 {
        let y = common::random_twist_complex(&mut rng, &p);
        let seeds = support_seeds(&c, &y);
        let full = BlockSystem::forward_closure(&c, &y, seeds.iter().cloned());
        let mut pruned = full.clone();
        pruned.retain_reaching(&seeds);
        assert!(pruned.len() <= full.len());
        let kept: BTreeSet<_> = pruned.keys().cloned().collect();
        assert!(seeds.is_subset(&kept));
        assert_eq!(
            c.cech_homology(&y, CoefficientRing::Integers).unwrap().active_columns,
            pruned.len()
        );
    }
}
