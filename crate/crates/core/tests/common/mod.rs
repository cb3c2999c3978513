//! Shared fixtures: sample polytopes, seeded random complexes and the
//! long-exact-sequence oracle for two-level twist complexes.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_cech::linalg::{complex_homology, CoefficientRing, FreeChainComplex, HomologyResult, IntMatrix};
use toric_cech::polytope::{lattice_points, LatticePolytope};
use toric_cech::sheaf::{MonomialEntry, TwistComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Δ¹, Δ², Δ³, the unit square, the unit cube and `[0,1] × [0,2]`.
pub fn sample_polytopes() -> Vec<(&'static str, LatticePolytope)> {
    vec![
        ("interval", LatticePolytope::simplex(1)),
        ("triangle", LatticePolytope::simplex(2)),
        ("tetrahedron", LatticePolytope::simplex(3)),
        ("square", LatticePolytope::cube(2)),
        ("cube", LatticePolytope::cube(3)),
        ("rectangle", LatticePolytope::lattice_box(&[1, 2])),
    ]
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> IntMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(density) {
                BigInt::from(rng.gen_range(-3i64..=3))
            } else {
                BigInt::from(0)
            }
        })
        .collect();
    IntMatrix::from_vec(rows, cols, data)
}

/// A finite free complex over Z with entries in `[-3, 3]`: two or three
/// nonzero terms, the three-term ones found by rejection.
pub fn random_free_complex(rng: &mut ChaCha8Rng) -> FreeChainComplex {
    let lo = rng.gen_range(-1i64..=1);
    loop {
        let three = rng.gen_bool(0.5);
        let ranks: Vec<usize> = (0..if three { 3 } else { 2 }).map(|_| rng.gen_range(1..=3)).collect();
        let diffs: Vec<IntMatrix> = (1..ranks.len())
            .map(|i| random_matrix(rng, ranks[i - 1], ranks[i], if three { 0.35 } else { 0.7 }))
            .collect();
        if let Ok(c) = FreeChainComplex::new(lo, ranks, diffs) {
            if !three || !c.has_zero_differential() {
                return c;
            }
        }
    }
}

fn random_entry(rng: &mut ChaCha8Rng, p: &LatticePolytope, a: i64, b: i64) -> MonomialEntry {
    let pts = lattice_points(p, b - a, false);
    if b < a || pts.is_empty() {
        return MonomialEntry::zero();
    }
    let terms = rng.gen_range(0..=2);
    MonomialEntry::from_terms((0..terms).map(|_| {
        let c = *[-2i64, -1, 1, 1, 2, 3].choose(rng).unwrap();
        (BigInt::from(c), pts.choose(rng).unwrap().clone())
    }))
}

/// `Y_1 -> Y_0` with one or two summands per level and random monomial
/// entries; `d ∘ d = 0` holds vacuously.
pub fn random_two_level(rng: &mut ChaCha8Rng, p: &LatticePolytope) -> TwistComplex {
    let source: Vec<i64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(-3i64..=1)).collect();
    let target: Vec<i64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(-3i64..=2)).collect();
    let d = target
        .iter()
        .map(|&b| source.iter().map(|&a| random_entry(rng, p, a, b)).collect())
        .collect();
    let lo = rng.gen_range(-1i64..=1);
    TwistComplex::new(lo, vec![target, source], vec![d]).unwrap()
}

/// `O(a) -> O(a+1)^2 -> O(a+2)` with differentials `(x^u, x^v)ᵀ` and
/// `(x^v, -x^u)`.
pub fn random_koszul(rng: &mut ChaCha8Rng, p: &LatticePolytope) -> TwistComplex {
    let pts = lattice_points(p, 1, false);
    let u = pts.choose(rng).unwrap().clone();
    let v = pts.choose(rng).unwrap().clone();
    let a = rng.gen_range(-3i64..=0);
    let m = |c: i64, w: &Vec<i64>| MonomialEntry::monomial(c, w.clone());
    TwistComplex::new(
        0,
        vec![vec![a + 2], vec![a + 1, a + 1], vec![a]],
        vec![vec![vec![m(1, &v), m(-1, &u)]], vec![vec![m(1, &u)], vec![m(1, &v)]]],
    )
    .unwrap()
}

/// A direct sum of one to three random pieces, suspended at random.
pub fn random_twist_complex(rng: &mut ChaCha8Rng, p: &LatticePolytope) -> TwistComplex {
    let mut y = TwistComplex::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let piece = match rng.gen_range(0..3) {
            0 => TwistComplex::line_bundle(rng.gen_range(-4i64..=2)),
            1 => random_two_level(rng, p),
            _ => random_koszul(rng, p),
        };
        y = y.direct_sum(&piece.suspend(rng.gen_range(-1i64..=1)));
    }
    y
}

/// Homology of `Γ̌(Y)` for a two-level `Y` from explicit cycle data.
///
/// Each summand `O(k)` contributes one class per support multidegree: the
/// vertex-level cycle of the full column in Čech degree `n` (`k >= 0`), or
/// the top cell in degree 0 (`k < 0`, interior points). A monomial `c x^u`
/// sends the class at `m` to `c` times the class at `m + u` when that is a
/// class of the same Čech degree, and to a boundary otherwise. With two
/// levels the E¹ differential is the only one, so the answer is the homology
/// of these induced maps, one two-term complex per Čech degree.
pub fn les_oracle(p: &LatticePolytope, y: &TwistComplex, ring: CoefficientRing) -> HomologyResult {
    let n = p.dim();
    let t0 = y.lo();
    assert!(y.hi() <= t0 + 1, "two levels at most");
    let classes = |t: i64, s: usize| -> Vec<(usize, Vec<i64>)> {
        let mut out = Vec::new();
        for (c, &k) in y.level(t).iter().enumerate() {
            let degree = if k >= 0 { n } else { 0 };
            if degree != s {
                continue;
            }
            for m in lattice_points(p, k, k < 0) {
                out.push((c, m));
            }
        }
        out
    };
    let mut total = HomologyResult::default();
    let degrees: Vec<usize> = if n == 0 { vec![0] } else { vec![0, n] };
    for s in degrees {
        let rows = classes(t0, s);
        let cols = classes(t0 + 1, s);
        let mut f = IntMatrix::zeros(rows.len(), cols.len());
        if let Some(d) = y.differential(t0 + 1) {
            for (j, (c, m)) in cols.iter().enumerate() {
                for (r, row) in d.iter().enumerate() {
                    for (u, coeff) in row[*c].terms() {
                        let target: Vec<i64> = m.iter().zip(u).map(|(a, b)| a + b).collect();
                        if let Some(i) = rows.iter().position(|(rr, mm)| *rr == r && *mm == target) {
                            f[(i, j)] += coeff;
                        }
                    }
                }
            }
        }
        let two_term = FreeChainComplex::new(s as i64 + t0, vec![rows.len(), cols.len()], vec![f]).unwrap();
        total = total.direct_sum(&complex_homology(&two_term, ring).unwrap());
    }
    total
}
