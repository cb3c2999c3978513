//! The `verify` command: a battery of exact self-checks on one polytope.

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::cech::{simplex_cone_check, Cech};
use crate::linalg::{CoefficientRing, FreeChainComplex, IntMatrix};
use crate::polytope::{lattice_points, LatticePolytope};
use crate::sheaf::TwistComplex;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "all_passed": self.all_passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

fn record(checks: &mut Vec<Check>, name: &str, outcome: Result<(bool, String)>) {
    let (passed, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, e.to_string()),
    };
    checks.push(Check {
        name: name.to_string(),
        passed,
        detail,
    });
}

/// Small complexes with known homology: `Z`, `Z --2--> Z`, `Z --1--> Z` and
/// `Z --(3 0)ᵀ--> Z^2 --(0 5)--> Z`.
pub fn sample_complexes() -> Vec<FreeChainComplex> {
    vec![
        FreeChainComplex::with_zero_differential(0, vec![1]),
        FreeChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap(),
        FreeChainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).unwrap(),
        FreeChainComplex::new(
            -1,
            vec![1, 2, 1],
            vec![
                IntMatrix::from_rows(&[vec![0, 5]]),
                IntMatrix::from_rows(&[vec![3], vec![0]]),
            ],
        )
        .unwrap(),
    ]
}

pub fn verify_suite(p: &LatticePolytope, kmax: i64) -> Result<VerifyReport> {
    let cech = Cech::new(p)?;
    let n = p.dim() as i64;
    let e = cech.ehrhart();
    let sign_n = if n % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
    let mut checks = Vec::new();

    record(&mut checks, "ehrhart_reciprocity", {
        let mut bad = Vec::new();
        for k in 1..=n + 1 {
            let interior = BigInt::from(lattice_points(p, k, true).len());
            if &sign_n * e.eval_int(-k) != interior {
                bad.push(k);
            }
        }
        for k in [n + 1, n + 2] {
            if e.eval_int(k) != BigInt::from(lattice_points(p, k, false).len()) {
                bad.push(k);
            }
        }
        Ok((
            bad.is_empty(),
            format!("checked k = 1..={} and extrapolation; failures {bad:?}", n + 1),
        ))
    });

    record(&mut checks, "incidence_square_zero", {
        let bad = cech.incidence().square_zero_violations(cech.lattice());
        Ok((
            bad.is_empty(),
            format!("{} codimension-2 flags violate ∂² = 0", bad.len()),
        ))
    });

    record(
        &mut checks,
        "line_bundle_closed_form",
        (|| {
            for k in -kmax..=kmax {
                let h = cech.line_bundle_cohomology(k, CoefficientRing::Integers)?.homology;
                let count = if k >= 0 {
                    e.eval_int(k)
                } else {
                    (&sign_n * e.eval_int(k)).abs()
                };
                if BigInt::from(h.total_free_rank()) != count {
                    return Ok((false, format!("rank mismatch at k = {k}")));
                }
            }
            Ok((true, format!("k = {}..={kmax}", -kmax)))
        })(),
    );

    record(
        &mut checks,
        "euler_identity",
        (|| {
            for k in -kmax..=kmax {
                if !cech.euler_identity_holds(&TwistComplex::line_bundle(k))? {
                    return Ok((false, format!("χ mismatch at k = {k}")));
                }
            }
            Ok((true, format!("k = {}..={kmax}", -kmax)))
        })(),
    );

    record(
        &mut checks,
        "acyclicity_window",
        (|| {
            let w = cech.acyclicity_window()?;
            Ok((true, format!("n_P = {}, window {w:?}", e.np)))
        })(),
    );

    record(
        &mut checks,
        "constant_vs_bundle",
        (|| {
            for (i, c) in sample_complexes().iter().enumerate() {
                if !cech.con_vs_bundle_check(c, CoefficientRing::Integers)? {
                    return Ok((false, format!("sample complex {i} disagrees")));
                }
            }
            Ok((true, format!("{} sample complexes", sample_complexes().len())))
        })(),
    );

    record(
        &mut checks,
        "splitting_matrix",
        (|| {
            let m = cech.splitting_matrix()?;
            Ok((true, format!("size {}, det {}", m.entries.len(), m.det)))
        })(),
    );

    if p.is_standard_simplex() && n >= 1 {
        record(
            &mut checks,
            "simplex_cone",
            (|| {
                for k in 0..n {
                    for ring in [CoefficientRing::Integers, CoefficientRing::prime_field(2)?] {
                        if !simplex_cone_check(p.dim(), k, ring)? {
                            return Ok((false, format!("k = {k} over {ring}")));
                        }
                    }
                }
                Ok((true, format!("k = 0..{n} over Z and F_2")))
            })(),
        );
    }

    Ok(VerifyReport { checks })
}
