//! The JSON input documents and the canonical output encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::linalg::HomologyResult;
use crate::polytope::{facets_from_vertices, LatticePolytope};
use crate::sheaf::{MonomialEntry, MonomialMatrix, TwistComplex};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl PolytopeDocument {
    pub fn to_polytope(&self) -> Result<LatticePolytope> {
        facets_from_vertices(self.dim, self.vertices.clone())
    }

    pub fn from_polytope(p: &LatticePolytope) -> Self {
        PolytopeDocument {
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub min_level: i64,
    pub levels: Vec<Vec<i64>>,
    #[serde(default)]
    pub differentials: Vec<DifferentialDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialDocument {
    /// Source level; the map goes to `from - 1`.
    pub from: i64,
    pub entries: Vec<EntryDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDocument {
    pub row: usize,
    pub col: usize,
    pub terms: Vec<TermDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    /// Integer coefficient, as a string to keep it exact.
    pub c: String,
    pub u: Vec<i64>,
}

impl ComplexDocument {
    /// Builds the complex; entries must be inside the level sizes and each
    /// differential may appear once. Validation against a polytope is
    /// separate.
    pub fn to_complex(&self) -> Result<TwistComplex> {
        let hi = self.min_level + self.levels.len() as i64 - 1;
        let mut diffs: Vec<MonomialMatrix> = (self.min_level + 1..=hi)
            .map(|t| {
                let rows = self.levels[(t - 1 - self.min_level) as usize].len();
                let cols = self.levels[(t - self.min_level) as usize].len();
                vec![vec![MonomialEntry::zero(); cols]; rows]
            })
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for (di, d) in self.differentials.iter().enumerate() {
            if d.from <= self.min_level || d.from > hi {
                return Err(Error::MalformedComplex(format!(
                    "differentials[{di}]: level {} has no level below it in the complex",
                    d.from
                )));
            }
            if !seen.insert(d.from) {
                return Err(Error::MalformedComplex(format!(
                    "differentials[{di}]: level {} listed twice",
                    d.from
                )));
            }
            let m = &mut diffs[(d.from - self.min_level - 1) as usize];
            for (ei, e) in d.entries.iter().enumerate() {
                let cols = m.first().map_or(0, Vec::len);
                if e.row >= m.len() || e.col >= cols {
                    return Err(Error::MalformedComplex(format!(
                        "differentials[{di}].entries[{ei}]: ({}, {}) outside a {}×{} matrix",
                        e.row,
                        e.col,
                        m.len(),
                        cols
                    )));
                }
                for (ti, term) in e.terms.iter().enumerate() {
                    let c: BigInt = term.c.trim().parse().map_err(|_| {
                        Error::MalformedComplex(format!(
                            "differentials[{di}].entries[{ei}].terms[{ti}]: {:?} is not an integer",
                            term.c
                        ))
                    })?;
                    m[e.row][e.col].add_term(c, term.u.clone());
                }
            }
        }
        TwistComplex::new(self.min_level, self.levels.clone(), diffs)
    }

    /// The canonical document: nonzero entries only, sorted by `(row, col)`,
    /// terms sorted by exponent.
    pub fn from_complex(y: &TwistComplex) -> Self {
        let levels: Vec<Vec<i64>> = y.levels().map(|(_, l)| l.to_vec()).collect();
        let differentials = (y.lo() + 1..=y.hi())
            .filter_map(|t| {
                let d = y.differential(t)?;
                let entries: Vec<EntryDocument> = d
                    .iter()
                    .enumerate()
                    .flat_map(|(row, r)| {
                        r.iter()
                            .enumerate()
                            .filter(|(_, e)| !e.is_zero())
                            .map(move |(col, e)| EntryDocument {
                                row,
                                col,
                                terms: e
                                    .terms()
                                    .map(|(u, c)| TermDocument {
                                        c: c.to_string(),
                                        u: u.clone(),
                                    })
                                    .collect(),
                            })
                    })
                    .collect();
                (!entries.is_empty()).then_some(DifferentialDocument { from: t, entries })
            })
            .collect();
        ComplexDocument {
            min_level: y.lo(),
            levels,
            differentials,
        }
    }
}

/// Compact JSON with sorted object keys.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    serde_json::to_string(&v).expect("values serialize")
}

/// A JSON number when it fits in `i64`, otherwise a decimal string.
pub fn integer(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational(x: &BigRational) -> Value {
    json!(x.to_string())
}

/// Nonzero groups in ascending degree.
pub fn homology(h: &HomologyResult) -> Value {
    Value::Array(
        h.groups()
            .iter()
            .map(|g| {
                json!({
                    "degree": g.degree,
                    "free_rank": g.free_rank,
                    "torsion": g.torsion.iter().map(integer).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const COMPLEX: &str = r#"{"differentials":[{"entries":[{"col":0,"row":0,"terms":[{"c":"1","u":[0,0]},{"c":"-2","u":[1,0]}]}],"from":1}],"levels":[[1],[0]],"min_level":0}"#;

    #[test]
    fn complex_round_trip_is_canonical() {
        let doc: ComplexDocument = serde_json::from_str(COMPLEX).unwrap();
        let y = doc.to_complex().unwrap();
        assert_eq!(canonical_json(&ComplexDocument::from_complex(&y)), COMPLEX);
        y.validate(&LatticePolytope::simplex(2)).unwrap();
    }

    #[test]
    fn polytope_round_trip() {
        let text = r#"{"dim":2,"vertices":[[0,0],[1,0],[0,1]]}"#;
        let doc: PolytopeDocument = serde_json::from_str(text).unwrap();
        let p = doc.to_polytope().unwrap();
        assert_eq!(canonical_json(&PolytopeDocument::from_polytope(&p)), text);
    }

    #[test]
    fn malformed_entries() {
        let mut doc: ComplexDocument = serde_json::from_str(COMPLEX).unwrap();
        doc.differentials[0].entries[0].terms[0].c = "1.5".into();
        assert!(matches!(doc.to_complex(), Err(Error::MalformedComplex(_))));
        let mut doc: ComplexDocument = serde_json::from_str(COMPLEX).unwrap();
        doc.differentials[0].entries[0].row = 3;
        assert!(doc.to_complex().is_err());
        let mut doc: ComplexDocument = serde_json::from_str(COMPLEX).unwrap();
        doc.differentials[0].from = 0;
        assert!(doc.to_complex().is_err());
    }

    #[test]
    fn big_integers_become_strings() {
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(integer(&big), json!(big.to_string()));
        assert_eq!(integer(&BigInt::from(-3)), json!(-3));
    }
}
