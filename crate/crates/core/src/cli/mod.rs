//! The `toric-cech` command line.
//!
//! Every command prints one line of canonical JSON (sorted keys, no extra
//! whitespace) on standard output. Exit status 0 means success, 1 a failed
//! verification, 2 bad input; errors are printed as
//! `{"code": ..., "location": ..., "message": ...}`.

mod documents;
mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

pub use documents::{
    canonical_json, homology, integer, rational, ComplexDocument, DifferentialDocument, EntryDocument,
    PolytopeDocument, TermDocument,
};
pub use verify::{sample_complexes, verify_suite, Check, VerifyReport};

use crate::cech::Cech;
use crate::linalg::CoefficientRing;
use crate::polytope::{lattice_points, np_index, LatticePolytope};
use crate::sheaf::TwistComplex;
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "toric-cech", version, about = "Exact Čech cohomology on lattice polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Facets and the face lattice.
    Faces { polytope: PathBuf },
    /// Ehrhart polynomial, n_P and integral roots.
    Ehrhart { polytope: PathBuf },
    /// The index n_P.
    Np { polytope: PathBuf },
    /// Lattice points of a dilate.
    Points {
        polytope: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        dilate: i64,
        #[arg(long)]
        interior: bool,
    },
    /// Homology of the Čech complex of O(k).
    Cohomology {
        polytope: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Homology of the Čech complex of a twist complex.
    Cech {
        polytope: PathBuf,
        complex: PathBuf,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Euler characteristic of a twist complex.
    Chi { polytope: PathBuf, complex: PathBuf },
    /// The K₀ splitting matrix.
    Splitting { polytope: PathBuf },
    /// Run all self-checks.
    Verify {
        polytope: PathBuf,
        #[arg(long, default_value_t = 4)]
        kmax: i64,
    },
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
    location: String,
    exit: i32,
}

impl Failure {
    fn input(code: &'static str, message: impl Into<String>, location: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            location: location.into(),
            exit: 2,
        }
    }

    fn from_error(e: Error, location: impl Into<String>) -> Self {
        let (code, exit) = classify(&e);
        Failure {
            code,
            message: e.to_string(),
            location: location.into(),
            exit,
        }
    }
}

/// Input problems exit with 2, everything else is a failed check.
fn classify(e: &Error) -> (&'static str, i32) {
    match e {
        Error::NotFullDimensional { .. }
        | Error::DuplicateVertex(_)
        | Error::NotAVertex(_)
        | Error::WrongDimension { .. } => ("invalid_polytope", 2),
        Error::InvalidMonomial { .. }
        | Error::NonSquareZero { .. }
        | Error::NotChainMap { .. }
        | Error::MalformedComplex(_) => ("invalid_complex", 2),
        Error::UnknownRing(_) | Error::NotPrime(_) => ("invalid_ring", 2),
        _ => ("verification_failed", 1),
    }
}

fn polytope_location(path: &Path, e: &Error) -> String {
    let index = match e {
        Error::DuplicateVertex(i) | Error::NotAVertex(i) => Some(*i),
        Error::WrongDimension { index, .. } => Some(*index),
        _ => None,
    };
    match index {
        Some(i) => format!("{}: vertices[{i}]", path.display()),
        None => format!("{}: vertices", path.display()),
    }
}

fn complex_location(path: &Path, e: &Error) -> String {
    match e {
        Error::InvalidMonomial { level, row, col, .. } => {
            format!("{}: differentials[from={level}] entry ({row}, {col})", path.display())
        }
        Error::NonSquareZero { level } => format!("{}: level {level}", path.display()),
        _ => path.display().to_string(),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input("io_error", e.to_string(), path.display().to_string()))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::input(
            "parse_error",
            e.to_string(),
            format!("{}:{}:{}", path.display(), e.line(), e.column()),
        )
    })
}

fn load_polytope(path: &Path) -> Result<LatticePolytope, Failure> {
    let doc: PolytopeDocument = read_json(path)?;
    doc.to_polytope().map_err(|e| {
        let loc = polytope_location(path, &e);
        Failure::from_error(e, loc)
    })
}

fn load_complex(path: &Path, p: &LatticePolytope) -> Result<TwistComplex, Failure> {
    let doc: ComplexDocument = read_json(path)?;
    let y = doc.to_complex().map_err(|e| {
        let loc = complex_location(path, &e);
        Failure::from_error(e, loc)
    })?;
    y.validate(p).map_err(|e| {
        let loc = complex_location(path, &e);
        Failure::from_error(e, loc)
    })?;
    Ok(y)
}

fn parse_ring(s: &str) -> Result<CoefficientRing, Failure> {
    s.parse().map_err(|e| Failure::from_error(e, "--ring"))
}

fn cech_for(p: &LatticePolytope, location: &Path) -> Result<Cech, Failure> {
    Cech::new(p).map_err(|e| Failure::from_error(e, location.display().to_string()))
}

fn computed(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::from_error(e, path.display().to_string())
}

fn execute(command: Command) -> Result<(Value, i32), Failure> {
    match command {
        Command::Faces { polytope } => {
            let p = load_polytope(&polytope)?;
            let c = cech_for(&p, &polytope)?;
            let lattice = c.lattice();
            let f_vector: Vec<usize> = (0..=p.dim()).map(|d| lattice.of_dim(d).count()).collect();
            Ok((
                json!({
                    "dim": p.dim(),
                    "facets": p.facets().iter().map(|f| json!({"normal": f.normal, "offset": f.offset})).collect::<Vec<_>>(),
                    "faces": lattice.faces().iter().map(|f| json!({
                        "id": f.id,
                        "dim": f.dim,
                        "vertices": f.vertices,
                        "tight_facets": f.tight_facets,
                    })).collect::<Vec<_>>(),
                    "f_vector": f_vector,
                }),
                0,
            ))
        }
        Command::Ehrhart { polytope } => {
            let p = load_polytope(&polytope)?;
            let c = cech_for(&p, &polytope)?;
            let e = c.ehrhart();
            Ok((
                json!({
                    "coeffs": e.coefficients.iter().map(rational).collect::<Vec<_>>(),
                    "np": e.np,
                    "integral_roots": e.integral_roots,
                }),
                0,
            ))
        }
        Command::Np { polytope } => {
            let p = load_polytope(&polytope)?;
            let np = np_index(&p).map_err(computed(&polytope))?;
            Ok((json!({ "np": np }), 0))
        }
        Command::Points {
            polytope,
            dilate,
            interior,
        } => {
            let p = load_polytope(&polytope)?;
            if dilate < 0 && !interior {
                return Err(Failure::input(
                    "invalid_argument",
                    "negative dilates are only counted with --interior",
                    "--dilate",
                ));
            }
            let pts = lattice_points(&p, dilate, interior);
            Ok((
                json!({ "dilate": dilate, "interior": interior, "count": pts.len(), "points": pts }),
                0,
            ))
        }
        Command::Cohomology { polytope, twist, ring } => {
            let ring = parse_ring(&ring)?;
            let p = load_polytope(&polytope)?;
            let c = cech_for(&p, &polytope)?;
            let r = c.line_bundle_cohomology(twist, ring).map_err(computed(&polytope))?;
            Ok((homology(&r.homology), 0))
        }
        Command::Cech {
            polytope,
            complex,
            ring,
        } => {
            let ring = parse_ring(&ring)?;
            let p = load_polytope(&polytope)?;
            let y = load_complex(&complex, &p)?;
            let c = cech_for(&p, &polytope)?;
            let r = c.cech_homology(&y, ring).map_err(computed(&complex))?;
            Ok((
                json!({
                    "homology": homology(&r.homology),
                    "active_columns": r.active_columns,
                    "transfer_terms": r.transfer_terms,
                }),
                0,
            ))
        }
        Command::Chi { polytope, complex } => {
            let p = load_polytope(&polytope)?;
            let y = load_complex(&complex, &p)?;
            let c = cech_for(&p, &polytope)?;
            Ok((json!({ "chi": integer(&c.euler_characteristic(&y)) }), 0))
        }
        Command::Splitting { polytope } => {
            let p = load_polytope(&polytope)?;
            let c = cech_for(&p, &polytope)?;
            let m = c.splitting_matrix().map_err(computed(&polytope))?;
            Ok((
                json!({
                    "matrix": m.entries.iter().map(|r| r.iter().map(integer).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "det": integer(&m.det),
                    "unimodular": true,
                }),
                0,
            ))
        }
        Command::Verify { polytope, kmax } => {
            let p = load_polytope(&polytope)?;
            let report = verify_suite(&p, kmax).map_err(computed(&polytope))?;
            let code = if report.all_passed() { 0 } else { 1 };
            Ok((report.to_json(), code))
        }
    }
}

fn error_line(code: &str, message: &str, location: &str) -> String {
    let message = message.lines().collect::<Vec<_>>().join(" ");
    json!({ "code": code, "message": message, "location": location }).to_string()
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    code: 0,
                };
            }
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or("invalid usage")
                .trim_start_matches("error: ");
            return Outcome {
                stdout: error_line("usage", first, "arguments"),
                code: 2,
            };
        }
    };
    match execute(cli.command) {
        Ok((value, code)) => Outcome {
            stdout: value.to_string(),
            code,
        },
        Err(f) => Outcome {
            stdout: error_line(f.code, &f.message, &f.location),
            code: f.exit,
        },
    }
}
