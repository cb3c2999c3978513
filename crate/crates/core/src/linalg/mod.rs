//! Exact linear algebra over `Z`, `Q` and `F_p`.

mod complex;
mod contraction;
mod matrix;
mod snf;
mod transfer;

pub use complex::{
    complex_homology, is_divisibility_chain, normalize_torsion, CoefficientRing, FreeChainComplex, HomologyGroup,
    HomologyResult,
};
pub use contraction::{contraction, Contraction};
pub use matrix::{modulo, IntMatrix};
pub use snf::{diagonalize_mod, smith_normal_form, SmithForm};
pub use transfer::{perturb_transfer, perturb_transfer_counted, BlockPerturbation};
