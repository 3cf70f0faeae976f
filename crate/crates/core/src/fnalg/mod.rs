//! The quantized function algebra O_t(SL(n+1)) as a rewriting algebra on the
//! matrix coefficients `u_ij` of the vector representation, together with
//! matrix coefficients of larger modules, the triangular decomposition and
//! the star-scaling checks.

mod algebra;
mod certificate;
mod coeffs;
mod expr;
mod pairing;
mod rstar;
mod triangular;

pub use algebra::{permutations, Algebra, Elem, FnAlgElem, QMonomial};
pub use certificate::{scaled_generation_certificate, star_scaled_certificate, ScaledCertificate, ScaledTerm};
pub use coeffs::{combine, express_over_a0, matrix_coeff, tensor_degree, Realization};
pub use expr::parse_elem;
pub use pairing::{evaluate_pairing, pbw_words, PairingOracle};
pub use rstar::{corollary_check, rstar_scaling_check, CorollaryReport, DualCoefficients, RStarReport, StarEntry};
pub use triangular::{
    triangular_candidates, triangular_decompose, triangular_search, FactorOrder, TriangularFactors,
    TriangularWitness,
};
