//! Finite-dimensional modules over U_t(sl_{n+1}): action matrices, tensor
//! products, Kashiwara operators, crystal lattices, contravariant forms,
//! dual modules and orthogonal splittings.

mod expr;
mod form;
mod kashiwara;
mod lattice;
mod rep;
mod submodule;

pub use expr::{parse_rep, RepExpr};
pub use form::{
    adjoint_matrix, contravariance_defect, double_dual_defect, dual_lattice_basis, dual_rep, identity_form,
    polarization, tensor_form, DualLatticeReport, DualModule, Form,
};
pub use kashiwara::{kashiwara_ops, string_decomposition, KashiwaraOps};
pub use lattice::{crystal_lattice, Lattice};
pub use rep::{
    fundamental_rep, rho_pairing, sl2_irrep, tensor_power, tensor_rep, two_rho_pairing, verify_uq_relations, Gen,
    RelationReport, Rep,
};
pub use submodule::{
    generate_submodule, highest_weight_submodule, intertwiner, krylov_span, orthogonal_decompose, singular_vectors,
    submodule_from_basis, OrthogonalSplit, Submodule,
};
