//! Exact computations with crystal lattices of quantized function algebras
//! of type A.
//!
//! The crate is layered bottom-up:
//!
//! * [`ratfield`]: the field Q(t), the local ring A0 and specialization.
//! * [`cartan`]: type A_n root data, weights and the longest Weyl word.
//! * [`linalg`]: dense linear algebra over Q(t) and A0.
//! * [`repth`]: finite-dimensional U_t(sl_{n+1})-modules, Kashiwara operators,
//!   crystal lattices, polarizations and dual modules.
//! * [`fnalg`]: the algebra O_t(SL(n+1)) by normal-form rewriting.
//! * [`soibelman`]: truncated shift-operator representations and their
//!   q -> 0 limits.

pub mod cartan;
pub mod error;
pub mod fnalg;
pub mod linalg;
pub mod ratfield;
pub mod repth;
pub mod soibelman;

pub use error::{Error, Result};
