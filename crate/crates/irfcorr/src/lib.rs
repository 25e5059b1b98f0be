//! Ground-state correlation functions of the IRF (interaction-round-a-face)
//! version of the isotropic six-vertex model and of its three-spin quantum chain.
//!
//! Three independent routes are provided and cross-checked against each other:
//!
//! * [`exact_diag`]: exact diagonalization of small periodic lattices, reduced
//!   density matrices built from monodromy elements, and the discrete functional
//!   equation they satisfy.
//! * [`nlie_solver`] + [`omega`]: non-linear integral equations for arbitrary even
//!   chain length, giving the two-site function ω(λ₁,λ₂) and its derivative jet.
//! * [`thermo_limit`]: closed forms in the thermodynamic limit.
//!
//! [`density_correlators`] turns ω (or its jet) into density matrices and the
//! named short-distance correlators.

pub mod density_correlators;
pub mod error;
pub mod exact_diag;
pub mod face_model;
pub mod nlie_solver;
pub mod omega;
pub mod special;
pub mod thermo_limit;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Chain length: a finite even size or the thermodynamic limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainLength {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for ChainLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainLength::Finite(l) => write!(f, "{l}"),
            ChainLength::Infinite => write!(f, "inf"),
        }
    }
}
