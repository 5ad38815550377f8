//! The prediction side: psi_2, the leading coefficient Psi_nu, the
//! near-diagonal leading term, the dimension coefficient and the Hessian
//! of the reduced phase.

pub mod dim_coeff;
pub mod hessian;
pub mod psi;

pub use dim_coeff::{predict_dim_coeff, DimCoeff, DEFAULT_DIM_LEVEL};
pub use hessian::{hessian_check, HessianReport};
pub use psi::{predict_near_diagonal, psi2, psi_nu, Displacements, Prediction, PsiBreakdown};
