//! Exact Hardy-space kernels on the catalog models.

pub mod basis;
pub mod kernel;
pub mod separation;
pub mod value;

pub use basis::{enumerate_weight, isotypic_basis, isotypic_dim, ln_monomial_norm, IsotypicBasis, IsotypicKind, LevelBasis};
pub use kernel::{diag_profile, equivariant_kernel, isotypic_levels, level_kernel, level_kernel_by_basis, monomial_kernel};
pub use separation::{off_orbit_value, orbit_separation, OffOrbitValue, OrbitSeparation};
pub use value::KernelValue;
