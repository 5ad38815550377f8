//! Weyl dimension and character formulas, the exp Jacobian, coadjoint orbit
//! quadrature for Kirillov's formula, and Haar quadrature.

pub mod haar;
pub mod jacobian;
pub mod orbit;
pub mod weyl;

pub use haar::{peter_weyl_projector_weight, riemannian_volume_quadrature, HaarQuadrature};
pub use jacobian::{exp_jacobian, exp_jacobian_fd};
pub use orbit::{
    kirillov_character, kirillov_character_scaled, orbit_quadrature, orbit_volume, KirillovValue,
    OrbitQuadrature, OrbitScheme,
};
pub use weyl::{character_at, dim_scaling, weyl_character, weyl_dimension, weyl_dimension_value, WallPolicy};
