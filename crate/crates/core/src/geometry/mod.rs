//! Projective models CP^d with a Hamiltonian linear action: moment maps,
//! the cone locus over a coadjoint orbit and local charts.

pub mod chart;
pub mod checks;
pub mod locus;
pub mod model;
pub mod moment;
pub mod point;

pub use chart::displace;
pub use checks::{structural_report, StructuralReport};
pub use locus::{
    d_phi, decompose, locate_locus, locus_points, normal_space, w_space, LocusSample, Decomposition,
};
pub use model::{simplex_grid, ModelAction, ProjectiveModel, CATALOG};
pub use moment::{d_moment, moment_map, val, val_matrix, val_vectors};
pub use point::{ModelPoint, SphereQuadrature};
