use super::kernel::equivariant_kernel;
use super::value::KernelValue;
use crate::characters::HaarQuadrature;
use crate::error::Result;
use crate::geometry::{ModelPoint, ProjectiveModel};
use crate::lie::{GroupKind, HalfWeight};
use crate::numeric::{CMat, TWO_PI};
use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

/// Grid level per group: 1024 angles on a circle, 32^2 on T^2, 32^3 on
/// SU(2) and 16^4 on U(2).
fn grid_level(kind: GroupKind) -> usize {
    match kind {
        GroupKind::Torus(1) => 1024,
        GroupKind::Torus(_) => 32,
        GroupKind::SU(_) => 32,
        GroupKind::U(_) => 16,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSeparation {
    /// Round-sphere distance between G x and y in X.
    pub distance: f64,
    /// Grid minimum before refinement.
    pub grid_distance: f64,
    pub grid_nodes: usize,
    #[serde(skip)]
    pub best: CMat,
}

fn geodesic(chord: f64) -> f64 {
    2.0 * (0.5 * chord).min(1.0).asin()
}

/// min over g of dist_X(rho(g) x, y): dense Haar-node grid, then a pattern
/// search along g exp(s e_a) with halving steps.
pub fn orbit_separation(model: &ProjectiveModel, x: &ModelPoint, y: &ModelPoint) -> Result<OrbitSeparation> {
    let g = model.metric.group();
    let level = grid_level(g.kind);
    let q = HaarQuadrature::new(g, level)?;
    let chord = |h: &CMat| -> f64 { (model.rep(h).expect("grid node in G") * &x.x - &y.x).norm() };
    let (best_i, grid_chord) = q
        .nodes
        .par_iter()
        .map(chord)
        .enumerate()
        .reduce(|| (usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    let mut best = q.nodes[best_i].clone();
    let mut val = grid_chord;
    let mut step = TWO_PI / level as f64;
    while step > 1e-12 {
        let mut moved = false;
        for a in 0..g.dim {
            for s in [step, -step] {
                let mut e = DVector::zeros(g.dim);
                e[a] = s;
                let cand = &best * g.exp(&e);
                let v = chord(&cand);
                if v < val {
                    best = cand;
                    val = v;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(OrbitSeparation {
        distance: geodesic(val),
        grid_distance: geodesic(grid_chord),
        grid_nodes: q.nodes.len(),
        best,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OffOrbitValue {
    pub k: u64,
    pub value: KernelValue,
    pub abs: f64,
    pub ln_abs: f64,
    pub separation: OrbitSeparation,
}

/// |Pi_{k nu}(x, y)| together with the orbit separation of x and y.
pub fn off_orbit_value(
    model: &ProjectiveModel,
    nu: &HalfWeight,
    k: u64,
    x: &ModelPoint,
    y: &ModelPoint,
) -> Result<OffOrbitValue> {
    let value = equivariant_kernel(model, nu, k, x, y)?;
    let separation = orbit_separation(model, x, y)?;
    Ok(OffOrbitValue {
        k,
        abs: value.abs(),
        ln_abs: value.ln_abs(),
        value,
        separation,
    })
}
