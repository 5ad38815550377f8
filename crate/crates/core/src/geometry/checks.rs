use super::locus::{cone_offset, normal_space, span_residual, LocusSample};
use super::model::ProjectiveModel;
use super::moment::val_matrix;
use crate::error::Result;
use crate::lie::HalfWeight;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Worst values of the structural identities over a set of locus samples.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StructuralReport {
    pub samples: usize,
    /// N = J t'_m against the span of the cone-offset gradients.
    pub normal_residual: f64,
    /// max |omega(v_i, v_j)| over normal basis vectors.
    pub omega_normal: f64,
    /// Smallest singular value of val on the annihilator of Phi(m).
    pub min_singular_value: f64,
    /// |Phi(m) - Coad_h(sigma nu)|.
    pub decomposition_residual: f64,
}

pub fn structural_report(model: &ProjectiveModel, nu: &HalfWeight, samples: &[LocusSample]) -> Result<StructuralReport> {
    let metric = &model.metric;
    let g = metric.group();
    let mut full_nu = DVector::zeros(g.dim);
    full_nu.rows_mut(0, g.rank).copy_from(&nu.vector());
    let mut rep = StructuralReport {
        samples: samples.len(),
        min_singular_value: f64::INFINITY,
        ..Default::default()
    };
    for s in samples {
        let n = normal_space(model, s)?;
        let (_, grads) = cone_offset(model, nu, &s.point);
        for v in &n {
            rep.normal_residual = rep.normal_residual.max(span_residual(&grads, v) / v.norm());
        }
        for a in &n {
            for b in &n {
                rep.omega_normal = rep.omega_normal.max(a.dotc(b).im.abs());
            }
        }
        let rebuilt = metric.coadjoint_action(&s.h, &(&full_nu * s.sigma))?;
        rep.decomposition_residual = rep.decomposition_residual.max((&rebuilt - &s.phi).norm());
        let (_, unit_cov) = metric.unit(&s.phi);
        let mut vecs: Vec<DVector<f64>> = vec![metric.sharp(&unit_cov)];
        vecs.extend(metric.onb());
        let ann = metric.orthonormalize(&vecs).split_off(1);
        if !ann.is_empty() {
            let cols = DMatrix::from_fn(g.dim, ann.len(), |i, j| ann[j][i]);
            let sv = (val_matrix(model, &s.point) * cols).singular_values();
            rep.min_singular_value = rep.min_singular_value.min(sv.min());
        }
    }
    Ok(rep)
}
