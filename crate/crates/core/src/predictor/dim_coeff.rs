use super::psi::psi_nu;
use crate::error::{Error, Result};
use crate::geometry::locus::cone_offset;
use crate::geometry::{decompose, Decomposition, ModelPoint, ProjectiveModel};
use crate::lie::HalfWeight;
use crate::numeric::{c, gauss_legendre_on, pairwise_sum, CVec};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const DEFAULT_DIM_LEVEL: usize = 48;

#[derive(Debug, Clone, Serialize)]
pub struct DimCoeff {
    pub delta0: f64,
    /// "simplex" (r_G = 1) or "contour" (r_G = 2).
    pub scheme: &'static str,
    pub level: usize,
    pub nodes: usize,
    /// Euclidean length of the extracted contour in moduli coordinates.
    pub contour_length: Option<f64>,
}

/// Psi / sigma^{d + 1 - r}, or 0 off the cone.
fn integrand(model: &ProjectiveModel, nu: &HalfWeight, p: &ModelPoint) -> Result<f64> {
    match decompose(model, nu, p)? {
        Decomposition::OnCone(s) => {
            let psi = psi_nu(model, nu, &s)?.psi;
            let e = (model.d + 1 - model.rank()) as i32;
            Ok(psi / s.sigma.powi(e))
        }
        Decomposition::OffCone { .. } => Ok(0.0),
    }
}

/// The moduli quadrature needs integrands that ignore the coordinate
/// phases; checked on a few sample moduli.
fn check_phase_invariance(model: &ProjectiveModel, nu: &HalfWeight, ts: &[Vec<f64>]) -> Result<()> {
    let phases: [&[f64]; 2] = [&[0.3, -1.1, 2.0], &[1.7, 0.4, -0.6]];
    for t in ts {
        let base = integrand(model, nu, &ModelPoint::from_moduli(t))?;
        for ph in phases {
            let p = ModelPoint::from_moduli_phases(t, &ph[..t.len()]);
            let v = integrand(model, nu, &p)?;
            if (v - base).abs() > 1e-9 * base.abs().max(1e-300) {
                return Err(Error::Unsupported(format!(
                    "{}: the locus integrand depends on coordinate phases",
                    model.id
                )));
            }
        }
    }
    Ok(())
}

/// delta_{nu,0} = 2^{-(r-1)/2} int_{M_O} Psi / sigma^{d+1-r} dV_{M_O}.
///
/// The integrand only depends on the moduli t_j = |x_j|^2, whose law under
/// dV_M is pi^d dt on the simplex. For r_G = 1 the locus is open and the
/// simplex is integrated directly; for r_G = 2 the contour {F(t) = 0} of
/// the cone offset is extracted by marching triangles and integrated with
/// the coarea weight |grad_M F| / |grad_t F|.
pub fn predict_dim_coeff(model: &ProjectiveModel, nu: &HalfWeight, level: usize) -> Result<DimCoeff> {
    nu.validate(&model.metric)?;
    let r = model.rank();
    let d = model.d;
    let pre = 2f64.powf(-((r as f64) - 1.0) / 2.0) * PI.powi(d as i32);
    match (r, d) {
        (1, 1) | (1, 2) => {
            let gl = gauss_legendre_on(level, 0.0, 1.0);
            let mut nodes: Vec<(Vec<f64>, f64)> = Vec::new();
            if d == 1 {
                for &(u, w) in &gl {
                    nodes.push((vec![u, 1.0 - u], w));
                }
            } else {
                for &(u, wu) in &gl {
                    for &(v, wv) in &gl {
                        nodes.push((vec![u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)], wu * wv * (1.0 - u)));
                    }
                }
            }
            check_phase_invariance(model, nu, &[nodes[0].0.clone(), nodes[nodes.len() / 2].0.clone()])?;
            let terms: Vec<f64> = nodes
                .par_iter()
                .map(|(t, w)| integrand(model, nu, &ModelPoint::from_moduli(t)).map(|f| f * w))
                .collect::<Result<_>>()?;
            let total = pairwise_sum(&terms);
            if total == 0.0 {
                return Err(Error::EmptyLocus(format!(
                    "{}: no point of M maps into the cone over nu",
                    model.id
                )));
            }
            Ok(DimCoeff {
                delta0: pre * total,
                scheme: "simplex",
                level,
                nodes: nodes.len(),
                contour_length: None,
            })
        }
        (2, 2) => contour_dim_coeff(model, nu, level, pre),
        _ => Err(Error::Unsupported(format!(
            "dimension coefficient for rank {r} on CP^{d}"
        ))),
    }
}

fn moduli(t1: f64, t2: f64) -> Vec<f64> {
    vec![t1.max(0.0), t2.max(0.0), (1.0 - t1 - t2).max(0.0)]
}

/// F and its gradient in (t1, t2), plus |grad_M F|, at interior moduli.
fn offset_data(model: &ProjectiveModel, nu: &HalfWeight, t1: f64, t2: f64) -> (f64, [f64; 2], f64) {
    // keep 1/sqrt(t_j) finite at contour ends on the boundary
    let t: Vec<f64> = moduli(t1, t2).into_iter().map(|x| x.max(1e-14)).collect();
    let p = ModelPoint::from_moduli(&t);
    let (f, grads) = cone_offset(model, nu, &p);
    let g = &grads[0];
    // d x / d s along t + s e for e = e_a - e_3, at real positive x
    let dir = |a: usize| -> CVec {
        let mut u = CVec::zeros(3);
        u[a] = c(0.5 / t[a].sqrt(), 0.0);
        u[2] = c(-0.5 / t[2].sqrt(), 0.0);
        p.horizontal(&u)
    };
    let gt = [g.dotc(&dir(0)).re, g.dotc(&dir(1)).re];
    (f[0], gt, g.norm())
}

fn offset_value(model: &ProjectiveModel, nu: &HalfWeight, t1: f64, t2: f64) -> f64 {
    cone_offset(model, nu, &ModelPoint::from_moduli(&moduli(t1, t2))).0[0]
}

fn bisect_edge(model: &ProjectiveModel, nu: &HalfWeight, a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64) {
    // a, b = (t1, t2, F) with opposite signs of F
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let flo = a.2;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let t1 = a.0 + mid * (b.0 - a.0);
        let t2 = a.1 + mid * (b.1 - a.1);
        let fm = offset_value(model, nu, t1, t2);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1))
}

fn contour_dim_coeff(model: &ProjectiveModel, nu: &HalfWeight, level: usize, pre: f64) -> Result<DimCoeff> {
    let n = level.max(4);
    let h = 1.0 / n as f64;
    let idx = |i: usize, j: usize| -> usize { i * (n + 1) + j };
    let mut fv = vec![f64::NAN; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=(n - i) {
            fv[idx(i, j)] = offset_value(model, nu, i as f64 * h, j as f64 * h);
        }
    }
    let mut tris: Vec<[(usize, usize); 3]> = Vec::new();
    for i in 0..n {
        for j in 0..(n - i) {
            tris.push([(i, j), (i + 1, j), (i, j + 1)]);
            if i + j + 2 <= n {
                tris.push([(i + 1, j), (i + 1, j + 1), (i, j + 1)]);
            }
        }
    }
    let mut segments: Vec<((f64, f64), (f64, f64))> = Vec::new();
    for tri in &tris {
        let pts: Vec<(f64, f64, f64)> = tri
            .iter()
            .map(|&(i, j)| (i as f64 * h, j as f64 * h, fv[idx(i, j)]))
            .collect();
        let mut cross = Vec::new();
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let (pa, pb) = (pts[a], pts[b]);
            if (pa.2 > 0.0) != (pb.2 > 0.0) {
                cross.push(bisect_edge(model, nu, pa, pb));
            }
        }
        if cross.len() == 2 {
            segments.push((cross[0], cross[1]));
        }
    }
    let gl = gauss_legendre_on(4, 0.0, 1.0);
    let mut nodes: Vec<(f64, f64, f64)> = Vec::new();
    let mut length = 0.0;
    for &(p, q) in &segments {
        let len = ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt();
        if len == 0.0 {
            continue;
        }
        length += len;
        for &(s, w) in &gl {
            nodes.push((p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1), w * len));
        }
    }
    let terms: Vec<f64> = nodes
        .par_iter()
        .map(|&(t1, t2, w)| -> Result<f64> {
            // project the chord node onto the contour along grad_t F
            let (mut a, mut b) = (t1, t2);
            for _ in 0..8 {
                let (f, gt, _) = offset_data(model, nu, a, b);
                let g2 = gt[0] * gt[0] + gt[1] * gt[1];
                if f.abs() < 1e-15 || g2 == 0.0 {
                    break;
                }
                a -= f * gt[0] / g2;
                b -= f * gt[1] / g2;
            }
            let p = ModelPoint::from_moduli(&moduli(a, b));
            let f = match decompose(model, nu, &p)? {
                Decomposition::OnCone(_) => integrand(model, nu, &p)?,
                // the opposite ray also solves F = 0
                Decomposition::OffCone { .. } => return Ok(0.0),
            };
            let (_, gt, gm) = offset_data(model, nu, a, b);
            let gtn = (gt[0] * gt[0] + gt[1] * gt[1]).sqrt();
            Ok(w * f * gm / gtn)
        })
        .collect::<Result<_>>()?;
    let total = pairwise_sum(&terms);
    if total == 0.0 {
        return Err(Error::EmptyLocus(format!(
            "{}: the locus over nu = {:?} is empty",
            model.id, nu.coords
        )));
    }
    if let Some(&(t1, t2, _)) = nodes.get(nodes.len() / 2) {
        check_phase_invariance(model, nu, &[moduli(t1, t2)])?;
    }
    Ok(DimCoeff {
        delta0: pre * total,
        scheme: "contour",
        level: n,
        nodes: nodes.len(),
        contour_length: Some(length),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_weights_one_two() {
        // analytic: pi int_1^2 t^-2 dt = pi / 2
        let m = ProjectiveModel::catalog("s1-cp1-w12").unwrap();
        let nu = m.default_half_weight().unwrap();
        let dc = predict_dim_coeff(&m, &nu, DEFAULT_DIM_LEVEL).unwrap();
        assert!((dc.delta0 - PI / 2.0).abs() < 1e-12, "{}", dc.delta0);
    }

    #[test]
    fn su2_matches_irrep_bookkeeping() {
        // dim = k nu = (k / pi) delta0
        let m = ProjectiveModel::catalog("su2-cp1").unwrap();
        for nuv in [1.0, 3.0] {
            let nu = HalfWeight::new(&m.metric, &[nuv]).unwrap();
            let dc = predict_dim_coeff(&m, &nu, 8).unwrap();
            assert!((dc.delta0 - PI * nuv).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_two_contours() {
        // t2-cp2: k + 1 lattice points; u2-cp2: dimension k. Both give pi.
        for id in ["t2-cp2", "u2-cp2"] {
            let m = ProjectiveModel::catalog(id).unwrap();
            let nu = m.default_half_weight().unwrap();
            let dc = predict_dim_coeff(&m, &nu, 24).unwrap();
            assert!((dc.delta0 - PI).abs() < 1e-9, "{id}: {}", dc.delta0);
        }
    }

    #[test]
    fn w112_count() {
        // weights (1,1,2), nu = 1: #{a + b + 2c = k} ~ k^2 / 4 = (k/pi)^2 delta0
        let m = ProjectiveModel::catalog("s1-cp2-w112").unwrap();
        let nu = m.default_half_weight().unwrap();
        let dc = predict_dim_coeff(&m, &nu, DEFAULT_DIM_LEVEL).unwrap();
        assert!((dc.delta0 - PI * PI / 4.0).abs() < 1e-9, "{}", dc.delta0);
    }

    #[test]
    fn metric_scaling_leaves_delta0() {
        for id in ["s1-cp1-w12", "t2-cp2", "u2-cp2", "su2-cp1"] {
            let m = ProjectiveModel::catalog(id).unwrap();
            let nu = m.default_half_weight().unwrap();
            let base = predict_dim_coeff(&m, &nu, 16).unwrap().delta0;
            for cc in [2.0, 5.0] {
                let mc = m.with_metric(m.metric.scaled(cc)).unwrap();
                let v = predict_dim_coeff(&mc, &nu, 16).unwrap().delta0;
                assert!((v / base - 1.0).abs() < 1e-10, "{id} c={cc}");
            }
        }
    }

    #[test]
    fn empty_locus() {
        let m = ProjectiveModel::catalog("t2-cp2").unwrap();
        let nu = HalfWeight::new(&m.metric, &[1.0, -3.0]).unwrap();
        assert!(matches!(predict_dim_coeff(&m, &nu, 12), Err(Error::EmptyLocus(_))));
    }
}
