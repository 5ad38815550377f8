use super::weyl::{character_at, weyl_dimension_value};
use crate::error::{Error, Result};
use crate::lie::{CompactGroup, GroupKind, HalfWeight, InvariantMetric};
use crate::numeric::{c, gauss_legendre_on, pairwise_sum, CMat, C64, TWO_PI};
use rayon::prelude::*;

/// Product quadrature for the Haar probability measure.
///
/// Tori use the trapezoid rule in every angle. SU(2) is parametrized as
/// `[[a, -conj b], [b, conj a]]` with `a = sqrt(1-u) e^{i p}`,
/// `b = sqrt(u) e^{i q}`; Haar measure is uniform in (u, p, q), so
/// Gauss-Legendre in u and trapezoid in p, q. U(2) adds a central phase
/// e^{i s} with s uniform on [0, 2 pi); the map is two-to-one and uniform,
/// which leaves the normalized measure unchanged.
#[derive(Debug, Clone)]
pub struct HaarQuadrature {
    pub nodes: Vec<CMat>,
    pub weights: Vec<f64>,
    pub level: usize,
}

pub const DEFAULT_HAAR_LEVEL_SU2: usize = 48;
pub const DEFAULT_HAAR_LEVEL_U2: usize = 24;
pub const DEFAULT_HAAR_LEVEL_TORUS: usize = 64;

pub fn default_haar_level(kind: GroupKind) -> usize {
    match kind {
        GroupKind::Torus(_) => DEFAULT_HAAR_LEVEL_TORUS,
        GroupKind::SU(_) => DEFAULT_HAAR_LEVEL_SU2,
        GroupKind::U(_) => DEFAULT_HAAR_LEVEL_U2,
    }
}

fn su2_element(u: f64, p: f64, q: f64) -> CMat {
    let a = C64::from_polar((1.0 - u).max(0.0).sqrt(), p);
    let b = C64::from_polar(u.max(0.0).sqrt(), q);
    CMat::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

impl HaarQuadrature {
    pub fn new(group: &CompactGroup, level: usize) -> Result<Self> {
        let n = level.max(2);
        let angles: Vec<f64> = (0..n).map(|j| TWO_PI * j as f64 / n as f64).collect();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match group.kind {
            GroupKind::Torus(r) => {
                let total = n.pow(r as u32);
                for idx in 0..total {
                    let mut g = CMat::zeros(r, r);
                    let mut rest = idx;
                    for j in 0..r {
                        g[(j, j)] = C64::from_polar(1.0, angles[rest % n]);
                        rest /= n;
                    }
                    nodes.push(g);
                    weights.push(1.0 / total as f64);
                }
            }
            GroupKind::SU(2) | GroupKind::U(2) => {
                let gl = gauss_legendre_on(n, 0.0, 1.0);
                let phases: Vec<f64> = if group.kind == GroupKind::U(2) {
                    angles.clone()
                } else {
                    vec![0.0]
                };
                let w_ang = 1.0 / (n * n * phases.len()) as f64;
                for &s in &phases {
                    let z = C64::from_polar(1.0, s);
                    for &(u, wu) in &gl {
                        for &p in &angles {
                            for &q in &angles {
                                nodes.push(su2_element(u, p, q) * z);
                                weights.push(wu * w_ang);
                            }
                        }
                    }
                }
            }
            other => {
                return Err(Error::Unsupported(format!(
                    "Haar product quadrature is implemented for tori, SU(2) and U(2), not {other}"
                )))
            }
        }
        Ok(Self {
            nodes,
            weights,
            level: n,
        })
    }

    pub fn integrate<F>(&self, f: F) -> C64
    where
        F: Fn(&CMat) -> C64 + Sync,
    {
        let terms: Vec<C64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(g, w)| f(g) * *w)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn try_integrate<F>(&self, f: F) -> Result<C64>
    where
        F: Fn(&CMat) -> Result<C64> + Sync,
    {
        let terms: Vec<C64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(g, w)| f(g).map(|v| v * *w))
            .collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&terms))
    }
}

/// Riemannian volume of the group under `metric`, by integrating the
/// density sqrt(det(J^T G J)) of the Hopf-coordinate parametrization, where
/// J holds the left-trivialized partial derivatives (central differences).
/// Serves as a cross-check of the closed forms in `group_volumes`.
pub fn riemannian_volume_quadrature(metric: &InvariantMetric, level: usize) -> Result<f64> {
    let g = metric.group();
    let n = level.max(4);
    let h = 1e-6;
    let density = |param: &dyn Fn(&[f64]) -> CMat, x: &[f64]| -> f64 {
        let g0 = param(x);
        let inv = g0.adjoint();
        let cols: Vec<nalgebra::DVector<f64>> = (0..x.len())
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                let d: CMat = (param(&xp) - param(&xm)) * c(0.5 / h, 0.0);
                g.coords(&(&inv * d))
            })
            .collect();
        let m = cols.len();
        let gram = nalgebra::DMatrix::from_fn(m, m, |i, j| metric.inner(&cols[i], &cols[j]));
        gram.determinant().max(0.0).sqrt()
    };
    match g.kind {
        GroupKind::Torus(r) => {
            // product of circles: the density is constant
            let param = |x: &[f64]| -> CMat {
                let mut m = CMat::zeros(r, r);
                for j in 0..r {
                    m[(j, j)] = C64::from_polar(1.0, x[j]);
                }
                m
            };
            Ok(density(&param, &vec![0.3; r]) * TWO_PI.powi(r as i32))
        }
        GroupKind::SU(2) | GroupKind::U(2) => {
            let with_phase = g.kind == GroupKind::U(2);
            let param = move |x: &[f64]| -> CMat {
                let m = su2_element(x[0], x[1], x[2]);
                if with_phase {
                    m * C64::from_polar(1.0, x[3])
                } else {
                    m
                }
            };
            // Left invariance makes the density a function of u alone;
            // it is still sampled at two angle settings and averaged.
            let gl = gauss_legendre_on(n, 0.0, 1.0);
            let samples = [[0.0, 0.0, 0.0], [0.7, 0.4, 1.1]];
            let mut terms = Vec::new();
            for &(u, wu) in &gl {
                for sm in &samples {
                    let x = [u, sm[0], sm[1], sm[2]];
                    let dens = density(&param, &x[..if with_phase { 4 } else { 3 }]);
                    terms.push(dens * wu / samples.len() as f64);
                }
            }
            // (p, q) range over [0, 2 pi)^2; the phase over [0, pi) since
            // e^{i pi} = -I lies in SU(2).
            let full_angles = TWO_PI * TWO_PI * if with_phase { std::f64::consts::PI } else { 1.0 };
            Ok(pairwise_sum(&terms) * full_angles)
        }
        other => Err(Error::Unsupported(format!("volume quadrature for {other}"))),
    }
}

/// Agreement required between the default grid and a 3/4-size grid.
pub const PROJECTOR_TOL: f64 = 1e-8;

/// d_{k nu} int_G conj(chi_{k nu}(g)) f(g) dg for the Haar probability
/// measure, evaluated on two grids; disagreement beyond [`PROJECTOR_TOL`]
/// (relative to max(1, |value|)) is reported with both estimates.
pub fn peter_weyl_projector_weight<F>(
    metric: &InvariantMetric,
    nu: &HalfWeight,
    k: u64,
    f: F,
    level: usize,
) -> Result<C64>
where
    F: Fn(&CMat) -> C64 + Sync,
{
    let g = metric.group();
    let knu = nu.scale(k as f64);
    let d = weyl_dimension_value(metric, &knu)?;
    let eval = |lvl: usize| -> Result<C64> {
        let q = HaarQuadrature::new(g, lvl)?;
        let v = q.try_integrate(|h| Ok(character_at(metric, &knu, h)?.conj() * f(h)))?;
        Ok(v * c(d, 0.0))
    };
    let fine = eval(level)?;
    let coarse = eval((3 * level).div_ceil(4))?;
    if (fine - coarse).norm() > PROJECTOR_TOL * fine.norm().max(1.0) {
        return Err(Error::NotConverged {
            coarse: format!("{coarse}"),
            fine: format!("{fine}"),
        });
    }
    Ok(fine)
}
