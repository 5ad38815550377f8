use crate::error::{Error, Result};
use crate::geometry::{LocusSample, ProjectiveModel};
use crate::lie::HalfWeight;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct HessianReport {
    pub det: f64,
    pub det_expected: f64,
    pub signature: i64,
    /// Largest entry difference between the assembled and the
    /// finite-difference Hessian.
    pub fd_error: f64,
    /// Finite-difference gradient norm at the critical point.
    pub grad_norm: f64,
    pub size: usize,
    pub sigma: f64,
    pub nu_sharp_norm: f64,
    pub det_z: f64,
}

/// Variables (u, s, xi'', gamma) of the reduced phase
/// Upsilon(u, s, xi'', gamma) = < u sigma nu - Coad_{exp gamma} nu, s nu^phi_u + xi' + xi'' >.
struct Phase {
    nu_full: DVector<f64>,
    nu_sharp_unit: DVector<f64>,
    xi_prime: DVector<f64>,
    perp: Vec<DVector<f64>>,
    sigma: f64,
}

impl Phase {
    fn eval(&self, model: &ProjectiveModel, z: &[f64]) -> f64 {
        let metric = &model.metric;
        let g = metric.group();
        let m = self.perp.len();
        let (u, s) = (z[0], z[1]);
        let mut xi = &self.nu_sharp_unit * s + &self.xi_prime;
        let mut gamma = DVector::zeros(g.dim);
        for i in 0..m {
            xi += &self.perp[i] * z[2 + i];
            gamma += &self.perp[i] * z[2 + m + i];
        }
        let moved = metric
            .coadjoint_action(&g.exp(&gamma), &self.nu_full)
            .expect("exp lands in the group");
        (&self.nu_full * (u * self.sigma) - moved).dot(&xi)
    }
}

/// Assembles the Hessian of the reduced phase at P0 = (1/sigma, 0, 0, 0),
/// compares it with central differences and with the closed-form
/// determinant -sigma^2 ||nu^phi||^2 det(Z)^2, and returns its signature.
pub fn hessian_check(model: &ProjectiveModel, nu: &HalfWeight, sample: &LocusSample) -> Result<HessianReport> {
    nu.validate(&model.metric)?;
    let metric = &model.metric;
    let g = metric.group();
    let mut nu_full = DVector::zeros(g.dim);
    nu_full.rows_mut(0, g.rank).copy_from(&nu.vector());
    let sigma = sample.sigma;
    // reduce Phi(m) to sigma nu
    let hinv = sample.h.adjoint();
    let reduced = metric.coadjoint_action(&hinv, &sample.phi)?;
    let res = (&reduced - &nu_full * sigma).norm();
    if res > 1e-10 * sample.phi.norm().max(1.0) {
        return Err(Error::OffLocus(res));
    }
    let nu_sharp = metric.sharp(&nu_full);
    let nsn = metric.norm(&nu_sharp);
    let perp = metric.perp_onb();
    let m = perp.len();
    let (zmat, det_s) = metric.s_tau(&nu_sharp.rows(0, g.rank).into_owned());
    if m > 0 && det_s == 0.0 {
        return Err(Error::InvalidWeight("nu^phi is not regular".into()));
    }
    let mut seed = vec![nu_sharp.clone()];
    seed.extend(metric.cartan_onb());
    let t_nu = metric.orthonormalize(&seed).split_off(1);
    let mut xi_prime = DVector::zeros(g.dim);
    for (j, e) in t_nu.iter().enumerate() {
        xi_prime += e * (0.3 * (j as f64 + 1.0));
    }
    let phase = Phase {
        nu_full: nu_full.clone(),
        nu_sharp_unit: &nu_sharp / nsn,
        xi_prime: xi_prime.clone(),
        perp: perp.clone(),
        sigma,
    };

    let n = 2 + 2 * m;
    let mut h = DMatrix::zeros(n, n);
    h[(0, 1)] = sigma * nsn;
    h[(1, 0)] = sigma * nsn;
    for i in 0..m {
        let bi_nu = g.bracket(&perp[i], &nu_sharp);
        for j in 0..m {
            // d^2 / d gamma_i d xi''_j = -phi([b_i, nu^phi], b_j)
            let v = -metric.inner(&bi_nu, &perp[j]);
            h[(2 + m + i, 2 + j)] = v;
            h[(2 + j, 2 + m + i)] = v;
            let bj_nu = g.bracket(&perp[j], &nu_sharp);
            let sym = g.bracket(&perp[i], &bj_nu) + g.bracket(&perp[j], &bi_nu);
            h[(2 + m + i, 2 + m + j)] = -0.5 * metric.inner(&sym, &xi_prime);
        }
    }

    // central differences around P0
    let mut p0 = vec![0.0; n];
    p0[0] = 1.0 / sigma;
    let step = 1e-4;
    let f = |z: &[f64]| phase.eval(model, z);
    let mut hfd = DMatrix::zeros(n, n);
    let mut grad = DVector::zeros(n);
    for a in 0..n {
        let mut zp = p0.clone();
        let mut zm = p0.clone();
        zp[a] += step;
        zm[a] -= step;
        grad[a] = (f(&zp) - f(&zm)) / (2.0 * step);
        for b in 0..n {
            let shift = |sa: f64, sb: f64| {
                let mut z = p0.clone();
                z[a] += sa;
                z[b] += sb;
                f(&z)
            };
            hfd[(a, b)] = (shift(step, step) - shift(step, -step) - shift(-step, step) + shift(-step, -step))
                / (4.0 * step * step);
        }
    }
    let fd_error = (&h - &hfd).amax();

    let det = h.determinant();
    let det_z = if m == 0 { 1.0 } else { zmat.determinant() };
    let det_expected = -sigma * sigma * nsn * nsn * det_z * det_z;
    let eig = h.clone().symmetric_eigen().eigenvalues;
    let tol = 1e-12 * eig.amax().max(1.0);
    let pos = eig.iter().filter(|&&l| l > tol).count() as i64;
    let neg = eig.iter().filter(|&&l| l < -tol).count() as i64;
    if pos + neg != n as i64 {
        return Err(Error::CheckFailed("Hessian is degenerate at the critical point".into()));
    }
    Ok(HessianReport {
        det,
        det_expected,
        signature: pos - neg,
        fd_error,
        grad_norm: grad.norm(),
        size: n,
        sigma,
        nu_sharp_norm: nsn,
        det_z,
    })
}
