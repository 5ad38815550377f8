use crate::characters::orbit_volume;
use crate::error::{Error, Result};
use crate::geometry::locus::{real_orthonormalize, span_residual};
use crate::geometry::{d_phi, normal_space, w_space, LocusSample, ProjectiveModel};
use crate::lie::{HalfWeight, InvariantMetric};
use crate::numeric::{c, CVec, C64};
use nalgebra::DVector;
use serde::Serialize;
use std::f64::consts::PI;

/// psi_2(u, v) = -i omega_0(u, v) - |u - v|^2 / 2 with omega_0(u, v) = Im <u, v>.
pub fn psi2(u: &CVec, v: &CVec) -> C64 {
    let om = u.dotc(v).im;
    c(-0.5 * (u - v).norm_squared(), -om)
}

/// Every factor entering Psi_nu(m).
#[derive(Debug, Clone, Serialize)]
pub struct PsiBreakdown {
    pub psi: f64,
    /// 2^{1 + (r_G - 1)/2} pi.
    pub prefactor: f64,
    pub phi_norm: f64,
    pub d_phi: f64,
    /// vol(O) for the unit covector nu / ||nu||.
    pub orbit_volume_unit: f64,
    /// |det S| for the unit vector nu^phi / ||nu^phi||.
    pub det_s_unit: f64,
    pub vol_t: f64,
    pub vol_g: f64,
}

/// nu^phi in Cartan algebra coordinates.
pub(crate) fn nu_sharp_cartan(metric: &InvariantMetric, nu: &DVector<f64>) -> DVector<f64> {
    let g = metric.group();
    let mut full = DVector::zeros(g.dim);
    full.rows_mut(0, g.rank).copy_from(nu);
    metric.sharp(&full).rows(0, g.rank).into_owned()
}

fn nonzero(name: &str, x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::ZeroFactor(format!("{name} = {x}")));
    }
    Ok(x)
}

/// The leading coefficient Psi_nu at a locus point.
pub fn psi_nu(model: &ProjectiveModel, nu: &HalfWeight, sample: &LocusSample) -> Result<PsiBreakdown> {
    let metric = &model.metric;
    let r = model.rank() as f64;
    let nu_v = nu.vector();
    let nu_norm = nonzero("||nu||", metric.cartan_dual_inner(&nu_v, &nu_v).sqrt())?;
    let nu_unit = &nu_v / nu_norm;
    let phi_norm = nonzero("||Phi(m)||", metric.covector_norm(&sample.phi))?;
    let (_, dd) = d_phi(model, sample)?;
    let dd = nonzero("D^phi(m)", dd)?;
    let orbit = nonzero("vol(O)", orbit_volume(metric, &nu_unit)?)?;
    let (_, det_s) = metric.s_tau(&nu_sharp_cartan(metric, &nu_unit));
    let det_s = nonzero("|det S|", det_s)?;
    let (vol_g, vol_t) = metric.group_volumes();
    let prefactor = 2f64.powf(1.0 + (r - 1.0) / 2.0) * PI;
    let psi = prefactor / (phi_norm * dd) * orbit * orbit / det_s * vol_t / (vol_g * vol_g);
    Ok(PsiBreakdown {
        psi,
        prefactor,
        phi_norm,
        d_phi: dd,
        orbit_volume_unit: orbit,
        det_s_unit: det_s,
        vol_t,
        vol_g,
    })
}

/// Displacements must stay below C k^eps with eps < 1/6.
pub const DISPLACEMENT_CONST: f64 = 4.0;
pub const DISPLACEMENT_EPS: f64 = 0.16;
/// Subspace-membership tolerance for v and w.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Displacement data x + (v_j + w_j)/sqrt(k) of the two kernel arguments.
#[derive(Debug, Clone, Default)]
pub struct Displacements {
    pub v1: Option<CVec>,
    pub w1: Option<CVec>,
    pub v2: Option<CVec>,
    pub w2: Option<CVec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub model: String,
    pub nu: Vec<f64>,
    pub k: u64,
    /// (re, im) of the base point coordinates.
    pub x: Vec<(f64, f64)>,
    pub v_norms: (f64, f64),
    pub w_norms: (f64, f64),
    pub value: (f64, f64),
    pub psi: PsiBreakdown,
    pub sigma: f64,
    /// (k / (sigma pi))^{d + (1 - r_G)/2}.
    pub exponent_factor: f64,
    pub exponent: f64,
    pub gaussian_factor: (f64, f64),
}

impl Prediction {
    pub fn value(&self) -> C64 {
        c(self.value.0, self.value.1)
    }
}

fn check_member(name: &'static str, basis: &[CVec], v: &CVec) -> Result<()> {
    let res = span_residual(basis, v);
    if res > MEMBERSHIP_TOL * v.norm().max(1.0) {
        return Err(Error::NotInSubspace { space: name, residual: res });
    }
    Ok(())
}

/// Leading term of the near-diagonal expansion at x + (v_j + w_j)/sqrt(k).
pub fn predict_near_diagonal(
    model: &ProjectiveModel,
    nu: &HalfWeight,
    sample: &LocusSample,
    k: u64,
    disp: &Displacements,
) -> Result<Prediction> {
    if k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    let n = model.ambient();
    let zero = CVec::zeros(n);
    let pick = |o: &Option<CVec>| o.clone().unwrap_or_else(|| zero.clone());
    let (v1, w1, v2, w2) = (pick(&disp.v1), pick(&disp.w1), pick(&disp.v2), pick(&disp.w2));
    for v in [&v1, &w1, &v2, &w2] {
        if v.len() != n {
            return Err(Error::Dimension(format!("displacement has {} entries, expected {n}", v.len())));
        }
    }
    let normal = real_orthonormalize(&normal_space(model, sample)?);
    let w_basis: Vec<CVec> = w_space(model, &sample.point)
        .into_iter()
        .flat_map(|w| [w.clone(), w * c(0.0, 1.0)])
        .collect();
    check_member("normal space", &normal, &v1)?;
    check_member("normal space", &normal, &v2)?;
    check_member("w-space", &w_basis, &w1)?;
    check_member("w-space", &w_basis, &w2)?;
    let bound = DISPLACEMENT_CONST * (k as f64).powf(DISPLACEMENT_EPS);
    for v in [&v1, &w1, &v2, &w2] {
        if v.norm() > bound {
            return Err(Error::ChartRadius(format!(
                "displacement norm {} exceeds {bound} = C k^eps",
                v.norm()
            )));
        }
    }
    let psi = psi_nu(model, nu, sample)?;
    let sigma = sample.sigma;
    let exponent = model.d as f64 + (1.0 - model.rank() as f64) / 2.0;
    let exponent_factor = (k as f64 / (sigma * PI)).powf(exponent);
    let gauss = ((psi2(&w1, &w2) - c(v1.norm_squared() + v2.norm_squared(), 0.0)) / sigma).exp();
    let value = gauss * (psi.psi * exponent_factor);
    Ok(Prediction {
        model: model.id.clone(),
        nu: nu.coords.clone(),
        k,
        x: sample.point.x.iter().map(|z| (z.re, z.im)).collect(),
        v_norms: (v1.norm(), v2.norm()),
        w_norms: (w1.norm(), w2.norm()),
        value: (value.re, value.im),
        psi,
        sigma,
        exponent_factor,
        exponent,
        gaussian_factor: (gauss.re, gauss.im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{decompose, locus_points, ModelPoint, CATALOG};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cv(xs: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(xs.len(), xs.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn psi2_identities() {
        let u = cv(&[(0.3, -0.2), (1.0, 0.5)]);
        assert_eq!(psi2(&u, &u), c(0.0, 0.0));
        let z = CVec::zeros(2);
        assert!((psi2(&u, &z) - c(-0.5 * u.norm_squared(), 0.0)).norm() < 1e-15);
        let e1 = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let je1 = &e1 * c(0.0, 1.0);
        assert!((psi2(&e1, &je1) - c(-1.0, -1.0)).norm() < 1e-15);
        // Re psi2 <= 0 always
        let v = cv(&[(-0.7, 0.1), (0.2, 0.9)]);
        assert!(psi2(&u, &v).re <= 0.0);
    }

    #[test]
    fn closed_forms_for_psi() {
        // SU(2): Psi = 1/(2 lambda) with lambda = 1/2
        let m = ProjectiveModel::catalog("su2-cp1").unwrap();
        for nuv in [1.0, 2.0, 3.0] {
            let nu = HalfWeight::new(&m.metric, &[nuv]).unwrap();
            let s = decompose(&m, &nu, &m.default_base_point()).unwrap().on_cone().unwrap();
            let p = psi_nu(&m, &nu, &s).unwrap();
            assert!((p.psi - 1.0).abs() < 1e-12, "{}", p.psi);
        }
        // tori: (sqrt2 pi)^{1-r} / (||Phi|| D)
        for id in ["s1-cp1-w12", "t2-cp2", "s1-cp2-w112"] {
            let m = ProjectiveModel::catalog(id).unwrap();
            let nu = m.default_half_weight().unwrap();
            for s in locus_points(&m, &nu, 3, 1).unwrap() {
                let p = psi_nu(&m, &nu, &s).unwrap();
                let r = m.rank() as f64;
                let expect = (2f64.sqrt() * PI).powf(1.0 - r) / (p.phi_norm * p.d_phi);
                assert!((p.psi / expect - 1.0).abs() < 1e-12, "{id}");
            }
        }
        // U(2): (sqrt2 pi)^{-1} / (||Phi|| D)
        let m = ProjectiveModel::catalog("u2-cp2").unwrap();
        let nu = m.default_half_weight().unwrap();
        for s in locus_points(&m, &nu, 3, 1).unwrap() {
            let p = psi_nu(&m, &nu, &s).unwrap();
            let expect = 1.0 / (2f64.sqrt() * PI * p.phi_norm * p.d_phi);
            assert!((p.psi / expect - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_is_metric_independent_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for id in CATALOG {
            let m = ProjectiveModel::catalog(id).unwrap();
            let nu = m.default_half_weight().unwrap();
            for s in locus_points(&m, &nu, 2, 4).unwrap() {
                let base = psi_nu(&m, &nu, &s).unwrap().psi;
                for cc in [2.0, 5.0] {
                    let mc = m.with_metric(m.metric.scaled(cc)).unwrap();
                    let sc = decompose(&mc, &nu, &s.point).unwrap().on_cone().unwrap();
                    let p = psi_nu(&mc, &nu, &sc).unwrap().psi;
                    assert!((p / base - 1.0).abs() < 1e-10, "{id} c={cc}");
                }
                let g = m.metric.group().random_element(&mut rng);
                let moved = ModelPoint::new(m.rep(&g).unwrap() * &s.point.x).unwrap();
                let sm = decompose(&m, &nu, &moved).unwrap().on_cone().unwrap();
                let p = psi_nu(&m, &nu, &sm).unwrap().psi;
                assert!((p / base - 1.0).abs() < 1e-10, "{id}");
            }
        }
    }

    #[test]
    fn diagonal_prediction_forms() {
        let m = ProjectiveModel::catalog("su2-cp1").unwrap();
        let nu = HalfWeight::new(&m.metric, &[2.0]).unwrap();
        let s = decompose(&m, &nu, &m.default_base_point()).unwrap().on_cone().unwrap();
        for k in [1u64, 7, 64, 512] {
            let p = predict_near_diagonal(&m, &nu, &s, k, &Displacements::default()).unwrap();
            assert!((p.value().re / (k as f64 * 2.0 / PI) - 1.0).abs() < 1e-12);
            assert_eq!(p.value().im, 0.0);
        }
        // monomial in k with the stated exponent
        let m = ProjectiveModel::catalog("t2-cp2").unwrap();
        let nu = m.default_half_weight().unwrap();
        let s = decompose(&m, &nu, &m.default_base_point()).unwrap().on_cone().unwrap();
        let a = predict_near_diagonal(&m, &nu, &s, 64, &Displacements::default()).unwrap();
        let b = predict_near_diagonal(&m, &nu, &s, 128, &Displacements::default()).unwrap();
        let slope = (b.value().re / a.value().re).ln() / 2f64.ln();
        assert!((slope - 1.5).abs() < 1e-12);
        let direct = a.psi.psi * (64.0 / (s.sigma * PI)).powf(1.5);
        assert_eq!(a.value().re, direct);
    }

    #[test]
    fn gaussian_factor_and_membership() {
        let m = ProjectiveModel::catalog("s1-cp2-w112").unwrap();
        let nu = m.default_half_weight().unwrap();
        let s = decompose(&m, &nu, &m.default_base_point()).unwrap().on_cone().unwrap();
        let w = &w_space(&m, &s.point)[0] * c(0.7, 0.0);
        let same = Displacements {
            w1: Some(w.clone()),
            w2: Some(w.clone()),
            ..Default::default()
        };
        let p = predict_near_diagonal(&m, &nu, &s, 100, &same).unwrap();
        assert!((p.gaussian_factor.0 - 1.0).abs() < 1e-15 && p.gaussian_factor.1.abs() < 1e-15);
        // a tangent direction along the group orbit is not in the w-space
        let bad = Displacements {
            w1: Some(crate::geometry::val(&m, &s.point, &DVector::from_element(1, 1.0))),
            ..Default::default()
        };
        assert!(matches!(
            predict_near_diagonal(&m, &nu, &s, 100, &bad),
            Err(Error::NotInSubspace { .. })
        ));
        // r = 1: the normal space is zero, so any v is rejected
        let badv = Displacements {
            v1: Some(w),
            ..Default::default()
        };
        assert!(predict_near_diagonal(&m, &nu, &s, 100, &badv).is_err());
        // modulus never exceeds the diagonal value
        let t2 = ProjectiveModel::catalog("t2-cp2").unwrap();
        let nu2 = t2.default_half_weight().unwrap();
        let s2 = decompose(&t2, &nu2, &t2.default_base_point()).unwrap().on_cone().unwrap();
        let v = &normal_space(&t2, &s2).unwrap()[0];
        let v = v * c(0.5 / v.norm(), 0.0);
        let d = Displacements {
            v1: Some(v.clone()),
            v2: Some(-v),
            ..Default::default()
        };
        let p = predict_near_diagonal(&t2, &nu2, &s2, 256, &d).unwrap();
        assert!((p.gaussian_factor.0 - (-0.5 / s2.sigma).exp()).abs() < 1e-14);
    }
}
