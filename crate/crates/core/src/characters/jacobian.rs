use crate::error::{Error, Result};
use crate::lie::InvariantMetric;
use crate::numeric::{c, CMat};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Eigen-angles of a skew-Hermitian matrix (eigenvalues of -i xi).
fn eigen_angles(xi: &CMat) -> Vec<f64> {
    let h = xi * c(0.0, -1.0);
    let h = (&h + h.adjoint()) * c(0.5, 0.0);
    h.symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// P(xi) = prod_{beta > 0} sin(beta(xi)/2) / (beta(xi)/2), the Jacobian
/// factor with exp^*(Haar density) = P^2 times the Lebesgue density, for xi
/// in the domain where every eigen-angle lies in (-pi, pi).
pub fn exp_jacobian(metric: &InvariantMetric, xi: &DVector<f64>) -> Result<f64> {
    let g = metric.group();
    let m = g.to_matrix(xi);
    let th = eigen_angles(&m);
    if let Some(bad) = th.iter().find(|t| t.abs() >= PI) {
        return Err(Error::OutsideInjectivity(format!(
            "eigen-angle {bad} is not in (-pi, pi)"
        )));
    }
    if g.is_torus() {
        return Ok(1.0);
    }
    let mut p = 1.0;
    for j in 0..th.len() {
        for k in j + 1..th.len() {
            p *= sinc((th[j] - th[k]) / 2.0);
        }
    }
    Ok(p)
}

/// Independent check: sqrt|det| of the left-trivialized differential of exp
/// in a phi-orthonormal basis, by central differences with step `h`.
pub fn exp_jacobian_fd(metric: &InvariantMetric, xi: &DVector<f64>, h: f64) -> f64 {
    let g = metric.group();
    let onb = metric.onb();
    let base_inv = g.exp(xi).adjoint();
    let n = onb.len();
    let cols: Vec<DVector<f64>> = onb
        .iter()
        .map(|b| {
            let plus = g.exp(&(xi + b * h));
            let minus = g.exp(&(xi - b * h));
            let d: CMat = (&plus - &minus) * c(0.5 / h, 0.0);
            g.coords(&(&base_inv * d))
        })
        .collect();
    let jac = DMatrix::from_fn(n, n, |i, j| metric.inner(&onb[i], &cols[j]));
    jac.determinant().abs().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{default_metric, GroupKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn jacobian_is_one_at_zero_and_on_tori() {
        for kind in [GroupKind::SU(2), GroupKind::U(2), GroupKind::SU(3), GroupKind::Torus(2)] {
            let m = default_metric(kind).unwrap();
            let z = DVector::zeros(m.group().dim);
            assert_eq!(exp_jacobian(&m, &z).unwrap(), 1.0);
        }
        let m = default_metric(GroupKind::Torus(2)).unwrap();
        assert_eq!(exp_jacobian(&m, &DVector::from_vec(vec![1.0, -2.0])).unwrap(), 1.0);
    }

    #[test]
    fn su2_closed_form_and_finite_differences() {
        let m = default_metric(GroupKind::SU(2)).unwrap();
        for th in [0.3f64, 1.1, 2.5] {
            let xi = DVector::from_vec(vec![th, 0.0, 0.0]);
            let p = exp_jacobian(&m, &xi).unwrap();
            assert!((p - th.sin() / th).abs() < 1e-14);
            let fd = exp_jacobian_fd(&m, &xi, 1e-5);
            assert!((p - fd).abs() < 1e-6, "theta={th}: {p} vs {fd}");
        }
    }

    #[test]
    fn general_elements_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for kind in [GroupKind::SU(2), GroupKind::U(2), GroupKind::SU(3)] {
            let m = default_metric(kind).unwrap();
            for _ in 0..5 {
                let xi = m.group().random_algebra(&mut rng) * rng.random_range(0.1..0.6);
                let p = exp_jacobian(&m, &xi).unwrap();
                let fd = exp_jacobian_fd(&m, &xi, 1e-5);
                assert!((p - fd).abs() < 1e-6, "{kind}: {p} vs {fd}");
            }
        }
    }

    #[test]
    fn outside_domain_is_rejected() {
        let m = default_metric(GroupKind::SU(2)).unwrap();
        assert!(exp_jacobian(&m, &DVector::from_vec(vec![3.5, 0.0, 0.0])).is_err());
    }
}
