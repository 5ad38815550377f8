use super::jacobian::exp_jacobian;
use crate::error::{Error, Result};
use crate::lie::{GroupKind, HalfWeight, InvariantMetric};
use crate::numeric::{c, gauss_legendre, pairwise_sum, C64, TWO_PI};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Symplectic volume of the coadjoint orbit through a regular Cartan
/// covector gamma: (2 pi)^{n_G} prod_beta |phi(gamma, beta)| / phi(delta, beta).
pub fn orbit_volume(metric: &InvariantMetric, gamma: &DVector<f64>) -> Result<f64> {
    let g = metric.group();
    let mut p = TWO_PI.powi(g.n_g as i32);
    for (i, beta) in g.positive_roots.iter().enumerate() {
        let num = metric.cartan_dual_inner(gamma, beta);
        if num == 0.0 {
            return Err(Error::ZeroFactor(format!(
                "orbit volume: gamma is orthogonal to positive root #{i}"
            )));
        }
        p *= num.abs() / metric.cartan_dual_inner(&g.delta, beta);
    }
    Ok(p)
}

#[derive(Debug, Clone, Serialize)]
pub enum OrbitScheme {
    Point,
    /// Gauss-Legendre in the height times a uniform azimuthal grid.
    SphereProduct { n_height: usize, n_azimuth: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// Nodes (full coalgebra coordinates) and weights integrating against the
/// symplectic volume form of a coadjoint orbit.
#[derive(Debug, Clone)]
pub struct OrbitQuadrature {
    pub nodes: Vec<DVector<f64>>,
    pub weights: Vec<f64>,
    pub scheme: OrbitScheme,
    pub radius: f64,
}

impl OrbitQuadrature {
    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self.scheme, OrbitScheme::MonteCarlo { .. })
    }

    /// Integrates f over the orbit; for Monte Carlo also returns the
    /// standard error of the estimate.
    pub fn integrate<F>(&self, f: F) -> (C64, Option<f64>)
    where
        F: Fn(&DVector<f64>) -> C64 + Sync,
    {
        let vals: Vec<C64> = self.nodes.par_iter().map(&f).collect();
        let terms: Vec<C64> = vals.iter().zip(&self.weights).map(|(v, w)| v * *w).collect();
        let total = pairwise_sum(&terms);
        if let OrbitScheme::MonteCarlo { samples, .. } = self.scheme {
            let n = samples as f64;
            let vol = self.total_weight();
            let mean = total / vol;
            let var: f64 = pairwise_sum(&vals.iter().map(|v| (v - mean).norm_sqr()).collect::<Vec<_>>()) / (n - 1.0);
            (total, Some(vol * (var / n).sqrt()))
        } else {
            (total, None)
        }
    }
}

pub const DEFAULT_ORBIT_LEVEL: usize = 64;
pub const DEFAULT_MC_SAMPLES: usize = 200_000;

/// Quadrature on O_nu. `level` is the number of Gauss-Legendre heights
/// (twice as many azimuths) for groups of matrix size 2; larger groups use
/// Monte Carlo with `level * level * 2` samples unless `level` is zero, in
/// which case the default sample count is used.
pub fn orbit_quadrature(metric: &InvariantMetric, nu: &HalfWeight, level: usize) -> Result<OrbitQuadrature> {
    let g = metric.group();
    let lam = g.embed_cartan(&nu.vector());
    let radius = metric.covector_norm(&lam);
    if g.is_torus() || g.n_g == 0 {
        return Ok(OrbitQuadrature {
            nodes: vec![lam],
            weights: vec![1.0],
            scheme: OrbitScheme::Point,
            radius,
        });
    }
    if g.size == 2 {
        return sphere_orbit(metric, &lam, level.max(4), radius);
    }
    let samples = if level == 0 { DEFAULT_MC_SAMPLES } else { 2 * level * level };
    monte_carlo_orbit(metric, nu, &lam, samples, radius)
}

fn sphere_orbit(metric: &InvariantMetric, lam: &DVector<f64>, n_h: usize, radius: f64) -> Result<OrbitQuadrature> {
    let g = metric.group();
    let l = metric.sharp(lam);
    // Split lambda^phi into its central part and its su(2) part.
    let center: Vec<DVector<f64>> = match g.kind {
        GroupKind::U(_) => {
            let id = crate::numeric::CMat::identity(2, 2) * c(0.0, 1.0);
            metric.orthonormalize(&[g.coords(&id)])
        }
        _ => vec![],
    };
    let mut s = l.clone();
    let mut cpart = DVector::zeros(g.dim);
    for z in &center {
        let p = metric.inner(z, &l);
        cpart += z * p;
        s -= z * p;
    }
    let rho = metric.norm(&s);
    if rho < 1e-14 {
        return Err(Error::ZeroFactor("orbit is a point (nu is central)".into()));
    }
    let e1 = &s / rho;
    let mut cands: Vec<DVector<f64>> = center.clone();
    cands.push(e1.clone());
    cands.extend((0..g.dim).map(|a| crate::lie::metric::unit_vec(g.dim, a)));
    let frame = metric.orthonormalize(&cands);
    let (e2, e3) = (frame[center.len() + 1].clone(), frame[center.len() + 2].clone());

    // KKS density relative to the phi-area form, measured at lambda itself.
    let u = g.bracket(&e2, &l);
    let v = g.bracket(&e3, &l);
    let sigma = lam.dot(&g.bracket(&e2, &e3)).abs();
    let area = (metric.inner(&u, &u) * metric.inner(&v, &v) - metric.inner(&u, &v).powi(2)).sqrt();
    let density = sigma / area;

    let n_az = 2 * n_h;
    let gl = gauss_legendre(n_h);
    let dpsi = TWO_PI / n_az as f64;
    let mut nodes = Vec::with_capacity(n_h * n_az);
    let mut weights = Vec::with_capacity(n_h * n_az);
    for &(x, w) in &gl {
        let sx = (1.0 - x * x).sqrt();
        for j in 0..n_az {
            let psi = j as f64 * dpsi;
            let p = &cpart + (&e1 * x + &e2 * (sx * psi.cos()) + &e3 * (sx * psi.sin())) * rho;
            nodes.push(metric.flat(&p));
            weights.push(rho * rho * w * dpsi * density);
        }
    }
    Ok(OrbitQuadrature {
        nodes,
        weights,
        scheme: crate::characters::orbit::OrbitScheme::SphereProduct {
            n_height: n_h,
            n_azimuth: n_az,
        },
        radius,
    })
}

const MC_SEED: u64 = 0x0b17;

fn monte_carlo_orbit(
    metric: &InvariantMetric,
    _nu: &HalfWeight,
    lam: &DVector<f64>,
    samples: usize,
    radius: f64,
) -> Result<OrbitQuadrature> {
    let g = metric.group();
    let vol = orbit_volume(metric, &lam.rows(0, g.rank).into_owned())?;
    let mut rng = ChaCha8Rng::seed_from_u64(MC_SEED);
    let mut nodes = Vec::with_capacity(samples);
    for _ in 0..samples {
        let h = g.random_element(&mut rng);
        nodes.push(metric.coadjoint_action(&h, lam)?);
    }
    Ok(OrbitQuadrature {
        nodes,
        weights: vec![vol / samples as f64; samples],
        scheme: OrbitScheme::MonteCarlo { samples, seed: MC_SEED },
        radius,
    })
}

/// Kirillov character value with an optional Monte Carlo standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KirillovValue {
    pub re: f64,
    pub im: f64,
    pub std_error: Option<f64>,
}

impl KirillovValue {
    pub fn value(&self) -> C64 {
        c(self.re, self.im)
    }
}

/// (2 pi)^{-n_G} P(xi)^{-1} int_{O_nu} exp(i <lambda, xi>) dV(lambda).
pub fn kirillov_character(
    metric: &InvariantMetric,
    quad: &OrbitQuadrature,
    xi: &DVector<f64>,
) -> Result<KirillovValue> {
    kirillov_character_scaled(metric, quad, xi, 1)
}

/// chi_{k nu}(exp xi) = (k / 2 pi)^{n_G} P(xi)^{-1} int_{O_nu} exp(i k <lambda, xi>).
pub fn kirillov_character_scaled(
    metric: &InvariantMetric,
    quad: &OrbitQuadrature,
    xi: &DVector<f64>,
    k: u64,
) -> Result<KirillovValue> {
    let g = metric.group();
    if xi.len() != g.dim {
        return Err(Error::Dimension(format!("xi must have {} entries", g.dim)));
    }
    let p = exp_jacobian(metric, xi)?;
    let kf = k as f64;
    let (integral, se) = quad.integrate(|lam| C64::from_polar(1.0, kf * lam.dot(xi)));
    let pref = (kf / TWO_PI).powi(g.n_g as i32) / p;
    let v = integral * pref;
    Ok(KirillovValue {
        re: v.re,
        im: v.im,
        std_error: se.map(|s| s * pref),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::weyl::{weyl_character, weyl_dimension, WallPolicy};
    use crate::lie::{default_metric, GroupKind};
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn su2_orbit_volume_and_nodes() {
        let m = default_metric(GroupKind::SU(2)).unwrap();
        let nu = HalfWeight::new(&m, &[2.0]).unwrap();
        let q = orbit_quadrature(&m, &nu, DEFAULT_ORBIT_LEVEL).unwrap();
        assert!((q.total_weight() - 4.0 * PI).abs() < 1e-12);
        for n in &q.nodes {
            assert!((m.covector_norm(n) - 2.0 / 2f64.sqrt()).abs() < 1e-12);
        }
        assert!((orbit_volume(&m, &nu.vector()).unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn u2_orbit_volume() {
        let m = default_metric(GroupKind::U(2)).unwrap();
        let nu = HalfWeight::new(&m, &[1.5, -1.5]).unwrap();
        let q = orbit_quadrature(&m, &nu, DEFAULT_ORBIT_LEVEL).unwrap();
        assert!((q.total_weight() - 6.0 * PI).abs() < 1e-12);
        let r = m.covector_norm(&m.group().embed_cartan(&nu.vector()));
        for n in &q.nodes {
            assert!((m.covector_norm(n) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_orbit_is_a_point() {
        let m = default_metric(GroupKind::Torus(2)).unwrap();
        let nu = HalfWeight::new(&m, &[1.0, 2.0]).unwrap();
        let q = orbit_quadrature(&m, &nu, 8).unwrap();
        assert_eq!(q.nodes.len(), 1);
        assert_eq!(q.weights, vec![1.0]);
        let xi = DVector::from_vec(vec![0.3, -0.1]);
        let k = kirillov_character(&m, &q, &xi).unwrap().value();
        assert!((k - C64::from_polar(1.0, 0.3 - 0.2)).norm() < 1e-15);
    }

    #[test]
    fn kirillov_matches_weight_sum_for_su2() {
        let m = default_metric(GroupKind::SU(2)).unwrap();
        let nu = HalfWeight::new(&m, &[4.0]).unwrap();
        let q = orbit_quadrature(&m, &nu, DEFAULT_ORBIT_LEVEL).unwrap();
        let th = 0.5f64;
        let xi = DVector::from_vec(vec![th, 0.0, 0.0]);
        let k = kirillov_character(&m, &q, &xi).unwrap().value();
        let oracle: C64 = (0..4).map(|j| C64::from_polar(1.0, (3 - 2 * j) as f64 * th)).sum();
        assert!((k - oracle).norm() < 1e-6);
    }

    #[test]
    fn kirillov_at_zero_is_dimension() {
        for (kind, nu) in [(GroupKind::SU(2), vec![3.0]), (GroupKind::U(2), vec![2.5, -1.5])] {
            let m = default_metric(kind).unwrap();
            let nu = HalfWeight::new(&m, &nu).unwrap();
            let q = orbit_quadrature(&m, &nu, DEFAULT_ORBIT_LEVEL).unwrap();
            let z = DVector::zeros(m.group().dim);
            let v = kirillov_character(&m, &q, &z).unwrap().value();
            let d = weyl_dimension(&m, &nu).unwrap() as f64;
            assert!((v.re - d).abs() < 1e-12 && v.im.abs() < 1e-12);
            assert_eq!(v.re.round() as u64, d as u64);
        }
    }

    #[test]
    fn rescaled_kirillov_matches_weyl_at_k_nu() {
        let m = default_metric(GroupKind::U(2)).unwrap();
        let nu = HalfWeight::new(&m, &[1.5, 0.5]).unwrap();
        let q = orbit_quadrature(&m, &nu, DEFAULT_ORBIT_LEVEL).unwrap();
        let th = DVector::from_vec(vec![0.2, -0.15]);
        let xi = m.group().embed_cartan(&th);
        let k = 3;
        let kv = kirillov_character_scaled(&m, &q, &xi, k).unwrap().value();
        let w = weyl_character(&m, &nu.scaled(&m, k).unwrap(), &th, WallPolicy::Fail).unwrap();
        assert!((kv - w).norm() < 1e-8, "{kv} vs {w}");
    }

    #[test]
    fn su3_monte_carlo_reports_error_bars() {
        let m = default_metric(GroupKind::SU(3)).unwrap();
        let d: Vec<f64> = m.group().delta.iter().map(|x| x + 1.0).collect();
        let nu = HalfWeight::new(&m, &d).unwrap();
        let q = orbit_quadrature(&m, &nu, 60).unwrap();
        assert!(q.is_monte_carlo());
        let vol = orbit_volume(&m, &nu.vector()).unwrap();
        assert!((q.total_weight() - vol).abs() < 1e-9 * vol);
        // (2 pi)^3 d_nu = vol(O_nu)
        assert!((vol / TWO_PI.powi(3) - 8.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let th = DVector::from_vec(vec![rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)]);
        let xi = m.group().embed_cartan(&th);
        let kv = kirillov_character(&m, &q, &xi).unwrap();
        let w = weyl_character(&m, &nu, &th, WallPolicy::Fail).unwrap();
        let se = kv.std_error.unwrap();
        assert!(se > 0.0 && (kv.value() - w).norm() < 6.0 * se, "{:?} vs {w}", kv);
    }
}
