use crate::error::{Error, Result};
use crate::numeric::{c, gauss_legendre_on, pairwise_sum, CVec, C64, TWO_PI};
use rayon::prelude::*;
use serde::Serialize;

/// A unit vector x in C^{d+1}; it represents both a point of X and its
/// image [x] in M.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    pub x: CVec,
}

impl ModelPoint {
    /// Normalizes `x`; rejects the zero vector.
    pub fn new(x: CVec) -> Result<Self> {
        let n = x.norm();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::Dimension("zero or non-finite point".into()));
        }
        Ok(Self { x: x / c(n, 0.0) })
    }

    /// Real positive coordinates sqrt(t_j); `t` is normalized to sum 1.
    pub fn from_moduli(t: &[f64]) -> Self {
        Self::from_moduli_phases(t, &vec![0.0; t.len()])
    }

    pub fn from_moduli_phases(t: &[f64], phases: &[f64]) -> Self {
        let s: f64 = t.iter().sum();
        let x = CVec::from_fn(t.len(), |j, _| C64::from_polar((t[j] / s).max(0.0).sqrt(), phases[j]));
        Self { x }
    }

    pub fn dim(&self) -> usize {
        self.x.len() - 1
    }

    /// |x_j|^2.
    pub fn moduli(&self) -> Vec<f64> {
        self.x.iter().map(|z| z.norm_sqr()).collect()
    }

    /// e^{i theta} x, the structure circle action.
    pub fn rotate(&self, theta: f64) -> Self {
        Self {
            x: &self.x * C64::from_polar(1.0, theta),
        }
    }

    /// Horizontal projection of v: v - x (x^* v).
    pub fn horizontal(&self, v: &CVec) -> CVec {
        let p = self.x.dotc(v);
        v - &self.x * p
    }

    /// A real orthonormal basis of the horizontal space x^perp for the
    /// real inner product Re <u, v>; pairs (u_j, i u_j).
    pub fn real_tangent_basis(&self) -> Vec<CVec> {
        let n = self.x.len();
        let mut complex: Vec<CVec> = vec![self.x.clone()];
        for j in 0..n {
            let mut e = CVec::zeros(n);
            e[j] = c(1.0, 0.0);
            for _ in 0..2 {
                for b in &complex {
                    let p = b.dotc(&e);
                    e -= b * p;
                }
            }
            let nn = e.norm();
            if nn > 1e-8 && complex.len() < n {
                complex.push(e / c(nn, 0.0));
            }
        }
        let mut out = Vec::with_capacity(2 * (n - 1));
        for u in complex.into_iter().skip(1) {
            out.push(u.clone());
            out.push(u * c(0.0, 1.0));
        }
        out
    }
}

/// Product rule for dV_X on S^{2d+1} (d = 1, 2): Gauss-Legendre in the
/// moduli t_j = |x_j|^2 over the simplex and the trapezoid rule in each
/// phase. With the Euclidean measure 2^{-d} dt dtheta divided by 2 pi the
/// total mass is pi^d / d!.
#[derive(Debug, Clone, Serialize)]
pub struct SphereQuadrature {
    #[serde(skip)]
    pub nodes: Vec<CVec>,
    pub weights: Vec<f64>,
    pub n_moduli: usize,
    pub n_phase: usize,
}

impl SphereQuadrature {
    pub fn new(d: usize, n_moduli: usize, n_phase: usize) -> Self {
        assert!(d == 1 || d == 2, "sphere quadrature is implemented for d = 1, 2");
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::new();
        let gl = gauss_legendre_on(n_moduli, 0.0, 1.0);
        if d == 1 {
            for &(u, w) in &gl {
                simplex.push((vec![u, 1.0 - u], w));
            }
        } else {
            // t1 = u, t2 = (1 - u) v with Jacobian (1 - u)
            for &(u, wu) in &gl {
                for &(v, wv) in &gl {
                    simplex.push((vec![u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)], wu * wv * (1.0 - u)));
                }
            }
        }
        let n = d + 1;
        let dphi = TWO_PI / n_phase as f64;
        let total_phase = n_phase.pow(n as u32);
        let base = 0.5f64.powi(d as i32) / TWO_PI * dphi.powi(n as i32);
        let mut nodes = Vec::with_capacity(simplex.len() * total_phase);
        let mut weights = Vec::with_capacity(simplex.len() * total_phase);
        for (t, w) in &simplex {
            for idx in 0..total_phase {
                let mut rem = idx;
                let x = CVec::from_fn(n, |j, _| {
                    let a = rem % n_phase;
                    rem /= n_phase;
                    C64::from_polar(t[j].sqrt(), a as f64 * dphi)
                });
                nodes.push(x);
                weights.push(w * base);
            }
        }
        Self {
            nodes,
            weights,
            n_moduli,
            n_phase,
        }
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn integrate<F>(&self, f: F) -> C64
    where
        F: Fn(&CVec) -> C64 + Sync,
    {
        let terms: Vec<C64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(x, &w)| f(x) * w)
            .collect();
        pairwise_sum(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_mass_and_moments() {
        let q1 = SphereQuadrature::new(1, 6, 4);
        assert!((q1.total_weight() - PI).abs() < 1e-13);
        let q2 = SphereQuadrature::new(2, 6, 4);
        assert!((q2.total_weight() - PI * PI / 2.0).abs() < 1e-13);
        // E|x_0|^4 over S^5 with the normalized measure = 2 / ((n)(n+1)), n = 3
        let m = q2.integrate(|x| c(x[0].norm_sqr().powi(2), 0.0)).re / q2.total_weight();
        assert!((m - 2.0 / 12.0).abs() < 1e-13);
        // a character that the phase rule must kill
        let z = q2.integrate(|x| x[0] * x[1].conj());
        assert!(z.norm() < 1e-13);
    }

    #[test]
    fn tangent_basis_is_orthonormal_and_horizontal() {
        let p = ModelPoint::from_moduli_phases(&[0.2, 0.5, 0.3], &[0.1, -1.0, 2.0]);
        let b = p.real_tangent_basis();
        assert_eq!(b.len(), 4);
        for (i, u) in b.iter().enumerate() {
            assert!(p.x.dotc(u).norm() < 1e-14);
            for (j, v) in b.iter().enumerate() {
                let g = u.dotc(v).re;
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-14);
            }
        }
    }
}
