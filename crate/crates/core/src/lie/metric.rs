use super::group::CompactGroup;
use crate::error::{Error, Result};
use crate::numeric::CMat;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// An Ad-invariant inner product on the Lie algebra, stored as its Gram
/// matrix on the group's basis.
///
/// Covectors are written by their values on the basis, so the transfer
/// `gamma -> gamma^phi` is `gram^{-1} gamma`.
#[derive(Debug, Clone)]
pub struct InvariantMetric {
    group: Arc<CompactGroup>,
    gram: DMatrix<f64>,
    gram_inv: DMatrix<f64>,
    /// Inverse of the Cartan block: the induced form on Cartan covectors.
    cartan_dual: DMatrix<f64>,
}

impl InvariantMetric {
    /// The trace form Re tr(A B*), which on a torus is the identity form.
    pub fn trace(group: Arc<CompactGroup>) -> Self {
        let gram = group.trace_gram.clone();
        Self::new(group, gram).expect("trace form is invariant")
    }

    /// Validates positivity and Ad-invariance on sampled group elements.
    pub fn new(group: Arc<CompactGroup>, gram: DMatrix<f64>) -> Result<Self> {
        let d = group.dim;
        if gram.nrows() != d || gram.ncols() != d {
            return Err(Error::InvalidMetric(format!("gram must be {d}x{d}")));
        }
        if (&gram - gram.transpose()).norm() > 1e-12 * gram.norm() {
            return Err(Error::InvalidMetric("gram is not symmetric".into()));
        }
        let eig = gram.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::InvalidMetric("gram is not positive definite".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let scale = gram.norm();
        for _ in 0..8 {
            let g = group.random_element(&mut rng);
            let ad = DMatrix::from_fn(d, d, |row, col| {
                let moved: CMat = &g * &group.basis[col] * g.adjoint();
                group.coords(&moved)[row]
            });
            let defect = (ad.transpose() * &gram * &ad - &gram).norm();
            if defect > 1e-12 * scale.max(1.0) * 10.0 {
                return Err(Error::InvalidMetric(format!(
                    "not Ad-invariant (defect {defect:e})"
                )));
            }
        }
        let gram_inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidMetric("singular gram".into()))?;
        let r = group.rank;
        let cartan_dual = gram
            .view((0, 0), (r, r))
            .into_owned()
            .try_inverse()
            .ok_or_else(|| Error::InvalidMetric("singular Cartan block".into()))?;
        Ok(Self {
            group,
            gram,
            gram_inv,
            cartan_dual,
        })
    }

    /// The metric c * phi.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c > 0.0);
        Self::new(self.group.clone(), &self.gram * c).expect("positive multiple stays invariant")
    }

    pub fn group(&self) -> &Arc<CompactGroup> {
        &self.group
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * &self.gram * b)[0]
    }

    pub fn norm(&self, a: &DVector<f64>) -> f64 {
        self.inner(a, a).sqrt()
    }

    /// gamma^phi, determined by phi(gamma^phi, X) = <gamma, X>.
    pub fn sharp(&self, gamma: &DVector<f64>) -> DVector<f64> {
        &self.gram_inv * gamma
    }

    /// phi(xi, .) as a covector.
    pub fn flat(&self, xi: &DVector<f64>) -> DVector<f64> {
        &self.gram * xi
    }

    /// ||gamma||_phi = ||gamma^phi||_phi.
    pub fn covector_norm(&self, gamma: &DVector<f64>) -> f64 {
        (gamma.transpose() * &self.gram_inv * gamma)[0].max(0.0).sqrt()
    }

    pub fn covector_inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * &self.gram_inv * b)[0]
    }

    /// Induced inner product of two Cartan covectors.
    pub fn cartan_dual_inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * &self.cartan_dual * b)[0]
    }

    /// Unit vector gamma^phi / ||gamma||_phi and unit covector gamma / ||gamma||_phi.
    pub fn unit(&self, gamma: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let n = self.covector_norm(gamma);
        (self.sharp(gamma) / n, gamma / n)
    }

    /// Coad_g lambda, computed as the flat of Ad_g(lambda^phi).
    pub fn coadjoint_action(&self, g: &CMat, lambda: &DVector<f64>) -> Result<DVector<f64>> {
        let moved = self.group.adjoint_action(g, &self.sharp(lambda))?;
        Ok(self.flat(&moved))
    }

    /// Gram-Schmidt orthonormalization under phi.
    pub fn orthonormalize(&self, vs: &[DVector<f64>]) -> Vec<DVector<f64>> {
        let mut out: Vec<DVector<f64>> = Vec::new();
        for v in vs {
            let mut w = v.clone();
            for _ in 0..2 {
                for e in &out {
                    let p = self.inner(e, &w);
                    w -= e * p;
                }
            }
            let n = self.norm(&w);
            if n > 1e-12 {
                out.push(w / n);
            }
        }
        out
    }

    /// phi-orthonormal basis of the Cartan algebra t.
    pub fn cartan_onb(&self) -> Vec<DVector<f64>> {
        let g = &self.group;
        let vs: Vec<_> = (0..g.rank).map(|a| unit_vec(g.dim, a)).collect();
        self.orthonormalize(&vs)
    }

    /// phi-orthonormal basis of the orthocomplement of t.
    pub fn perp_onb(&self) -> Vec<DVector<f64>> {
        let g = &self.group;
        let t: Vec<_> = (0..g.rank).map(|a| unit_vec(g.dim, a)).collect();
        let rest: Vec<_> = (g.rank..g.dim).map(|a| unit_vec(g.dim, a)).collect();
        let all: Vec<_> = t.iter().chain(rest.iter()).cloned().collect();
        self.orthonormalize(&all).split_off(g.rank)
    }

    /// phi-orthonormal basis of the whole algebra.
    pub fn onb(&self) -> Vec<DVector<f64>> {
        let mut b = self.cartan_onb();
        b.extend(self.perp_onb());
        b
    }

    /// The matrix of S_tau = ad_tau restricted to t^perp in `perp_onb`,
    /// together with |det S_tau|. `tau` is given in Cartan coordinates.
    pub fn s_tau(&self, tau: &DVector<f64>) -> (DMatrix<f64>, f64) {
        let g = &self.group;
        let tau = g.embed_cartan(tau);
        let b = self.perp_onb();
        let m = b.len();
        if m == 0 {
            return (DMatrix::zeros(0, 0), 1.0);
        }
        let imgs: Vec<_> = b.iter().map(|bj| g.bracket(&tau, bj)).collect();
        let s = DMatrix::from_fn(m, m, |i, j| self.inner(&b[i], &imgs[j]));
        let det = s.determinant().abs();
        (s, det)
    }

    /// (vol(G), vol(T)) for the Riemannian metric induced by phi. Each is
    /// the trace-form closed form rescaled by the ratio of Gram
    /// determinants, since two bi-invariant densities differ by a constant.
    pub fn group_volumes(&self) -> (f64, f64) {
        let g = &self.group;
        let (vg, vt) = g.trace_volumes();
        let r = g.rank;
        let full = (self.gram.determinant() / g.trace_gram.determinant()).sqrt();
        let cart = (self.gram.view((0, 0), (r, r)).determinant()
            / g.trace_gram.view((0, 0), (r, r)).determinant())
        .sqrt();
        (vg * full, vt * cart)
    }
}

pub(crate) fn unit_vec(n: usize, a: usize) -> DVector<f64> {
    DVector::from_fn(n, |i, _| if i == a { 1.0 } else { 0.0 })
}
