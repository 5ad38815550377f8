use super::model::ProjectiveModel;
use super::moment::{d_moment, lifted_val, moment_map, val};
use super::point::ModelPoint;
use crate::error::{Error, Result};
use crate::lie::{HalfWeight, InvariantMetric};
use crate::numeric::{c, CMat, CVec};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// A point is on the cone when its cone distance is below this multiple of
/// ||Phi(m)||.
pub const LOCUS_TOL: f64 = 1e-10;
/// Newton refinement target for located points.
pub const NEWTON_TOL: f64 = 1e-13;

/// A point of M_O with the data of its decomposition
/// Phi(m) = sigma Coad_h(nu).
#[derive(Debug, Clone)]
pub struct LocusSample {
    pub point: ModelPoint,
    pub sigma: f64,
    pub h: CMat,
    /// Phi(m) as a full coalgebra covector.
    pub phi: DVector<f64>,
    /// The Cartan covector conjugate to Phi(m) (equal to sigma nu).
    pub zeta: DVector<f64>,
    /// phi-orthonormal basis of t_m = Ad_h(t), in algebra coordinates.
    pub t_m: Vec<DVector<f64>>,
    /// phi-orthonormal basis of t'_m, the part of t_m annihilated by Phi(m).
    pub t_prime: Vec<DVector<f64>>,
    pub cone_distance: f64,
}

#[derive(Debug, Clone)]
pub enum Decomposition {
    OnCone(LocusSample),
    OffCone { distance: f64, sigma: f64 },
}

impl Decomposition {
    pub fn on_cone(self) -> Result<LocusSample> {
        match self {
            Decomposition::OnCone(s) => Ok(s),
            Decomposition::OffCone { distance, .. } => Err(Error::OffLocus(distance)),
        }
    }
}

/// Sorted eigen-data of -i Phi(m)^phi: eigenvalues a_1 >= a_2 >= ... and
/// the unitary of eigenvectors (det 1 for SU).
struct Spectral {
    a: Vec<f64>,
    u: CMat,
}

fn spectral(metric: &InvariantMetric, phi: &DVector<f64>) -> Spectral {
    let g = metric.group();
    let m = g.to_matrix(&metric.sharp(phi));
    let herm = &m * c(0.0, -1.0);
    let herm = (&herm + herm.adjoint()) * c(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let n = g.size;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let a: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut u = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        u.set_column(col, &eig.eigenvectors.column(i));
    }
    if matches!(g.kind, crate::lie::GroupKind::SU(_)) {
        let det = u.determinant();
        let ph = det.conj() / det.norm();
        for r in 0..n {
            u[(r, 0)] *= ph;
        }
    }
    Spectral { a, u }
}

/// Cartan covector of the diagonal algebra element i diag(a).
fn cartan_from_diag(metric: &InvariantMetric, a: &[f64]) -> DVector<f64> {
    let g = metric.group();
    let n = g.size;
    let mut m = CMat::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = c(0.0, a[j]);
    }
    let cov = metric.flat(&g.coords(&m));
    cov.rows(0, g.rank).into_owned()
}

/// (zeta(m), h_m) for any point; zeta is the dominant Cartan covector
/// conjugate to Phi(m).
fn conjugate_to_cartan(model: &ProjectiveModel, phi: &DVector<f64>) -> (DVector<f64>, CMat) {
    let g = model.metric.group();
    if g.is_torus() {
        return (phi.clone(), CMat::identity(g.size, g.size));
    }
    let s = spectral(&model.metric, phi);
    (cartan_from_diag(&model.metric, &s.a), s.u)
}

/// phi-dual orthonormal basis of the Cartan covectors orthogonal to nu.
fn nu_perp_covectors(metric: &InvariantMetric, nu: &DVector<f64>) -> Vec<DVector<f64>> {
    let r = nu.len();
    let mut out: Vec<DVector<f64>> = vec![nu / metric.cartan_dual_inner(nu, nu).sqrt()];
    for a in 0..r {
        let mut e = DVector::from_fn(r, |i, _| if i == a { 1.0 } else { 0.0 });
        for _ in 0..2 {
            for b in &out {
                let p = metric.cartan_dual_inner(b, &e);
                e -= b * p;
            }
        }
        let n = metric.cartan_dual_inner(&e, &e).sqrt();
        if n > 1e-10 && out.len() < r {
            out.push(e / n);
        }
    }
    out.split_off(1)
}

/// (sigma, cone distance) of a Cartan covector relative to the ray R_+ nu.
fn cone_position(metric: &InvariantMetric, zeta: &DVector<f64>, nu: &DVector<f64>) -> (f64, f64) {
    let nn = metric.cartan_dual_inner(nu, nu);
    let sigma = metric.cartan_dual_inner(zeta, nu) / nn;
    let rest = if sigma > 0.0 { zeta - nu * sigma } else { zeta.clone() };
    (sigma, metric.cartan_dual_inner(&rest, &rest).max(0.0).sqrt())
}

/// Decompose Phi(m) against the cone over O_nu.
pub fn decompose(model: &ProjectiveModel, nu: &HalfWeight, p: &ModelPoint) -> Result<Decomposition> {
    nu.validate(&model.metric)?;
    let metric = &model.metric;
    let g = metric.group();
    let phi = moment_map(model, p);
    let norm = metric.covector_norm(&phi);
    if norm < 1e-12 {
        return Err(Error::Assumption("Phi(m) = 0, so m lies over no cone".into()));
    }
    let (zeta, h) = conjugate_to_cartan(model, &phi);
    let nu_v = nu.vector();
    let (sigma, distance) = cone_position(metric, &zeta, &nu_v);
    if sigma <= 0.0 || distance > LOCUS_TOL * norm {
        return Ok(Decomposition::OffCone { distance, sigma });
    }
    let t_m: Vec<DVector<f64>> = metric
        .cartan_onb()
        .iter()
        .map(|e| g.adjoint_action(&h, e))
        .collect::<Result<_>>()?;
    let mut seed = vec![full_covector_sharp(metric, &nu_v)];
    seed.extend(metric.cartan_onb());
    let t_prime: Vec<DVector<f64>> = metric
        .orthonormalize(&seed)
        .into_iter()
        .skip(1)
        .map(|e| g.adjoint_action(&h, &e))
        .collect::<Result<_>>()?;
    Ok(Decomposition::OnCone(LocusSample {
        point: p.clone(),
        sigma,
        h,
        phi,
        zeta,
        t_m,
        t_prime,
        cone_distance: distance,
    }))
}

/// nu^phi for a Cartan covector extended by zero on t^perp.
fn full_covector_sharp(metric: &InvariantMetric, nu: &DVector<f64>) -> DVector<f64> {
    let dim = metric.group().dim;
    let mut full = DVector::zeros(dim);
    full.rows_mut(0, nu.len()).copy_from(nu);
    metric.sharp(&full)
}

/// The cone offset F(m) = (<zeta(m), kappa_i>)_i for a phi-orthonormal basis
/// kappa of nu^perp, and its gradients as horizontal vectors.
pub fn cone_offset(model: &ProjectiveModel, nu: &HalfWeight, p: &ModelPoint) -> (DVector<f64>, Vec<CVec>) {
    let metric = &model.metric;
    let g = metric.group();
    let kappas = nu_perp_covectors(metric, &nu.vector());
    let phi = moment_map(model, p);
    let basis = p.real_tangent_basis();
    // d zeta along each real tangent basis vector
    let (zeta, dzetas): (DVector<f64>, Vec<DVector<f64>>) = if g.is_torus() {
        (phi.clone(), basis.iter().map(|u| d_moment(model, p, u)).collect())
    } else {
        let s = spectral(metric, &phi);
        let dz = basis
            .iter()
            .map(|u| {
                let dh = g.to_matrix(&metric.sharp(&d_moment(model, p, u))) * c(0.0, -1.0);
                let da: Vec<f64> = (0..g.size)
                    .map(|j| {
                        let col = s.u.column(j);
                        (col.adjoint() * &dh * col)[(0, 0)].re
                    })
                    .collect();
                cartan_from_diag(metric, &da)
            })
            .collect();
        (cartan_from_diag(metric, &s.a), dz)
    };
    let f = DVector::from_iterator(kappas.len(), kappas.iter().map(|k| metric.cartan_dual_inner(k, &zeta)));
    let grads = kappas
        .iter()
        .map(|k| {
            let mut v = CVec::zeros(p.x.len());
            for (e, dz) in basis.iter().zip(&dzetas) {
                v += e * c(metric.cartan_dual_inner(k, dz), 0.0);
            }
            v
        })
        .collect();
    (f, grads)
}

/// Newton refinement of a seed onto M_O, moving along the gradients of the
/// cone offset.
pub fn locate_locus(model: &ProjectiveModel, nu: &HalfWeight, seed: &ModelPoint) -> Result<LocusSample> {
    let mut p = seed.clone();
    if model.rank() == 1 {
        return decompose(model, nu, &p)?.on_cone();
    }
    for _ in 0..60 {
        let (f, grads) = cone_offset(model, nu, &p);
        let scale = model.metric.covector_norm(&moment_map(model, &p));
        if f.norm() <= NEWTON_TOL * scale.max(1.0) {
            return decompose(model, nu, &p)?.on_cone();
        }
        let k = grads.len();
        let gram = DMatrix::from_fn(k, k, |i, j| grads[i].dotc(&grads[j]).re);
        let coef = gram
            .lu()
            .solve(&f)
            .ok_or_else(|| Error::Transversality("cone offset has degenerate gradient".into()))?;
        let mut step = CVec::zeros(p.x.len());
        for (gi, ci) in grads.iter().zip(coef.iter()) {
            step += gi * c(*ci, 0.0);
        }
        // damp long steps so the iterate stays in a chart
        let len = step.norm();
        let t = if len > 0.25 { 0.25 / len } else { 1.0 };
        p = ModelPoint::new(&p.x - step * c(t, 0.0))?;
    }
    let (f, _) = cone_offset(model, nu, &p);
    Err(Error::EmptyLocus(format!(
        "Newton refinement stalled at cone offset {:e}",
        f.norm()
    )))
}

/// Up to `count` located points of M_O from the default base point and
/// Gaussian seeds; deterministic for a given `seed`.
pub fn locus_points(model: &ProjectiveModel, nu: &HalfWeight, count: usize, seed: u64) -> Result<Vec<LocusSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seeds = vec![model.default_base_point()];
    for _ in 0..(20 * count) {
        let v = CVec::from_fn(model.ambient(), |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        });
        seeds.push(ModelPoint::new(v)?);
    }
    for s in seeds {
        if out.len() >= count {
            break;
        }
        if let Ok(sample) = locate_locus(model, nu, &s) {
            out.push(sample);
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyLocus(format!(
            "no point of {} maps into the cone over nu = {:?}",
            model.id, nu.coords
        )));
    }
    Ok(out)
}

/// D^phi(m), the Gram matrix of val on t'_m, and sqrt(det).
pub fn d_phi(model: &ProjectiveModel, sample: &LocusSample) -> Result<(DMatrix<f64>, f64)> {
    let vs: Vec<CVec> = sample.t_prime.iter().map(|e| val(model, &sample.point, e)).collect();
    let k = vs.len();
    if k == 0 {
        return Ok((DMatrix::zeros(0, 0), 1.0));
    }
    let d = DMatrix::from_fn(k, k, |i, j| vs[i].dotc(&vs[j]).re);
    let min = d.clone().symmetric_eigen().eigenvalues.min();
    if min <= 1e-12 {
        return Err(Error::Transversality(format!(
            "D^phi(m) is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    let det = d.determinant();
    Ok((d, det.sqrt()))
}

/// Basis of the normal space N_m(M_O): J applied to the fields of t'_m.
pub fn normal_space(model: &ProjectiveModel, sample: &LocusSample) -> Result<Vec<CVec>> {
    let n: Vec<CVec> = sample
        .t_prime
        .iter()
        .map(|e| val(model, &sample.point, e) * c(0.0, 1.0))
        .collect();
    if n.len() + 1 != model.rank() {
        return Err(Error::Dimension(format!(
            "normal space has dimension {}, expected {}",
            n.len(),
            model.rank() - 1
        )));
    }
    Ok(n)
}

/// Real-orthogonal projection residual of `v` against span_R(basis).
pub fn span_residual(basis: &[CVec], v: &CVec) -> f64 {
    let on = real_orthonormalize(basis);
    let mut w = v.clone();
    for e in &on {
        let p = e.dotc(&w).re;
        w -= e * c(p, 0.0);
    }
    w.norm()
}

/// Gram-Schmidt for the real inner product Re <u, v>.
pub fn real_orthonormalize(vs: &[CVec]) -> Vec<CVec> {
    let mut out: Vec<CVec> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let p = e.dotc(&w).re;
                w -= e * c(p, 0.0);
            }
        }
        let n = w.norm();
        if n > 1e-10 {
            out.push(w / c(n, 0.0));
        }
    }
    out
}

/// Complex orthonormal basis of the Hermitian orthocomplement of
/// g_M(m) + J g_M(m) inside the horizontal space.
pub fn w_space(model: &ProjectiveModel, p: &ModelPoint) -> Vec<CVec> {
    let n = p.x.len();
    let mut span: Vec<CVec> = Vec::new();
    let push = |v: CVec, span: &mut Vec<CVec>| -> bool {
        let mut w = v;
        for _ in 0..2 {
            for e in span.iter() {
                let q = e.dotc(&w);
                w -= e * q;
            }
        }
        let nn = w.norm();
        if nn > 1e-9 {
            span.push(w / c(nn, 0.0));
            true
        } else {
            false
        }
    };
    push(p.x.clone(), &mut span);
    for a in model.generators() {
        push(lifted_val(a, p), &mut span);
    }
    let fixed = span.len();
    for j in 0..n {
        let mut e = CVec::zeros(n);
        e[j] = c(1.0, 0.0);
        push(e, &mut span);
    }
    span.split_off(fixed)
}
