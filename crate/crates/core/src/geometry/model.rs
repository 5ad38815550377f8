use super::point::{ModelPoint, SphereQuadrature};
use crate::error::{Error, Result};
use crate::lie::{default_metric, GroupKind, HalfWeight, InvariantMetric};
use crate::numeric::{c, cnorm, ln_factorial, CMat, C64};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// How the group acts linearly on C^{d+1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelAction {
    /// The torus element exp(sum_a theta_a h_a) multiplies coordinate j by
    /// exp(-i <w_j, theta>); `weights[j]` is w_j. Monomials z^alpha then
    /// carry weight sum_j alpha_j w_j, and Phi at the coordinate vertex e_j
    /// is w_j.
    TorusWeights(Vec<Vec<i64>>),
    /// A 2x2 matrix group acting on the first two coordinates by its
    /// defining representation and, if present, on a third coordinate by
    /// det(g)^q.
    Defining { det_power: Option<i64> },
}

/// CP^d with its unit circle bundle S^{2d+1}, a linear unitary action and
/// the Fubini-Study normalization in which a projective line has area pi.
///
/// Tangent vectors at m = [x] are represented by horizontal vectors
/// u in x^perp, with rho(u, v) = Re <u, v>, omega(u, v) = Im <u, v> and J
/// acting as multiplication by i. The moment map is
/// <Phi(x), xi> = -Im(x^* A_xi x), the vertical part of the lifted generator
/// A_xi x against the connection form alpha_x(v) = Im(x^* v); it satisfies
/// d<Phi, xi>(u) = 2 omega(xi_M, u).
#[derive(Debug, Clone)]
pub struct ProjectiveModel {
    pub id: String,
    pub description: String,
    pub d: usize,
    pub metric: InvariantMetric,
    pub action: ModelAction,
    /// d rho(e_a) for each Lie algebra basis element.
    generators: Vec<CMat>,
    pub default_nu: Vec<f64>,
    /// |x_j|^2 of the default base point.
    pub default_point: Vec<f64>,
}

/// Catalog identifiers.
pub const CATALOG: [&str; 5] = ["s1-cp1-w12", "t2-cp2", "su2-cp1", "u2-cp2", "s1-cp2-w112"];

impl ProjectiveModel {
    pub fn new(
        id: &str,
        description: &str,
        kind: GroupKind,
        d: usize,
        action: ModelAction,
        default_nu: Vec<f64>,
        default_point: Vec<f64>,
    ) -> Result<Self> {
        let metric = default_metric(kind)?;
        let g = metric.group().clone();
        let n = d + 1;
        let generators: Vec<CMat> = match &action {
            ModelAction::TorusWeights(w) => {
                if !g.is_torus() {
                    return Err(Error::Config("torus weights need a torus".into()));
                }
                if w.len() != n || w.iter().any(|r| r.len() != g.rank) {
                    return Err(Error::Config(format!(
                        "need {n} weight vectors of length {}",
                        g.rank
                    )));
                }
                (0..g.rank)
                    .map(|a| {
                        let mut m = CMat::zeros(n, n);
                        for j in 0..n {
                            m[(j, j)] = c(0.0, -(w[j][a] as f64));
                        }
                        m
                    })
                    .collect()
            }
            ModelAction::Defining { det_power } => {
                if g.size != 2 || g.is_torus() {
                    return Err(Error::Unsupported("defining actions are modelled for SU(2) and U(2)".into()));
                }
                let extra = usize::from(det_power.is_some());
                if n != 2 + extra {
                    return Err(Error::Config(format!("defining action needs d = {}", 1 + extra)));
                }
                g.basis
                    .iter()
                    .map(|e| {
                        let mut m = CMat::zeros(n, n);
                        m.view_mut((0, 0), (2, 2)).copy_from(e);
                        if let Some(q) = det_power {
                            m[(2, 2)] = e.trace() * c(*q as f64, 0.0);
                        }
                        m
                    })
                    .collect()
            }
        };
        for (a, m) in generators.iter().enumerate() {
            if cnorm(&(m + m.adjoint())) > 1e-14 {
                return Err(Error::Config(format!("generator {a} is not skew-Hermitian")));
            }
        }
        let model = Self {
            id: id.to_string(),
            description: description.to_string(),
            d,
            metric,
            action,
            generators,
            default_nu,
            default_point,
        };
        Ok(model)
    }

    /// Look up a catalog model by id.
    pub fn catalog(id: &str) -> Result<Self> {
        match id {
            "s1-cp1-w12" => Self::new(
                id,
                "circle on CP^1 with lift weights (1, 2)",
                GroupKind::Torus(1),
                1,
                ModelAction::TorusWeights(vec![vec![1], vec![2]]),
                vec![1.0],
                vec![0.5, 0.5],
            ),
            "t2-cp2" => Self::new(
                id,
                "T^2 on CP^2 with lift weights (1,0), (0,1), (1,1)",
                GroupKind::Torus(2),
                2,
                ModelAction::TorusWeights(vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
                vec![1.0, 2.0],
                vec![0.2, 0.6, 0.2],
            ),
            "su2-cp1" => Self::new(
                id,
                "SU(2) on CP^1, defining representation",
                GroupKind::SU(2),
                1,
                ModelAction::Defining { det_power: None },
                vec![1.0],
                vec![0.5, 0.5],
            ),
            "u2-cp2" => Self::new(
                id,
                "U(2) on CP^2 = P(C^2 + C), acting by (g z, det(g)^-1 w)",
                GroupKind::U(2),
                2,
                ModelAction::Defining { det_power: Some(-1) },
                vec![1.5, 0.5],
                vec![0.2, 0.2, 0.6],
            ),
            "s1-cp2-w112" => Self::new(
                id,
                "circle on CP^2 with lift weights (1, 1, 2)",
                GroupKind::Torus(1),
                2,
                ModelAction::TorusWeights(vec![vec![1], vec![1], vec![2]]),
                vec![1.0],
                vec![0.3, 0.3, 0.4],
            ),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (known: {})",
                CATALOG.join(", ")
            ))),
        }
    }

    /// The same model with a different invariant metric on the group.
    pub fn with_metric(&self, metric: InvariantMetric) -> Result<Self> {
        if metric.group().kind != self.metric.group().kind {
            return Err(Error::Config("metric belongs to a different group".into()));
        }
        let mut m = self.clone();
        m.metric = metric;
        Ok(m)
    }

    pub fn group_kind(&self) -> GroupKind {
        self.metric.group().kind
    }

    pub fn rank(&self) -> usize {
        self.metric.group().rank
    }

    /// Complex dimension plus one: the size of the ambient vectors.
    pub fn ambient(&self) -> usize {
        self.d + 1
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    /// d rho(xi) for algebra coordinates xi.
    pub fn generator(&self, xi: &DVector<f64>) -> CMat {
        let n = self.ambient();
        let mut m = CMat::zeros(n, n);
        for (a, g) in self.generators.iter().enumerate() {
            if xi[a] != 0.0 {
                m += g * c(xi[a], 0.0);
            }
        }
        m
    }

    /// rho(g), the unitary acting on C^{d+1}.
    pub fn rep(&self, g: &CMat) -> Result<CMat> {
        self.metric.group().check_element(g)?;
        let n = self.ambient();
        Ok(match &self.action {
            ModelAction::TorusWeights(w) => {
                let mut m = CMat::zeros(n, n);
                for j in 0..n {
                    let mut z = c(1.0, 0.0);
                    for (a, &wa) in w[j].iter().enumerate() {
                        z *= g[(a, a)].conj().powi(wa as i32);
                    }
                    m[(j, j)] = z;
                }
                m
            }
            ModelAction::Defining { det_power } => {
                let mut m = CMat::zeros(n, n);
                m.view_mut((0, 0), (2, 2)).copy_from(g);
                if let Some(q) = det_power {
                    m[(2, 2)] = g.determinant().powi(*q as i32);
                }
                m
            }
        })
    }

    /// Symplectic (= Riemannian) volume pi^d / d! of CP^d.
    pub fn volume(&self) -> f64 {
        PI.powi(self.d as i32) / ln_factorial(self.d).exp()
    }

    pub fn default_half_weight(&self) -> Result<HalfWeight> {
        HalfWeight::new(&self.metric, &self.default_nu)
    }

    pub fn default_base_point(&self) -> ModelPoint {
        ModelPoint::from_moduli(&self.default_point)
    }

    /// Minimum of ||Phi||_phi over a grid in |x_j|^2 with several phase
    /// patterns; the standing assumption needs it to be positive.
    pub fn min_moment_norm(&self, grid: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let phases: Vec<Vec<f64>> = (0..3)
            .map(|p| {
                (0..self.ambient())
                    .map(|_| if p == 0 { 0.0 } else { rng.random_range(0.0..2.0 * PI) })
                    .collect()
            })
            .collect();
        let mut best = f64::INFINITY;
        for t in simplex_grid(self.d, grid) {
            for ph in &phases {
                let x = ModelPoint::from_moduli_phases(&t, ph);
                let phi = super::moment::moment_map(self, &x);
                best = best.min(self.metric.covector_norm(&phi));
            }
        }
        best
    }

    /// Checks the structural invariants: vol(X) = vol(M) by quadrature,
    /// linear action commuting with the structure circle, and Phi != 0.
    pub fn validate(&self) -> Result<()> {
        let q = SphereQuadrature::new(self.d, 8, 8);
        let vol = q.total_weight();
        if (vol - self.volume()).abs() > 1e-10 * self.volume() {
            return Err(Error::CheckFailed(format!(
                "vol(X) = {vol} but vol(M) = {}",
                self.volume()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = self.metric.group().random_element(&mut rng);
        let r = self.rep(&g)?;
        let z = C64::from_polar(1.0, 0.7);
        let n = self.ambient();
        let circle = CMat::identity(n, n) * z;
        if cnorm(&(&r * &circle - &circle * &r)) > 1e-13 {
            return Err(Error::CheckFailed("lift does not commute with the circle".into()));
        }
        let m = self.min_moment_norm(20);
        if m < 1e-6 {
            return Err(Error::Assumption(format!(
                "0 is (numerically) in the image of the moment map (min norm {m:e})"
            )));
        }
        Ok(())
    }
}

/// Points of the simplex {t_j >= 0, sum t_j = 1} in R^{d+1} on a grid of
/// spacing 1/n.
pub fn simplex_grid(d: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&a| a as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(left - a, slots - 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d + 1, n, &mut Vec::new(), &mut out);
    out
}
