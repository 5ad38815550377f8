use super::model::ProjectiveModel;
use super::point::ModelPoint;
use crate::numeric::{CMat, CVec};
use nalgebra::{DMatrix, DVector};

/// Phi(x) as a covector: its values -Im(x^* A_a x) on the algebra basis.
pub fn moment_map(model: &ProjectiveModel, p: &ModelPoint) -> DVector<f64> {
    DVector::from_iterator(
        model.generators().len(),
        model.generators().iter().map(|a| -(p.x.dotc(&(a * &p.x))).im),
    )
}

/// The fundamental vector field xi_M at [x] as a horizontal vector:
/// A x - x (x^* A x).
pub fn val(model: &ProjectiveModel, p: &ModelPoint, xi: &DVector<f64>) -> CVec {
    lifted_val(&model.generator(xi), p)
}

pub(crate) fn lifted_val(a: &CMat, p: &ModelPoint) -> CVec {
    p.horizontal(&(a * &p.x))
}

/// xi_M for each algebra basis element.
pub fn val_vectors(model: &ProjectiveModel, p: &ModelPoint) -> Vec<CVec> {
    model.generators().iter().map(|a| lifted_val(a, p)).collect()
}

/// The linear map val_m : g -> T_m M as a real matrix, rows indexed by
/// `ModelPoint::real_tangent_basis`, columns by the algebra basis.
pub fn val_matrix(model: &ProjectiveModel, p: &ModelPoint) -> DMatrix<f64> {
    let basis = p.real_tangent_basis();
    let vals = val_vectors(model, p);
    DMatrix::from_fn(basis.len(), vals.len(), |i, a| basis[i].dotc(&vals[a]).re)
}

/// d Phi_a (u) = 2 omega(xi_M, u) for a horizontal vector u.
pub fn d_moment(model: &ProjectiveModel, p: &ModelPoint, u: &CVec) -> DVector<f64> {
    DVector::from_iterator(
        model.generators().len(),
        val_vectors(model, p).iter().map(|v| 2.0 * v.dotc(u).im),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::model::CATALOG;
    use crate::numeric::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ModelPoint {
        use rand_distr::{Distribution, StandardNormal};
        let v = CVec::from_fn(n, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(re, im)
        });
        ModelPoint::new(v).unwrap()
    }

    #[test]
    fn moment_map_is_minus_connection_of_the_orbit_velocity() {
        // Oracle: differentiate the group flow on X and pair with the
        // contact form alpha_x(v) = Im(x^* v).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for id in CATALOG {
            let m = ProjectiveModel::catalog(id).unwrap();
            let g = m.metric.group().clone();
            let p = random_point(&mut rng, m.ambient());
            let phi = moment_map(&m, &p);
            for a in 0..g.dim {
                let e = crate::lie::metric::unit_vec(g.dim, a);
                let h = 1e-5;
                let fwd = m.rep(&g.exp(&(&e * h))).unwrap() * &p.x;
                let bwd = m.rep(&g.exp(&(&e * -h))).unwrap() * &p.x;
                let vel = (fwd - bwd) / c(2.0 * h, 0.0);
                let fd = -p.x.dotc(&vel).im;
                assert!((fd - phi[a]).abs() < 1e-9, "{id} a={a}: {fd} vs {}", phi[a]);
            }
        }
    }

    #[test]
    fn hamiltonian_identity_by_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for id in CATALOG {
            let m = ProjectiveModel::catalog(id).unwrap();
            let p = random_point(&mut rng, m.ambient());
            for u in p.real_tangent_basis() {
                let h = 1e-5;
                let fwd = ModelPoint::new(&p.x + &u * c(h, 0.0)).unwrap();
                let bwd = ModelPoint::new(&p.x - &u * c(h, 0.0)).unwrap();
                let fd = (moment_map(&m, &fwd) - moment_map(&m, &bwd)) / (2.0 * h);
                let an = d_moment(&m, &p, &u);
                assert!((fd - an).norm() < 1e-8, "{id}");
            }
        }
    }

    #[test]
    fn equivariance_of_the_moment_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for id in CATALOG {
            let m = ProjectiveModel::catalog(id).unwrap();
            let g = m.metric.group().random_element(&mut rng);
            let p = random_point(&mut rng, m.ambient());
            let moved = ModelPoint::new(m.rep(&g).unwrap() * &p.x).unwrap();
            let lhs = moment_map(&m, &moved);
            let rhs = m.metric.coadjoint_action(&g, &moment_map(&m, &p)).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "{id}");
        }
    }

    #[test]
    fn torus_moment_map_is_weighted_moduli() {
        let m = ProjectiveModel::catalog("t2-cp2").unwrap();
        let p = ModelPoint::from_moduli(&[0.2, 0.6, 0.2]);
        let phi = moment_map(&m, &p);
        assert!((phi[0] - 0.4).abs() < 1e-15 && (phi[1] - 0.8).abs() < 1e-15);
    }
}
