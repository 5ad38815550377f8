use crate::error::{Error, Result};
use crate::lie::{HalfWeight, InvariantMetric};
use crate::numeric::{c, CMat, C64};
use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Product formula prod_beta phi(nu, beta) / phi(delta, beta) as a float.
pub fn weyl_dimension_value(metric: &InvariantMetric, nu: &HalfWeight) -> Result<f64> {
    let g = metric.group();
    let v = nu.vector();
    let mut p = 1.0;
    for (i, beta) in g.positive_roots.iter().enumerate() {
        let num = metric.cartan_dual_inner(&v, beta);
        if num == 0.0 {
            return Err(Error::ZeroFactor(format!("nu is orthogonal to positive root #{i}")));
        }
        p *= num / metric.cartan_dual_inner(&g.delta, beta);
    }
    Ok(p)
}

/// Weyl dimension, rounded and checked to be a positive integer.
pub fn weyl_dimension(metric: &InvariantMetric, nu: &HalfWeight) -> Result<u64> {
    let p = weyl_dimension_value(metric, nu)?;
    let r = p.round();
    if r < 1.0 || (p - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::CheckFailed(format!(
            "Weyl product {p} is not a positive integer"
        )));
    }
    Ok(r as u64)
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn exact_product(metric: &InvariantMetric, nu: &DVector<f64>) -> Result<BigRational> {
    let g = metric.group();
    let r = g.rank;
    // Exact Cartan dual form: inverse of the Cartan Gram block in rationals.
    let gram: Vec<Vec<BigRational>> = (0..r)
        .map(|i| (0..r).map(|j| rational(metric.gram()[(i, j)])).collect())
        .collect();
    let inv = invert_rational(gram)?;
    let pair = |a: &DVector<f64>, b: &DVector<f64>| -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..r {
            for j in 0..r {
                s += rational(a[i]) * &inv[i][j] * rational(b[j]);
            }
        }
        s
    };
    let mut p = BigRational::one();
    for (i, beta) in g.positive_roots.iter().enumerate() {
        let num = pair(nu, beta);
        if num.is_zero() {
            return Err(Error::ZeroFactor(format!("orthogonal to positive root #{i}")));
        }
        p *= num / pair(&g.delta, beta);
    }
    Ok(p)
}

fn invert_rational(mut a: Vec<Vec<BigRational>>) -> Result<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidMetric("singular Cartan block".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Ok(inv)
}

/// d_{k nu} from the product formula in exact rational arithmetic, checked
/// against k^{n_G} d_nu.
pub fn dim_scaling(metric: &InvariantMetric, nu: &HalfWeight, k: u64) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let d_nu = exact_product(metric, &nu.vector())?;
    let d_knu = exact_product(metric, &(nu.vector() * k as f64))?;
    let n_g = metric.group().n_g;
    let law = d_nu * BigRational::from_integer(BigInt::from(k).pow(n_g as u32));
    if law != d_knu {
        return Err(Error::CheckFailed(format!(
            "scaling law broken: d_(k nu) = {d_knu}, k^n_G d_nu = {law}"
        )));
    }
    Ok(d_knu)
}

/// A_gamma(theta) = sum_s eps(s) exp(i <s gamma, theta>).
pub fn alternating_sum(metric: &InvariantMetric, gamma: &DVector<f64>, theta: &DVector<f64>) -> C64 {
    let g = metric.group();
    let mut acc = c(0.0, 0.0);
    for w in &g.weyl_group {
        let phase = (&w.matrix * gamma).dot(theta);
        acc += C64::from_polar(w.sign, phase);
    }
    acc
}

/// Near-wall handling for [`weyl_character`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallPolicy {
    Extrapolate,
    Fail,
}

const WALL_TOL: f64 = 1e-8;
const RICHARDSON_STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// chi_nu(exp theta) = A_nu / A_delta for theta in Cartan coordinates.
pub fn weyl_character(
    metric: &InvariantMetric,
    nu: &HalfWeight,
    theta: &DVector<f64>,
    policy: WallPolicy,
) -> Result<C64> {
    let g = metric.group();
    if theta.len() != g.rank {
        return Err(Error::Dimension(format!("theta must have {} entries", g.rank)));
    }
    if theta.iter().all(|&t| t == 0.0) {
        return Ok(c(weyl_dimension_value(metric, nu)?, 0.0));
    }
    let v = nu.vector();
    let den = alternating_sum(metric, &g.delta, theta);
    if den.norm() >= WALL_TOL {
        return Ok(alternating_sum(metric, &v, theta) / den);
    }
    if policy == WallPolicy::Fail {
        // the root closest to the wall condition <beta, theta> in 2 pi Z
        let (root, _) = g
            .positive_roots
            .iter()
            .enumerate()
            .map(|(i, b)| (i, (b.dot(theta) / 2.0).sin().abs()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        let (j, k) = g.root_indices[root];
        return Err(Error::OnWall {
            root,
            detail: format!("e_{} - e_{}", j + 1, k + 1),
        });
    }
    // Richardson extrapolation along a fixed regular direction.
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
    let dir = DVector::from_fn(g.rank, |_, _| rng.random_range(0.5..1.5) * if rng.random::<bool>() { 1.0 } else { -1.0 });
    let dir = &dir / dir.norm();
    let f = |h: f64| -> C64 {
        let t = theta + &dir * h;
        alternating_sum(metric, &v, &t) / alternating_sum(metric, &g.delta, &t)
    };
    let [h0, h1, h2] = RICHARDSON_STEPS;
    let (f0, f1, f2) = (f(h0), f(h1), f(h2));
    let r01 = f1 * 2.0 - f0;
    let r12 = f2 * 2.0 - f1;
    debug_assert!(h0 == 2.0 * h1 && h1 == 2.0 * h2);
    Ok((r12 * 4.0 - r01) / 3.0)
}

/// Character at a group element, through its conjugacy class.
pub fn character_at(metric: &InvariantMetric, nu: &HalfWeight, g: &CMat) -> Result<C64> {
    let theta = metric.group().class_angles(g)?;
    weyl_character(metric, nu, &theta, WallPolicy::Extrapolate)
}
