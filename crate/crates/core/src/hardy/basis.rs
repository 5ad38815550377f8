use crate::error::{Error, Result};
use crate::geometry::{ModelAction, ProjectiveModel};
use crate::lie::HalfWeight;
use crate::numeric::ln_factorial;
use std::f64::consts::PI;

/// ln ||z^alpha||^2 = ln(pi^d alpha! / (n + d)!) on X = S^{2d+1}.
pub fn ln_monomial_norm(alpha: &[u32]) -> f64 {
    let d = alpha.len() - 1;
    let n: usize = alpha.iter().map(|&a| a as usize).sum();
    d as f64 * PI.ln() + alpha.iter().map(|&a| ln_factorial(a as usize)).sum::<f64>() - ln_factorial(n + d)
}

/// All exponents of total degree n in d + 1 variables.
#[derive(Debug, Clone)]
pub struct LevelBasis {
    pub n: usize,
    pub exponents: Vec<Vec<u32>>,
    pub ln_norms: Vec<f64>,
}

impl LevelBasis {
    pub fn new(d: usize, n: usize) -> Self {
        let mut exponents = Vec::new();
        fn rec(slots: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if slots == 1 {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(slots - 1, left - a, cur, out);
                cur.pop();
            }
        }
        rec(d + 1, n as u32, &mut Vec::new(), &mut exponents);
        let ln_norms = exponents.iter().map(|a| ln_monomial_norm(a)).collect();
        Self { n, exponents, ln_norms }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }
}

/// How an isotypic component sits in the Hardy space.
#[derive(Debug, Clone, PartialEq)]
pub enum IsotypicKind {
    /// Monomials of the listed exponents (torus models).
    Monomials,
    /// The whole level n (SU(2) on CP^1).
    Level { n: usize },
    /// z^alpha w^c with |alpha| = m (U(2) with a det-twisted coordinate).
    Twisted { m: usize, c: usize },
    Empty,
}

/// An orthogonal monomial basis of the component of weight k nu.
#[derive(Debug, Clone)]
pub struct IsotypicBasis {
    pub nu: Vec<f64>,
    pub k: u64,
    pub kind: IsotypicKind,
    pub exponents: Vec<Vec<u32>>,
}

impl IsotypicBasis {
    pub fn dim(&self) -> usize {
        self.exponents.len()
    }
}

fn as_integer(x: f64, what: &str) -> Result<Option<i64>> {
    if !x.is_finite() {
        return Err(Error::InvalidWeight(format!("{what} is not finite")));
    }
    let r = x.round();
    Ok(if (x - r).abs() < 1e-9 { Some(r as i64) } else { None })
}

/// A linear functional positive on every lift weight; exists exactly when
/// 0 is not in the convex hull of the weights, i.e. 0 is not in Phi(M).
fn positive_functional(weights: &[Vec<i64>]) -> Result<Vec<f64>> {
    let r = weights[0].len();
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mean: Vec<f64> = (0..r)
        .map(|a| weights.iter().map(|w| w[a] as f64).sum::<f64>() / weights.len() as f64)
        .collect();
    candidates.push(mean);
    for w in weights {
        candidates.push(w.iter().map(|&x| x as f64).collect());
    }
    for a in 0..r {
        for s in [1.0, -1.0] {
            candidates.push((0..r).map(|b| if a == b { s } else { 0.0 }).collect());
        }
    }
    for l in candidates {
        if weights
            .iter()
            .all(|w| w.iter().zip(&l).map(|(&x, y)| x as f64 * y).sum::<f64>() > 0.0)
        {
            return Ok(l);
        }
    }
    Err(Error::Assumption(
        "no positive functional on the lift weights: 0 lies in the image of Phi".into(),
    ))
}

/// Exponents alpha with sum_j alpha_j w_j = target.
pub fn enumerate_weight(weights: &[Vec<i64>], target: &[i64]) -> Result<Vec<Vec<u32>>> {
    let ell = positive_functional(weights)?;
    let lw: Vec<f64> = weights
        .iter()
        .map(|w| w.iter().zip(&ell).map(|(&x, y)| x as f64 * y).sum())
        .collect();
    let mut out = Vec::new();
    fn rec(
        j: usize,
        rem: &mut Vec<i64>,
        weights: &[Vec<i64>],
        ell: &[f64],
        lw: &[f64],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let lrem: f64 = rem.iter().zip(ell).map(|(&x, y)| x as f64 * y).sum();
        if lrem < -1e-9 {
            return;
        }
        let last = j + 1 == weights.len();
        if last {
            // rem must be a non-negative multiple of w_j
            let w = &weights[j];
            let a = (lrem / lw[j]).round();
            if a < 0.0 {
                return;
            }
            let a = a as i64;
            if w.iter().zip(rem.iter()).all(|(&x, &r)| a * x == r) {
                cur.push(a as u32);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let bound = (lrem / lw[j] + 1e-9).floor() as i64;
        for a in 0..=bound {
            for (r, &x) in rem.iter_mut().zip(&weights[j]) {
                *r -= a * x;
            }
            cur.push(a as u32);
            rec(j + 1, rem, weights, ell, lw, cur, out);
            cur.pop();
            for (r, &x) in rem.iter_mut().zip(&weights[j]) {
                *r += a * x;
            }
        }
    }
    let mut rem = target.to_vec();
    rec(0, &mut rem, weights, &ell, &lw, &mut Vec::new(), &mut out);
    Ok(out)
}

/// The isotypic component of k nu, listed by monomials.
pub fn isotypic_basis(model: &ProjectiveModel, nu: &HalfWeight, k: u64) -> Result<IsotypicBasis> {
    nu.validate(&model.metric)?;
    let knu: Vec<f64> = nu.coords.iter().map(|x| x * k as f64).collect();
    let empty = |kind| IsotypicBasis {
        nu: nu.coords.clone(),
        k,
        kind,
        exponents: Vec::new(),
    };
    match &model.action {
        ModelAction::TorusWeights(w) => {
            let mut target = Vec::with_capacity(knu.len());
            for x in &knu {
                match as_integer(*x, "k nu")? {
                    Some(v) => target.push(v),
                    None => return Ok(empty(IsotypicKind::Empty)),
                }
            }
            let exps = enumerate_weight(w, &target)?;
            Ok(IsotypicBasis {
                nu: nu.coords.clone(),
                k,
                kind: if exps.is_empty() {
                    IsotypicKind::Empty
                } else {
                    IsotypicKind::Monomials
                },
                exponents: exps,
            })
        }
        ModelAction::Defining { det_power } => {
            let d = model.d;
            match det_power {
                None => {
                    if model.rank() != 1 {
                        return Err(Error::Unsupported(
                            "defining U(2) action without a twisted coordinate".into(),
                        ));
                    }
                    // level n carries the irrep with nu = n + 1
                    match as_integer(knu[0] - 1.0, "k nu - 1")? {
                        Some(n) if n >= 0 => {
                            let n = n as usize;
                            let b = LevelBasis::new(d, n);
                            Ok(IsotypicBasis {
                                nu: nu.coords.clone(),
                                k,
                                kind: IsotypicKind::Level { n },
                                exponents: b.exponents,
                            })
                        }
                        _ => Ok(empty(IsotypicKind::Empty)),
                    }
                }
                Some(q) => {
                    // z^alpha w^c has highest weight (-q c, -q c - m)
                    let m = as_integer(knu[0] - knu[1] - 1.0, "m")?;
                    let cq = as_integer(-(knu[0] - 0.5), "q c")?;
                    let (Some(m), Some(cq)) = (m, cq) else {
                        return Ok(empty(IsotypicKind::Empty));
                    };
                    if m < 0 || *q == 0 || cq % q != 0 || cq / q < 0 {
                        return Ok(empty(IsotypicKind::Empty));
                    }
                    let (m, cc) = (m as usize, (cq / q) as usize);
                    let exps = LevelBasis::new(1, m)
                        .exponents
                        .into_iter()
                        .map(|mut a| {
                            a.push(cc as u32);
                            a
                        })
                        .collect();
                    Ok(IsotypicBasis {
                        nu: nu.coords.clone(),
                        k,
                        kind: IsotypicKind::Twisted { m, c: cc },
                        exponents: exps,
                    })
                }
            }
        }
    }
}

/// dim H(X)_{k nu}, counted exactly.
pub fn isotypic_dim(model: &ProjectiveModel, nu: &HalfWeight, k: u64) -> Result<u64> {
    Ok(isotypic_basis(model, nu, k)?.dim() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ModelPoint, SphereQuadrature};
    use crate::numeric::c;

    #[test]
    fn monomial_norms_by_quadrature() {
        for (d, alpha) in [(1usize, vec![2u32, 3]), (2, vec![1, 0, 2]), (2, vec![0, 0, 0])] {
            let q = SphereQuadrature::new(d, 12, 12);
            let num = q
                .integrate(|x| {
                    let mut p = 1.0;
                    for (j, &a) in alpha.iter().enumerate() {
                        p *= x[j].norm_sqr().powi(a as i32);
                    }
                    c(p, 0.0)
                })
                .re;
            assert!((num.ln() - ln_monomial_norm(&alpha)).abs() < 1e-10, "{alpha:?}");
        }
    }

    #[test]
    fn level_kernel_is_homogeneous() {
        for d in [1usize, 2] {
            let b = LevelBasis::new(d, 7);
            let vol = PI.powi(d as i32) / ln_factorial(d).exp();
            for t in [vec![0.2, 0.3, 0.5], vec![0.9, 0.05, 0.05]] {
                let p = ModelPoint::from_moduli(&t[..=d]);
                let s: f64 = b
                    .exponents
                    .iter()
                    .zip(&b.ln_norms)
                    .map(|(a, ln)| {
                        let mut v = 1.0;
                        for (j, &aj) in a.iter().enumerate() {
                            v *= p.x[j].norm_sqr().powi(aj as i32);
                        }
                        v / ln.exp()
                    })
                    .sum();
                assert!((s - b.dim() as f64 / vol).abs() < 1e-10 * s);
            }
        }
    }

    #[test]
    fn worked_counts() {
        let m = ProjectiveModel::catalog("s1-cp1-w12").unwrap();
        let nu = m.default_half_weight().unwrap();
        assert_eq!(isotypic_dim(&m, &nu, 10).unwrap(), 6);
        for k in 1..40u64 {
            assert_eq!(isotypic_dim(&m, &nu, k).unwrap(), k / 2 + 1);
        }
        let m = ProjectiveModel::catalog("su2-cp1").unwrap();
        let nu = m.default_half_weight().unwrap();
        assert_eq!(isotypic_dim(&m, &nu, 7).unwrap(), 7);
        let m = ProjectiveModel::catalog("t2-cp2").unwrap();
        let nu = m.default_half_weight().unwrap();
        assert_eq!(isotypic_dim(&m, &nu, 9).unwrap(), 10);
        let m = ProjectiveModel::catalog("s1-cp2-w112").unwrap();
        let nu = m.default_half_weight().unwrap();
        // #{a + b + 2c = k}
        for k in 0..20u64 {
            let brute = (0..=k).map(|cc| if 2 * cc <= k { k - 2 * cc + 1 } else { 0 }).sum::<u64>();
            assert_eq!(isotypic_dim(&m, &nu, k).unwrap(), brute);
        }
        // weights with no solutions give an empty component
        let t = ProjectiveModel::catalog("t2-cp2").unwrap();
        let off = HalfWeight::new(&t.metric, &[1.0, -3.0]).unwrap();
        assert_eq!(isotypic_dim(&t, &off, 4).unwrap(), 0);
    }

    #[test]
    fn u2_components_match_weyl_dimension() {
        use crate::characters::weyl_dimension;
        let m = ProjectiveModel::catalog("u2-cp2").unwrap();
        let nu = m.default_half_weight().unwrap();
        for k in [1u64, 3, 5, 9] {
            let knu = nu.scaled(&m.metric, k).unwrap();
            let b = isotypic_basis(&m, &nu, k).unwrap();
            assert_eq!(b.dim() as u64, weyl_dimension(&m.metric, &knu).unwrap());
            assert_eq!(b.kind, IsotypicKind::Twisted { m: k as usize - 1, c: (3 * k as usize - 1) / 2 });
        }
        // even k: k nu - delta is not integral, so no component
        assert_eq!(isotypic_dim(&m, &nu, 2).unwrap(), 0);
    }

    #[test]
    fn brute_force_weight_check_for_u2() {
        // every monomial of the level with the right torus weight and a
        // highest-weight vector: compare weight multiset with the Weyl character
        let m = ProjectiveModel::catalog("u2-cp2").unwrap();
        let nu = HalfWeight::new(&m.metric, &[2.5, 0.5]).unwrap();
        let b = isotypic_basis(&m, &nu, 1).unwrap();
        // weights of z1^a z2^b w^c: (-a + c, -b + c) for q = -1
        let mut ws: Vec<(i64, i64)> = b
            .exponents
            .iter()
            .map(|e| (-(e[0] as i64) + e[2] as i64, -(e[1] as i64) + e[2] as i64))
            .collect();
        ws.sort();
        // lambda = nu - delta = (2, 1)
        assert_eq!(ws, vec![(1, 2), (2, 1)]);
    }
}
