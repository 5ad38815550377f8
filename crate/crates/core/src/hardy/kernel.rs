use super::basis::{isotypic_basis, IsotypicKind, LevelBasis};
use super::value::KernelValue;
use crate::error::{Error, Result};
use crate::geometry::{ModelPoint, ProjectiveModel};
use crate::lie::HalfWeight;
use crate::numeric::{ln_binomial, ln_factorial, CVec};
use rayon::prelude::*;
use std::f64::consts::PI;

fn check_pair(x: &ModelPoint, y: &ModelPoint) -> Result<usize> {
    if x.x.len() != y.x.len() || x.x.len() < 2 {
        return Err(Error::Dimension(format!(
            "points live in C^{} and C^{}",
            x.x.len(),
            y.x.len()
        )));
    }
    Ok(x.dim())
}

/// ln(C(n+d, d) d! / pi^d) = ln((n+d)! / (n! pi^d)).
fn ln_level_constant(d: usize, n: usize) -> f64 {
    ln_binomial(n + d, d) + ln_factorial(d) - d as f64 * PI.ln()
}

/// dim_n / vol(X) * <x, y>^n, the reproducing kernel of level n.
pub fn level_kernel(n: usize, x: &ModelPoint, y: &ModelPoint) -> Result<KernelValue> {
    let d = check_pair(x, y)?;
    let ip = y.x.dotc(&x.x);
    if n == 0 {
        return Ok(KernelValue::from_polar_ln(ln_level_constant(d, 0), 0.0));
    }
    if ip.norm() == 0.0 {
        return Ok(KernelValue::zero());
    }
    Ok(KernelValue::from_polar_ln(
        ln_level_constant(d, n) + n as f64 * ip.norm().ln(),
        n as f64 * ip.arg(),
    ))
}

/// Sum over monomials of z^alpha(x) conj(z^alpha(y)) / ||z^alpha||^2.
pub fn monomial_kernel(exponents: &[Vec<u32>], x: &CVec, y: &CVec) -> KernelValue {
    let lx: Vec<f64> = x.iter().map(|z| z.norm().ln()).collect();
    let ly: Vec<f64> = y.iter().map(|z| z.norm().ln()).collect();
    let ax: Vec<f64> = x.iter().map(|z| z.arg()).collect();
    let ay: Vec<f64> = y.iter().map(|z| z.arg()).collect();
    let (ln_abs, phases): (Vec<f64>, Vec<f64>) = exponents
        .par_iter()
        .map(|a| {
            let mut l = -super::basis::ln_monomial_norm(a);
            let mut p = 0.0;
            for (j, &aj) in a.iter().enumerate() {
                if aj > 0 {
                    let f = aj as f64;
                    l += f * (lx[j] + ly[j]);
                    p += f * (ax[j] - ay[j]);
                }
            }
            (l, p)
        })
        .unzip();
    KernelValue::sum(&ln_abs, &phases)
}

/// Level kernel summed over the monomial basis, the oracle for the
/// closed form.
pub fn level_kernel_by_basis(n: usize, x: &ModelPoint, y: &ModelPoint) -> Result<KernelValue> {
    let d = check_pair(x, y)?;
    Ok(monomial_kernel(&LevelBasis::new(d, n).exponents, &x.x, &y.x))
}

/// Pi^{mu}_{k nu}(x, y), the kernel of the projector onto H(X)_{k nu}.
pub fn equivariant_kernel(
    model: &ProjectiveModel,
    nu: &HalfWeight,
    k: u64,
    x: &ModelPoint,
    y: &ModelPoint,
) -> Result<KernelValue> {
    let d = check_pair(x, y)?;
    if d != model.d {
        return Err(Error::Dimension(format!("{} lives on CP^{}, points on CP^{d}", model.id, model.d)));
    }
    let basis = isotypic_basis(model, nu, k)?;
    Ok(match basis.kind {
        IsotypicKind::Empty => KernelValue::zero(),
        IsotypicKind::Monomials => monomial_kernel(&basis.exponents, &x.x, &y.x),
        IsotypicKind::Level { n } => level_kernel(n, x, y)?,
        IsotypicKind::Twisted { m, c } => twisted_kernel(m, c, x, y),
    })
}

/// (n+2)! / (pi^2 m! c!) <z_x, z_y>^m (w_x conj w_y)^c on S^5.
fn twisted_kernel(m: usize, c: usize, x: &ModelPoint, y: &ModelPoint) -> KernelValue {
    let zx = x.x.rows(0, 2);
    let zy = y.x.rows(0, 2);
    let ip = zy.dotc(&zx);
    let ww = x.x[2] * y.x[2].conj();
    let mut ln = ln_factorial(m + c + 2) - 2.0 * PI.ln() - ln_factorial(m) - ln_factorial(c);
    let mut ph = 0.0;
    for (z, e) in [(ip, m), (ww, c)] {
        if e > 0 {
            if z.norm() == 0.0 {
                return KernelValue::zero();
            }
            ln += e as f64 * z.norm().ln();
            ph += e as f64 * z.arg();
        }
    }
    KernelValue::from_polar_ln(ln, ph)
}

/// Exact diagonal values Pi_{k nu}(x, x) along a path.
pub fn diag_profile(
    model: &ProjectiveModel,
    nu: &HalfWeight,
    k: u64,
    path: &[ModelPoint],
) -> Result<Vec<(ModelPoint, KernelValue)>> {
    path.iter()
        .map(|p| Ok((p.clone(), equivariant_kernel(model, nu, k, p, p)?)))
        .collect()
}

/// Levels n that meet H(X)_{k nu}.
pub fn isotypic_levels(model: &ProjectiveModel, nu: &HalfWeight, k: u64) -> Result<Vec<usize>> {
    let b = isotypic_basis(model, nu, k)?;
    let mut ls: Vec<usize> = b.exponents.iter().map(|a| a.iter().map(|&x| x as usize).sum()).collect();
    ls.sort_unstable();
    ls.dedup();
    Ok(ls)
}
