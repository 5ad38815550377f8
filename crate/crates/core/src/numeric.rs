//! Small numerical utilities shared by every layer: order-independent sums,
//! log-factorials, Gauss-Legendre rules and straight-line fits.

use nalgebra::{Complex, DMatrix, DVector};
use std::ops::Add;
use std::sync::OnceLock;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Pairwise (tree) summation. The reduction order depends only on the
/// length of the input, so results are reproducible regardless of how the
/// terms were produced.
pub fn pairwise_sum<T: Copy + Add<Output = T> + Default>(xs: &[T]) -> T {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        let mut acc = T::default();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

const LN_FACT_CAP: usize = 1 << 15;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Kahan-compensated running sum of ln j.
        let mut t = Vec::with_capacity(LN_FACT_CAP + 1);
        t.push(0.0);
        let (mut s, mut c) = (0.0f64, 0.0f64);
        for j in 1..=LN_FACT_CAP {
            let y = (j as f64).ln() - c;
            let u = s + y;
            c = (u - s) - y;
            s = u;
            t.push(s);
        }
        t
    })
}

/// ln(n!) from a compensated table (exact to a few ulps for n <= 32768).
pub fn ln_factorial(n: usize) -> f64 {
    assert!(n <= LN_FACT_CAP, "ln_factorial: n = {n} exceeds table size");
    ln_fact_table()[n]
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    // (P_n(x), P_n'(x))
    let legendre = |x: f64| -> (f64, f64) {
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=n {
            let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
            p0 = p1;
            p1 = p2;
        }
        if n == 1 {
            return (x, 1.0);
        }
        (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
    };
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| (c + h * x, h * w))
        .collect()
}

/// Least-squares line y = slope * x + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points for a fit");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    }
}

/// Fit log|y| against log x.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> LineFit {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    fit_line(&lx, &ly)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Frobenius norm of a complex matrix.
pub fn cnorm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1usize, 2, 5, 16, 64] {
            let r = gauss_legendre(n);
            let ws: f64 = r.iter().map(|p| p.1).sum();
            assert!((ws - 2.0).abs() < 1e-14, "n={n} weight sum {ws}");
            for deg in 0..(2 * n) {
                let q: f64 = r.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn ln_factorial_matches_direct_products() {
        let mut p = 1.0f64;
        for n in 1..=20usize {
            p *= n as f64;
            assert!((ln_factorial(n) - p.ln()).abs() < 1e-13);
        }
        // ln C(4096+2, 2) through the table
        let exact = ((4098.0f64 * 4097.0) / 2.0).ln();
        assert!((ln_binomial(4098, 2) - exact).abs() < 1e-11);
    }

    #[test]
    fn pairwise_sum_is_reproducible_and_accurate() {
        let xs: Vec<f64> = (0..100_000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum(&xs);
        assert_eq!(a.to_bits(), b.to_bits());
        let naive_rev: f64 = xs.iter().rev().sum();
        assert!((a - naive_rev).abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs = [64.0f64, 128.0, 256.0, 512.0];
        let ys: Vec<f64> = xs.iter().map(|k| 3.0 * k.powf(-1.0)).collect();
        let f = fit_loglog(&xs, &ys);
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3.0f64.ln()).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }
}
