use crate::numeric::{c, pairwise_sum, C64};
use serde::Serialize;

/// A complex number stored as e^{ln_scale} (re + i im), so that kernel
/// values at large k neither overflow nor underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub ln_scale: f64,
    pub re: f64,
    pub im: f64,
}

impl KernelValue {
    pub fn zero() -> Self {
        Self {
            ln_scale: f64::NEG_INFINITY,
            re: 0.0,
            im: 0.0,
        }
    }

    pub fn from_polar_ln(ln_abs: f64, phase: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::zero();
        }
        Self {
            ln_scale: ln_abs,
            re: phase.cos(),
            im: phase.sin(),
        }
    }

    /// Sum of terms e^{ln_abs[i] + i phase[i]}, reduced pairwise after
    /// factoring out the largest modulus.
    pub fn sum(ln_abs: &[f64], phases: &[f64]) -> Self {
        let top = ln_abs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Self::zero();
        }
        let terms: Vec<C64> = ln_abs
            .iter()
            .zip(phases)
            .map(|(&l, &p)| C64::from_polar((l - top).exp(), p))
            .collect();
        let s = pairwise_sum(&terms);
        Self {
            ln_scale: top,
            re: s.re,
            im: s.im,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln_scale == f64::NEG_INFINITY || (self.re == 0.0 && self.im == 0.0)
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.ln_scale + self.re.hypot(self.im).ln()
    }

    pub fn abs(&self) -> f64 {
        self.ln_abs().exp()
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn to_c64(&self) -> C64 {
        if self.is_zero() {
            return c(0.0, 0.0);
        }
        c(self.re, self.im) * self.ln_scale.exp()
    }

    pub fn conj(&self) -> Self {
        Self { im: -self.im, ..*self }
    }

    /// self / other as an ordinary complex number.
    pub fn ratio(&self, other: &KernelValue) -> C64 {
        let a = c(self.re, self.im);
        let b = c(other.re, other.im);
        a / b * (self.ln_scale - other.ln_scale).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_far_outside_f64_range() {
        let v = KernelValue::sum(&[2000.0, 2000.0 + 2f64.ln()], &[0.0, 0.0]);
        assert!((v.ln_abs() - (2000.0 + 3f64.ln())).abs() < 1e-12);
        let w = KernelValue::sum(&[-3000.0], &[1.0]);
        assert!((w.arg() - 1.0).abs() < 1e-15);
        assert!((v.ratio(&v) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(KernelValue::sum(&[], &[]).is_zero());
        assert_eq!(KernelValue::zero().to_c64(), c(0.0, 0.0));
    }
}
