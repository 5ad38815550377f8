use super::metric::InvariantMetric;
use crate::error::{Error, Result};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// A regular dominant half-weight nu = lambda + delta labelling an
/// irreducible representation, in Cartan coalgebra coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfWeight {
    pub coords: Vec<f64>,
}

const LATTICE_TOL: f64 = 1e-9;

impl HalfWeight {
    /// Validates that nu is strictly dominant and that nu - delta is integral.
    pub fn new(metric: &InvariantMetric, coords: &[f64]) -> Result<Self> {
        let nu = Self::unchecked(coords);
        nu.validate(metric)?;
        Ok(nu)
    }

    /// Wraps coordinates without checks (for scaled weights that only feed
    /// the product formulas).
    pub fn unchecked(coords: &[f64]) -> Self {
        Self {
            coords: coords.to_vec(),
        }
    }

    pub fn validate(&self, metric: &InvariantMetric) -> Result<()> {
        let g = metric.group();
        if self.coords.len() != g.rank {
            return Err(Error::InvalidWeight(format!(
                "expected {} coordinates for {}, got {}",
                g.rank,
                g.kind,
                self.coords.len()
            )));
        }
        let v = self.vector();
        for (i, beta) in g.positive_roots.iter().enumerate() {
            let p = metric.cartan_dual_inner(&v, beta);
            if p == 0.0 {
                return Err(Error::InvalidWeight(format!("not regular: orthogonal to root #{i}")));
            }
            if p < 0.0 {
                return Err(Error::InvalidWeight(format!("not dominant: negative on root #{i}")));
            }
        }
        if !self.is_integral_shift(metric) {
            return Err(Error::InvalidWeight(format!(
                "nu - delta = {:?} is not in the integral lattice",
                (&v - &g.delta).as_slice()
            )));
        }
        Ok(())
    }

    /// nu - delta in L(G).
    pub fn is_integral_shift(&self, metric: &InvariantMetric) -> bool {
        let g = metric.group();
        self.coords
            .iter()
            .zip(g.delta.iter())
            .all(|(a, d)| ((a - d) - (a - d).round()).abs() < LATTICE_TOL)
    }

    pub fn vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    /// The highest weight lambda = nu - delta.
    pub fn lambda(&self, metric: &InvariantMetric) -> DVector<f64> {
        self.vector() - &metric.group().delta
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::unchecked(&self.coords.iter().map(|x| x * k).collect::<Vec<_>>())
    }

    /// k nu, required to be a valid label again.
    pub fn scaled(&self, metric: &InvariantMetric, k: u64) -> Result<Self> {
        let s = self.scale(k as f64);
        s.validate(metric)?;
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::group::{build_group, GroupKind};
    use std::sync::Arc;

    fn metric(kind: GroupKind) -> InvariantMetric {
        InvariantMetric::trace(Arc::new(build_group(kind).unwrap()))
    }

    #[test]
    fn su2_labels() {
        let m = metric(GroupKind::SU(2));
        assert!(HalfWeight::new(&m, &[3.0]).is_ok());
        assert!(HalfWeight::new(&m, &[0.0]).is_err());
        assert!(HalfWeight::new(&m, &[-2.0]).is_err());
        assert!(HalfWeight::new(&m, &[1.5]).is_err());
    }

    #[test]
    fn u2_labels_use_half_integers() {
        let m = metric(GroupKind::U(2));
        assert!(HalfWeight::new(&m, &[1.5, 0.5]).is_ok());
        assert!(HalfWeight::new(&m, &[1.5, -1.5]).is_ok());
        assert!(HalfWeight::new(&m, &[1.0, 0.0]).is_err());
        assert!(HalfWeight::new(&m, &[0.5, 1.5]).is_err());
        let nu = HalfWeight::new(&m, &[1.5, 0.5]).unwrap();
        assert!(nu.scaled(&m, 3).is_ok());
        assert!(nu.scaled(&m, 2).is_err());
    }

    #[test]
    fn torus_labels_are_integer_vectors() {
        let m = metric(GroupKind::Torus(2));
        assert!(HalfWeight::new(&m, &[1.0, 2.0]).is_ok());
        assert!(HalfWeight::new(&m, &[1.0, -2.0]).is_ok());
        assert!(HalfWeight::new(&m, &[0.5, 2.0]).is_err());
        assert!(HalfWeight::new(&m, &[1.0]).is_err());
    }

    #[test]
    fn delta_is_always_a_label() {
        for kind in [GroupKind::SU(2), GroupKind::SU(3), GroupKind::U(2), GroupKind::U(3)] {
            let m = metric(kind);
            let d: Vec<f64> = m.group().delta.iter().copied().collect();
            assert!(HalfWeight::new(&m, &d).is_ok(), "{kind}");
        }
    }
}
