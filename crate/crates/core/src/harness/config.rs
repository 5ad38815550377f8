use crate::error::{Error, Result};
use crate::geometry::ProjectiveModel;
use crate::hardy::isotypic_dim;
use crate::lie::HalfWeight;
use crate::predictor::DEFAULT_DIM_LEVEL;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub model: String,
    /// Half-weight coordinates; the model default when absent.
    pub nu: Option<Vec<f64>>,
    pub ks: Vec<u64>,
    /// Displacement magnitudes |v|, |w| in Heisenberg units.
    pub displacements: Vec<f64>,
    /// Level of the locus quadrature for delta_{nu,0}.
    pub dim_level: usize,
    /// Level of the Kirillov orbit quadrature.
    pub orbit_level: usize,
    pub out_dir: Option<PathBuf>,
    pub seed: u64,
}

/// kmin, kmin f, kmin f^2, ... up to kmax, rounded to integers.
pub fn geometric_schedule(kmin: u64, kmax: u64, factor: f64) -> Result<Vec<u64>> {
    if kmin == 0 || kmax < kmin {
        return Err(Error::Config(format!("bad k range {kmin}..{kmax}")));
    }
    if !(factor > 1.0) || !factor.is_finite() {
        return Err(Error::Config(format!("k factor must exceed 1, got {factor}")));
    }
    let mut ks = vec![kmin];
    let mut x = kmin as f64;
    loop {
        x *= factor;
        let k = x.round() as u64;
        if k > kmax {
            break;
        }
        if k > *ks.last().unwrap() {
            ks.push(k);
        }
    }
    Ok(ks)
}

impl ExperimentConfig {
    pub fn new(model: &str) -> Self {
        Self {
            model: model.to_string(),
            nu: None,
            ks: vec![64, 128, 256, 512],
            displacements: vec![0.25, 0.5, 0.75, 1.0],
            dim_level: DEFAULT_DIM_LEVEL,
            orbit_level: crate::characters::orbit::DEFAULT_ORBIT_LEVEL,
            out_dir: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ks.is_empty() {
            return Err(Error::Config("empty k schedule".into()));
        }
        if self.ks[0] == 0 || self.ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "k schedule must be positive and strictly increasing: {:?}",
                self.ks
            )));
        }
        if self.displacements.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::Config("displacements must be positive".into()));
        }
        ProjectiveModel::catalog(&self.model)?;
        Ok(())
    }

    pub fn load_model(&self) -> Result<(ProjectiveModel, HalfWeight)> {
        self.validate()?;
        let model = ProjectiveModel::catalog(&self.model)?;
        let nu = match &self.nu {
            Some(v) => HalfWeight::new(&model.metric, v)?,
            None => model.default_half_weight()?,
        };
        Ok((model, nu))
    }

    /// Each k moved up to the nearest k' >= k with a nonzero component
    /// (U(2) with the default nu only has odd k); None when nothing turns
    /// up within the next eight values.
    pub fn admissible_ks(&self, model: &ProjectiveModel, nu: &HalfWeight) -> Result<Vec<Option<u64>>> {
        let mut out = Vec::with_capacity(self.ks.len());
        for &k in &self.ks {
            let mut found = None;
            for kk in k..k + 8 {
                if isotypic_dim(model, nu, kk)? > 0 {
                    found = Some(kk);
                    break;
                }
            }
            out.push(found);
        }
        Ok(out)
    }

    pub fn nu_label(nu: &HalfWeight) -> String {
        nu.coords.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(";")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(geometric_schedule(64, 512, 2.0).unwrap(), vec![64, 128, 256, 512]);
        assert_eq!(geometric_schedule(10, 300, 3.0).unwrap(), vec![10, 30, 90, 270]);
        assert!(geometric_schedule(0, 5, 2.0).is_err());
        assert!(geometric_schedule(4, 5, 1.0).is_err());
        let mut c = ExperimentConfig::new("s1-cp1-w12");
        c.ks = vec![64, 64];
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.ks = vec![1, 2];
        c.model = "nope".into();
        assert!(c.validate().is_err());
    }

    #[test]
    fn u2_moves_to_odd_k() {
        let c = ExperimentConfig::new("u2-cp2");
        let (m, nu) = c.load_model().unwrap();
        let ks = c.admissible_ks(&m, &nu).unwrap();
        assert_eq!(ks, vec![Some(65), Some(129), Some(257), Some(513)]);
    }
}
