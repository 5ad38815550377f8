use super::point::ModelPoint;
use crate::error::{Error, Result};
use crate::numeric::{c, CVec, C64};

/// Largest admissible ||v|| for the Heisenberg chart.
pub const CHART_RADIUS: f64 = 0.9;

/// The point x + (theta, v) := e^{i theta} (x sqrt(1 - |v|^2) + v) for a
/// horizontal v. Translation in theta is the fiber rotation, and the curve
/// tau -> x + (0, tau v) leaves x horizontally with velocity v.
pub fn displace(x: &ModelPoint, theta: f64, v: &CVec) -> Result<ModelPoint> {
    if v.len() != x.x.len() {
        return Err(Error::Dimension(format!(
            "tangent vector has {} entries, point has {}",
            v.len(),
            x.x.len()
        )));
    }
    let nv = v.norm();
    let vertical = x.x.dotc(v).norm();
    if vertical > 1e-12 * nv.max(1.0) {
        return Err(Error::NotInSubspace {
            space: "horizontal space",
            residual: vertical,
        });
    }
    if nv >= CHART_RADIUS {
        return Err(Error::ChartRadius(format!("|v| = {nv} >= {CHART_RADIUS}")));
    }
    let y = &x.x * c((1.0 - nv * nv).sqrt(), 0.0) + v;
    Ok(ModelPoint {
        x: y * C64::from_polar(1.0, theta),
    })
}
