//! Kernel decay between separated orbits.
use equivariant_szego::geometry::{ModelPoint, ProjectiveModel};
use equivariant_szego::hardy::off_orbit_value;

fn main() -> equivariant_szego::Result<()> {
    let m = ProjectiveModel::catalog("u2-cp2")?;
    let nu = m.default_half_weight()?;
    let x = m.default_base_point();
    let y = ModelPoint::from_moduli(&[0.1, 0.2, 0.7]);
    let mut prev: Option<(u64, f64)> = None;
    for k in [33u64, 65, 129, 257, 513] {
        let r = off_orbit_value(&m, &nu, k, &x, &y)?;
        let slope = prev.map(|(k0, l0)| (r.ln_abs - l0) / ((k as f64).ln() - (k0 as f64).ln()));
        println!(
            "k {k}: ln|Pi| {:.4} separation {:.6} local slope {:?}",
            r.ln_abs, r.separation.distance, slope
        );
        prev = Some((k, r.ln_abs));
    }
    Ok(())
}
