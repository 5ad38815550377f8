//! Exact Hardy-space kernels: levels, isotypic components, dimensions.
use equivariant_szego::geometry::{ModelPoint, ProjectiveModel};
use equivariant_szego::hardy::{diag_profile, equivariant_kernel, isotypic_basis, isotypic_dim, level_kernel};

fn main() -> equivariant_szego::Result<()> {
    let x = ModelPoint::from_moduli_phases(&[0.3, 0.7], &[0.0, 0.5]);
    let y = ModelPoint::from_moduli(&[0.6, 0.4]);
    println!("Pi_5(x, y) = {:.10}", level_kernel(5, &x, &y)?.to_c64());

    let m = ProjectiveModel::catalog("s1-cp1-w12")?;
    let nu = m.default_half_weight()?;
    println!("dim H_(10 nu) = {}", isotypic_dim(&m, &nu, 10)?);
    println!("basis: {:?}", isotypic_basis(&m, &nu, 10)?.exponents);
    let v = equivariant_kernel(&m, &nu, 2048, &x, &y)?;
    println!("k = 2048: ln|Pi(x, y)| = {:.6}", v.ln_abs());

    // diagonal profile across the locus of the T^2 model
    let t2 = ProjectiveModel::catalog("t2-cp2")?;
    let nu2 = t2.default_half_weight()?;
    let path: Vec<ModelPoint> = (0..=8)
        .map(|i| {
            let s = 0.1 + 0.05 * i as f64;
            ModelPoint::from_moduli(&[0.2, s, 0.8 - s])
        })
        .collect();
    for (p, v) in diag_profile(&t2, &nu2, 256, &path)? {
        println!("t = {:.3?}: ln Pi(x, x) = {:.4}", p.moduli(), v.ln_abs());
    }
    Ok(())
}
