//! Weyl dimension and character against Kirillov's orbit integral.
use equivariant_szego::characters::orbit::DEFAULT_ORBIT_LEVEL;
use equivariant_szego::characters::{
    dim_scaling, kirillov_character, orbit_quadrature, orbit_volume, weyl_character, weyl_dimension, WallPolicy,
};
use equivariant_szego::lie::{default_metric, GroupKind, HalfWeight};
use nalgebra::DVector;

fn main() -> equivariant_szego::Result<()> {
    let m = default_metric(GroupKind::U(2))?;
    let nu = HalfWeight::new(&m, &[2.5, -0.5])?;
    println!("d_nu = {}", weyl_dimension(&m, &nu)?);
    println!("d_(5 nu) = {}", dim_scaling(&m, &nu, 5)?);
    println!("vol O_nu = {:.12}", orbit_volume(&m, &nu.vector())?);
    let q = orbit_quadrature(&m, &nu, DEFAULT_ORBIT_LEVEL)?;
    for th in [[0.3, -0.4], [1.2, 0.1], [2.0, -1.5]] {
        let theta = DVector::from_row_slice(&th);
        let w = weyl_character(&m, &nu, &theta, WallPolicy::Fail)?;
        let k = kirillov_character(&m, &q, &m.group().embed_cartan(&theta))?.value();
        println!("theta {th:?}: weyl {w:.10} kirillov {k:.10} |diff| {:.1e}", (w - k).norm());
    }
    Ok(())
}
