//! Moment map, the cone locus over nu and its local structure.
use equivariant_szego::geometry::{
    decompose, locus_points, moment_map, normal_space, structural_report, w_space, ProjectiveModel, CATALOG,
};

fn main() -> equivariant_szego::Result<()> {
    for id in CATALOG {
        let m = ProjectiveModel::catalog(id)?;
        let nu = m.default_half_weight()?;
        let p = m.default_base_point();
        let s = decompose(&m, &nu, &p)?.on_cone()?;
        println!(
            "{id}: Phi = {:?} sigma = {:.6} dim N = {} dim_C W = {}",
            moment_map(&m, &p).as_slice(),
            s.sigma,
            normal_space(&m, &s)?.len(),
            w_space(&m, &p).len()
        );
        let r = structural_report(&m, &nu, &locus_points(&m, &nu, 5, 1)?)?;
        println!("  {r:?}");
    }
    Ok(())
}
