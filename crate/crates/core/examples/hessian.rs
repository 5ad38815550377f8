//! Block Hessian of the reduced phase at its critical point.
use equivariant_szego::geometry::{locus_points, ProjectiveModel, CATALOG};
use equivariant_szego::predictor::hessian_check;

fn main() -> equivariant_szego::Result<()> {
    for id in CATALOG {
        let m = ProjectiveModel::catalog(id)?;
        let nu = m.default_half_weight()?;
        for s in locus_points(&m, &nu, 2, 3)? {
            let r = hessian_check(&m, &nu, &s)?;
            println!(
                "{id}: size {} det {:.10} expected {:.10} signature {} fd error {:.1e}",
                r.size, r.det, r.det_expected, r.signature, r.fd_error
            );
        }
    }
    Ok(())
}
