//! Psi_nu, the near-diagonal prediction and the dimension coefficient.
use equivariant_szego::geometry::{decompose, ProjectiveModel, CATALOG};
use equivariant_szego::hardy::equivariant_kernel;
use equivariant_szego::predictor::{predict_dim_coeff, predict_near_diagonal, psi_nu, Displacements, DEFAULT_DIM_LEVEL};

fn main() -> equivariant_szego::Result<()> {
    for id in CATALOG {
        let m = ProjectiveModel::catalog(id)?;
        let nu = m.default_half_weight()?;
        let s = decompose(&m, &nu, &m.default_base_point())?.on_cone()?;
        let psi = psi_nu(&m, &nu, &s)?;
        let dc = predict_dim_coeff(&m, &nu, DEFAULT_DIM_LEVEL)?;
        let k = if id == "u2-cp2" { 257 } else { 256 };
        let pred = predict_near_diagonal(&m, &nu, &s, k, &Displacements::default())?.value().re;
        let exact = equivariant_kernel(&m, &nu, k, &s.point, &s.point)?.to_c64().re;
        println!(
            "{id}: Psi {:.10} delta0 {:.10} ({}) k={k} exact/predicted {:.6}",
            psi.psi,
            dc.delta0,
            dc.scheme,
            exact / pred
        );
    }
    Ok(())
}
