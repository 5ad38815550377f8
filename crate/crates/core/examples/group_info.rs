//! Structure of the compact groups behind the catalog and their volumes.
use equivariant_szego::lie::{default_metric, GroupKind};

fn main() -> equivariant_szego::Result<()> {
    for kind in [GroupKind::Torus(2), GroupKind::SU(2), GroupKind::U(2), GroupKind::SU(3)] {
        let m = default_metric(kind)?;
        let g = m.group();
        let (vg, vt) = m.group_volumes();
        println!(
            "{kind}: dim {} rank {} |W| {} delta {:?} vol G {vg:.6} vol T {vt:.6}",
            g.dim,
            g.rank,
            g.weyl_order(),
            g.delta.as_slice()
        );
        // volumes scale like c^{dim/2} under phi -> c phi
        let (v2, _) = m.scaled(2.0).group_volumes();
        println!("  vol under 2 phi / vol = {:.6}", v2 / vg);
    }
    Ok(())
}
