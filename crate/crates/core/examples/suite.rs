//! Running a verification suite from code and printing its CSV.
use equivariant_szego::harness::{run_suite, ExperimentConfig};

fn main() -> equivariant_szego::Result<()> {
    let mut cfg = ExperimentConfig::new("s1-cp2-w112");
    cfg.ks = vec![32, 64, 128, 256, 512];
    for name in ["diag", "dims"] {
        let rep = run_suite(name, &cfg)?;
        print!("{}", rep.csv_string()?);
        for f in &rep.fits {
            println!("# {} {}: exponent {:?} residual {:.3e} [{}]", if f.pass { "pass" } else { "fail" }, f.quantity, f.exponent, f.residual, f.band);
        }
    }
    Ok(())
}
