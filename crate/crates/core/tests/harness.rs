use equivariant_szego::harness::{
    exit_code, geometric_schedule, run_all, run_decay_suite, run_diag_convergence, run_dim_growth, run_suite,
    ExperimentConfig,
};
use equivariant_szego::{Error, ErrorClass};

#[test]
fn fitted_exponent_does_not_depend_on_the_schedule() {
    let mut a = ExperimentConfig::new("s1-cp1-w12");
    a.ks = geometric_schedule(32, 2048, 2.0).unwrap();
    let mut b = a.clone();
    b.ks = geometric_schedule(27, 2187, 3.0).unwrap();
    let ea = run_diag_convergence(&a).unwrap().fits[1].exponent.unwrap();
    let eb = run_diag_convergence(&b).unwrap().fits[1].exponent.unwrap();
    assert!((ea + 1.0).abs() <= 0.2);
    assert!((ea - eb).abs() <= 0.05, "{ea} vs {eb}");
}

#[test]
fn circle_dimension_coefficient() {
    let r = run_dim_growth(&ExperimentConfig::new("s1-cp1-w12")).unwrap();
    let d0 = r.rows.iter().find(|r| r.quantity == "delta0").unwrap().value;
    assert!((d0 - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    for row in r.rows.iter().filter(|r| r.k > 0) {
        assert_eq!(row.value, (row.k / 2 + 1) as f64);
    }
    assert!(r.pass);
}

#[test]
fn precondition_failures() {
    let mut c = ExperimentConfig::new("t2-cp2");
    c.nu = Some(vec![1.0, -3.0]);
    let e = run_dim_growth(&c).unwrap_err();
    assert!(matches!(e, Error::EmptyLocus(_)));
    assert_eq!(e.class(), ErrorClass::Precondition);
    c.nu = Some(vec![1.0, 1.0]);
    let out = run_diag_convergence(&c);
    assert!(matches!(out, Err(Error::OffLocus(_))));
    assert_eq!(exit_code(&out), 3);
    assert_eq!(exit_code(&run_suite("nope", &c)), 4);
}

#[test]
fn decay_rows_for_the_circle() {
    let r = run_decay_suite(&ExperimentConfig::new("s1-cp1-w12")).unwrap();
    assert!(r.pass);
    // mismatched structure weights: identically zero
    assert!(r.rows.iter().filter(|r| r.quantity == "mismatched weight").all(|r| r.value == 0.0));
    let sep = r.rows.iter().find(|r| r.quantity == "orbit separation").unwrap();
    assert!(sep.value > 0.1);
}

#[test]
fn everything_passes_on_the_default_models() {
    for id in ["s1-cp2-w112", "u2-cp2"] {
        let r = run_all(&ExperimentConfig::new(id)).unwrap();
        assert!(r.pass, "{id}: {:?}", r.fits.iter().filter(|f| !f.pass).collect::<Vec<_>>());
        assert_eq!(exit_code(&Ok(r)), 0);
    }
}
