use super::config::ExperimentConfig;
use super::report::{FitResult, Row, SuiteReport};
use crate::characters::{
    dim_scaling, kirillov_character, orbit_quadrature, orbit_volume, weyl_character, weyl_dimension, WallPolicy,
};
use crate::error::{Error, Result};
use crate::geometry::{
    decompose, displace, normal_space, simplex_grid, w_space, Decomposition, LocusSample, ModelPoint,
    ProjectiveModel, CATALOG,
};
use crate::hardy::{equivariant_kernel, orbit_separation, KernelValue};
use crate::lie::{default_metric, GroupKind, HalfWeight};
use crate::numeric::{c, fit_line, CVec};
use crate::predictor::{predict_dim_coeff, predict_near_diagonal, psi_nu, Displacements};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

pub const SUITES: [&str; 6] = ["characters", "diag", "gaussian", "decay", "dims", "all"];

fn row(model: &str, nu: &str, k: u64, quantity: &str, value: f64, predicted: f64, err: f64) -> Row {
    Row {
        model: model.to_string(),
        nu: nu.to_string(),
        k,
        quantity: quantity.to_string(),
        value,
        predicted,
        err,
    }
}

fn rel(value: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        value.abs()
    } else {
        (value / predicted - 1.0).abs()
    }
}

/// Closed-form Lie constants and Psi_nu for every catalog model.
pub fn closed_form_rows() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let su2 = default_metric(GroupKind::SU(2))?;
    let u2 = default_metric(GroupKind::U(2))?;
    let (g, t) = su2.group_volumes();
    rows.push(row("SU(2)", "", 0, "vol G", g, 2f64.powf(1.5) * 2.0 * PI * PI, 0.0));
    rows.push(row("SU(2)", "", 0, "vol T", t, 2f64.sqrt() * 2.0 * PI, 0.0));
    let (g, t) = u2.group_volumes();
    rows.push(row("U(2)", "", 0, "vol G", g, 8.0 * PI.powi(3), 0.0));
    rows.push(row("U(2)", "", 0, "vol T", t, 4.0 * PI * PI, 0.0));
    for nuv in [1.0, 2.0, 3.0] {
        let nu = HalfWeight::new(&su2, &[nuv])?;
        let lab = ExperimentConfig::nu_label(&nu);
        rows.push(row("SU(2)", &lab, 0, "vol O_nu", orbit_volume(&su2, &nu.vector())?, 2.0 * PI * nuv, 0.0));
        let (_, det) = su2.s_tau(&su2.sharp(&su2.group().embed_cartan(&nu.vector())).rows(0, 1).into_owned());
        rows.push(row("SU(2)", &lab, 0, "|det S_nu|", det, nuv * nuv, 0.0));
    }
    for nuv in [[1.5, 0.5], [2.5, -0.5]] {
        let nu = HalfWeight::new(&u2, &nuv)?;
        let lab = ExperimentConfig::nu_label(&nu);
        let gap = nuv[0] - nuv[1];
        rows.push(row("U(2)", &lab, 0, "vol O_nu", orbit_volume(&u2, &nu.vector())?, 2.0 * PI * gap, 0.0));
        let (_, det) = u2.s_tau(&u2.sharp(&u2.group().embed_cartan(&nu.vector())).rows(0, 2).into_owned());
        rows.push(row("U(2)", &lab, 0, "|det S_nu|", det, gap * gap, 0.0));
    }
    for id in CATALOG {
        let m = ProjectiveModel::catalog(id)?;
        let nu = m.default_half_weight()?;
        let s = decompose(&m, &nu, &m.default_base_point())?.on_cone()?;
        let p = psi_nu(&m, &nu, &s)?;
        let r = m.rank() as f64;
        let expect = match m.group_kind() {
            // 1 / (2 lambda) with lambda = 1/2 for the defining action
            GroupKind::SU(_) => 1.0 / (2.0 * 0.5),
            GroupKind::U(_) => 1.0 / (2f64.sqrt() * PI * p.phi_norm * p.d_phi),
            GroupKind::Torus(_) => (2f64.sqrt() * PI).powf(1.0 - r) / (p.phi_norm * p.d_phi),
        };
        rows.push(row(id, &ExperimentConfig::nu_label(&nu), 0, "Psi_nu", p.psi, expect, 0.0));
    }
    for r in &mut rows {
        r.err = rel(r.value, r.predicted);
    }
    Ok(rows)
}

/// Random regular torus angles inside the injectivity domain.
fn regular_angles(kind: GroupKind, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let th: DVector<f64> = match kind {
            GroupKind::SU(_) => DVector::from_vec(vec![rng.random_range(-2.6..2.6)]),
            _ => DVector::from_vec(vec![rng.random_range(-2.6..2.6), rng.random_range(-2.6..2.6)]),
        };
        let gap = match kind {
            GroupKind::SU(_) => th[0].abs(),
            _ => (th[0] - th[1]).abs(),
        };
        if gap > 0.05 {
            return th;
        }
    }
}

/// Kirillov against Weyl on random regular elements, xi = 0, the
/// dimension scaling law and the closed-form constants.
pub fn run_character_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (kind, nuv) in [(GroupKind::SU(2), vec![3.0]), (GroupKind::U(2), vec![2.5, -0.5])] {
        let m = default_metric(kind)?;
        let nu = HalfWeight::new(&m, &nuv)?;
        let lab = ExperimentConfig::nu_label(&nu);
        let q = orbit_quadrature(&m, &nu, cfg.orbit_level)?;
        let name = kind.to_string();
        let mut errs = Vec::new();
        for _ in 0..50 {
            let th = regular_angles(kind, &mut rng);
            let xi = m.group().embed_cartan(&th);
            let kv = kirillov_character(&m, &q, &xi)?.value();
            let w = weyl_character(&m, &nu, &th, WallPolicy::Fail)?;
            let e = (kv - w).norm() / w.norm().max(1.0);
            rows.push(row(&name, &lab, 1, "kirillov vs weyl", kv.re, w.re, e));
            errs.push(e);
        }
        fits.push(FitResult::exact(&format!("{name} kirillov vs weyl"), &errs, 1e-6));
        let z = kirillov_character(&m, &q, &DVector::zeros(m.group().dim))?.value();
        let d = weyl_dimension(&m, &nu)? as f64;
        let e = (z.re - d).abs().max(z.im.abs());
        rows.push(row(&name, &lab, 1, "chi at xi = 0", z.re, d, e));
        fits.push(FitResult::check(
            &format!("{name} xi = 0 dimension"),
            e,
            "rounds to d_nu".into(),
            z.re.round() == d && e < 0.5,
        ));
    }
    // tori: the character is a single exponential
    let t2 = default_metric(GroupKind::Torus(2))?;
    let nu = HalfWeight::new(&t2, &[1.0, 2.0])?;
    let q = orbit_quadrature(&t2, &nu, cfg.orbit_level)?;
    let mut errs = Vec::new();
    for _ in 0..10 {
        let th = DVector::from_vec(vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]);
        let kv = kirillov_character(&t2, &q, &th)?.value();
        let w = weyl_character(&t2, &nu, &th, WallPolicy::Fail)?;
        errs.push((kv - w).norm());
        rows.push(row("T^2", "1;2", 1, "kirillov vs weyl", kv.re, w.re, (kv - w).norm()));
    }
    fits.push(FitResult::exact("T^2 kirillov vs weyl", &errs, 1e-14));
    // d_{k nu} = k^{n_G} d_nu in rational arithmetic
    let mut scaling_ok = true;
    for (kind, nuv) in [
        (GroupKind::Torus(2), vec![1.0, 2.0]),
        (GroupKind::SU(2), vec![1.0]),
        (GroupKind::U(2), vec![1.5, 0.5]),
    ] {
        let m = default_metric(kind)?;
        let nu = HalfWeight::new(&m, &nuv)?;
        for k in 1..=64u64 {
            match dim_scaling(&m, &nu, k) {
                Ok(_) => {}
                Err(Error::CheckFailed(_)) => scaling_ok = false,
                Err(e) => return Err(e),
            }
        }
    }
    fits.push(FitResult::check("dimension scaling k <= 64", 0.0, "exact rational".into(), scaling_ok));
    let closed = closed_form_rows()?;
    let errs: Vec<f64> = closed.iter().map(|r| r.err).collect();
    fits.push(FitResult::exact("closed forms", &errs, 1e-12));
    rows.extend(closed);
    Ok(SuiteReport::new("characters", rows, fits))
}

struct Setup {
    model: ProjectiveModel,
    nu: HalfWeight,
    label: String,
    sample: LocusSample,
    ks: Vec<u64>,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    let (model, nu) = cfg.load_model()?;
    let sample = decompose(&model, &nu, &model.default_base_point())?.on_cone()?;
    let ks: Vec<u64> = cfg.admissible_ks(&model, &nu)?.into_iter().flatten().collect();
    let mut ks_dedup = ks.clone();
    ks_dedup.dedup();
    if ks_dedup.is_empty() {
        return Err(Error::EmptyLocus(format!(
            "{}: H(X)_(k nu) vanishes along the whole k schedule",
            model.id
        )));
    }
    Ok(Setup {
        label: ExperimentConfig::nu_label(&nu),
        model,
        nu,
        sample,
        ks: ks_dedup,
    })
}

fn kernel_ratio(a: &KernelValue, b: &KernelValue) -> f64 {
    a.ratio(b).re
}

/// exact Pi_{k nu}(x, x) / predicted at the default on-locus point.
pub fn run_diag_convergence(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let s = setup(cfg)?;
    let x = &s.sample.point;
    let rows: Vec<Row> = s
        .ks
        .par_iter()
        .map(|&k| -> Result<Row> {
            let exact = equivariant_kernel(&s.model, &s.nu, k, x, x)?;
            let pred = predict_near_diagonal(&s.model, &s.nu, &s.sample, k, &Displacements::default())?;
            let p = pred.value().re;
            let ratio = kernel_ratio(&exact, &KernelValue::from_polar_ln(p.ln(), 0.0));
            Ok(row(&s.model.id, &s.label, k, "diag", exact.to_c64().re, p, (ratio - 1.0).abs()))
        })
        .collect::<Result<_>>()?;
    let errs: Vec<f64> = rows.iter().map(|r| r.err).collect();
    let mut fits = Vec::new();
    let last = *errs.last().unwrap();
    fits.push(FitResult::check(
        "ratio at largest k",
        last,
        "|ratio - 1| <= 0.05".into(),
        last <= 0.05,
    ));
    if matches!(s.model.group_kind(), GroupKind::SU(_)) {
        fits.push(FitResult::exact("ratio exact", &errs, 1e-12));
    } else {
        fits.push(FitResult::power_law("ratio error", &s.ks, &errs, -1.0, 0.2));
    }
    Ok(SuiteReport::new("diag", rows, fits))
}

fn unit(v: &CVec) -> CVec {
    v / c(v.norm(), 0.0)
}

/// Whether the model has v (normal) or w directions at the default point.
pub fn gaussian_directions(model: &ProjectiveModel, sample: &LocusSample) -> Result<(Option<CVec>, Option<CVec>)> {
    let v = normal_space(model, sample)?.first().map(unit);
    let w = w_space(model, &sample.point).first().map(unit);
    Ok((v, w))
}

/// Exact log-profiles along v and w displacements.
pub fn run_gaussian_profile(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let s = setup(cfg)?;
    let (vdir, wdir) = gaussian_directions(&s.model, &s.sample)?;
    if vdir.is_none() && wdir.is_none() {
        return Err(Error::Unsupported(format!(
            "{}: no transverse displacement directions (d = {}, rank {})",
            s.model.id,
            s.model.d,
            s.model.rank()
        )));
    }
    let x = &s.sample.point;
    let sigma = s.sample.sigma;
    let at = |k: u64, dir: &CVec, t: f64| displace(x, 0.0, &(dir * c(t / (k as f64).sqrt(), 0.0)));
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let kmax = *s.ks.last().unwrap();
    if let Some(v) = &vdir {
        let slope_target = -2.0 / sigma;
        let mut last_slope = f64::NAN;
        for &k in &s.ks {
            let diag = equivariant_kernel(&s.model, &s.nu, k, x, x)?;
            let mut s2 = Vec::new();
            let mut ys = Vec::new();
            for &t in &cfg.displacements {
                let p = at(k, v, t)?;
                let val = kernel_ratio(&equivariant_kernel(&s.model, &s.nu, k, &p, &p)?, &diag).ln();
                let pred = slope_target * t * t;
                rows.push(row(&s.model.id, &s.label, k, &format!("v log-profile |v|={t}"), val, pred, rel(val, pred)));
                s2.push(t * t);
                ys.push(val);
            }
            let slope = if s2.len() >= 2 { fit_line(&s2, &ys).slope } else { ys[0] / s2[0] };
            rows.push(row(&s.model.id, &s.label, k, "v slope", slope, slope_target, rel(slope, slope_target)));
            last_slope = slope;
        }
        let e = rel(last_slope, slope_target);
        fits.push(FitResult::check(
            "v slope at largest k",
            e,
            format!("within 10% of -2/sigma = {slope_target}"),
            e <= 0.1,
        ));
    }
    if let Some(w) = &wdir {
        let mut devs = Vec::new();
        for &k in &s.ks {
            let diag = equivariant_kernel(&s.model, &s.nu, k, x, x)?;
            let mut dev: f64 = 0.0;
            for &t in &cfg.displacements {
                let p = at(k, w, t)?;
                let val = kernel_ratio(&equivariant_kernel(&s.model, &s.nu, k, &p, &p)?, &diag).ln();
                rows.push(row(&s.model.id, &s.label, k, &format!("w log-profile |w|={t}"), val, 0.0, val.abs()));
                dev = dev.max(val.abs());
                // w2 = -w1: modulus e^{-2|w|^2/sigma}
                if k == kmax {
                    let q = at(k, &(-w.clone()), t)?;
                    let m = equivariant_kernel(&s.model, &s.nu, k, &p, &q)?.ratio(&diag).norm();
                    let pred = (-2.0 * t * t / sigma).exp();
                    rows.push(row(&s.model.id, &s.label, k, &format!("w offdiag modulus |w|={t}"), m, pred, rel(m, pred)));
                }
            }
            devs.push(dev);
        }
        // band C k^{-1/2}, C calibrated on the first k with a 25% margin
        let cband = 1.25 * devs[0] * (s.ks[0] as f64).sqrt();
        let worst = s
            .ks
            .iter()
            .zip(&devs)
            .map(|(&k, &d)| d * (k as f64).sqrt() / cband)
            .fold(0.0, f64::max);
        fits.push(FitResult::check(
            "w flatness",
            worst,
            format!("max |log profile| <= {cband:.4} k^-1/2"),
            worst <= 1.0,
        ));
        let off: Vec<f64> = rows
            .iter()
            .filter(|r| r.quantity.starts_with("w offdiag"))
            .map(|r| r.err)
            .collect();
        let worst = off.iter().copied().fold(0.0, f64::max);
        fits.push(FitResult::check("w offdiag modulus at largest k", worst, "within 10%".into(), worst <= 0.1));
    }
    Ok(SuiteReport::new("gaussian", rows, fits))
}

/// A pair of points far apart in the moduli: y pulls x toward the last
/// coordinate vertex.
pub fn separated_partner(x: &ModelPoint) -> ModelPoint {
    let mut t = x.moduli();
    let n = t.len();
    for (j, tj) in t.iter_mut().enumerate() {
        *tj = 0.3 * *tj + if j == n - 1 { 0.7 } else { 0.0 };
    }
    ModelPoint::from_moduli(&t)
}

/// The interior grid point farthest from the cone, if any is off it.
pub fn off_locus_point(model: &ProjectiveModel, nu: &HalfWeight) -> Result<Option<ModelPoint>> {
    let mut best: Option<(f64, ModelPoint)> = None;
    for t in simplex_grid(model.d, 10) {
        if t.iter().any(|&v| v < 0.05) {
            continue;
        }
        let p = ModelPoint::from_moduli(&t);
        if let Decomposition::OffCone { distance, .. } = decompose(model, nu, &p)? {
            if best.as_ref().is_none_or(|(d, _)| distance > *d) {
                best = Some((distance, p));
            }
        }
    }
    Ok(best.map(|(_, p)| p))
}

fn decay_rows_and_fit(
    s: &Setup,
    quantity: &str,
    lns: &[f64],
    rows: &mut Vec<Row>,
    fits: &mut Vec<FitResult>,
) {
    for (&k, &l) in s.ks.iter().zip(lns) {
        rows.push(row(&s.model.id, &s.label, k, quantity, l.exp(), 0.0, l.exp()));
    }
    let slopes: Vec<f64> = s
        .ks
        .windows(2)
        .zip(lns.windows(2))
        .map(|(k, l)| (l[1] - l[0]) / ((k[1] as f64).ln() - (k[0] as f64).ln()))
        .collect();
    for (&k, &sl) in s.ks[1..].iter().zip(&slopes) {
        rows.push(row(&s.model.id, &s.label, k, &format!("{quantity} slope"), sl, -5.0, 0.0));
    }
    let last = slopes.last().copied().unwrap_or(f64::NAN);
    let monotone = slopes.windows(2).all(|w| w[1] < w[0]);
    fits.push(FitResult::check(
        &format!("{quantity} local slope"),
        last,
        "last slope < -5, slopes decreasing".into(),
        last < -5.0 && monotone,
    ));
}

/// Off-orbit and off-locus decay plus the empty-weight check.
pub fn run_decay_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let s = setup(cfg)?;
    if s.ks.len() < 2 {
        return Err(Error::Config("decay slopes need at least two k values".into()));
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let x = s.sample.point.clone();
    let y = separated_partner(&x);
    let sep = orbit_separation(&s.model, &x, &y)?;
    rows.push(row(&s.model.id, &s.label, 0, "orbit separation", sep.distance, 0.0, 0.0));
    if sep.distance < 1e-6 {
        // one orbit: nothing should decay
        let v: Vec<f64> = s
            .ks
            .iter()
            .map(|&k| equivariant_kernel(&s.model, &s.nu, k, &x, &y).map(|v| v.abs()))
            .collect::<Result<_>>()?;
        for (&k, &a) in s.ks.iter().zip(&v) {
            rows.push(row(&s.model.id, &s.label, k, "same-orbit kernel", a, 0.0, 0.0));
        }
        fits.push(FitResult::check(
            "same orbit: no decay expected",
            sep.distance,
            "separation 0 recorded".into(),
            v.iter().all(|a| *a > 0.0),
        ));
    } else {
        let lns: Vec<f64> = s
            .ks
            .par_iter()
            .map(|&k| equivariant_kernel(&s.model, &s.nu, k, &x, &y).map(|v| v.ln_abs()))
            .collect::<Result<_>>()?;
        decay_rows_and_fit(&s, "off-orbit", &lns, &mut rows, &mut fits);
    }
    match off_locus_point(&s.model, &s.nu)? {
        Some(p) => {
            let lns: Vec<f64> = s
                .ks
                .par_iter()
                .map(|&k| equivariant_kernel(&s.model, &s.nu, k, &p, &p).map(|v| v.ln_abs()))
                .collect::<Result<_>>()?;
            decay_rows_and_fit(&s, "off-locus", &lns, &mut rows, &mut fits);
        }
        None => fits.push(FitResult::check(
            "off-locus",
            0.0,
            "locus is all of M".into(),
            true,
        )),
    }
    if let GroupKind::Torus(_) = s.model.group_kind() {
        let neg: Vec<f64> = s.nu.coords.iter().map(|v| -v).collect();
        let nu2 = HalfWeight::new(&s.model.metric, &neg)?;
        let vals: Vec<f64> = s
            .ks
            .iter()
            .map(|&k| equivariant_kernel(&s.model, &nu2, k, &x, &x).map(|v| v.abs()))
            .collect::<Result<_>>()?;
        let lab = ExperimentConfig::nu_label(&nu2);
        for (&k, &v) in s.ks.iter().zip(&vals) {
            rows.push(row(&s.model.id, &lab, k, "mismatched weight", v, 0.0, v));
        }
        fits.push(FitResult::exact("mismatched weight vanishes", &vals, 0.0));
    }
    Ok(SuiteReport::new("decay", rows, fits))
}

/// Exact isotypic dimensions against (k / pi)^{d+1-r} delta_{nu,0}.
pub fn run_dim_growth(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let (model, nu) = cfg.load_model()?;
    let dc = predict_dim_coeff(&model, &nu, cfg.dim_level)?;
    let e = (model.d + 1 - model.rank()) as i32;
    let label = ExperimentConfig::nu_label(&nu);
    let ks: Vec<u64> = {
        let mut v: Vec<u64> = cfg.admissible_ks(&model, &nu)?.into_iter().flatten().collect();
        v.dedup();
        v
    };
    if ks.is_empty() {
        return Err(Error::EmptyLocus(format!("{}: no k with a nonzero component", model.id)));
    }
    let mut rows = Vec::new();
    for &k in &ks {
        let dim = crate::hardy::isotypic_dim(&model, &nu, k)? as f64;
        let pred = (k as f64 / PI).powi(e) * dc.delta0;
        rows.push(row(&model.id, &label, k, "isotypic dim", dim, pred, rel(dim, pred)));
    }
    rows.push(row(&model.id, &label, 0, "delta0", dc.delta0, f64::NAN, 0.0));
    let errs: Vec<f64> = rows.iter().filter(|r| r.k > 0).map(|r| r.err).collect();
    let fit = if errs.iter().all(|&x| x <= 1e-9) {
        FitResult::exact("dimension ratio exact", &errs, 1e-9)
    } else {
        FitResult::power_law("dimension relative error", &ks, &errs, -1.0, 0.2)
    };
    Ok(SuiteReport::new("dims", rows, vec![fit]))
}

/// Every suite for one model; the Gaussian suite is skipped on models
/// without transverse directions.
pub fn run_all(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut parts = vec![run_character_suite(cfg)?, run_diag_convergence(cfg)?];
    match run_gaussian_profile(cfg) {
        Ok(r) => parts.push(r),
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e),
    }
    parts.push(run_decay_suite(cfg)?);
    parts.push(run_dim_growth(cfg)?);
    Ok(SuiteReport::merge("all", parts))
}

pub fn run_suite(name: &str, cfg: &ExperimentConfig) -> Result<SuiteReport> {
    match name {
        "characters" => run_character_suite(cfg),
        "diag" => run_diag_convergence(cfg),
        "gaussian" => run_gaussian_profile(cfg),
        "decay" => run_decay_suite(cfg),
        "dims" => run_dim_growth(cfg),
        "all" => run_all(cfg),
        other => Err(Error::Config(format!("unknown suite {other:?}; expected one of {SUITES:?}"))),
    }
}
