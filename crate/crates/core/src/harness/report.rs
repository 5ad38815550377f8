use crate::error::{Error, Result};
use crate::numeric::fit_loglog;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

/// One machine-readable measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub model: String,
    pub nu: String,
    pub k: u64,
    pub quantity: String,
    pub value: f64,
    pub predicted: f64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub quantity: String,
    /// Fitted log-log exponent; None for exactness checks.
    pub exponent: Option<f64>,
    pub intercept: Option<f64>,
    /// RMS residual of the fit, or the largest error of an exactness check.
    pub residual: f64,
    /// Acceptance band in words.
    pub band: String,
    pub pass: bool,
}

impl FitResult {
    /// Pass when every error is at most `tol`.
    pub fn exact(quantity: &str, errs: &[f64], tol: f64) -> Self {
        let worst = errs.iter().copied().fold(0.0, f64::max);
        Self {
            quantity: quantity.to_string(),
            exponent: None,
            intercept: None,
            residual: worst,
            band: format!("max err <= {tol:e}"),
            pass: !errs.is_empty() && worst <= tol && errs.iter().all(|e| e.is_finite()),
        }
    }

    /// Log-log fit of errs against ks over the tail of the schedule, with
    /// the exponent required to lie within `target +- tol`.
    pub fn power_law(quantity: &str, ks: &[u64], errs: &[f64], target: f64, tol: f64) -> Self {
        let (xs, ys) = fit_window(ks, errs);
        let band = format!("exponent {target} +- {tol}");
        if xs.len() < 2 || ys.iter().any(|y| !(y.abs() > 0.0) || !y.is_finite()) {
            return Self {
                quantity: quantity.to_string(),
                exponent: None,
                intercept: None,
                residual: f64::INFINITY,
                band,
                pass: false,
            };
        }
        let f = fit_loglog(&xs, &ys);
        Self {
            quantity: quantity.to_string(),
            exponent: Some(f.slope),
            intercept: Some(f.intercept),
            residual: f.residual,
            band,
            pass: (f.slope - target).abs() <= tol,
        }
    }

    pub fn check(quantity: &str, observed: f64, band: String, pass: bool) -> Self {
        Self {
            quantity: quantity.to_string(),
            exponent: None,
            intercept: None,
            residual: observed,
            band,
            pass,
        }
    }
}

/// The top half of the schedule, but at least four points when available.
pub fn fit_window(ks: &[u64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = ks.len();
    let take = n.div_ceil(2).max(4).min(n);
    let xs = ks[n - take..].iter().map(|&k| k as f64).collect();
    (xs, ys[n - take..].to_vec())
}

/// Local log-log slopes between consecutive points.
pub fn local_slopes(ks: &[u64], ys: &[f64]) -> Vec<f64> {
    ks.windows(2)
        .zip(ys.windows(2))
        .map(|(k, y)| (y[1].abs().ln() - y[0].abs().ln()) / ((k[1] as f64).ln() - (k[0] as f64).ln()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<Row>,
    pub fits: Vec<FitResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl SuiteReport {
    pub fn new(suite: &str, rows: Vec<Row>, fits: Vec<FitResult>) -> Self {
        let pass = !fits.is_empty() && fits.iter().all(|f| f.pass);
        Self {
            suite: suite.to_string(),
            rows,
            fits,
            pass,
        }
    }

    pub fn merge(suite: &str, parts: Vec<SuiteReport>) -> Self {
        let mut rows = Vec::new();
        let mut fits = Vec::new();
        for p in parts {
            let tag = p.suite.clone();
            rows.extend(p.rows);
            fits.extend(p.fits.into_iter().map(|mut f| {
                f.quantity = format!("{tag}/{}", f.quantity);
                f
            }));
        }
        Self::new(suite, rows, fits)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r).map_err(std::io::Error::from)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(std::io::Error::other(e)))
    }

    pub fn json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<suite>.csv` or `<suite>.json`, plus `<suite>.svg`.
    pub fn write_outputs(&self, dir: &Path, format: OutputFormat) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let (name, body) = match format {
            OutputFormat::Csv => (format!("{}.csv", self.suite), self.csv_string()?),
            OutputFormat::Json => (format!("{}.json", self.suite), self.json_string()?),
        };
        std::fs::write(dir.join(name), body)?;
        std::fs::write(dir.join(format!("{}.svg", self.suite)), self.svg())?;
        Ok(())
    }

    /// log10 err against log2 k, one polyline per (model, quantity).
    pub fn svg(&self) -> String {
        let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for r in &self.rows {
            if r.k == 0 || !(r.err > 0.0) || !r.err.is_finite() {
                continue;
            }
            let key = format!("{} {}", r.model, r.quantity);
            let pt = ((r.k as f64).log2(), r.err.log10());
            match series.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(pt),
                None => series.push((key, vec![pt])),
            }
        }
        series.retain(|(_, v)| v.len() >= 2);
        let (w, h, pad) = (640.0, 400.0, 50.0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(out, r#"<text x="{pad}" y="20">{}: log10 err vs log2 k</text>"#, self.suite);
        let pts: Vec<(f64, f64)> = series.iter().flat_map(|(_, v)| v.iter().copied()).collect();
        if !pts.is_empty() {
            let (x0, x1) = bounds(pts.iter().map(|p| p.0));
            let (y0, y1) = bounds(pts.iter().map(|p| p.1));
            let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
            let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
            let _ = writeln!(
                out,
                r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
                w - 2.0 * pad,
                h - 2.0 * pad
            );
            let _ = writeln!(out, r#"<text x="{pad}" y="{}">{x0:.1}</text>"#, h - pad + 15.0);
            let _ = writeln!(out, r#"<text x="{}" y="{}">{x1:.1}</text>"#, w - pad - 20.0, h - pad + 15.0);
            let _ = writeln!(out, r#"<text x="5" y="{}">{y0:.1}</text>"#, h - pad);
            let _ = writeln!(out, r#"<text x="5" y="{}">{y1:.1}</text>"#, pad + 5.0);
            const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
            for (i, (name, v)) in series.iter().enumerate() {
                let color = COLORS[i % COLORS.len()];
                let path: Vec<String> = v.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" points="{}"/>"#,
                    path.join(" ")
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
                    w - pad - 200.0,
                    pad + 15.0 + 13.0 * i as f64
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in it {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(k: u64, err: f64) -> Row {
        Row {
            model: "m".into(),
            nu: "1".into(),
            k,
            quantity: "q".into(),
            value: 1.0,
            predicted: 1.0,
            err,
        }
    }

    #[test]
    fn fit_window_and_power_law() {
        let ks = [8u64, 16, 32, 64, 128, 256, 512, 1024];
        let errs: Vec<f64> = ks.iter().map(|&k| 3.0 / k as f64).collect();
        let (xs, _) = fit_window(&ks, &errs);
        assert_eq!(xs, vec![128.0, 256.0, 512.0, 1024.0]);
        let f = FitResult::power_law("e", &ks, &errs, -1.0, 0.2);
        assert!(f.pass && (f.exponent.unwrap() + 1.0).abs() < 1e-12);
        let (xs, _) = fit_window(&ks[..3], &errs[..3]);
        assert_eq!(xs.len(), 3);
        assert!(!FitResult::power_law("e", &ks, &vec![0.0; 8], -1.0, 0.2).pass);
        let s = local_slopes(&[1, 2, 4], &[1.0, 0.25, 1.0 / 16.0]);
        assert!((s[0] + 2.0).abs() < 1e-12 && (s[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_json_and_svg_shapes() {
        let rep = SuiteReport::new("diag", vec![row(64, 0.1), row(128, 0.05)], vec![FitResult::exact("x", &[0.0], 1e-12)]);
        let csv = rep.csv_string().unwrap();
        assert!(csv.starts_with("model,nu,k,quantity,value,predicted,err\n"));
        assert_eq!(csv.lines().count(), 3);
        let v: serde_json::Value = serde_json::from_str(&rep.json_string().unwrap()).unwrap();
        for key in ["suite", "rows", "fits", "pass"] {
            assert!(v.get(key).is_some());
        }
        assert!(rep.svg().contains("<polyline"));
        assert!(!SuiteReport::new("empty", vec![], vec![]).pass);
    }
}
