use clap::{Args, Parser, Subcommand};
use equivariant_szego::characters::{
    kirillov_character, orbit_quadrature, orbit_volume, weyl_character, weyl_dimension, WallPolicy,
};
use equivariant_szego::geometry::{decompose, ModelPoint, ProjectiveModel};
use equivariant_szego::hardy::{equivariant_kernel, isotypic_dim, orbit_separation};
use equivariant_szego::harness::{exit_code, geometric_schedule, run_suite, ExperimentConfig, OutputFormat};
use equivariant_szego::predictor::{predict_dim_coeff, psi_nu};
use equivariant_szego::{Error, Result};
use nalgebra::DVector;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "eqsz", about = "Equivariant Szego kernel experiments on projective models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Catalog model id.
    #[arg(long, global = true, default_value = "s1-cp1-w12")]
    model: String,
    /// Half-weight coordinates, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Option<Vec<f64>>,
    #[arg(long, global = true, default_value_t = 64)]
    kmin: u64,
    #[arg(long, global = true, default_value_t = 512)]
    kmax: u64,
    #[arg(long, global = true, default_value_t = 2.0)]
    kfactor: f64,
    /// Output directory for suite tables and plots.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structure constants of the model's group.
    GroupInfo,
    /// Exact isotypic dimensions against the predicted growth.
    Dim,
    /// Weyl and Kirillov characters at exp(theta) in the torus.
    Character {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<f64>,
    },
    /// Symplectic volume of the coadjoint orbit through nu.
    OrbitVolume,
    /// The leading coefficient Psi_nu at a point (moduli t_j).
    PsiNu {
        #[arg(long, value_delimiter = ',')]
        point: Option<Vec<f64>>,
    },
    /// Exact Pi_{k nu}(x, y) with the orbit separation of x and y.
    KernelEval {
        #[arg(long)]
        k: u64,
        #[arg(long, value_delimiter = ',')]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        y: Option<Vec<f64>>,
    },
    /// Run a verification suite: characters, diag, gaussian, decay, dims or all.
    Suite { name: String },
}

fn config(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(&c.model);
    cfg.nu = c.nu.clone();
    cfg.ks = geometric_schedule(c.kmin, c.kmax, c.kfactor)?;
    cfg.out_dir = c.out.clone();
    cfg.seed = c.seed;
    cfg.validate()?;
    Ok(cfg)
}

fn emit(v: &Value, format: OutputFormat) {
    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(v).expect("json value")),
        OutputFormat::Csv => {
            println!("key,value");
            if let Value::Object(map) = v {
                for (k, x) in map {
                    println!("{k},{x}");
                }
            }
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let format: OutputFormat = cli.common.format.parse()?;
    let cfg = config(&cli.common)?;
    let (model, nu) = cfg.load_model()?;
    let metric = &model.metric;
    let g = metric.group();
    let nu_v = nu.coords.clone();
    match &cli.cmd {
        Cmd::GroupInfo => {
            let (vg, vt) = metric.group_volumes();
            emit(
                &json!({
                    "model": model.id,
                    "group": g.kind.to_string(),
                    "dim": g.dim,
                    "rank": g.rank,
                    "positive_roots": g.positive_roots.iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "delta": g.delta.iter().copied().collect::<Vec<_>>(),
                    "weyl_order": g.weyl_order(),
                    "vol_g": vg,
                    "vol_t": vt,
                }),
                format,
            );
        }
        Cmd::Dim => {
            let dc = predict_dim_coeff(&model, &nu, cfg.dim_level)?;
            let e = (model.d + 1 - model.rank()) as i32;
            let rows: Vec<Value> = cfg
                .ks
                .iter()
                .map(|&k| {
                    let dim = isotypic_dim(&model, &nu, k)?;
                    let pred = (k as f64 / std::f64::consts::PI).powi(e) * dc.delta0;
                    Ok(json!({"k": k, "dim": dim, "predicted": pred}))
                })
                .collect::<Result<_>>()?;
            emit(&json!({"model": model.id, "nu": nu_v, "delta0": dc.delta0, "rows": rows}), format);
        }
        Cmd::Character { theta } => {
            let th = DVector::from_vec(theta.clone());
            let w = weyl_character(metric, &nu, &th, WallPolicy::Extrapolate)?;
            let q = orbit_quadrature(metric, &nu, cfg.orbit_level)?;
            let kv = kirillov_character(metric, &q, &g.embed_cartan(&th))?;
            emit(
                &json!({
                    "group": g.kind.to_string(),
                    "nu": nu_v,
                    "dimension": weyl_dimension(metric, &nu)?,
                    "weyl": [w.re, w.im],
                    "kirillov": [kv.re, kv.im],
                }),
                format,
            );
        }
        Cmd::OrbitVolume => {
            emit(
                &json!({"group": g.kind.to_string(), "nu": nu_v, "orbit_volume": orbit_volume(metric, &nu.vector())?}),
                format,
            );
        }
        Cmd::PsiNu { point } => {
            let p = point_or_default(&model, point)?;
            let s = decompose(&model, &nu, &p)?.on_cone()?;
            let b = psi_nu(&model, &nu, &s)?;
            let mut v = serde_json::to_value(&b)?;
            v["sigma"] = json!(s.sigma);
            emit(&v, format);
        }
        Cmd::KernelEval { k, x, y } => {
            let px = point_or_default(&model, x)?;
            let py = match y {
                Some(_) => point_or_default(&model, y)?,
                None => px.clone(),
            };
            let v = equivariant_kernel(&model, &nu, *k, &px, &py)?;
            let sep = orbit_separation(&model, &px, &py)?;
            emit(
                &json!({
                    "model": model.id,
                    "nu": nu_v,
                    "k": k,
                    "ln_abs": v.ln_abs(),
                    "arg": v.arg(),
                    "value": [v.to_c64().re, v.to_c64().im],
                    "separation": sep.distance,
                }),
                format,
            );
        }
        Cmd::Suite { name } => {
            let outcome = run_suite(name, &cfg);
            let code = exit_code(&outcome);
            let rep = outcome?;
            if let Some(dir) = &cfg.out_dir {
                rep.write_outputs(dir, format)?;
            }
            match format {
                OutputFormat::Json => println!("{}", rep.json_string()?),
                OutputFormat::Csv => print!("{}", rep.csv_string()?),
            }
            for f in &rep.fits {
                eprintln!("{} {}: {} ({})", if f.pass { "PASS" } else { "FAIL" }, f.quantity, f.residual, f.band);
            }
            return Ok(code);
        }
    }
    Ok(0)
}

fn point_or_default(model: &ProjectiveModel, t: &Option<Vec<f64>>) -> Result<ModelPoint> {
    match t {
        None => Ok(model.default_base_point()),
        Some(t) if t.len() == model.d + 1 && t.iter().all(|v| *v >= 0.0) && t.iter().sum::<f64>() > 0.0 => {
            Ok(ModelPoint::from_moduli(t))
        }
        Some(t) => Err(Error::Config(format!(
            "point needs {} non-negative moduli, got {t:?}",
            model.d + 1
        ))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&Err(e));
            ExitCode::from(code as u8)
        }
    }
}
