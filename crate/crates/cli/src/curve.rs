use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Subcommand};
use curvlab::curves::{
    arm_check, bow_check, crofton_check, random_arm_instance, random_bounded_curve, total_curvature, CatalogCurve,
    CurveFile,
};
use curvlab::{rng, PolyCurve, SampledCurve};
use rand::Rng;
use serde_json::json;

use crate::output::{emit, exit, Ctx};

#[derive(Debug, Args)]
pub struct RandomArgs {
    /// Run on k generated instances instead of files.
    #[arg(long, value_name = "K")]
    random: Option<usize>,
    /// Ambient dimension of generated instances.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Vertices per generated polygon.
    #[arg(long, default_value_t = 8)]
    vertices: usize,
}

#[derive(Debug, Subcommand)]
pub enum CurveCmd {
    /// Total curvature of closed polygons against 2π.
    Fenchel {
        files: Vec<PathBuf>,
        #[command(flatten)]
        random: RandomArgs,
        /// Treat CSV input as closed.
        #[arg(long)]
        closed: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Arm lemma: end-to-end distance of Q against the convex arc P.
    Arm {
        /// Q then P.
        files: Vec<PathBuf>,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Bow inequality chord ≥ 2R sin(l/2R) for curves with curvature ≤ 1/R.
    Bow {
        file: Option<PathBuf>,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Samples per generated curve.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Monte-Carlo Crofton estimate of 4·(total curvature) for a closed space curve.
    Crofton {
        file: Option<PathBuf>,
        /// Use a circle of this radius instead of a file.
        #[arg(long)]
        circle: Option<f64>,
        /// Vertices of the circle polygon.
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        dirs: usize,
        #[arg(long, default_value_t = 0.03)]
        rel_tol: f64,
    },
}

fn read_curve(path: &Path, closed_if_csv: bool) -> anyhow::Result<PolyCurve> {
    let f = CurveFile::read(path, closed_if_csv).with_context(|| format!("reading {}", path.display()))?;
    Ok(f.to_curve()?)
}

fn random_polygon(k: usize, dim: usize, seed: u64) -> curvlab::Result<PolyCurve> {
    let mut r = rng::rng(seed);
    let pts = (0..k).map(|_| rng::unit_vector(&mut r, dim) * r.random_range(0.2..2.0)).collect();
    PolyCurve::new(pts, true)
}

fn print(ctx: &Ctx, body: serde_json::Value) -> anyhow::Result<()> {
    emit(&ctx.json_text(body), None)
}

pub fn run(ctx: &Ctx, cmd: &CurveCmd) -> anyhow::Result<u8> {
    match cmd {
        CurveCmd::Fenchel { files, random, closed, tol } => {
            let curves: Vec<PolyCurve> = match random.random {
                Some(k) => (0..k)
                    .map(|i| random_polygon(random.vertices, random.dim, ctx.seed.wrapping_add(i as u64)))
                    .collect::<curvlab::Result<_>>()?,
                None if files.is_empty() => bail!("give curve files or --random K"),
                None => files.iter().map(|f| read_curve(f, *closed)).collect::<anyhow::Result<_>>()?,
            };
            if let Some(i) = curves.iter().position(|c| !c.closed) {
                print(ctx, json!({"ok": false, "violation": format!("curve {i} is open; the inequality is for closed curves")}))?;
                return Ok(exit::HYPOTHESIS);
            }
            let mut rows = Vec::new();
            let mut ok = true;
            let mut min_total = f64::INFINITY;
            for c in &curves {
                let t = total_curvature(c, 1e-9)?;
                let pass = t.total >= TAU - tol;
                ok &= pass;
                min_total = min_total.min(t.total);
                rows.push(json!({"total": t.total, "excess": t.total - TAU, "ok": pass, "convex_planar": t.convex_planar}));
            }
            let body = if random.random.is_some() {
                json!({"count": curves.len(), "min_total": min_total, "ok": ok, "tol": tol,
                       "convex_planar": rows.iter().filter(|r| r["convex_planar"] == true).count()})
            } else {
                json!({"curves": rows, "ok": ok, "tol": tol})
            };
            print(ctx, body)?;
            Ok(if ok { exit::OK } else { exit::CHECK_FAILED })
        }
        CurveCmd::Arm { files, random, tol } => {
            let pairs: Vec<(PolyCurve, PolyCurve)> = match random.random {
                Some(k) => (0..k)
                    .map(|i| {
                        random_arm_instance(random.vertices, random.dim, ctx.seed.wrapping_add(i as u64)).map(|(p, q)| (q, p))
                    })
                    .collect::<curvlab::Result<_>>()?,
                None if files.len() == 2 => vec![(read_curve(&files[0], false)?, read_curve(&files[1], false)?)],
                None => bail!("give two curve files (Q then P) or --random K"),
            };
            let mut min_slack = f64::INFINITY;
            let mut hypotheses = Vec::new();
            let mut ok = true;
            for (i, (q, p)) in pairs.iter().enumerate() {
                let r = arm_check(q, p, *tol)?;
                if !r.hypotheses_ok {
                    hypotheses.push(json!({"instance": i, "violations": r.violations}));
                    continue;
                }
                ok &= r.inequality_ok;
                min_slack = min_slack.min(r.slack);
            }
            let body = json!({
                "count": pairs.len(), "min_slack": if min_slack.is_finite() { json!(min_slack) } else { json!(null) },
                "ok": ok && hypotheses.is_empty(), "hypothesis_violations": hypotheses, "tol": tol,
            });
            print(ctx, body)?;
            Ok(if !hypotheses.is_empty() {
                exit::HYPOTHESIS
            } else if ok {
                exit::OK
            } else {
                exit::CHECK_FAILED
            })
        }
        CurveCmd::Bow { file, random, radius, samples, tol } => {
            let curves: Vec<SampledCurve> = match (random.random, file) {
                (Some(k), _) => {
                    let mut r = rng::rng(ctx.seed);
                    (0..k)
                        .map(|i| {
                            let length = TAU * radius * r.random_range(0.05..1.0);
                            random_bounded_curve(*radius, length, *samples, random.dim, ctx.seed.wrapping_add(i as u64))
                        })
                        .collect::<curvlab::Result<_>>()?
                }
                (None, Some(f)) => {
                    let c = read_curve(f, false)?;
                    vec![SampledCurve::new(c.vertices, false)?]
                }
                (None, None) => bail!("give a curve file or --random K"),
            };
            let mut min_slack = f64::INFINITY;
            let mut violations = Vec::new();
            let mut ok = true;
            let mut last = None;
            for (i, c) in curves.iter().enumerate() {
                let r = bow_check(c, *radius, *tol)?;
                match r.chord_ok {
                    None => violations.push(json!({"instance": i, "max_curvature": r.max_curvature, "length": c.length()})),
                    Some(pass) => {
                        ok &= pass;
                        min_slack = min_slack.min(r.slack);
                    }
                }
                last = Some(r);
            }
            let mut body = json!({
                "count": curves.len(), "min_slack": if min_slack.is_finite() { json!(min_slack) } else { json!(null) },
                "ok": ok && violations.is_empty(), "hypothesis_violations": violations, "radius": radius, "tol": tol,
            });
            if let (1, Some(r)) = (curves.len(), last) {
                body["chord"] = json!(r.chord);
                body["bound"] = json!(r.bound);
                body["equality"] = json!(r.equality);
            }
            print(ctx, body)?;
            Ok(if !violations.is_empty() {
                exit::HYPOTHESIS
            } else if ok {
                exit::OK
            } else {
                exit::CHECK_FAILED
            })
        }
        CurveCmd::Crofton { file, circle, samples, dirs, rel_tol } => {
            let curve = match (circle, file) {
                (Some(r), _) => {
                    let c = CatalogCurve::Circle { radius: *r };
                    c.polygon(c.length() / *samples as f64)?
                }
                (None, Some(f)) => read_curve(f, true)?,
                (None, None) => bail!("give a curve file or --circle R"),
            };
            if !curve.closed || curve.dim() != 3 {
                print(ctx, json!({"ok": false, "violation": "Crofton check needs a closed curve in R^3"}))?;
                return Ok(exit::HYPOTHESIS);
            }
            let r = crofton_check(&curve, *dirs, ctx.seed)?;
            let ok = r.rel_err <= *rel_tol;
            print(
                ctx,
                json!({"estimate": r.mc_estimate, "target": r.target, "rel_err": r.rel_err, "directions": r.directions,
                       "resampled": r.resampled, "ok": ok, "rel_tol": rel_tol}),
            )?;
            Ok(if ok { exit::OK } else { exit::CHECK_FAILED })
        }
    }
}
