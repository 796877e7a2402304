use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Subcommand};
use curvlab::designs::{
    hilbert_rational_design, is_degree4_design, is_degree4_design_exact, optimize_design,
    torus_immersion_from_design, torus_immersion_from_rational_design, DesignFile, HilbertOptions, OptimizeOptions,
};
use curvlab::exact::format_rational;
use serde_json::json;

use crate::curv::{curvature_report, render, Settings};
use crate::output::{emit, exit, read_text, Ctx, Format};

#[derive(Debug, Subcommand)]
pub enum DesignCmd {
    /// Check the quartic moment identity; exact for rational files.
    Verify {
        file: PathBuf,
        /// Moment tolerance for floating designs.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Search for an N-point design on S^{n-1} by restarted gradient descent.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 20_000)]
        iters: usize,
        /// Design file to write; the summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact rational design from rational sphere points and an exact LP.
    Hilbert {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        height_start: u64,
        #[arg(long, default_value_t = 8)]
        height_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flat-torus immersion spec of a design, optionally with its curvature.
    Torus(TorusArgs),
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    file: PathBuf,
    /// Spec file to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compute the curvature of the torus and print that report.
    #[arg(long)]
    curv: bool,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
}

fn read_design(path: &Path) -> anyhow::Result<DesignFile> {
    let text = read_text(path)?;
    DesignFile::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Artifact to `out` with the summary on stdout, or the artifact on stdout.
fn emit_artifact(ctx: &Ctx, artifact: &str, summary: serde_json::Value, out: Option<&std::path::Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            emit(&format!("{artifact}\n"), Some(p))?;
            emit(&ctx.json_text(summary), None)
        }
        None => emit(&format!("{artifact}\n"), None),
    }
}

pub fn run(ctx: &Ctx, cmd: &DesignCmd) -> anyhow::Result<u8> {
    match cmd {
        DesignCmd::Verify { file, tol } => {
            let f = read_design(file)?;
            let (ok, residual, size) = if f.is_exact() {
                let d = f.to_rational()?;
                let c = is_degree4_design_exact(&d)?;
                (c.ok, json!(format_rational(&c.residual)), d.points.len())
            } else {
                let d = f.to_design()?;
                let c = is_degree4_design(&d, *tol)?;
                (c.ok, json!(c.residual), d.cardinality())
            };
            let body = json!({
                "n": f.n, "points": size, "exact": f.is_exact(), "ok": ok, "residual": residual,
                "tol": if f.is_exact() { json!(0) } else { json!(tol) },
            });
            emit(&ctx.json_text(body), None)?;
            Ok(if ok { exit::OK } else { exit::CHECK_FAILED })
        }
        DesignCmd::Optimize { n, count, restarts, iters, out } => {
            let opts = OptimizeOptions { restarts: *restarts, iters: *iters, seed: ctx.seed, ..Default::default() };
            let r = optimize_design(*n, *count, &opts)?;
            let summary = json!({
                "n": n, "count": count, "objective": r.objective, "residual": r.residual,
                "converged": r.converged, "restart": r.restart,
                "status": if r.converged { "OK" } else { "NON_CONVERGED" },
            });
            emit_artifact(ctx, &DesignFile::from_design(&r.design).to_json_string(), summary, out.as_deref())?;
            Ok(if r.converged { exit::OK } else { exit::NON_CONVERGED })
        }
        DesignCmd::Hilbert { n, height_start, height_max, out } => {
            let opts = HilbertOptions { height_start: *height_start, height_max: *height_max };
            let h = hilbert_rational_design(*n, &opts)?;
            let summary = json!({
                "n": n, "height": h.height, "candidate_points": h.candidate_points,
                "support": h.design.points.len(), "total_multiplicity": h.design.total().to_string(),
            });
            emit_artifact(ctx, &DesignFile::from_rational(&h.design).to_json_string(), summary, out.as_deref())?;
            Ok(exit::OK)
        }
        DesignCmd::Torus(a) => {
            let f = read_design(&a.file)?;
            let spec = if f.is_exact() {
                torus_immersion_from_rational_design(&f.to_rational()?)?
            } else {
                torus_immersion_from_design(&f.to_design()?, a.tol)?
            };
            let mut spec_text = spec.to_json_string();
            spec_text.push('\n');
            if !a.curv {
                emit(&spec_text, a.out.as_deref())?;
                return Ok(exit::OK);
            }
            if let Some(p) = &a.out {
                emit(&spec_text, Some(p))?;
            }
            let settings = Settings { points: a.points, ..Default::default() };
            let report = curvature_report(&spec, &settings, ctx.seed)?;
            emit(&render(ctx, &report, Format::Json), None)?;
            Ok(if report.status == "OK" { exit::OK } else { exit::NON_CONVERGED })
        }
    }
}
