use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use curvlab::curvature::{focal_radius, scalar_curvature_gauss};
use curvlab::{
    fundamental_data, jet2, mean_curvature, normal_curvature_global, petrunin_pi, CurvatureOptions, ImmersionSpec,
    Sampler,
};
use serde::Serialize;

use crate::output::{csv_row, emit, exit, read_text, Ctx, Format};

#[derive(Debug, Args)]
pub struct CurvArgs {
    /// Immersion spec JSON, e.g. {"kind":"clifford_torus","N":2}.
    pub spec: PathBuf,
    /// Direction lattice size for intrinsic dimension up to 3.
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    /// Random directions per point for intrinsic dimension 4 to 6.
    #[arg(long, default_value_t = 100_000)]
    pub directions: usize,
    /// Random base points on top of the catalog landmarks.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Gradient tolerance of the direction polish.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub grid: usize,
    pub directions: usize,
    pub points: usize,
    pub tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { grid: 10_000, directions: 100_000, points: 50, tol: 1e-7 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvReport {
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub curv: f64,
    pub curv_min: f64,
    pub spread: f64,
    pub argmax: Vec<f64>,
    pub max_residual: f64,
    pub points_evaluated: usize,
    /// Invariants at the maximizing point.
    pub pi: f64,
    pub mean_curvature_norm: f64,
    pub scalar_curvature: f64,
    pub focal_radius: Option<f64>,
    pub status: &'static str,
    pub tol: f64,
    pub grid: usize,
    pub directions: usize,
}

pub fn curvature_report(spec: &ImmersionSpec, s: &Settings, seed: u64) -> curvlab::Result<CurvReport> {
    let opts = CurvatureOptions { grid_density: s.grid, random_directions: s.directions, tol: s.tol, seed, ..Default::default() };
    let g = normal_curvature_global(spec, &Sampler { n_points: s.points, seed }, &opts)?;
    let fd = fundamental_data(&jet2(spec, &g.argmax)?)?;
    Ok(CurvReport {
        intrinsic_dim: spec.intrinsic_dim(),
        ambient_dim: spec.ambient_dim(),
        curv: g.sup,
        curv_min: g.min,
        spread: g.per_point_spread,
        argmax: g.argmax.clone(),
        max_residual: g.max_residual,
        points_evaluated: g.points_evaluated,
        pi: petrunin_pi(&fd),
        mean_curvature_norm: mean_curvature(&fd).norm(),
        scalar_curvature: scalar_curvature_gauss(&fd, 0.0),
        focal_radius: focal_radius(g.sup).ok(),
        status: if g.converged { "OK" } else { "NON_CONVERGED" },
        tol: s.tol,
        grid: s.grid,
        directions: s.directions,
    })
}

pub fn render(ctx: &Ctx, r: &CurvReport, format: Format) -> String {
    match format {
        Format::Json => ctx.json_text(serde_json::to_value(r).expect("report serializes")),
        Format::Csv => csv_row(&[
            ("curv", format!("{:?}", r.curv)),
            ("curv_min", format!("{:?}", r.curv_min)),
            ("spread", format!("{:?}", r.spread)),
            ("max_residual", format!("{:?}", r.max_residual)),
            ("pi", format!("{:?}", r.pi)),
            ("mean_curvature_norm", format!("{:?}", r.mean_curvature_norm)),
            ("scalar_curvature", format!("{:?}", r.scalar_curvature)),
            ("focal_radius", r.focal_radius.map_or(String::new(), |f| format!("{f:?}"))),
            ("status", r.status.to_string()),
        ]),
    }
}

pub fn run(ctx: &Ctx, a: &CurvArgs) -> anyhow::Result<u8> {
    let text = read_text(&a.spec)?;
    let spec = ImmersionSpec::from_json_str(&text).with_context(|| format!("parsing {}", a.spec.display()))?;
    let settings = Settings { grid: a.grid, directions: a.directions, points: a.points, tol: a.tol };
    let report = curvature_report(&spec, &settings, ctx.seed)?;
    emit(&render(ctx, &report, a.format), a.out.as_deref())?;
    Ok(if report.status == "OK" { exit::OK } else { exit::NON_CONVERGED })
}
