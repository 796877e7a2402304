//! Reproduction checks behind `verify-paper`, one JSON line per check.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use anyhow::bail;
use clap::Args;
use curvlab::bounds::{bessel_j_zero, bracket_a, lower_focal, report, veronese_dims, zero_bracket};
use curvlab::curvature::{petrunin_pi_mc, scalar_curvature_gauss, scalar_curvature_petrunin, spherical_curvature};
use curvlab::curves::{
    arm_check, bow_check, circular_arc, crofton_check, random_arm_instance, random_bounded_curve, total_curvature,
    CatalogCurve,
};
use curvlab::designs::{
    hilbert_rational_design, is_degree4_design_exact, torus_immersion_from_design, torus_immersion_from_rational_design,
    HilbertOptions,
};
use curvlab::exact::format_rational;
use curvlab::{
    curv_dir, fundamental_data, jet2, normal_curvature_global, petrunin_pi, rng, CurvatureOptions, Design,
    GlobalCurvature, ImmersionSpec, Jet2, PolyCurve, Sampler,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{exit, Ctx};

pub const CHECK_IDS: [&str; 12] = [
    "clifford",
    "formula-star",
    "design-torus",
    "hilbert",
    "veronese",
    "tube",
    "gauss-petrunin",
    "fenchel",
    "arm",
    "bow",
    "crofton",
    "bessel-bounds",
];

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only this check (see the list in the README).
    #[arg(long)]
    only: Option<String>,
    /// Directory for `verify.jsonl`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub check_id: String,
    pub expected: Value,
    pub got: Value,
    pub tol: f64,
    pub pass: bool,
}

fn close(id: impl Into<String>, expected: f64, got: f64, tol: f64) -> Record {
    Record { check_id: id.into(), expected: json!(expected), got: json!(got), tol, pass: (got - expected).abs() <= tol }
}

/// `got` must be at least `floor − tol`.
fn at_least(id: impl Into<String>, floor: f64, got: f64, tol: f64) -> Record {
    Record { check_id: id.into(), expected: json!(format!(">= {floor}")), got: json!(got), tol, pass: got >= floor - tol }
}

fn flag(id: impl Into<String>, expected: impl Serialize, got: impl Serialize, pass: bool) -> Record {
    Record { check_id: id.into(), expected: json!(expected), got: json!(got), tol: 0.0, pass }
}

fn global(spec: &ImmersionSpec, points: usize, seed: u64) -> curvlab::Result<GlobalCurvature> {
    let opts = CurvatureOptions { seed, ..Default::default() };
    normal_curvature_global(spec, &Sampler { n_points: points, seed }, &opts)
}

fn clifford(seed: u64) -> curvlab::Result<Vec<Record>> {
    let mut out = Vec::new();
    for n in [2usize, 3, 4] {
        let g = global(&ImmersionSpec::clifford(n), 50, seed)?;
        out.push(close(format!("clifford/N={n}"), (n as f64).sqrt(), g.sup, 1e-6));
        out.push(close(format!("clifford/N={n}/spread"), 0.0, g.per_point_spread, 1e-6));
    }
    Ok(out)
}

/// `(‖x‖_{L4}/‖x‖_{L2})²` with averaged norms over the coordinates.
fn lp_ratio_sq(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let l2 = (x.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let l4 = (x.iter().map(|v| v.powi(4)).sum::<f64>() / n).powf(0.25);
    (l4 / l2).powi(2)
}

fn formula_star(seed: u64) -> curvlab::Result<Vec<Record>> {
    let spec = ImmersionSpec::clifford(5);
    let mut r = rng::rng(seed);
    let fd = fundamental_data(&jet2(&spec, &spec.sample_parameter(&mut r))?)?;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = rng::unit_vector(&mut r, 5);
        worst = worst.max((curv_dir(&fd, x.as_slice())? - lp_ratio_sq(x.as_slice())).abs());
    }
    Ok(vec![close("formula-star/max-error", 0.0, worst, 1e-8)])
}

fn pullback_defect(spec: &ImmersionSpec, points: usize, seed: u64) -> curvlab::Result<f64> {
    let mut r = rng::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let j = jet2(spec, &spec.sample_parameter(&mut r))?;
        let g = j.jac.transpose() * &j.jac;
        worst = worst.max((g - DMatrix::identity(spec.intrinsic_dim(), spec.intrinsic_dim())).abs().max());
    }
    Ok(worst)
}

fn design_torus(seed: u64) -> curvlab::Result<Vec<Record>> {
    let spec = torus_immersion_from_design(&Design::regular_polygon(5)?, 1e-12)?;
    let g = global(&spec, 50, seed)?;
    let target = 1.5f64.sqrt();
    Ok(vec![
        close("design-torus/pentagon/sup", target, g.sup, 1e-6),
        close("design-torus/pentagon/min", target, g.min, 1e-6),
        close("design-torus/pentagon/metric", 0.0, pullback_defect(&spec, 50, seed)?, 1e-9),
    ])
}

fn hilbert(seed: u64) -> curvlab::Result<Vec<Record>> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let h = hilbert_rational_design(n, &HilbertOptions::default())?;
        let c = is_degree4_design_exact(&h.design)?;
        out.push(flag(format!("hilbert/n={n}/exact-residual"), "0", format_rational(&c.residual), c.ok));
        let spec = torus_immersion_from_rational_design(&h.design)?;
        let g = global(&spec, 20, seed)?;
        let nf = n as f64;
        out.push(close(format!("hilbert/n={n}/torus-curv"), (3.0 * nf / (nf + 2.0)).sqrt(), g.sup, 1e-6));
    }
    Ok(out)
}

fn veronese(seed: u64) -> curvlab::Result<Vec<Record>> {
    let mut out = Vec::new();
    for m in [2usize, 3] {
        let mf = m as f64;
        let g = global(&ImmersionSpec::veronese(m), 50, seed)?;
        out.push(close(format!("veronese/m={m}/curv"), (2.0 * mf / (mf + 1.0)).sqrt(), g.sup, 1e-4));
        out.push(close(
            format!("veronese/m={m}/spherical"),
            ((mf - 1.0) / (mf + 1.0)).sqrt(),
            spherical_curvature(g.sup, 1.0)?,
            1e-4,
        ));
        out.push(close(format!("veronese/m={m}/R2-times-curv"), 2.0, veronese_dims(m, 2)?.r_s * g.sup, 1e-3));
    }
    Ok(out)
}

fn tube(seed: u64) -> curvlab::Result<Vec<Record>> {
    let g = global(&ImmersionSpec::tube(2.0 / 3.0, 1, 1, 1.0 / 3.0), 50, seed)?;
    let mut out = vec![close("tube/r=2/3,rho=1/3", 3.0, g.sup, 1e-6)];
    let mut worst: f64 = 0.0;
    for r in [0.5, 0.75, 1.0, 1.25] {
        for frac in [0.2, 0.35, 0.5, 0.65, 0.8] {
            let rho = frac * r;
            let g = global(&ImmersionSpec::tube(r, 1, 1, rho), 20, seed)?;
            worst = worst.max((g.sup - (1.0 / rho).max(1.0 / (r - rho))).abs());
        }
    }
    out.push(close("tube/grid-20/max-error", 0.0, worst, 1e-6));
    Ok(out)
}

fn random_jet(r: &mut rng::SimRng) -> Jet2 {
    let n = r.random_range(2..=4usize);
    let big = n + r.random_range(1..=4usize);
    let mut v = || r.random_range(-1.0..1.0);
    let mut jac = DMatrix::from_fn(big, n, |_, _| v());
    for k in 0..n {
        jac[(k, k)] += 3.0;
    }
    let mut hess = vec![DVector::zeros(big); n * n];
    for i in 0..n {
        for j in 0..=i {
            let h = DVector::from_fn(big, |_, _| v());
            hess[i * n + j] = h.clone();
            hess[j * n + i] = h;
        }
    }
    Jet2 { point: DVector::from_fn(big, |_, _| v()), jac, hess }
}

fn gauss_petrunin(seed: u64) -> curvlab::Result<Vec<Record>> {
    let s3 = fundamental_data(&jet2(&ImmersionSpec::sphere(3, 2.0), &[0.3, 0.4, 0.5])?)?;
    let mut out = vec![close("gauss-petrunin/Sc(S3(2))", 1.5, scalar_curvature_gauss(&s3, 0.0), 1e-6)];
    let mut r = rng::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let fd = fundamental_data(&random_jet(&mut r))?;
        worst = worst.max((scalar_curvature_gauss(&fd, 0.0) - scalar_curvature_petrunin(&fd, 0.0)).abs());
    }
    out.push(close("gauss-petrunin/two-formulas", 0.0, worst, 1e-9));
    let s2 = fundamental_data(&jet2(&ImmersionSpec::sphere(2, 1.0), &[0.7, 0.2])?)?;
    out.push(close("gauss-petrunin/Pi(S2)", 1.0, petrunin_pi(&s2), 1e-9));
    let fd = fundamental_data(&jet2(&ImmersionSpec::clifford(3), &[0.1, 0.2, 0.3])?)?;
    let exact = petrunin_pi(&fd);
    let mc = petrunin_pi_mc(&fd, 200_000, seed)?;
    out.push(close("gauss-petrunin/Pi-monte-carlo-rel", 0.0, (mc - exact).abs() / exact, 0.01));
    Ok(out)
}

fn poly(rows: &[&[f64]]) -> curvlab::Result<PolyCurve> {
    PolyCurve::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), true)
}

fn fenchel(seed: u64) -> curvlab::Result<Vec<Record>> {
    let mut r = rng::rng(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let dim = r.random_range(3..=5usize);
        let k = r.random_range(3..=12usize);
        let pts = (0..k).map(|_| rng::unit_vector(&mut r, dim) * r.random_range(0.2..2.0)).collect();
        worst = worst.min(total_curvature(&PolyCurve::new(pts, true)?, 1e-9)?.total);
    }
    let hexagon: Vec<Vec<f64>> = (0..6).map(|i| {
        let t = TAU * i as f64 / 6.0;
        vec![t.cos(), t.sin(), 0.0, 0.0]
    }).collect();
    let equal = [
        poly(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 1.0, 0.0]])?,
        poly(&[&[0.0, 0.0], &[3.0, 0.0], &[4.0, 2.0], &[1.0, 3.0]])?,
        PolyCurve::from_rows(&hexagon, true)?,
    ];
    let strict = [
        poly(&[&[0.0, 0.0], &[2.0, 0.0], &[1.0, 0.3], &[1.0, 2.0]])?,
        poly(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0]])?,
        poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]])?,
    ];
    let mut wrong = 0;
    for c in &equal {
        wrong += usize::from(!total_curvature(c, 1e-9)?.convex_planar);
    }
    for c in &strict {
        wrong += usize::from(total_curvature(c, 1e-9)?.convex_planar);
    }
    Ok(vec![
        at_least("fenchel/random-1000/min-total", TAU, worst, 1e-9),
        flag("fenchel/equality-detector/misclassified", 0, wrong, wrong == 0),
    ])
}

fn arm(seed: u64) -> curvlab::Result<Vec<Record>> {
    let mut worst = f64::INFINITY;
    let mut bad_hypotheses = 0usize;
    let mut r = rng::rng(seed);
    for i in 0..1000u64 {
        let k = r.random_range(4..=10usize);
        let dim = r.random_range(2..=5usize);
        let (p, q) = random_arm_instance(k, dim, seed.wrapping_add(i))?;
        let rep = arm_check(&q, &p, 1e-9)?;
        bad_hypotheses += usize::from(!rep.hypotheses_ok);
        worst = worst.min(rep.slack);
    }
    let (p, _) = random_arm_instance(7, 3, seed)?;
    let same = arm_check(&p, &p, 1e-9)?;
    Ok(vec![
        at_least("arm/random-1000/min-slack", 0.0, worst, 1e-9),
        flag("arm/random-1000/hypothesis-failures", 0, bad_hypotheses, bad_hypotheses == 0),
        close("arm/Q=P/slack", 0.0, same.slack, 1e-12),
    ])
}

fn bow(seed: u64) -> curvlab::Result<Vec<Record>> {
    let mut r = rng::rng(seed);
    let mut worst = f64::INFINITY;
    let mut curv_failures = 0usize;
    for i in 0..500u64 {
        let radius = r.random_range(0.5..2.0);
        let length = TAU * radius * r.random_range(0.05..1.0);
        let dim = r.random_range(2..=4usize);
        let y = random_bounded_curve(radius, length, 400, dim, seed.wrapping_add(i))?;
        let rep = bow_check(&y, radius, 1e-9)?;
        match rep.chord_ok {
            Some(_) => worst = worst.min(rep.slack),
            None => curv_failures += 1,
        }
    }
    let mut arc_worst: f64 = 0.0;
    for (radius, length) in [(1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (1.0, PI), (2.0, 3.0)] {
        let rep = bow_check(&circular_arc(radius, length, 2001)?, radius, 1e-6)?;
        arc_worst = arc_worst.max(rep.slack.abs());
    }
    Ok(vec![
        at_least("bow/random-500/min-slack", 0.0, worst, 1e-9),
        flag("bow/random-500/curvature-failures", 0, curv_failures, curv_failures == 0),
        close("bow/circular-arcs/max-slack", 0.0, arc_worst, 1e-6),
    ])
}

fn crofton(seed: u64) -> curvlab::Result<Vec<Record>> {
    let c = CatalogCurve::Circle { radius: 1.0 };
    let poly = c.polygon(c.length() / 720.0)?;
    let a = crofton_check(&poly, 10_000, seed)?;
    let b = crofton_check(&poly, 10_000, seed)?;
    Ok(vec![
        close("crofton/circle/rel-err-vs-8pi", 0.0, (a.mc_estimate - 8.0 * PI).abs() / (8.0 * PI), 0.03),
        flag("crofton/circle/deterministic", a.mc_estimate, b.mc_estimate, a.mc_estimate == b.mc_estimate),
    ])
}

fn bessel_bounds() -> curvlab::Result<Vec<Record>> {
    let mut out = vec![
        close("bessel-bounds/j_1/2", PI, bessel_j_zero(0.5)?, 1e-10),
        close("bessel-bounds/j_-1/2", PI / 2.0, bessel_j_zero(-0.5)?, 1e-10),
        close("bessel-bounds/j_0", 2.404826, bessel_j_zero(0.0)?, 1e-6),
    ];
    let a = bracket_a();
    let mut outside = Vec::new();
    for nu in 1..=10 {
        let j = bessel_j_zero(nu as f64)?;
        let (lo, hi) = zero_bracket(nu as f64, a);
        if !(lo < j && j < hi) {
            outside.push(nu);
        }
    }
    out.push(flag("bessel-bounds/bracket-nu-1..10/outside", Vec::<u32>::new(), &outside, outside.is_empty()));
    out.push(at_least("bessel-bounds/lower_focal(8,1)", 2.5, lower_focal(8, 1.0)?, 0.0));
    let rep = report(1, 16)?;
    out.push(flag("bessel-bounds/report-1..16/violations", 0, rep.violations.len(), rep.ok()));
    Ok(out)
}

pub fn run_check(id: &str, seed: u64) -> curvlab::Result<Vec<Record>> {
    match id {
        "clifford" => clifford(seed),
        "formula-star" => formula_star(seed),
        "design-torus" => design_torus(seed),
        "hilbert" => hilbert(seed),
        "veronese" => veronese(seed),
        "tube" => tube(seed),
        "gauss-petrunin" => gauss_petrunin(seed),
        "fenchel" => fenchel(seed),
        "arm" => arm(seed),
        "bow" => bow(seed),
        "crofton" => crofton(seed),
        "bessel-bounds" => bessel_bounds(),
        other => Err(curvlab::Error::InvalidParameter(format!("unknown check {other:?}"))),
    }
}

pub fn run(ctx: &Ctx, a: &VerifyArgs) -> anyhow::Result<u8> {
    let ids: Vec<&str> = match &a.only {
        Some(id) if CHECK_IDS.contains(&id.as_str()) => vec![id.as_str()],
        Some(id) => bail!("unknown check {id:?}; known checks: {}", CHECK_IDS.join(", ")),
        None => CHECK_IDS.to_vec(),
    };
    let mut lines = String::new();
    let mut all_pass = true;
    for id in ids {
        let records = match run_check(id, ctx.seed) {
            Ok(r) => r,
            Err(e) => vec![flag(id, "no error", e.to_string(), false)],
        };
        for r in records {
            all_pass &= r.pass;
            let line = serde_json::to_string(&r)?;
            println!("{line}");
            lines.push_str(&line);
            lines.push('\n');
        }
    }
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("verify.jsonl"), lines)?;
    }
    Ok(if all_pass { exit::OK } else { exit::CHECK_FAILED })
}
