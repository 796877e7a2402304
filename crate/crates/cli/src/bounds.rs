use std::path::PathBuf;

use clap::Subcommand;

use crate::output::{emit, exit, Ctx, Format};

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// All lower and upper bounds for n in a range, with the consistency check.
    Report {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(ctx: &Ctx, cmd: &BoundsCmd) -> anyhow::Result<u8> {
    let BoundsCmd::Report { n_min, n_max, format, out } = cmd;
    let report = curvlab::bounds::report(*n_min, *n_max)?;
    let text = match format {
        Format::Csv => report.to_csv_string()?,
        Format::Json => ctx.json_text(serde_json::to_value(&report)?),
    };
    emit(&text, out.as_deref())?;
    for v in &report.violations {
        eprintln!("violation: {} exceeds {}", v.lower, v.upper);
    }
    for c in report.r2_checks.iter().filter(|c| !c.ok) {
        eprintln!("violation: n={} R2 * curv = {} instead of 2", c.n, c.product);
    }
    Ok(if report.ok() { exit::OK } else { exit::CHECK_FAILED })
}
