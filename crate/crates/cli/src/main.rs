mod bounds;
mod curv;
mod curve;
mod design;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{exit, Ctx};

#[derive(Debug, Parser)]
#[command(name = "curvlab", version, about = "Normal curvature of immersions, spherical designs, curve inequalities and curvature bounds")]
struct Cli {
    /// Seed for every randomized step (decimal or 0x-hex).
    #[arg(long, global = true, env = "CURVLAB_SEED", default_value = "0xC0FFEE", value_parser = output::parse_seed)]
    seed: u64,
    /// Leave out the `meta` block (version, seed, timestamp) from JSON output.
    #[arg(long, global = true)]
    no_meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal curvature and related invariants of an immersion spec.
    Curv(curv::CurvArgs),
    /// Build, verify and use degree-4 spherical designs.
    #[command(subcommand)]
    Design(design::DesignCmd),
    /// Fenchel, arm lemma, bow inequality and Crofton checks on curves.
    #[command(subcommand)]
    Curve(curve::CurveCmd),
    /// Tables of lower and upper curvature bounds.
    #[command(subcommand)]
    Bounds(bounds::BoundsCmd),
    /// Run the reproduction checks and print one JSON line per check.
    VerifyPaper(verify::VerifyArgs),
}

/// Maps library errors onto the documented exit codes.
fn exit_code(err: &anyhow::Error) -> u8 {
    use curvlab::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::NoConvergence { .. }) => exit::NON_CONVERGED,
        Some(E::Infeasible | E::HeightExhausted { .. }) => exit::INFEASIBLE,
        Some(E::NotADesign { .. }) => exit::CHECK_FAILED,
        _ => exit::PARSE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx { seed: cli.seed, no_meta: cli.no_meta };
    let result = match cli.command {
        Command::Curv(a) => curv::run(&ctx, &a),
        Command::Design(c) => design::run(&ctx, &c),
        Command::Curve(c) => curve::run(&ctx, &c),
        Command::Bounds(c) => bounds::run(&ctx, &c),
        Command::VerifyPaper(a) => verify::run(&ctx, &a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
