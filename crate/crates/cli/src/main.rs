//! `pbbs`: evolve periodic box-ball states, inspect their scattering data,
//! solve initial value problems through the theta formula, emit softened
//! field grids, and run the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod text;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbbs_core::scattering::{canonicalize, direct_scattering, evolve_angle};
use pbbs_core::tau::{state_from_angle, write_soften_csv};
use pbbs_core::verify::{run_suite, Suite, VerifyConfig};

use crate::text::{format_state, parse_angle, parse_schedule, parse_state};

#[derive(Parser)]
#[command(
    name = "pbbs",
    about = "The periodic box-ball system: carrier dynamics, inverse scattering, and theta-function solutions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply T_l to a state t times by direct carrier passes.
    Evolve {
        /// State, compact form allowed (e.g. "1122.1^6").
        #[arg(long)]
        state: String,
        /// Carrier capacity l of the evolution T_l.
        #[arg(long)]
        l: u32,
        /// Number of applications.
        #[arg(long, default_value_t = 1)]
        t: u64,
    },
    /// Print the action-angle data of a state.
    Scatter {
        #[arg(long)]
        state: String,
    },
    /// Solve an initial value problem through the theta formula.
    Solve(SolveArgs),
    /// Write the softened field u(k, t) as CSV.
    Soften {
        /// Angle specification "mu=2,6;L=170;I=0,0".
        #[arg(long)]
        angle: String,
        /// Softening parameter.
        #[arg(long)]
        eps: f64,
        /// Grid runs over 0 <= t <= tmax.
        #[arg(long)]
        tmax: i64,
        /// Output CSV path.
        #[arg(long)]
        out: String,
    },
    /// Run verification suites.
    Verify {
        /// One of crystal, kkr, theta, scattering, tau, bethe, all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Exhaustive sweeps run up to this system size.
        #[arg(long, default_value_t = 12)]
        max_l: usize,
        /// Seed for randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SolveSource {
    /// Initial state, compact form allowed.
    #[arg(long)]
    state: Option<String>,
    /// Angle specification "mu=...;L=...;I=...".
    #[arg(long)]
    angle: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SolveSource,
    /// Evolution schedule "l:t,l:t,..."; l may be "inf".
    #[arg(long, default_value = "")]
    schedule: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Evolve { state, l, t } => {
            let state = parse_state(&state)?;
            let evolved = state.evolve(l, t)?;
            println!("{}", format_state(&evolved));
        }
        Command::Scatter { state } => {
            let state = parse_state(&state)?;
            let angle = direct_scattering(&state)?;
            print!("{}", render_scatter(&angle)?);
        }
        Command::Solve(args) => {
            let schedule = parse_schedule(&args.schedule)?;
            let angle = match (&args.source.state, &args.source.angle) {
                (Some(state), None) => direct_scattering(&parse_state(state)?)?,
                (None, Some(spec)) => parse_angle(spec)?,
                _ => unreachable!("clap enforces exactly one source"),
            };
            let mut angle = angle;
            for &(l, t) in &schedule {
                angle = evolve_angle(&angle, l, t);
            }
            let solved = state_from_angle(&angle)?;
            println!("{}", format_state(&solved));
        }
        Command::Soften { angle, eps, tmax, out } => {
            let angle = parse_angle(&angle)?;
            anyhow::ensure!(eps > 0.0, "eps must be positive");
            anyhow::ensure!(tmax >= 0, "tmax must be nonnegative");
            let file = File::create(&out)?;
            let mut writer = BufWriter::new(file);
            write_soften_csv(&angle, eps, tmax, &mut writer)?;
            writer.flush()?;
            println!(
                "wrote {} x {} grid to {}",
                angle.system_size(),
                tmax + 1,
                out
            );
        }
        Command::Verify { suite, max_l, seed } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::all().to_vec()
            } else {
                vec![suite.parse()?]
            };
            let cfg = VerifyConfig { max_system_size: max_l, seed };
            let mut all_passed = true;
            for suite in suites {
                let report = run_suite(suite, &cfg);
                print!("{}", report.render());
                all_passed &= report.passed();
            }
            if !all_passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The scattering report: mu, L, I, vacancies, A, det A.
fn render_scatter(angle: &pbbs_core::ActionAngle) -> anyhow::Result<String> {
    let matrix = angle.matrix();
    let mut out = String::new();
    let join = |v: &mut String, items: &mut dyn Iterator<Item = String>| {
        let mut first = true;
        for item in items {
            if !first {
                v.push(' ');
            }
            v.push_str(&item);
            first = false;
        }
    };
    out.push_str("mu =");
    if !angle.parts().is_empty() {
        out.push(' ');
        join(&mut out, &mut angle.parts().iter().map(|p| p.to_string()));
    }
    writeln!(out)?;
    writeln!(out, "L = {}", angle.system_size())?;
    out.push_str("I =");
    if !angle.angle().is_empty() {
        out.push(' ');
        join(&mut out, &mut angle.angle().iter().map(|i| i.to_string()));
    }
    writeln!(out)?;
    out.push_str("p =");
    if !matrix.vacancies().is_empty() {
        out.push(' ');
        join(&mut out, &mut matrix.vacancies().iter().map(|p| p.to_string()));
    }
    writeln!(out)?;
    writeln!(out, "A =")?;
    for row in matrix.rows() {
        let mut line = String::new();
        join(&mut line, &mut row.iter().map(|v| v.to_string()));
        writeln!(out, "{line}")?;
    }
    writeln!(out, "det A = {}", matrix.det())?;
    let (d, rc, _) = canonicalize(angle)?;
    writeln!(out, "d = {d}")?;
    out.push_str("rigging =");
    if !rc.riggings().is_empty() {
        out.push(' ');
        join(&mut out, &mut rc.riggings().iter().map(|j| j.to_string()));
    }
    writeln!(out)?;
    Ok(out)
}
