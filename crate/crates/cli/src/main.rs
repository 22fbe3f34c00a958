mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_grid, parse_range, Resolved};

#[derive(Parser, Debug)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum-walk coin games: payoffs, regions, persistence and designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed for the oracle suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV/SVG output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Half-width of the tie band around Ω.
    #[arg(long, global = true, default_value_t = qwalk::payoff::DEFAULT_TIE_TOL)]
    tie_tol: f64,
    /// Region grid as <nt>x<np>.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,

    /// Preset family (two-step, three-step, designed-two, designed-four).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// mu, delta, zero or spectral:<file>.
    #[arg(long, global = true)]
    observable: Option<String>,
    /// Target payoff ω.
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Home state (preset name or state text); repeatable.
    #[arg(long = "home", global = true, allow_hyphen_values = true)]
    homes: Vec<String>,
    /// Cycle count n.
    #[arg(long, global = true)]
    cycles: Option<usize>,
    /// Cycle range a..b.
    #[arg(long, global = true, value_parser = parse_range)]
    n_range: Option<[usize; 2]>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Position histograms of walk outputs.
    Run,
    /// Reduced coin operators, eigenpairs and Ω per walk.
    Analyze,
    /// Win/lose labels over the Bloch sphere.
    Regions,
    /// Payoffs and Parrondo flags over a cycle range.
    Persist,
    /// Daisy-chain step design and its Parrondo cap.
    Design,
    /// Randomized property suites.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

pub enum Outcome {
    Ok,
    PropertyFailure,
}

fn resolve(g: &Global) -> anyhow::Result<Resolved> {
    let mut r = Resolved::load(g.config.as_deref())?;
    let c = &mut r.cfg;
    if let Some(p) = &g.preset {
        c.family = Some(config::FamilyConfig {
            preset: Some(p.clone()),
            steps: None,
        });
        if p.starts_with("designed-") && c.design.is_none() {
            c.design = Some(config::DesignConfig {
                preset: Some(p.clone()),
                target: None,
                intermediates: vec![],
                strides: vec![],
            });
        }
    }
    if g.observable.is_some() {
        c.observable.clone_from(&g.observable);
    }
    if g.omega.is_some() {
        c.omega = g.omega;
    }
    if !g.homes.is_empty() {
        c.homes = Some(g.homes.clone());
    }
    if g.cycles.is_some() {
        c.cycles = g.cycles;
    }
    if g.n_range.is_some() {
        c.n_range = g.n_range;
    }
    if g.grid.is_some() {
        c.grid = g.grid;
    }
    Ok(r)
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    let r = resolve(g)?;
    let ctx = commands::Ctx {
        r,
        out: g.out.clone(),
        tie_tol: g.tie_tol,
    };
    match &cli.command {
        Command::Run => commands::run(&ctx),
        Command::Analyze => commands::analyze(&ctx),
        Command::Regions => commands::regions(&ctx),
        Command::Persist => commands::persist(&ctx),
        Command::Design => commands::design(&ctx),
        Command::Oracle { trials } => {
            commands::oracle(&ctx, g.seed.unwrap_or(qwalk::oracle::DEFAULT_SEED), *trials)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::PropertyFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
