mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use commands::Failure;
use config::ProblemConfig;
use std::path::PathBuf;
use std::process::ExitCode;

/// Solvers for a y'' + b D^{3/2} y + c y = f(t) with Caputo initial data.
#[derive(Parser)]
#[command(name = "bagley-torvik", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one method over the grid and write t,y,yc,yf as CSV.
    Solve(ProblemArgs),
    /// Evaluate several methods and report deviations from the closed form.
    Compare(ProblemArgs),
    /// Time the closed form against the Green-function series (y0 = v0 = 1 by default).
    Bench {
        #[command(flatten)]
        args: ProblemArgs,
        /// Run the besselj0, constant and sin forces in turn.
        #[arg(long)]
        all: bool,
    },
    /// Print roots, residuals and weights of a s^4 + b s^3 + c as JSON.
    Roots(ProblemArgs),
    /// Write the closed form next to its small- and large-time approximations.
    Asymptotics(ProblemArgs),
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    y0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v0: Option<f64>,
    /// zero | constant:C | power:C0,a0[,C1,a1...] | sin:A,omega | pulse:A,toff | besselj0:A
    #[arg(long, allow_hyphen_values = true)]
    force: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid points; t_min itself is excluded.
    #[arg(long)]
    n: Option<usize>,
    /// Method name, or a comma-separated list for compare.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// as-printed | caputo-corrected
    #[arg(long)]
    fd_variant: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved config as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

impl ProblemArgs {
    fn config(&self, base: ProblemConfig) -> Result<ProblemConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => ProblemConfig::load_over(&base, path).map_err(Failure::Config)?,
            None => base,
        };
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.a, self.a);
        set(&mut cfg.b, self.b);
        set(&mut cfg.c, self.c);
        set(&mut cfg.y0, self.y0);
        set(&mut cfg.v0, self.v0);
        set(&mut cfg.grid.t_min, self.t_min);
        set(&mut cfg.grid.t_max, self.t_max);
        if let Some(n) = self.n {
            cfg.grid.n_points = n;
        }
        if let Some(f) = &self.force {
            cfg.force = f.clone();
        }
        if !self.method.is_empty() {
            cfg.methods = self.method.clone();
        }
        if let Some(v) = &self.fd_variant {
            cfg.fd_variant = v.clone();
        }
        if let Some(n) = self.threads {
            cfg.threads = n;
        }
        Ok(cfg)
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    let (args, base) = match &command {
        Command::Bench { args, .. } => (args, ProblemConfig { y0: 1.0, v0: 1.0, ..Default::default() }),
        Command::Solve(a) | Command::Compare(a) | Command::Roots(a) | Command::Asymptotics(a) => {
            (a, ProblemConfig::default())
        }
    };
    let cfg = args.config(base)?;
    let out = args.out.as_deref();
    if args.dump_config {
        return output::emit(out, &(cfg.to_json() + "\n")).map_err(Failure::Config);
    }
    match command {
        Command::Solve(_) => commands::solve(&cfg, out),
        Command::Compare(_) => commands::compare(&cfg, out),
        Command::Bench { all, .. } => commands::bench(&cfg, all, out),
        Command::Roots(_) => commands::roots(&cfg, out),
        Command::Asymptotics(_) => commands::asymptotics(&cfg, out),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
