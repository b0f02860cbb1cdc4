use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halfspace_heat::grid::SampledField;
use halfspace_heat::harness::{self, Experiment, Family, Format, Overrides};
use halfspace_heat::solver::stack_io::write_stack;
use halfspace_heat::solver::{solve_dirichlet, solve_neumann};
use halfspace_heat::{Error, Result};

#[derive(Parser)]
#[command(name = "halfheat", version, about = "Half-space heat solves and norm-estimate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure one of the two-sided estimates over random trials.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Fit exponential decay of the annulus-localized kernels.
    Decay(RunArgs),
    /// Solve once and dump boundary data and the slice stack to `--out`.
    Solve {
        #[command(flatten)]
        args: RunArgs,
        /// Boundary condition of the solve.
        #[arg(long, value_enum, default_value = "dirichlet")]
        bc: Bc,
    },
}

#[derive(Subcommand)]
enum Verify {
    Regularity(RunArgs),
    Trace(RunArgs),
    Corollary {
        #[arg(long, value_enum)]
        branch: Branch,
        #[command(flatten)]
        args: RunArgs,
    },
    Neumann(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Sobolev,
    Bessel,
    Besov,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|e| format!("{e}")),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, n: usize) -> std::result::Result<Vec<T>, String> {
    let out: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| format!("bad entry '{x}'")))
        .collect::<std::result::Result<_, _>>()?;
    if n > 0 && out.len() != n {
        return Err(format!("expected {n} comma-separated values"));
    }
    Ok(out)
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Flat TOML file with the same keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, value_parser = parse_real)]
    s: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    p: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    q: Option<f64>,
    /// Tangential and normal derivative orders, e.g. `0,1`.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<i64>,
    /// `NX,NT`.
    #[arg(long)]
    grid: Option<String>,
    /// `LX,LT`.
    #[arg(long = "box")]
    box_: Option<String>,
    /// `XMIN,XMAX,PPO`.
    #[arg(long)]
    quad: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

impl RunArgs {
    fn overrides(&self, experiment: Experiment) -> Result<Overrides> {
        let cfg = |e: String| Error::Config(e);
        let mut o = Overrides {
            experiment: Some(experiment),
            d: self.d,
            m: self.m,
            s: self.s,
            p: self.p,
            q: self.q,
            beta: self.beta,
            trials: self.trials,
            seed: self.seed,
            ..Default::default()
        };
        if let Some(a) = &self.alpha {
            o.alpha = Some(parse_list(a, 0).map_err(cfg)?);
        }
        if let Some(g) = &self.grid {
            let v: Vec<usize> = parse_list(g, 2).map_err(cfg)?;
            (o.n_x, o.n_t) = (Some(v[0]), Some(v[1]));
        }
        if let Some(b) = &self.box_ {
            let v: Vec<f64> = parse_list(b, 2).map_err(cfg)?;
            (o.box_x, o.box_t) = (Some(v[0]), Some(v[1]));
        }
        if let Some(q) = &self.quad {
            let v: Vec<&str> = q.split(',').collect();
            if v.len() != 3 {
                return Err(cfg("--quad expects XMIN,XMAX,PPO".into()));
            }
            o.x_min = Some(parse_real(v[0]).map_err(cfg)?);
            o.x_max = Some(parse_real(v[1]).map_err(cfg)?);
            o.ppo = Some(v[2].trim().parse().map_err(|_| cfg("bad PPO".into()))?);
        }
        if let Some(f) = &self.family {
            o.family = Some(f.parse::<Family>()?);
        }
        let base = match &self.config {
            Some(path) => Overrides::from_toml_file(path)?,
            None => Overrides::default(),
        };
        Ok(base.merge(&o))
    }

    fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().write_all(bytes)?,
        }
        Ok(())
    }
}

fn run_experiment(args: &RunArgs, experiment: Experiment) -> Result<()> {
    let format: Format = args.format.parse()?;
    let cfg = args.overrides(experiment)?.resolve()?;
    let report = harness::run(&cfg)?;
    args.write(&harness::render(&report, format)?)
}

fn solve(args: &RunArgs, bc: Bc) -> Result<()> {
    let dir = args
        .out
        .as_ref()
        .ok_or_else(|| Error::Config("solve needs --out DIR".into()))?;
    let cfg = args.overrides(Experiment::Regularity)?.resolve()?;
    let t = harness::trial_data(&cfg, 0)?;
    let stack = match bc {
        Bc::Dirichlet => solve_dirichlet(&t.data, &t.quad)?,
        Bc::Neumann => solve_neumann(&t.data, &t.quad)?,
    };
    std::fs::create_dir_all(dir)?;
    SampledField::write_binary(&t.data, dir.join("boundary.bin"))?;
    write_stack(&stack, dir.join("stack"))?;
    println!("wrote {} slices to {}", stack.len(), dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { which } => match which {
            Verify::Regularity(a) => run_experiment(a, Experiment::Regularity),
            Verify::Trace(a) => run_experiment(a, Experiment::Trace),
            Verify::Neumann(a) => run_experiment(a, Experiment::NeumannVariant),
            Verify::Corollary { branch, args } => run_experiment(
                args,
                match branch {
                    Branch::Sobolev => Experiment::CorollarySobolev,
                    Branch::Bessel => Experiment::CorollaryBessel,
                    Branch::Besov => Experiment::CorollaryBesov,
                },
            ),
        },
        Command::Decay(a) => run_experiment(a, Experiment::Decay),
        Command::Solve { args, bc } => solve(args, *bc),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("halfheat: {e}");
            ExitCode::FAILURE
        }
    }
}
