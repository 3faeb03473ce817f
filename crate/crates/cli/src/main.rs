use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aaad::harness::{
    contact_width, converge, l1_error, restrict_grid, run, ConfigError, Restriction, RunConfig, RunError, SolutionFile,
};
use aaad::problems::{build_problem, PROBLEM_NAMES};
use clap::{Parser, Subcommand, ValueEnum};

/// Central-upwind and A-WENO Euler solvers with adaptive anti-diffusion.
#[derive(Debug, Parser)]
#[command(name = "aaad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one configuration and write its snapshots.
    Solve {
        config: PathBuf,
        /// `--key value` or `--key=value` overrides of configuration keys.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
        overrides: Vec<String>,
    },
    /// Run a mesh sequence and print errors and observed rates.
    Converge {
        config: PathBuf,
        /// Cells in x, coarse to fine.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<usize>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
        overrides: Vec<String>,
    },
    /// Compare two solution files.
    Compare {
        run_a: PathBuf,
        run_b: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::L1)]
        metric: Metric,
        /// How the finer solution is restricted onto the coarser one.
        #[arg(long, value_enum, default_value_t = RestrictionArg::Average)]
        restriction: RestrictionArg,
        /// Plateau densities either side of the contact (contact-width).
        #[arg(long, allow_hyphen_values = true)]
        rho_left: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        rho_right: Option<f64>,
    },
    /// List the registered problems.
    ListProblems,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Metric {
    L1,
    ContactWidth,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RestrictionArg {
    Average,
    Point,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Solver(String),
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        if e.is_solver_failure() {
            Failure::Solver(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn override_pairs(args: &[String]) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let key = a.strip_prefix("--").ok_or_else(|| Failure::Usage(format!("expected `--key value`, found `{a}`")))?;
        match key.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => {
                let v = it.next().ok_or_else(|| Failure::Usage(format!("missing value for `--{key}`")))?;
                out.push((key.to_string(), v.clone()));
            }
        }
    }
    Ok(out)
}

fn load(config: &Path, overrides: &[String]) -> Result<RunConfig, Failure> {
    let pairs = override_pairs(overrides)?;
    let cfg = RunConfig::from_file(config)?.with_overrides(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    cfg.validate()?;
    Ok(cfg)
}

fn solve(config: &Path, overrides: &[String]) -> Result<(), Failure> {
    let cfg = load(config, overrides)?;
    let s = run(&cfg)?;
    println!(
        "{} steps, t = {}, min rho = {:.6e}, min p = {:.6e}, {:.2} s",
        s.stats.steps, s.stats.t, s.stats.min_rho, s.stats.min_p, s.stats.wall_seconds
    );
    if let Some(l1) = s.reference_l1 {
        println!("L1 density difference to reference: {l1:.6e}");
    }
    for f in &s.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn converge_cmd(config: &Path, meshes: &[usize], overrides: &[String]) -> Result<(), Failure> {
    let cfg = load(config, overrides)?;
    let report = converge(&cfg, meshes)?;
    println!("{} / {}", cfg.problem, cfg.scheme);
    print!("{}", report.to_table());
    Ok(())
}

fn read(path: &Path) -> Result<SolutionFile, Failure> {
    SolutionFile::read(path).map_err(|e| Failure::Usage(e.to_string()))
}

fn compare(
    a: &Path,
    b: &Path,
    metric: Metric,
    restriction: RestrictionArg,
    rho_left: Option<f64>,
    rho_right: Option<f64>,
) -> Result<(), Failure> {
    let (sa, sb) = (read(a)?, read(b)?);
    match metric {
        Metric::L1 => {
            let (fine, coarse) = if sa.density().len() >= sb.density().len() { (&sa, &sb) } else { (&sb, &sa) };
            let kind = match restriction {
                RestrictionArg::Average => Restriction::CellAverage,
                RestrictionArg::Point => Restriction::PointValue,
            };
            let r = restrict_grid(fine.density(), fine.shape(), coarse.shape(), kind, (false, false))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let d = l1_error(&r, coarse.density(), coarse.cell_volume()).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{d:.6e}");
        }
        Metric::ContactWidth => {
            let (Some(l), Some(r)) = (rho_left, rho_right) else {
                return Err(Failure::Usage("contact-width needs --rho-left and --rho-right".into()));
            };
            for (path, s) in [(a, &sa), (b, &sb)] {
                if s.shape().1 != 1 {
                    return Err(Failure::Usage(format!("{}: contact width needs a 1-D profile", path.display())));
                }
                let w =
                    contact_width(s.density(), l, r).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                println!("{}\t{w}", path.display());
            }
        }
    }
    Ok(())
}

fn list_problems() {
    for name in PROBLEM_NAMES {
        let p = build_problem(name).expect("registered");
        println!("{name:<18} {}-D  t = {:<6} {}", p.dim, p.t_final, p.title);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match &cli.command {
        Command::Solve { config, overrides } => solve(config, overrides),
        Command::Converge { config, meshes, overrides } => converge_cmd(config, meshes, overrides),
        Command::Compare { run_a, run_b, metric, restriction, rho_left, rho_right } => {
            compare(run_a, run_b, *metric, *restriction, *rho_left, *rho_right)
        }
        Command::ListProblems => {
            list_problems();
            Ok(())
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("solver failure: {m}");
            ExitCode::from(2)
        }
    }
}
