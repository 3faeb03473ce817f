//! Running a configured problem: evolution, snapshots, output files and
//! convergence studies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::{ConfigError, RunConfig};
use super::metrics::{l1_error, restrict_grid, ConvergenceReport, MetricError, Restriction};
use super::output::{write_csv, write_grid, write_vtk, GridData, OutputError, Profile1d, SolutionFile};
use crate::euler::{Direction, Equations, Euler1d, Euler2d, PrimitiveState, State};
use crate::march::{max_stable_dt, GridSpec, MarchError, Scheme, SchemeConfig, Simulation};
use crate::problems::{build_problem, ProblemSpec, UnknownProblem};
use crate::reconstruct::LimiterConfig;

/// Solution at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub prims: Vec<PrimitiveState>,
}

impl Snapshot {
    pub fn density(&self) -> Vec<f64> {
        self.prims.iter().map(|w| w.rho).collect()
    }
}

/// Statistics gathered while marching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub t: f64,
    pub wall_seconds: f64,
    /// Minima over all completed steps, including the initial state.
    pub min_rho: f64,
    pub min_p: f64,
    /// Interfaces evaluated with the first-order positivity fallback.
    pub fallback_faces: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub problem: ProblemSpec,
    pub scheme: Scheme,
    pub c: f64,
    pub grid: GridSpec,
    /// The time-step cap constant actually used, if any.
    pub dt_cap_k: Option<f64>,
    /// Output times in increasing order; the last is the final time.
    pub snapshots: Vec<Snapshot>,
    pub stats: RunStats,
}

impl RunOutcome {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("at least the final snapshot")
    }
}

/// Solver failure with the statistics up to the failing step.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverFailure {
    pub error: MarchError,
    pub stats: RunStats,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    UnknownProblem(#[from] UnknownProblem),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver failed after {} steps: {}", .0.stats.steps, .0.error)]
    Solver(Box<SolverFailure>),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

impl RunError {
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, RunError::Solver(_))
    }
}

/// Everything a run needs once defaults are resolved.
#[derive(Debug, Clone)]
struct Plan {
    problem: ProblemSpec,
    grid: GridSpec,
    scfg: SchemeConfig,
    times: Vec<f64>,
    /// Derive the cap constant from the initial state.
    cap_from_initial: bool,
}

fn plan(cfg: &RunConfig) -> Result<Plan, RunError> {
    cfg.validate()?;
    let problem = build_problem(&cfg.problem)?;
    let scheme = cfg.scheme;
    let (dnx, dny) = problem.default_mesh(scheme);
    let nx = cfg.nx.unwrap_or(dnx);
    let ny = if problem.dim == 1 {
        1
    } else {
        cfg.ny.unwrap_or_else(|| match cfg.nx {
            Some(nx) => (nx * dny).div_ceil(dnx),
            None => dny,
        })
    };
    if nx < 2 || ny < 1 {
        return Err(
            ConfigError::BadValue { key: "nx".into(), value: nx.to_string(), reason: "mesh too small".into() }.into()
        );
    }
    let grid = problem.grid(nx, ny, scheme.ghost());
    let mut scfg = SchemeConfig::new(scheme, cfg.c.unwrap_or_else(|| problem.default_c(scheme)));
    scfg.limiter = LimiterConfig::new(cfg.theta).ok_or_else(|| ConfigError::BadValue {
        key: "theta".into(),
        value: cfg.theta.to_string(),
        reason: "must lie in [1, 2]".into(),
    })?;
    scfg.cfl = cfg.cfl;
    scfg.eps0 = cfg.eps0;
    scfg.positivity_fallback = cfg.positivity_fallback;
    let capped = cfg.accuracy_mode && scheme.order() == 5;
    scfg.dt_cap_k = if capped { cfg.dt_cap_k } else { None };

    let t_final = cfg.t_final_override.unwrap_or(problem.t_final);
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(ConfigError::BadValue {
            key: "t_final_override".into(),
            value: t_final.to_string(),
            reason: "must be a non-negative time".into(),
        }
        .into());
    }
    let mut times: Vec<f64> = cfg
        .snapshots
        .clone()
        .unwrap_or_else(|| problem.snapshots.to_vec())
        .into_iter()
        .filter(|&t| t > 0.0 && t < t_final)
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    times.push(t_final);
    Ok(Plan { problem, grid, scfg, times, cap_from_initial: capped && cfg.dt_cap_k.is_none() })
}

fn min_state<const N: usize, E: Equations<N>>(eq: &E, cells: &[State<N>]) -> (f64, f64) {
    cells.iter().fold((f64::INFINITY, f64::INFINITY), |(r, p), u| {
        // cells are validated by the integrator; a failure here cannot occur
        let w = eq.primitive(u).unwrap_or(PrimitiveState { rho: f64::NAN, u: 0.0, v: 0.0, p: f64::NAN });
        (r.min(w.rho), p.min(w.p))
    })
}

fn primitives<const N: usize, E: Equations<N>>(eq: &E, cells: &[State<N>]) -> Vec<PrimitiveState> {
    cells.iter().map(|u| eq.primitive(u).expect("validated state")).collect()
}

/// Time-step cap constant that makes the cap equal the CFL step of the
/// initial state on `grid`.
fn binding_k<const N: usize, E: Equations<N>>(
    eq: &E,
    cells: &[State<N>],
    grid: &GridSpec,
    scfg: &SchemeConfig,
) -> Result<f64, (usize, crate::euler::StateError)> {
    let uncapped = SchemeConfig { dt_cap_k: None, ..*scfg };
    let dt = max_stable_dt(eq, cells, grid, &uncapped)?;
    let h = if grid.two_d { grid.dx().min(grid.dy()) } else { grid.dx() };
    Ok(dt / h.powf(5.0 / 3.0))
}

fn initial_failure(grid: &GridSpec, k: usize, source: crate::euler::StateError) -> RunError {
    RunError::Solver(Box::new(SolverFailure {
        error: MarchError::InvalidState {
            i: (k % grid.nx) as isize,
            j: (k / grid.nx) as isize,
            stage: 0,
            t: 0.0,
            source,
        },
        stats: RunStats { steps: 0, t: 0.0, wall_seconds: 0.0, min_rho: f64::NAN, min_p: f64::NAN, fallback_faces: 0 },
    }))
}

fn evolve<const N: usize, E: Equations<N>>(eq: E, plan: &Plan) -> Result<RunOutcome, RunError> {
    let start = Instant::now();
    let p = &plan.problem;
    let cells: Vec<State<N>> = p.initial_primitives(&plan.grid).iter().map(|w| eq.conserved(w)).collect();
    let mut scfg = plan.scfg;
    if plan.cap_from_initial {
        let k = binding_k(&eq, &cells, &plan.grid, &scfg).map_err(|(k, e)| initial_failure(&plan.grid, k, e))?;
        scfg.dt_cap_k = Some(k);
    }
    let (mut min_rho, mut min_p) = min_state(&eq, &cells);
    let mut sim = Simulation::new(eq, plan.grid, p.bcs, scfg, p.source, cells);
    let mut snapshots = Vec::with_capacity(plan.times.len());
    for &t in &plan.times {
        let res = sim.advance_to(t, |s| {
            let (r, q) = min_state(&s.eq, s.cells());
            min_rho = min_rho.min(r);
            min_p = min_p.min(q);
        });
        if let Err(error) = res {
            let stats = RunStats {
                steps: sim.steps,
                t: sim.t,
                wall_seconds: start.elapsed().as_secs_f64(),
                min_rho,
                min_p,
                fallback_faces: sim.fallback_faces,
            };
            return Err(RunError::Solver(Box::new(SolverFailure { error, stats })));
        }
        snapshots.push(Snapshot { t, prims: primitives(&sim.eq, sim.cells()) });
    }
    Ok(RunOutcome {
        problem: *p,
        scheme: scfg.scheme,
        c: scfg.c_constant,
        grid: plan.grid,
        dt_cap_k: scfg.dt_cap_k,
        snapshots,
        stats: RunStats {
            steps: sim.steps,
            t: sim.t,
            wall_seconds: start.elapsed().as_secs_f64(),
            min_rho,
            min_p,
            fallback_faces: sim.fallback_faces,
        },
    })
}

/// Evolve the configured problem in memory.
pub fn simulate(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let plan = plan(cfg)?;
    let gas = plan.problem.gas();
    if plan.problem.dim == 1 {
        evolve(Euler1d::new(gas), &plan)
    } else {
        evolve(Euler2d::new(gas), &plan)
    }
}

/// The fifth-order time-step cap constant that binds exactly on the
/// configured mesh for the problem's initial data.
pub fn binding_cap_constant(cfg: &RunConfig) -> Result<f64, RunError> {
    let plan = plan(cfg)?;
    let p = &plan.problem;
    let prims = p.initial_primitives(&plan.grid);
    let gas = p.gas();
    let res = if p.dim == 1 {
        let eq = Euler1d::new(gas);
        let cells: Vec<State<3>> = prims.iter().map(|w| eq.conserved(w)).collect();
        binding_k(&eq, &cells, &plan.grid, &plan.scfg)
    } else {
        let eq = Euler2d::new(gas);
        let cells: Vec<State<4>> = prims.iter().map(|w| eq.conserved(w)).collect();
        binding_k(&eq, &cells, &plan.grid, &plan.scfg)
    };
    res.map_err(|(k, e)| initial_failure(&plan.grid, k, e))
}

/// Files written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub stats: RunStats,
    /// L1 density difference against the configured reference solution.
    pub reference_l1: Option<f64>,
}

fn file_stem(o: &RunOutcome) -> String {
    if o.grid.two_d {
        format!("{}_{}_{}x{}", o.problem.name, o.scheme, o.grid.nx, o.grid.ny)
    } else {
        format!("{}_{}_{}", o.problem.name, o.scheme, o.grid.nx)
    }
}

fn write_snapshot(cfg: &RunConfig, o: &RunOutcome, s: &Snapshot, dir: &Path) -> Result<Vec<PathBuf>, OutputError> {
    let stem = format!("{}_t{}", file_stem(o), s.t);
    if o.grid.two_d {
        let data = GridData::from_primitives(&o.grid, &s.prims, s.t, cfg.full_state);
        let path = dir.join(format!("{stem}.dat"));
        write_grid(&path, &data)?;
        let mut files = vec![path];
        if cfg.vtk {
            let path = dir.join(format!("{stem}.vtk"));
            write_vtk(&path, &data)?;
            files.push(path);
        }
        Ok(files)
    } else {
        let path = dir.join(format!("{stem}.csv"));
        write_csv(&path, &Profile1d::from_primitives(&o.grid, &s.prims))?;
        Ok(vec![path])
    }
}

fn write_record(path: &Path, text: &str) -> Result<(), OutputError> {
    std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))
        .and_then(|_| std::fs::write(path, text))
        .map_err(|e| OutputError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn stats_lines(s: &mut String, st: &RunStats) {
    let _ = writeln!(s, "steps = {}", st.steps);
    let _ = writeln!(s, "t = {:.17e}", st.t);
    let _ = writeln!(s, "wall_seconds = {:.3}", st.wall_seconds);
    let _ = writeln!(s, "min_rho = {:.17e}", st.min_rho);
    let _ = writeln!(s, "min_p = {:.17e}", st.min_p);
    let _ = writeln!(s, "fallback_faces = {}", st.fallback_faces);
}

fn failure_text(cfg: &RunConfig, f: &SolverFailure) -> String {
    let mut s = String::from("status = failed\n");
    let _ = writeln!(s, "problem = {}", cfg.problem);
    let _ = writeln!(s, "scheme = {}", cfg.scheme);
    match f.error {
        MarchError::InvalidState { i, j, stage, t, source } => {
            let _ = writeln!(
                s,
                "kind = invalid_state\ncause = {source:?}\ni = {i}\nj = {j}\nstage = {stage}\nt_step = {t:.17e}"
            );
        }
        MarchError::Flux { i, j, dir, stage, t, source } => {
            let d = if dir == Direction::X { "x" } else { "y" };
            let _ = writeln!(
                s,
                "kind = flux\ncause = {source:?}\ni = {i}\nj = {j}\ndir = {d}\nstage = {stage}\nt_step = {t:.17e}"
            );
        }
        MarchError::BadTimeStep(dt) => {
            let _ = writeln!(s, "kind = bad_time_step\ndt = {dt:e}");
        }
    }
    let _ = writeln!(s, "message = {}", f.error);
    stats_lines(&mut s, &f.stats);
    s
}

/// L1 density difference between `density` on `grid` and a reference file,
/// restricting the reference when it is finer.
pub fn reference_difference(
    grid: &GridSpec,
    density: &[f64],
    periodic: (bool, bool),
    order: u8,
    reference: &SolutionFile,
) -> Result<f64, MetricError> {
    let (rx, ry) = reference.shape();
    let kind = if order == 2 { Restriction::CellAverage } else { Restriction::PointValue };
    let coarse = restrict_grid(reference.density(), (rx, ry), (grid.nx, grid.ny), kind, periodic)?;
    l1_error(density, &coarse, grid.cell_volume())
}

/// Evolve, write snapshots and a `summary.txt` record. On solver failure a
/// `failure.txt` record is written instead and the error returned.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, RunError> {
    let dir = cfg.resolved_out_dir();
    let outcome = match simulate(cfg) {
        Ok(o) => o,
        Err(RunError::Solver(f)) => {
            write_record(&dir.join("failure.txt"), &failure_text(cfg, &f))?;
            return Err(RunError::Solver(f));
        }
        Err(e) => return Err(e),
    };
    let mut files = Vec::new();
    for s in &outcome.snapshots {
        files.extend(write_snapshot(cfg, &outcome, s, &dir)?);
    }
    let reference_l1 = match &cfg.reference {
        Some(path) => {
            let r = SolutionFile::read(path)?;
            let bcs = outcome.problem.bcs;
            Some(reference_difference(
                &outcome.grid,
                &outcome.final_snapshot().density(),
                (bcs.periodic(Direction::X), bcs.periodic(Direction::Y)),
                outcome.scheme.order(),
                &r,
            )?)
        }
        None => None,
    };

    let mut s = String::from("status = ok\n");
    let _ = writeln!(s, "problem = {}", outcome.problem.name);
    let _ = writeln!(s, "scheme = {}", outcome.scheme);
    let _ = writeln!(s, "nx = {}", outcome.grid.nx);
    let _ = writeln!(s, "ny = {}", outcome.grid.ny);
    let _ = writeln!(s, "c = {}", outcome.c);
    if let Some(k) = outcome.dt_cap_k {
        let _ = writeln!(s, "dt_cap_k = {k:.17e}");
    }
    stats_lines(&mut s, &outcome.stats);
    if let Some(l1) = reference_l1 {
        let _ = writeln!(s, "reference_l1 = {l1:.17e}");
    }
    for f in &files {
        let _ = writeln!(s, "file = {}", f.display());
    }
    write_record(&dir.join("summary.txt"), &s)?;
    Ok(RunSummary { out_dir: dir, files, stats: outcome.stats, reference_l1 })
}

/// Convergence study over `meshes` (cells in `x`, coarse to fine).
///
/// Problems with a known solution are measured against it, with rates
/// between neighbouring meshes. Otherwise Runge estimates are formed from
/// differences of successive solutions restricted onto the coarser mesh,
/// which requires each mesh to refine the previous one by an integer ratio.
/// In accuracy mode at fifth order the time-step cap constant is fixed on
/// the coarsest mesh unless configured.
pub fn converge(base: &RunConfig, meshes: &[usize]) -> Result<ConvergenceReport, RunError> {
    let problem = build_problem(&base.problem)?;
    let mut cfg = base.clone();
    let (dnx, dny) = problem.default_mesh(cfg.scheme);
    let at = |cfg: &RunConfig, n: usize| {
        let mut c = cfg.clone();
        c.nx = Some(n);
        c.ny = (problem.dim == 2).then(|| (n * dny).div_ceil(dnx));
        c.snapshots = Some(Vec::new());
        c
    };
    if cfg.accuracy_mode && cfg.scheme.order() == 5 && cfg.dt_cap_k.is_none() {
        if let Some(&n0) = meshes.first() {
            cfg.dt_cap_k = Some(binding_cap_constant(&at(&cfg, n0))?);
        }
    }
    let bcs = problem.bcs;
    let periodic = (bcs.periodic(Direction::X), bcs.periodic(Direction::Y));
    let kind = if cfg.scheme.order() == 2 { Restriction::CellAverage } else { Restriction::PointValue };

    if problem.has_exact() {
        let mut errs = Vec::with_capacity(meshes.len());
        for &n in meshes {
            let o = simulate(&at(&cfg, n))?;
            let snap = o.final_snapshot();
            let exact: Vec<f64> = problem
                .exact_primitives(&o.grid, snap.t)
                .expect("problem has an exact solution")
                .iter()
                .map(|w| w.rho)
                .collect();
            errs.push(l1_error(&snap.density(), &exact, o.grid.cell_volume())?);
        }
        return Ok(ConvergenceReport::from_errors(meshes.to_vec(), &errs));
    }

    let mut deltas = vec![0.0; meshes.len()];
    let mut prev: Option<(GridSpec, Vec<f64>)> = None;
    for (k, &n) in meshes.iter().enumerate() {
        let o = simulate(&at(&cfg, n))?;
        let rho = o.final_snapshot().density();
        if let Some((g, coarse)) = &prev {
            let r = restrict_grid(&rho, (o.grid.nx, o.grid.ny), (g.nx, g.ny), kind, periodic)?;
            deltas[k] = l1_error(&r, coarse, g.cell_volume())?;
        }
        prev = Some((o.grid, rho));
    }
    Ok(ConvergenceReport::from_runge(meshes.to_vec(), &deltas)?)
}
