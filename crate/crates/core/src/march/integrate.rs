//! Time-step control and the three-stage SSP Runge-Kutta method.

use super::grid::{fill_ghosts, Boundaries, Field, GridSpec};
use super::rhs::{rhs_impl, RhsFailure};
use super::{SchemeConfig, Source};
use crate::cu_flux::FluxError;
use crate::euler::{sound_speed, Direction, Equations, State, StateError};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MarchError {
    #[error("invalid state at cell ({i}, {j}), stage {stage}, t = {t}: {source}")]
    InvalidState { i: isize, j: isize, stage: usize, t: f64, source: StateError },
    #[error("flux failure at {dir:?}-interface right of cell ({i}, {j}), stage {stage}, t = {t}: {source}")]
    Flux { i: isize, j: isize, dir: Direction, stage: usize, t: f64, source: FluxError },
    #[error("invalid time step {0}")]
    BadTimeStep(f64),
}

impl MarchError {
    pub(crate) fn from_rhs(f: RhsFailure, stage: usize, t: f64) -> Self {
        match f {
            RhsFailure::Cell { i, j, source } => MarchError::InvalidState { i, j, stage, t, source },
            RhsFailure::Interface { i, j, dir, source } => MarchError::Flux { i, j, dir, stage, t, source },
        }
    }

    /// Whether the failure is a loss of positivity (as opposed to a bad
    /// time step).
    pub fn is_positivity(&self) -> bool {
        !matches!(self, MarchError::BadTimeStep(_))
    }
}

/// CFL time step from cell-wise `|u| + c` (and `|v| + c`) maxima, with the
/// fifth-order accuracy-mode cap when configured.
pub fn max_stable_dt<const N: usize, E: Equations<N>>(
    eq: &E,
    cells: &[State<N>],
    grid: &GridSpec,
    cfg: &SchemeConfig,
) -> Result<f64, (usize, StateError)> {
    let mut sx = 0.0f64;
    let mut sy = 0.0f64;
    for (k, u) in cells.iter().enumerate() {
        let w = eq.primitive(u).map_err(|e| (k, e))?;
        let c = sound_speed(&w, eq.gas());
        sx = sx.max(w.u.abs() + c);
        sy = sy.max(w.v.abs() + c);
    }
    let mut dt = cfg.cfl * grid.dx() / sx;
    if grid.two_d {
        dt = dt.min(cfg.cfl * grid.dy() / sy);
    }
    if let (5, Some(k)) = (cfg.scheme.order(), cfg.dt_cap_k) {
        let h = if grid.two_d { grid.dx().min(grid.dy()) } else { grid.dx() };
        dt = dt.min(k * h.powf(5.0 / 3.0));
    }
    Ok(dt)
}

/// Stage combination `U^(k) = combine(L(U^(k-1)))` handed to a stage
/// evaluator.
pub type Combine<'a, const N: usize> = &'a dyn Fn(&[State<N>]) -> Vec<State<N>>;

/// One Shu-Osher SSP-RK3 step. `stage(k, v, combine)` evaluates the
/// tendency `L(v)` for stage `k` in 1..=3 and returns `combine(L(v))`,
/// validated.
pub fn ssprk3_step<const N: usize, Err>(
    u: &[State<N>],
    dt: f64,
    mut stage: impl FnMut(usize, &[State<N>], Combine<'_, N>) -> Result<Vec<State<N>>, Err>,
) -> Result<Vec<State<N>>, Err> {
    let axpy = |a: f64, x: &[State<N>], b: f64, y: &[State<N>], ly: &[State<N>]| -> Vec<State<N>> {
        x.iter()
            .zip(y)
            .zip(ly)
            .map(|((x, y), ly)| std::array::from_fn(|k| a * x[k] + b * (y[k] + dt * ly[k])))
            .collect()
    };
    let euler = |l: &[State<N>]| -> Vec<State<N>> {
        u.iter().zip(l).map(|(x, lx)| std::array::from_fn(|k| x[k] + dt * lx[k])).collect()
    };
    let u1 = stage(1, u, &euler)?;
    let u2 = stage(2, &u1, &|l| axpy(0.75, u, 0.25, &u1, l))?;
    stage(3, &u2, &|l| axpy(1.0 / 3.0, u, 2.0 / 3.0, &u2, l))
}

/// Interior indices of inadmissible cells.
fn invalid_cells<const N: usize, E: Equations<N>>(eq: &E, cells: &[State<N>]) -> Vec<(usize, StateError)> {
    cells.iter().enumerate().filter_map(|(k, u)| eq.primitive(u).err().map(|e| (k, e))).collect()
}

fn check_cells<const N: usize, E: Equations<N>>(
    eq: &E,
    nx: usize,
    stage: usize,
    t: f64,
    cells: &[State<N>],
) -> Result<(), MarchError> {
    match invalid_cells(eq, cells).first() {
        Some(&(k, source)) => {
            let (i, j) = ((k % nx) as isize, (k / nx) as isize);
            Err(MarchError::InvalidState { i, j, stage, t, source })
        }
        None => Ok(()),
    }
}

/// Recomputations of a stage with first-order fluxes before giving up.
const MAX_FALLBACK_ROUNDS: usize = 8;

/// Evolving solution of one problem on one grid.
#[derive(Debug, Clone)]
pub struct Simulation<const N: usize, E: Equations<N>> {
    pub eq: E,
    pub bcs: Boundaries,
    pub cfg: SchemeConfig,
    pub source: Source,
    pub t: f64,
    pub steps: usize,
    /// Interfaces evaluated with the first-order fallback flux, summed over
    /// all accepted stages.
    pub fallback_faces: usize,
    cells: Vec<State<N>>,
    scratch: Field<N>,
}

impl<const N: usize, E: Equations<N>> Simulation<N, E> {
    /// `cells` are the interior conserved states, row-major.
    pub fn new(
        eq: E,
        grid: GridSpec,
        bcs: Boundaries,
        cfg: SchemeConfig,
        source: Source,
        cells: Vec<State<N>>,
    ) -> Self {
        assert_eq!(cells.len(), grid.interior_len(), "initial data does not match the grid");
        assert!(grid.ghost >= cfg.scheme.ghost(), "ghost layer too thin for {}", cfg.scheme);
        Self { eq, bcs, cfg, source, t: 0.0, steps: 0, fallback_faces: 0, cells, scratch: Field::zeros(grid) }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.scratch.grid
    }

    pub fn cells(&self) -> &[State<N>] {
        &self.cells
    }

    /// Tendency of an arbitrary interior state on this simulation's grid.
    pub fn rhs(&mut self, cells: &[State<N>], stage: usize) -> Result<Vec<State<N>>, MarchError> {
        self.rhs_masked(cells, stage, None).map(|(r, _)| r)
    }

    fn rhs_masked(
        &mut self,
        cells: &[State<N>],
        stage: usize,
        troubled: Option<&[bool]>,
    ) -> Result<(Vec<State<N>>, usize), MarchError> {
        self.scratch.set_interior(cells);
        fill_ghosts(&mut self.scratch, &self.bcs, &self.eq);
        rhs_impl(&self.eq, &self.scratch, &self.bcs, &self.cfg, self.source, troubled)
            .map_err(|f| MarchError::from_rhs(f, stage, self.t))
    }

    /// One validated stage. With the positivity fallback enabled, cells the
    /// stage would make inadmissible get first-order fluxes on all their
    /// faces and the stage is recomputed.
    fn stage(&mut self, stage: usize, v: &[State<N>], combine: Combine<'_, N>) -> Result<Vec<State<N>>, MarchError> {
        let nx = self.grid().nx;
        let mut troubled: Option<Vec<bool>> = None;
        for round in 0.. {
            let (l, faces) = self.rhs_masked(v, stage, troubled.as_deref())?;
            let next = combine(&l);
            let bad = invalid_cells(&self.eq, &next);
            let Some(&(k, source)) = bad.first() else {
                self.fallback_faces += faces;
                return Ok(next);
            };
            let fail =
                MarchError::InvalidState { i: (k % nx) as isize, j: (k / nx) as isize, stage, t: self.t, source };
            if !self.cfg.positivity_fallback || round == MAX_FALLBACK_ROUNDS {
                return Err(fail);
            }
            let mask = troubled.get_or_insert_with(|| vec![false; v.len()]);
            let mut grew = false;
            for &(k, _) in &bad {
                grew |= !mask[k];
                mask[k] = true;
            }
            if !grew {
                return Err(fail);
            }
        }
        unreachable!("the fallback loop returns")
    }

    pub fn stable_dt(&self) -> Result<f64, MarchError> {
        let grid = *self.grid();
        max_stable_dt(&self.eq, &self.cells, &grid, &self.cfg).map_err(|(k, source)| MarchError::InvalidState {
            i: (k % grid.nx) as isize,
            j: (k / grid.nx) as isize,
            stage: 0,
            t: self.t,
            source,
        })
    }

    /// Advance by exactly `dt`.
    pub fn step(&mut self, dt: f64) -> Result<(), MarchError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(MarchError::BadTimeStep(dt));
        }
        let u = std::mem::take(&mut self.cells);
        let faces = self.fallback_faces;
        match ssprk3_step(&u, dt, |stage, v, combine| self.stage(stage, v, combine)) {
            Ok(next) => {
                self.cells = next;
                self.t += dt;
                self.steps += 1;
                Ok(())
            }
            Err(e) => {
                self.cells = u;
                self.fallback_faces = faces;
                Err(e)
            }
        }
    }

    /// March to `t_end`, clipping the last step so that `t_end` is hit
    /// exactly. `on_step` sees the state after every step.
    pub fn advance_to(&mut self, t_end: f64, mut on_step: impl FnMut(&Self)) -> Result<(), MarchError> {
        check_cells(&self.eq, self.grid().nx, 0, self.t, &self.cells)?;
        while self.t < t_end {
            let dt = self.stable_dt()?;
            let remaining = t_end - self.t;
            if dt >= remaining {
                self.step(remaining)?;
                self.t = t_end;
            } else {
                self.step(dt)?;
            }
            on_step(self);
        }
        Ok(())
    }
}
