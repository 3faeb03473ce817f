//! Dimension-by-dimension flux assembly.

use rayon::prelude::*;

use super::grid::{Boundaries, Field};
use super::{SchemeConfig, Source};
use crate::antidiffusion::{
    ad_coefficient, ad_flux_correction, classify_cells, classify_cells_periodic, AdaptationConfig, CellClass,
};
use crate::aweno::{corrected_flux, CorrectionStencil};
use crate::cu_flux::{cu_numerical_flux, FluxError, InterfaceStates};
use crate::euler::{interface_average, Direction, EigenPair, Equations, PrimitiveState, State, StateError};
use crate::reconstruct::{muscl_interface_states, wenoz_interface_states};

/// Failure inside one line sweep; indices are padded positions along the
/// line (for interfaces, the cell on the left).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LineFailure {
    Cell { index: usize, source: StateError },
    Interface { index: usize, source: FluxError },
}

/// Failure of a full right-hand-side evaluation, located by interior cell
/// indices (negative or past the end for ghost cells).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RhsFailure {
    Cell { i: isize, j: isize, source: StateError },
    Interface { i: isize, j: isize, dir: Direction, source: FluxError },
}

struct LineSetup<'a> {
    dx: f64,
    dir: Direction,
    cfg: &'a SchemeConfig,
    adapt: Option<AdaptationConfig>,
    periodic: bool,
    ghost: usize,
}

fn line_classes(w: &[PrimitiveState], s: &LineSetup, eps0: f64) -> Vec<CellClass> {
    let rho: Vec<f64> = w.iter().map(|w| w.rho).collect();
    let p: Vec<f64> = w.iter().map(|w| w.p).collect();
    if !s.periodic {
        return classify_cells(&rho, &p, eps0, s.ghost);
    }
    let g = s.ghost;
    let n = w.len() - 2 * g;
    let inner = classify_cells_periodic(&rho[g..g + n], &p[g..g + n], eps0);
    (0..w.len()).map(|k| inner[(k + n - g) % n]).collect()
}

#[inline]
fn project_all<const N: usize, const M: usize>(pair: &EigenPair<N>, cells: &[State<N>]) -> [State<N>; M] {
    std::array::from_fn(|k| pair.project(&cells[k]))
}

/// Numerical fluxes at the `n + 1` interfaces bounding the interior cells of
/// a padded line.
fn line_fluxes<const N: usize, E: Equations<N>>(
    eq: &E,
    line: &[State<N>],
    s: &LineSetup,
    troubled: Option<&[bool]>,
    out: &mut Vec<State<N>>,
) -> Result<usize, LineFailure> {
    let g = s.ghost;
    let n = line.len() - 2 * g;
    let dir = s.dir;
    let w = line
        .iter()
        .enumerate()
        .map(|(index, u)| eq.primitive(u).map_err(|source| LineFailure::Cell { index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    let order5 = s.cfg.scheme.order() == 5;
    let cell_flux: Vec<State<N>> =
        if order5 { line.iter().zip(&w).map(|(u, w)| eq.flux(u, w, dir)).collect() } else { Vec::new() };
    let classes = match s.adapt {
        Some(a) => line_classes(&w, s, a.epsilon0),
        None => Vec::new(),
    };

    out.clear();
    let mut degraded = 0;
    for i in g - 1..g + n {
        if troubled.is_some_and(|m| m[i] || m[i + 1]) {
            out.push(first_order_flux(eq, line, i, dir)?);
            degraded += 1;
            continue;
        }
        let cell_err = |source| LineFailure::Cell { index: i, source };
        let avg = interface_average(&w[i], &w[i + 1], eq.gas()).map_err(cell_err)?;
        let pair = eq.eigensystem(&avg, dir).map_err(cell_err)?;
        let (gm, gp) = if order5 {
            let st: [State<N>; 6] = project_all(&pair, &line[i - 2..i + 4]);
            wenoz_interface_states(&st, &s.cfg.weno)
        } else {
            let st: [State<N>; 4] = project_all(&pair, &line[i - 1..i + 3]);
            muscl_interface_states(&st, s.dx, s.cfg.limiter)
        };
        let st = InterfaceStates { u_minus: pair.lift(&gm), u_plus: pair.lift(&gp) };
        if s.cfg.positivity_fallback && (eq.primitive(&st.u_minus).is_err() || eq.primitive(&st.u_plus).is_err()) {
            out.push(first_order_flux(eq, line, i, dir)?);
            degraded += 1;
            continue;
        }
        let mut f = cu_numerical_flux(eq, &st, dir).map_err(|source| LineFailure::Interface { index: i, source })?;
        if order5 {
            let f_values: [State<N>; 6] = std::array::from_fn(|k| cell_flux[i - 2 + k]);
            f = corrected_flux(&f, &CorrectionStencil { f_values, h: s.dx });
        }
        if let Some(a) = &s.adapt {
            let c = ad_coefficient(classes[i], classes[i + 1], s.dx, a);
            if c != 0.0 {
                let mut du = [0.0; N];
                for k in 0..N {
                    du[k] = line[i + 1][k] - line[i][k];
                }
                let corr = ad_flux_correction(&pair, c, E::DEGENERATE, &du, s.dx);
                for k in 0..N {
                    f[k] -= corr[k];
                }
            }
        }
        out.push(f);
    }
    Ok(degraded)
}

/// Central-upwind flux from the cell values either side of interface `i`.
fn first_order_flux<const N: usize, E: Equations<N>>(
    eq: &E,
    line: &[State<N>],
    i: usize,
    dir: Direction,
) -> Result<State<N>, LineFailure> {
    let st = InterfaceStates { u_minus: line[i], u_plus: line[i + 1] };
    cu_numerical_flux(eq, &st, dir).map_err(|source| LineFailure::Interface { index: i, source })
}

/// Padded-line copy of an interior mask; ghosts mirror the opposite end on
/// periodic lines and are clear otherwise.
fn pad_mask(inner: impl Iterator<Item = bool>, n: usize, g: usize, periodic: bool) -> Vec<bool> {
    let inner: Vec<bool> = inner.collect();
    (0..n + 2 * g)
        .map(|k| {
            let a = k as isize - g as isize;
            if (0..n as isize).contains(&a) {
                inner[a as usize]
            } else if periodic {
                inner[a.rem_euclid(n as isize) as usize]
            } else {
                false
            }
        })
        .collect()
}

/// `-(F_{i+1/2} - F_{i-1/2}) / dx` for each interior cell of the line.
#[inline]
fn difference_into<const N: usize>(fluxes: &[State<N>], dx: f64, out: &mut [State<N>]) {
    for (i, o) in out.iter_mut().enumerate() {
        for k in 0..N {
            o[k] = -(fluxes[i + 1][k] - fluxes[i][k]) / dx;
        }
    }
}

/// Semi-discrete tendency `L(U)` on the interior cells (row-major), given a
/// field whose ghosts have been filled.
pub fn semi_discrete_rhs<const N: usize, E: Equations<N>>(
    eq: &E,
    field: &Field<N>,
    bcs: &Boundaries,
    cfg: &SchemeConfig,
    source: Source,
) -> Result<Vec<State<N>>, super::MarchError> {
    rhs_impl(eq, field, bcs, cfg, source, None).map(|(r, _)| r).map_err(|f| super::MarchError::from_rhs(f, 0, f64::NAN))
}

pub(crate) fn rhs_impl<const N: usize, E: Equations<N>>(
    eq: &E,
    field: &Field<N>,
    bcs: &Boundaries,
    cfg: &SchemeConfig,
    source: Source,
    troubled: Option<&[bool]>,
) -> Result<(Vec<State<N>>, usize), RhsFailure> {
    let grid = field.grid;
    let (nx, ny, g) = (grid.nx, grid.ny, grid.ghost);
    let nxp = grid.nxp();
    let row0 = grid.row0();
    let adapt = cfg.adaptation();
    let sx = LineSetup { dx: grid.dx(), dir: Direction::X, cfg, adapt, periodic: bcs.periodic(Direction::X), ghost: g };

    let mut rhs = vec![[0.0; N]; nx * ny];
    let x_results: Vec<Result<usize, LineFailure>> = rhs
        .par_chunks_mut(nx)
        .enumerate()
        .map(|(j, out)| {
            let a = (j + row0) * nxp;
            let mask = troubled.map(|m| pad_mask(m[j * nx..(j + 1) * nx].iter().copied(), nx, g, sx.periodic));
            let mut fl = Vec::with_capacity(nx + 1);
            let d = line_fluxes(eq, &field.data[a..a + nxp], &sx, mask.as_deref(), &mut fl)?;
            difference_into(&fl, sx.dx, out);
            Ok(d)
        })
        .collect();
    let mut degraded = 0;
    for (j, r) in x_results.into_iter().enumerate() {
        degraded += r.map_err(|f| locate(f, Direction::X, j, g))?;
    }

    if grid.two_d {
        let sy =
            LineSetup { dx: grid.dy(), dir: Direction::Y, cfg, adapt, periodic: bcs.periodic(Direction::Y), ghost: g };
        let nyp = grid.nyp();
        let cols: Vec<Result<(Vec<State<N>>, usize), LineFailure>> = (0..nx)
            .into_par_iter()
            .map(|i| {
                let col: Vec<State<N>> = (0..nyp).map(|j| field.data[j * nxp + g + i]).collect();
                let mask = troubled.map(|m| pad_mask((0..ny).map(|j| m[j * nx + i]), ny, g, sy.periodic));
                let mut fl = Vec::with_capacity(ny + 1);
                let count = line_fluxes(eq, &col, &sy, mask.as_deref(), &mut fl)?;
                let mut d = vec![[0.0; N]; ny];
                difference_into(&fl, sy.dx, &mut d);
                Ok((d, count))
            })
            .collect();
        for (i, c) in cols.into_iter().enumerate() {
            let (d, count) = c.map_err(|f| locate(f, Direction::Y, i, g))?;
            degraded += count;
            for (j, dj) in d.iter().enumerate() {
                let r = &mut rhs[j * nx + i];
                for k in 0..N {
                    r[k] += dj[k];
                }
            }
        }
    }

    if source == Source::GravityY {
        let my = E::normal_momentum(Direction::Y);
        for j in 0..ny {
            for i in 0..nx {
                let u = field.get(i, j);
                let r = &mut rhs[j * nx + i];
                r[my] += u[0];
                r[N - 1] += u[my];
            }
        }
    }
    Ok((rhs, degraded))
}

fn locate(f: LineFailure, dir: Direction, line: usize, g: usize) -> RhsFailure {
    let at = |index: usize| {
        let a = index as isize - g as isize;
        match dir {
            Direction::X => (a, line as isize),
            Direction::Y => (line as isize, a),
        }
    };
    match f {
        LineFailure::Cell { index, source } => {
            let (i, j) = at(index);
            RhsFailure::Cell { i, j, source }
        }
        LineFailure::Interface { index, source } => {
            let (i, j) = at(index);
            RhsFailure::Interface { i, j, dir, source }
        }
    }
}
