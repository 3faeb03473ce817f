//! Uniform Cartesian grids with ghost layers, and boundary conditions.

use crate::euler::{Direction, Equations, PrimitiveState, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    /// 1 for one-dimensional grids.
    pub ny: usize,
    pub ghost: usize,
    pub two_d: bool,
}

impl GridSpec {
    pub fn new_1d(x_min: f64, x_max: f64, nx: usize, ghost: usize) -> Self {
        assert!(x_max > x_min && nx > 0, "empty 1-D grid");
        Self { x_min, x_max, nx, y_min: 0.0, y_max: 1.0, ny: 1, ghost, two_d: false }
    }

    pub fn new_2d((x_min, x_max): (f64, f64), (y_min, y_max): (f64, f64), nx: usize, ny: usize, ghost: usize) -> Self {
        assert!(x_max > x_min && y_max > y_min && nx > 0 && ny > 0, "empty 2-D grid");
        Self { x_min, x_max, nx, y_min, y_max, ny, ghost, two_d: true }
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    /// Cell volume (length in 1-D, area in 2-D).
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        if self.two_d {
            self.dx() * self.dy()
        } else {
            self.dx()
        }
    }

    #[inline]
    pub fn x_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    #[inline]
    pub fn y_center(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.dy()
    }

    /// Padded row length.
    #[inline]
    pub fn nxp(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    /// Padded column length (1 in 1-D).
    #[inline]
    pub fn nyp(&self) -> usize {
        if self.two_d {
            self.ny + 2 * self.ghost
        } else {
            1
        }
    }

    /// First interior row in the padded layout.
    #[inline]
    pub fn row0(&self) -> usize {
        if self.two_d {
            self.ghost
        } else {
            0
        }
    }

    #[inline]
    pub fn interior_len(&self) -> usize {
        self.nx * self.ny
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Periodic,
    /// Zero-order extrapolation of the nearest interior cell.
    Free,
    /// Mirror image with the normal momentum negated.
    SolidWall,
    Dirichlet(PrimitiveState),
}

/// One boundary condition per side. `y_lo`/`y_hi` are ignored in 1-D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundaries {
    pub x_lo: BoundaryCondition,
    pub x_hi: BoundaryCondition,
    pub y_lo: BoundaryCondition,
    pub y_hi: BoundaryCondition,
}

impl Boundaries {
    pub fn uniform(bc: BoundaryCondition) -> Self {
        Self { x_lo: bc, x_hi: bc, y_lo: bc, y_hi: bc }
    }

    /// `None` unless periodic sides come in matched pairs.
    pub fn new(
        x_lo: BoundaryCondition,
        x_hi: BoundaryCondition,
        y_lo: BoundaryCondition,
        y_hi: BoundaryCondition,
    ) -> Option<Self> {
        let per = |b: BoundaryCondition| b == BoundaryCondition::Periodic;
        (per(x_lo) == per(x_hi) && per(y_lo) == per(y_hi)).then_some(Self { x_lo, x_hi, y_lo, y_hi })
    }

    pub fn periodic(&self, dir: Direction) -> bool {
        match dir {
            Direction::X => self.x_lo == BoundaryCondition::Periodic,
            Direction::Y => self.y_lo == BoundaryCondition::Periodic,
        }
    }
}

/// Conserved states on the padded grid, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<const N: usize> {
    pub grid: GridSpec,
    pub data: Vec<State<N>>,
}

impl<const N: usize> Field<N> {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, data: vec![[0.0; N]; grid.nxp() * grid.nyp()] }
    }

    /// Padded index of interior cell `(i, j)`.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        (j + self.grid.row0()) * self.grid.nxp() + i + self.grid.ghost
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &State<N> {
        &self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, u: State<N>) {
        let k = self.idx(i, j);
        self.data[k] = u;
    }

    /// Interior cells, row by row.
    pub fn interior(&self) -> Vec<State<N>> {
        let mut out = Vec::with_capacity(self.grid.interior_len());
        for j in 0..self.grid.ny {
            let a = self.idx(0, j);
            out.extend_from_slice(&self.data[a..a + self.grid.nx]);
        }
        out
    }

    pub fn set_interior(&mut self, cells: &[State<N>]) {
        let nx = self.grid.nx;
        assert_eq!(cells.len(), self.grid.interior_len());
        for j in 0..self.grid.ny {
            let a = self.idx(0, j);
            self.data[a..a + nx].copy_from_slice(&cells[j * nx..(j + 1) * nx]);
        }
    }
}

#[inline]
fn ghost_value<const N: usize, E: Equations<N>>(
    eq: &E,
    bc: BoundaryCondition,
    dir: Direction,
    mirror: &State<N>,
    nearest: &State<N>,
    wrapped: &State<N>,
) -> State<N> {
    match bc {
        BoundaryCondition::Periodic => *wrapped,
        BoundaryCondition::Free => *nearest,
        BoundaryCondition::SolidWall => {
            let mut u = *mirror;
            let m = E::normal_momentum(dir);
            u[m] = -u[m];
            u
        }
        BoundaryCondition::Dirichlet(w) => eq.conserved(&w),
    }
}

/// Fill every ghost cell. `x` ghosts of interior rows are filled first,
/// then `y` ghosts of whole padded rows, which also covers the corners.
pub fn fill_ghosts<const N: usize, E: Equations<N>>(field: &mut Field<N>, bcs: &Boundaries, eq: &E) {
    let g = field.grid.ghost;
    let nx = field.grid.nx;
    let nxp = field.grid.nxp();
    let row0 = field.grid.row0();
    for j in row0..row0 + field.grid.ny {
        let row = &mut field.data[j * nxp..(j + 1) * nxp];
        for k in 1..=g {
            row[g - k] = ghost_value(eq, bcs.x_lo, Direction::X, &row[g + k - 1], &row[g], &row[g + nx - k]);
            row[g + nx - 1 + k] =
                ghost_value(eq, bcs.x_hi, Direction::X, &row[g + nx - k], &row[g + nx - 1], &row[g + k - 1]);
        }
    }
    if !field.grid.two_d {
        return;
    }
    let ny = field.grid.ny;
    for k in 1..=g {
        for i in 0..nxp {
            let at = |j: usize| j * nxp + i;
            let lo = ghost_value(
                eq,
                bcs.y_lo,
                Direction::Y,
                &field.data[at(g + k - 1)],
                &field.data[at(g)],
                &field.data[at(g + ny - k)],
            );
            let hi = ghost_value(
                eq,
                bcs.y_hi,
                Direction::Y,
                &field.data[at(g + ny - k)],
                &field.data[at(g + ny - 1)],
                &field.data[at(g + k - 1)],
            );
            field.data[at(g - k)] = lo;
            field.data[at(g + ny - 1 + k)] = hi;
        }
    }
}
