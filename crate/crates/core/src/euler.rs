//! Ideal-gas Euler equations: equation of state, fluxes, interface averages
//! and the eigensystems used for local characteristic decomposition.
//!
//! Conserved vectors are plain arrays. In one dimension the layout is
//! `[rho, rho*u, E]`; in two dimensions it is `[rho, rho*u, rho*v, E]`.

use thiserror::Error;

/// Conserved state vector with `N` components.
pub type State<const N: usize> = [f64; N];

/// Dense `N x N` matrix stored row-major.
pub type Matrix<const N: usize> = [[f64; N]; N];

/// Sweep direction of a flux or eigensystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    X,
    Y,
}

/// Ratio of specific heats of a calorically perfect gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self, StateError> {
        if gamma > 1.0 && gamma.is_finite() {
            Ok(Self { gamma })
        } else {
            Err(StateError::InvalidGamma(gamma))
        }
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StateError {
    #[error("non-positive density {0:e}")]
    NonPositiveDensity(f64),
    #[error("non-positive pressure {0:e}")]
    NonPositivePressure(f64),
    #[error("non-positive interface average (rho={rho:e}, p={p:e})")]
    NonPositiveAverage { rho: f64, p: f64 },
    #[error("singular eigensystem: sound speed {c:e} at velocity {u:e}")]
    SingularEigensystem { c: f64, u: f64 },
    #[error("ratio of specific heats must exceed 1, got {0}")]
    InvalidGamma(f64),
}

/// Density, velocities and pressure at a point. `v` is zero in 1-D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl PrimitiveState {
    /// Validated constructor; density and pressure must be positive.
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Result<Self, StateError> {
        let w = Self { rho, u, v, p };
        w.check()?;
        Ok(w)
    }

    pub fn new_1d(rho: f64, u: f64, p: f64) -> Result<Self, StateError> {
        Self::new(rho, u, 0.0, p)
    }

    pub fn check(&self) -> Result<(), StateError> {
        // `!(x > 0)` also rejects NaN
        if !(self.rho > 0.0) {
            return Err(StateError::NonPositiveDensity(self.rho));
        }
        if !(self.p > 0.0) {
            return Err(StateError::NonPositivePressure(self.p));
        }
        Ok(())
    }

    #[inline]
    pub fn normal_velocity(&self, dir: Direction) -> f64 {
        match dir {
            Direction::X => self.u,
            Direction::Y => self.v,
        }
    }
}

/// `c = sqrt(gamma p / rho)`.
#[inline]
pub fn sound_speed(w: &PrimitiveState, gas: GasModel) -> f64 {
    (gas.gamma * w.p / w.rho).sqrt()
}

/// Hatted interface quantities built from arithmetic means of the
/// neighbouring primitive states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceAverage {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub energy: f64,
    pub enthalpy: f64,
    pub phi: f64,
    pub c: f64,
}

pub fn interface_average(
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: GasModel,
) -> Result<InterfaceAverage, StateError> {
    let g = gas.gamma;
    let rho = 0.5 * (left.rho + right.rho);
    let u = 0.5 * (left.u + right.u);
    let v = 0.5 * (left.v + right.v);
    let p = 0.5 * (left.p + right.p);
    if !(rho > 0.0 && p > 0.0) {
        return Err(StateError::NonPositiveAverage { rho, p });
    }
    let q2 = u * u + v * v;
    let energy = p / (g - 1.0) + 0.5 * rho * q2;
    let enthalpy = (energy + p) / rho;
    let phi = 2.0 * enthalpy - q2;
    let c = (g * p / rho).sqrt();
    Ok(InterfaceAverage { rho, u, v, p, energy, enthalpy, phi, c })
}

impl InterfaceAverage {
    /// Conserved state whose primitive variables are the hatted ones.
    pub fn conserved<const N: usize, E: Equations<N>>(&self, eq: &E) -> State<N> {
        eq.conserved(&PrimitiveState { rho: self.rho, u: self.u, v: self.v, p: self.p })
    }

    fn guard(&self, dir: Direction) -> Result<(), StateError> {
        let un = match dir {
            Direction::X => self.u,
            Direction::Y => self.v,
        };
        if !(self.c >= 1e-12 * un.abs().max(1.0)) {
            return Err(StateError::SingularEigensystem { c: self.c, u: un });
        }
        Ok(())
    }
}

/// Right eigenvectors (columns of `r`), their inverse, and eigenvalues in
/// ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair<const N: usize> {
    pub r: Matrix<N>,
    pub r_inv: Matrix<N>,
    pub lambda: [f64; N],
}

impl<const N: usize> EigenPair<N> {
    pub fn identity() -> Self {
        let mut r = [[0.0; N]; N];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { r, r_inv: r, lambda: [0.0; N] }
    }

    /// Characteristic variables `R^{-1} u`.
    #[inline]
    pub fn project(&self, u: &State<N>) -> State<N> {
        mat_vec(&self.r_inv, u)
    }

    /// Conserved variables `R g`.
    ///
    /// The outermost (acoustic) fields are paired before the inner ones so
    /// that the result is exactly reflection-equivariant.
    #[inline]
    pub fn lift(&self, g: &State<N>) -> State<N> {
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.r[i];
            let outer = row[0] * g[0] + row[N - 1] * g[N - 1];
            let mut inner = 0.0;
            for k in 1..N - 1 {
                inner += row[k] * g[k];
            }
            *o = outer + inner;
        }
        out
    }
}

/// Physics of one of the Euler systems, viewed through fixed-size arrays so
/// the numerical kernels can be shared between 1-D and 2-D.
pub trait Equations<const N: usize>: Copy + Send + Sync {
    /// Indices of the linearly degenerate characteristic fields.
    const DEGENERATE: &'static [usize];

    fn gas(&self) -> GasModel;

    fn primitive(&self, u: &State<N>) -> Result<PrimitiveState, StateError>;

    fn conserved(&self, w: &PrimitiveState) -> State<N>;

    /// Physical flux in `dir`, given the state and its primitive variables.
    fn flux(&self, u: &State<N>, w: &PrimitiveState, dir: Direction) -> State<N>;

    fn eigensystem(&self, avg: &InterfaceAverage, dir: Direction) -> Result<EigenPair<N>, StateError>;

    /// Analytic flux Jacobian `dF/dU` (or `dG/dU`).
    fn jacobian(&self, u: &State<N>, dir: Direction) -> Result<Matrix<N>, StateError>;

    /// Index of the momentum component normal to a wall facing `dir`.
    fn normal_momentum(dir: Direction) -> usize;

    /// Smallest and largest eigenvalues of the Jacobian at `w`.
    #[inline]
    fn extreme_speeds(&self, w: &PrimitiveState, dir: Direction) -> (f64, f64) {
        let c = sound_speed(w, self.gas());
        let un = w.normal_velocity(dir);
        (un - c, un + c)
    }
}

/// Conserved-to-primitive conversion through the ideal-gas EOS.
pub fn primitive_from_conserved<const N: usize, E: Equations<N>>(
    eq: &E,
    u: &State<N>,
) -> Result<PrimitiveState, StateError> {
    eq.primitive(u)
}

pub fn conserved_from_primitive<const N: usize, E: Equations<N>>(eq: &E, w: &PrimitiveState) -> State<N> {
    eq.conserved(w)
}

pub fn physical_flux<const N: usize, E: Equations<N>>(
    eq: &E,
    u: &State<N>,
    dir: Direction,
) -> Result<State<N>, StateError> {
    let w = eq.primitive(u)?;
    Ok(eq.flux(u, &w, dir))
}

/// One-dimensional Euler equations, `U = (rho, rho u, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Euler1d {
    pub gas: GasModel,
}

impl Euler1d {
    pub fn new(gas: GasModel) -> Self {
        Self { gas }
    }
}

impl Equations<3> for Euler1d {
    const DEGENERATE: &'static [usize] = &[1];

    #[inline]
    fn gas(&self) -> GasModel {
        self.gas
    }

    #[inline]
    fn primitive(&self, u: &State<3>) -> Result<PrimitiveState, StateError> {
        let rho = u[0];
        if !(rho > 0.0) {
            return Err(StateError::NonPositiveDensity(rho));
        }
        let vel = u[1] / rho;
        let p = (self.gas.gamma - 1.0) * (u[2] - 0.5 * rho * vel * vel);
        if !(p > 0.0) {
            return Err(StateError::NonPositivePressure(p));
        }
        Ok(PrimitiveState { rho, u: vel, v: 0.0, p })
    }

    #[inline]
    fn conserved(&self, w: &PrimitiveState) -> State<3> {
        let e = w.p / (self.gas.gamma - 1.0) + 0.5 * w.rho * w.u * w.u;
        [w.rho, w.rho * w.u, e]
    }

    #[inline]
    fn flux(&self, u: &State<3>, w: &PrimitiveState, _dir: Direction) -> State<3> {
        [u[1], u[1] * w.u + w.p, w.u * (u[2] + w.p)]
    }

    fn eigensystem(&self, avg: &InterfaceAverage, _dir: Direction) -> Result<EigenPair<3>, StateError> {
        avg.guard(Direction::X)?;
        let InterfaceAverage { u, enthalpy: h, phi, c, .. } = *avg;
        let uc = u * c;
        let r = [[1.0, 1.0, 1.0], [u - c, u, u + c], [h - uc, 0.5 * u * u, h + uc]];
        let k = phi / (2.0 * c);
        let uk = u * k;
        let half_u2 = 0.5 * u * u;
        let inv = 1.0 / phi;
        let r_inv = [
            [inv * (half_u2 + uk), inv * (-u - k), inv],
            [inv * (2.0 * phi - 2.0 * h), inv * (2.0 * u), -2.0 * inv],
            [inv * (half_u2 - uk), inv * (-u + k), inv],
        ];
        Ok(EigenPair { r, r_inv, lambda: [u - c, u, u + c] })
    }

    fn jacobian(&self, u: &State<3>, _dir: Direction) -> Result<Matrix<3>, StateError> {
        let w = self.primitive(u)?;
        let g = self.gas.gamma;
        let vel = w.u;
        let e = u[2];
        let h = (e + w.p) / w.rho;
        Ok([
            [0.0, 1.0, 0.0],
            [0.5 * (g - 3.0) * vel * vel, (3.0 - g) * vel, g - 1.0],
            [-g * vel * e / w.rho + (g - 1.0) * vel * vel * vel, h - (g - 1.0) * vel * vel, g * vel],
        ])
    }

    fn normal_momentum(_dir: Direction) -> usize {
        1
    }
}

/// Two-dimensional Euler equations, `U = (rho, rho u, rho v, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Euler2d {
    pub gas: GasModel,
}

impl Euler2d {
    pub fn new(gas: GasModel) -> Self {
        Self { gas }
    }
}

impl Equations<4> for Euler2d {
    /// Contact (density-carrying) and shear fields.
    const DEGENERATE: &'static [usize] = &[1, 2];

    #[inline]
    fn gas(&self) -> GasModel {
        self.gas
    }

    #[inline]
    fn primitive(&self, u: &State<4>) -> Result<PrimitiveState, StateError> {
        let rho = u[0];
        if !(rho > 0.0) {
            return Err(StateError::NonPositiveDensity(rho));
        }
        let vx = u[1] / rho;
        let vy = u[2] / rho;
        let p = (self.gas.gamma - 1.0) * (u[3] - 0.5 * rho * (vx * vx + vy * vy));
        if !(p > 0.0) {
            return Err(StateError::NonPositivePressure(p));
        }
        Ok(PrimitiveState { rho, u: vx, v: vy, p })
    }

    #[inline]
    fn conserved(&self, w: &PrimitiveState) -> State<4> {
        let e = w.p / (self.gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
        [w.rho, w.rho * w.u, w.rho * w.v, e]
    }

    #[inline]
    fn flux(&self, u: &State<4>, w: &PrimitiveState, dir: Direction) -> State<4> {
        match dir {
            Direction::X => [u[1], u[1] * w.u + w.p, u[2] * w.u, w.u * (u[3] + w.p)],
            Direction::Y => [u[2], u[1] * w.v, u[2] * w.v + w.p, w.v * (u[3] + w.p)],
        }
    }

    fn eigensystem(&self, avg: &InterfaceAverage, dir: Direction) -> Result<EigenPair<4>, StateError> {
        avg.guard(dir)?;
        let InterfaceAverage { u, v, enthalpy: h, c, .. } = *avg;
        let g1 = self.gas.gamma - 1.0;
        let b1 = g1 / (c * c);
        let b2 = 0.5 * b1 * (u * u + v * v);
        let half_q2 = 0.5 * (u * u + v * v);
        let ic = 1.0 / c;
        let pair = match dir {
            Direction::X => {
                let uc = u * c;
                let r = [[1.0, 1.0, 0.0, 1.0], [u - c, u, 0.0, u + c], [v, v, 1.0, v], [h - uc, half_q2, v, h + uc]];
                let uic = u * ic;
                let r_inv = [
                    [0.5 * (b2 + uic), 0.5 * (-b1 * u - ic), -0.5 * b1 * v, 0.5 * b1],
                    [1.0 - b2, b1 * u, b1 * v, -b1],
                    [-v, 0.0, 1.0, 0.0],
                    [0.5 * (b2 - uic), 0.5 * (-b1 * u + ic), -0.5 * b1 * v, 0.5 * b1],
                ];
                EigenPair { r, r_inv, lambda: [u - c, u, u, u + c] }
            }
            Direction::Y => {
                let vc = v * c;
                let r = [[1.0, 1.0, 0.0, 1.0], [u, u, 1.0, u], [v - c, v, 0.0, v + c], [h - vc, half_q2, u, h + vc]];
                let vic = v * ic;
                let r_inv = [
                    [0.5 * (b2 + vic), -0.5 * b1 * u, 0.5 * (-b1 * v - ic), 0.5 * b1],
                    [1.0 - b2, b1 * u, b1 * v, -b1],
                    [-u, 1.0, 0.0, 0.0],
                    [0.5 * (b2 - vic), -0.5 * b1 * u, 0.5 * (-b1 * v + ic), 0.5 * b1],
                ];
                EigenPair { r, r_inv, lambda: [v - c, v, v, v + c] }
            }
        };
        Ok(pair)
    }

    fn jacobian(&self, u: &State<4>, dir: Direction) -> Result<Matrix<4>, StateError> {
        let w = self.primitive(u)?;
        let g = self.gas.gamma;
        let g1 = g - 1.0;
        let (vx, vy) = (w.u, w.v);
        let q2 = vx * vx + vy * vy;
        let h = (u[3] + w.p) / w.rho;
        Ok(match dir {
            Direction::X => [
                [0.0, 1.0, 0.0, 0.0],
                [0.5 * g1 * q2 - vx * vx, (3.0 - g) * vx, -g1 * vy, g1],
                [-vx * vy, vy, vx, 0.0],
                [vx * (0.5 * g1 * q2 - h), h - g1 * vx * vx, -g1 * vx * vy, g * vx],
            ],
            Direction::Y => [
                [0.0, 0.0, 1.0, 0.0],
                [-vx * vy, vy, vx, 0.0],
                [0.5 * g1 * q2 - vy * vy, -g1 * vx, (3.0 - g) * vy, g1],
                [vy * (0.5 * g1 * q2 - h), -g1 * vx * vy, h - g1 * vy * vy, g * vy],
            ],
        })
    }

    fn normal_momentum(dir: Direction) -> usize {
        match dir {
            Direction::X => 1,
            Direction::Y => 2,
        }
    }
}

#[inline]
pub fn mat_vec<const N: usize>(m: &Matrix<N>, x: &State<N>) -> State<N> {
    let mut out = [0.0; N];
    for (o, row) in out.iter_mut().zip(m) {
        let mut acc = 0.0;
        for k in 0..N {
            acc += row[k] * x[k];
        }
        *o = acc;
    }
    out
}

pub fn mat_mul<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}
