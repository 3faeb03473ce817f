//! The benchmark problems: initial data, domains, boundary conditions, final
//! times and default adaptation constants.

use std::f64::consts::PI;

use crate::euler::{sound_speed, GasModel, PrimitiveState};
use crate::march::{Boundaries, BoundaryCondition, GridSpec, Scheme, Source};

type InitFn = fn(f64, f64, GasModel) -> PrimitiveState;
type ExactFn = fn(f64, f64, f64, GasModel) -> PrimitiveState;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown problem `{0}`")]
pub struct UnknownProblem(pub String);

#[derive(Debug, Clone, Copy)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub title: &'static str,
    /// 1 or 2.
    pub dim: usize,
    pub x_range: (f64, f64),
    /// Unused in 1-D.
    pub y_range: (f64, f64),
    pub gamma: f64,
    pub t_final: f64,
    pub bcs: Boundaries,
    /// Default `C` for the second- and fifth-order adaptive schemes.
    pub default_c: (f64, f64),
    /// Default `(nx, ny)` for second- and fifth-order runs.
    pub mesh2: (usize, usize),
    pub mesh5: (usize, usize),
    pub source: Source,
    /// Output times besides the final one.
    pub snapshots: &'static [f64],
    init: InitFn,
    exact: Option<ExactFn>,
}

impl ProblemSpec {
    pub fn gas(&self) -> GasModel {
        GasModel::new(self.gamma).expect("registered gamma is valid")
    }

    /// Primitive state at a point (`y` is ignored in 1-D).
    pub fn initial(&self, x: f64, y: f64) -> PrimitiveState {
        (self.init)(x, y, self.gas())
    }

    /// Exact solution at time `t`, where one is known.
    pub fn exact(&self, x: f64, y: f64, t: f64) -> Option<PrimitiveState> {
        self.exact.map(|f| f(x, y, t, self.gas()))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn default_c(&self, scheme: Scheme) -> f64 {
        match (scheme.adaptive(), scheme.order()) {
            (false, _) => 0.0,
            (true, 2) => self.default_c.0,
            (true, _) => self.default_c.1,
        }
    }

    pub fn default_mesh(&self, scheme: Scheme) -> (usize, usize) {
        if scheme.order() == 2 {
            self.mesh2
        } else {
            self.mesh5
        }
    }

    pub fn grid(&self, nx: usize, ny: usize, ghost: usize) -> GridSpec {
        if self.dim == 1 {
            GridSpec::new_1d(self.x_range.0, self.x_range.1, nx, ghost)
        } else {
            GridSpec::new_2d(self.x_range, self.y_range, nx, ny, ghost)
        }
    }

    /// Initial data sampled at the cell centres, row-major.
    pub fn initial_primitives(&self, grid: &GridSpec) -> Vec<PrimitiveState> {
        let mut out = Vec::with_capacity(grid.interior_len());
        for j in 0..grid.ny {
            let y = if grid.two_d { grid.y_center(j) } else { 0.0 };
            for i in 0..grid.nx {
                out.push(self.initial(grid.x_center(i), y));
            }
        }
        out
    }

    /// Exact solution sampled at the cell centres, where one is known.
    pub fn exact_primitives(&self, grid: &GridSpec, t: f64) -> Option<Vec<PrimitiveState>> {
        self.exact?;
        let mut out = Vec::with_capacity(grid.interior_len());
        for j in 0..grid.ny {
            let y = if grid.two_d { grid.y_center(j) } else { 0.0 };
            for i in 0..grid.nx {
                out.push(self.exact(grid.x_center(i), y, t)?);
            }
        }
        Some(out)
    }
}

fn w1(rho: f64, u: f64, p: f64) -> PrimitiveState {
    PrimitiveState { rho, u, v: 0.0, p }
}

fn w2(rho: f64, u: f64, v: f64, p: f64) -> PrimitiveState {
    PrimitiveState { rho, u, v, p }
}

fn accuracy_1d(x: f64, _: f64, gas: GasModel) -> PrimitiveState {
    let g = gas.gamma();
    let u = (PI * x / 5.0 + PI / 4.0).sin();
    let rho = ((g - 1.0) / (2.0 * g.sqrt()) * (u + 10.0)).powf(2.0 / (g - 1.0));
    w1(rho, u, rho.powf(g))
}

fn titarev_toro(x: f64, _: f64, _: GasModel) -> PrimitiveState {
    if x < -4.5 {
        w1(1.51695, 0.523346, 1.805)
    } else {
        w1(1.0 + 0.1 * (20.0 * x).sin(), 0.0, 1.0)
    }
}

fn shock_density(x: f64, _: f64, _: GasModel) -> PrimitiveState {
    if x < -4.0 {
        w1(27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 31.0 / 3.0)
    } else {
        w1(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
    }
}

fn shock_bubble(x: f64, _: f64, _: GasModel) -> PrimitiveState {
    if x.abs() < 0.25 {
        w1(13.1538, 0.0, 1.0)
    } else if x > 0.75 {
        w1(1.3333, -0.3535, 1.5)
    } else {
        w1(1.0, 0.0, 1.0)
    }
}

fn lax(x: f64, _: f64, _: GasModel) -> PrimitiveState {
    if x < 0.0 {
        w1(0.445, 0.31061, 8.928)
    } else {
        w1(0.5, 0.0, 0.571)
    }
}

fn blast(x: f64, _: f64, _: GasModel) -> PrimitiveState {
    if x < 0.1 {
        w1(1.0, 0.0, 1000.0)
    } else if x <= 0.9 {
        w1(1.0, 0.0, 0.01)
    } else {
        w1(1.0, 0.0, 100.0)
    }
}

fn vortex(x: f64, y: f64, gas: GasModel) -> PrimitiveState {
    let g = gas.gamma();
    let kappa = 5.0 / (2.0 * PI) * ((1.0 - x * x - y * y) / 2.0).exp();
    let rho = (1.0 - (g - 1.0) * kappa * kappa / (2.0 * g)).powf(1.0 / (g - 1.0));
    w2(rho, 1.0 - kappa * y, 1.0 + kappa * x, rho.powf(g))
}

/// Periodic image of `s` in `[-10, 10)`.
fn wrap20(s: f64) -> f64 {
    (s + 10.0).rem_euclid(20.0) - 10.0
}

fn vortex_exact(x: f64, y: f64, t: f64, gas: GasModel) -> PrimitiveState {
    vortex(wrap20(x - t), wrap20(y - t), gas)
}

fn explosion(x: f64, y: f64, _: GasModel) -> PrimitiveState {
    if x * x + y * y < 0.16 {
        w2(1.0, 0.0, 0.0, 1.0)
    } else {
        w2(0.125, 0.0, 0.0, 0.1)
    }
}

/// Four constant quadrants around `(x0, y0)`: NE, NW, SW, SE.
fn quadrants(x: f64, y: f64, x0: f64, y0: f64, q: [PrimitiveState; 4]) -> PrimitiveState {
    match (x > x0, y > y0) {
        (true, true) => q[0],
        (false, true) => q[1],
        (false, false) => q[2],
        (true, false) => q[3],
    }
}

fn rp_cfg3(x: f64, y: f64, _: GasModel) -> PrimitiveState {
    quadrants(
        x,
        y,
        1.0,
        1.0,
        [
            w2(1.5, 0.0, 0.0, 1.5),
            w2(0.5323, 1.206, 0.0, 0.3),
            w2(0.138, 1.206, 1.206, 0.029),
            w2(0.5323, 0.0, 1.206, 0.3),
        ],
    )
}

fn rp_cfg6(x: f64, y: f64, _: GasModel) -> PrimitiveState {
    quadrants(
        x,
        y,
        0.5,
        0.5,
        [w2(1.0, 0.75, -0.5, 1.0), w2(2.0, 0.75, 0.5, 1.0), w2(1.0, -0.75, 0.5, 1.0), w2(3.0, -0.75, -0.5, 1.0)],
    )
}

fn rp_cfg12(x: f64, y: f64, _: GasModel) -> PrimitiveState {
    quadrants(
        x,
        y,
        0.5,
        0.5,
        [w2(0.5313, 0.0, 0.0, 0.4), w2(1.0, 0.7276, 0.0, 1.0), w2(0.8, 0.0, 0.0, 1.0), w2(1.0, 0.0, 0.7276, 1.0)],
    )
}

fn implosion(x: f64, y: f64, _: GasModel) -> PrimitiveState {
    if x.abs() + y.abs() < 0.15 {
        w2(0.125, 0.0, 0.0, 0.14)
    } else {
        w2(1.0, 0.0, 0.0, 1.0)
    }
}

const KH_L: f64 = 0.00625;

fn kelvin_helmholtz(x: f64, y: f64, _: GasModel) -> PrimitiveState {
    let (rho, u) = if y < -0.25 {
        (1.0, -0.5 + 0.5 * ((y + 0.25) / KH_L).exp())
    } else if y < 0.0 {
        (2.0, 0.5 - 0.5 * ((-y - 0.25) / KH_L).exp())
    } else if y < 0.25 {
        (2.0, 0.5 - 0.5 * ((y - 0.25) / KH_L).exp())
    } else {
        (1.0, -0.5 + 0.5 * ((0.25 - y) / KH_L).exp())
    };
    w2(rho, u, 0.01 * (4.0 * PI * x).sin(), 1.5)
}

fn rayleigh_taylor(x: f64, y: f64, gas: GasModel) -> PrimitiveState {
    let (rho, p) = if y < 0.5 { (2.0, 2.0 * y + 1.0) } else { (1.0, y + 1.5) };
    let c = sound_speed(&w2(rho, 0.0, 0.0, p), gas);
    w2(rho, 0.0, -0.025 * c * (8.0 * PI * x).cos(), p)
}

const FREE: BoundaryCondition = BoundaryCondition::Free;
const WALL: BoundaryCondition = BoundaryCondition::SolidWall;
const PERIODIC: BoundaryCondition = BoundaryCondition::Periodic;

fn sides(x_lo: BoundaryCondition, x_hi: BoundaryCondition, y: BoundaryCondition) -> Boundaries {
    Boundaries { x_lo, x_hi, y_lo: y, y_hi: y }
}

#[allow(clippy::too_many_arguments)]
fn spec(
    name: &'static str,
    title: &'static str,
    dim: usize,
    x_range: (f64, f64),
    y_range: (f64, f64),
    t_final: f64,
    bcs: Boundaries,
    default_c: (f64, f64),
    mesh2: (usize, usize),
    mesh5: (usize, usize),
    init: InitFn,
) -> ProblemSpec {
    ProblemSpec {
        name,
        title,
        dim,
        x_range,
        y_range,
        gamma: 1.4,
        t_final,
        bcs,
        default_c,
        mesh2,
        mesh5,
        source: Source::None,
        snapshots: &[],
        init,
        exact: None,
    }
}

/// Registered problem names, in presentation order.
pub const PROBLEM_NAMES: [&str; 14] = [
    "accuracy_1d",
    "titarev_toro",
    "shock_density",
    "shock_bubble",
    "lax",
    "blast",
    "accuracy_2d",
    "explosion",
    "rp_cfg3",
    "rp_cfg6",
    "rp_cfg12",
    "implosion",
    "kelvin_helmholtz",
    "rayleigh_taylor",
];

pub fn build_problem(name: &str) -> Result<ProblemSpec, UnknownProblem> {
    let one = (0.0, 1.0);
    let p = match name {
        "accuracy_1d" => spec(
            name_of(0),
            "1-D smooth periodic accuracy test",
            1,
            (0.0, 10.0),
            one,
            0.1,
            Boundaries::uniform(PERIODIC),
            (0.1, 0.1),
            (200, 1),
            (200, 1),
            accuracy_1d,
        ),
        "titarev_toro" => spec(
            name_of(1),
            "Titarev-Toro shock/entropy-wave interaction",
            1,
            (-5.0, 5.0),
            one,
            5.0,
            Boundaries::uniform(FREE),
            (0.04, 0.003),
            (800, 1),
            (400, 1),
            titarev_toro,
        ),
        "shock_density" => spec(
            name_of(2),
            "Shock/density-wave interaction",
            1,
            (-5.0, 15.0),
            one,
            5.0,
            Boundaries::uniform(FREE),
            (0.1, 0.03),
            (1600, 1),
            (400, 1),
            shock_density,
        ),
        "shock_bubble" => spec(
            name_of(3),
            "Shock/bubble interaction",
            1,
            (-1.0, 1.0),
            one,
            3.0,
            sides(WALL, FREE, FREE),
            (0.15, 0.05),
            (200, 1),
            (200, 1),
            shock_bubble,
        ),
        "lax" => spec(
            name_of(4),
            "Lax shock tube",
            1,
            (-5.0, 5.0),
            one,
            1.3,
            Boundaries::uniform(FREE),
            (0.1, 0.5),
            (200, 1),
            (200, 1),
            lax,
        ),
        "blast" => spec(
            name_of(5),
            "Interacting blast waves",
            1,
            (0.0, 1.0),
            one,
            0.038,
            Boundaries::uniform(WALL),
            (0.55, 0.5),
            (400, 1),
            (200, 1),
            blast,
        ),
        "accuracy_2d" => ProblemSpec {
            exact: Some(vortex_exact),
            ..spec(
                name_of(6),
                "2-D isentropic vortex accuracy test",
                2,
                (-10.0, 10.0),
                (-10.0, 10.0),
                0.1,
                Boundaries::uniform(PERIODIC),
                (0.1, 0.1),
                (200, 200),
                (200, 200),
                vortex,
            )
        },
        "explosion" => spec(
            name_of(7),
            "Cylindrical explosion",
            2,
            (-1.5, 1.5),
            (-1.5, 1.5),
            3.2,
            Boundaries::uniform(FREE),
            (0.03, 0.02),
            (800, 800),
            (800, 800),
            explosion,
        ),
        "rp_cfg3" => spec(
            name_of(8),
            "2-D Riemann problem, configuration 3",
            2,
            (0.0, 1.2),
            (0.0, 1.2),
            1.0,
            Boundaries::uniform(FREE),
            (0.04, 0.02),
            (600, 600),
            (600, 600),
            rp_cfg3,
        ),
        "rp_cfg6" => spec(
            name_of(9),
            "2-D Riemann problem, configuration 6",
            2,
            one,
            one,
            1.0,
            Boundaries::uniform(FREE),
            (0.05, 0.02),
            (400, 400),
            (400, 400),
            rp_cfg6,
        ),
        "rp_cfg12" => spec(
            name_of(10),
            "2-D Riemann problem, configuration 12",
            2,
            (0.0, 0.6),
            (0.0, 0.6),
            1.0,
            Boundaries::uniform(FREE),
            (0.04, 0.02),
            (600, 600),
            (600, 600),
            rp_cfg12,
        ),
        "implosion" => spec(
            name_of(11),
            "Implosion",
            2,
            (0.0, 0.3),
            (0.0, 0.3),
            2.5,
            Boundaries::uniform(WALL),
            (0.05, 0.01),
            (450, 450),
            (450, 450),
            implosion,
        ),
        "kelvin_helmholtz" => ProblemSpec {
            snapshots: &[1.0, 2.5],
            ..spec(
                name_of(12),
                "Kelvin-Helmholtz instability",
                2,
                (-0.5, 0.5),
                (-0.5, 0.5),
                4.0,
                Boundaries::uniform(PERIODIC),
                (0.05, 0.01),
                (1024, 1024),
                (1024, 1024),
                kelvin_helmholtz,
            )
        },
        "rayleigh_taylor" => ProblemSpec {
            gamma: 5.0 / 3.0,
            source: Source::GravityY,
            snapshots: &[1.95],
            bcs: Boundaries {
                x_lo: WALL,
                x_hi: WALL,
                y_lo: BoundaryCondition::Dirichlet(w2(2.0, 0.0, 0.0, 1.0)),
                y_hi: BoundaryCondition::Dirichlet(w2(1.0, 0.0, 0.0, 2.5)),
            },
            ..spec(
                name_of(13),
                "Rayleigh-Taylor instability",
                2,
                (0.0, 0.25),
                one,
                2.95,
                Boundaries::uniform(WALL),
                (0.05, 0.02),
                (256, 1024),
                (256, 1024),
                rayleigh_taylor,
            )
        },
        other => return Err(UnknownProblem(other.to_string())),
    };
    Ok(p)
}

const fn name_of(k: usize) -> &'static str {
    PROBLEM_NAMES[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in PROBLEM_NAMES {
            let p = build_problem(name).unwrap();
            assert_eq!(p.name, name);
        }
        assert_eq!(build_problem("sod").unwrap_err(), UnknownProblem("sod".into()));
    }

    #[test]
    fn lax_setup() {
        let p = build_problem("lax").unwrap();
        assert_eq!(p.initial(-1.0, 0.0), w1(0.445, 0.31061, 8.928));
        assert_eq!(p.initial(0.0, 0.0), w1(0.5, 0.0, 0.571));
        assert_eq!((p.x_range, p.t_final), ((-5.0, 5.0), 1.3));
        assert_eq!(p.default_c(Scheme::Aaad2), 0.1);
        assert_eq!(p.default_c(Scheme::Aaad5), 0.5);
        assert_eq!(p.default_c(Scheme::Cu2), 0.0);
    }

    #[test]
    fn blast_setup() {
        let p = build_problem("blast").unwrap();
        assert_eq!(p.initial(0.05, 0.0).p, 1000.0);
        assert_eq!(p.initial(0.1, 0.0).p, 0.01);
        assert_eq!(p.initial(0.9, 0.0).p, 0.01);
        assert_eq!(p.initial(0.95, 0.0).p, 100.0);
        assert_eq!(p.bcs, Boundaries::uniform(WALL));
        assert_eq!(p.t_final, 0.038);
    }

    #[test]
    fn riemann_cfg3_quadrants() {
        let p = build_problem("rp_cfg3").unwrap();
        assert_eq!(p.initial(1.1, 1.1), w2(1.5, 0.0, 0.0, 1.5));
        assert_eq!(p.initial(0.5, 1.1), w2(0.5323, 1.206, 0.0, 0.3));
        assert_eq!(p.initial(0.5, 0.5), w2(0.138, 1.206, 1.206, 0.029));
        assert_eq!(p.initial(1.1, 0.5), w2(0.5323, 0.0, 1.206, 0.3));
        assert_eq!((p.y_range, p.t_final), ((0.0, 1.2), 1.0));
    }

    #[test]
    fn accuracy_1d_at_origin() {
        let p = build_problem("accuracy_1d").unwrap();
        let w = p.initial(0.0, 0.0);
        let u = 0.5f64.sqrt();
        assert!((w.u - u).abs() < 1e-15);
        let g = 1.4f64;
        let rho = ((g - 1.0) / (2.0 * g.sqrt()) * (u + 10.0)).powf(2.0 / (g - 1.0));
        assert!((w.rho - rho).abs() < 1e-13 * rho);
        assert!((w.p - rho.powf(g)).abs() < 1e-12 * w.p);
    }

    #[test]
    fn explosion_and_kh_values() {
        let e = build_problem("explosion").unwrap();
        assert_eq!(e.initial(0.0, 0.0), w2(1.0, 0.0, 0.0, 1.0));
        assert_eq!(e.initial(0.4, 0.0), w2(0.125, 0.0, 0.0, 0.1));
        let kh = build_problem("kelvin_helmholtz").unwrap();
        let w = kh.initial(0.1, 0.3);
        assert_eq!(w.rho, 1.0);
        assert!((w.u - (-0.5 + 0.5 * ((0.25f64 - 0.3) / KH_L).exp())).abs() < 1e-15);
        assert!((w.v - 0.01 * (0.4 * PI).sin()).abs() < 1e-15);
        assert_eq!(kh.initial(0.0, -0.25).rho, 2.0);
        assert_eq!(kh.initial(0.0, 0.25).rho, 1.0);
    }

    #[test]
    fn rayleigh_taylor_uses_local_sound_speed() {
        let p = build_problem("rayleigh_taylor").unwrap();
        assert!((p.gamma - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.source, Source::GravityY);
        let w = p.initial(0.0, 0.25);
        let c = (5.0 / 3.0 * 1.5 / 2.0f64).sqrt();
        assert!((w.v + 0.025 * c).abs() < 1e-15);
        assert_eq!(p.initial(0.1, 0.75).p, 2.25);
        match p.bcs.y_hi {
            BoundaryCondition::Dirichlet(top) => assert_eq!(top, w2(1.0, 0.0, 0.0, 2.5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vortex_exact_is_translation() {
        let p = build_problem("accuracy_2d").unwrap();
        let a = p.exact(0.3, -0.2, 0.1).unwrap();
        let b = p.initial(0.2, -0.3);
        for (x, y) in [(a.rho, b.rho), (a.u, b.u), (a.v, b.v), (a.p, b.p)] {
            assert!((x - y).abs() < 1e-14, "{a:?} vs {b:?}");
        }
        let (a, b) = (p.exact(0.7, 0.1, 0.0).unwrap(), p.initial(0.7, 0.1));
        assert!((a.rho - b.rho).abs() < 1e-14 && (a.u - b.u).abs() < 1e-14 && (a.v - b.v).abs() < 1e-14);
        // periodic wrap
        let w = p.exact(-9.95, -9.95, 0.1).unwrap();
        let v = p.initial(9.95, 9.95);
        assert!((w.rho - v.rho).abs() < 1e-12);
    }

    #[test]
    fn default_meshes_initialize_positively() {
        for name in PROBLEM_NAMES {
            let p = build_problem(name).unwrap();
            for scheme in [Scheme::Cu2, Scheme::Aweno5] {
                let (nx, ny) = p.default_mesh(scheme);
                // sample a coarsened grid for the large 2-D meshes
                let (nx, ny) = if p.dim == 2 { (nx / 4, ny / 4) } else { (nx, ny) };
                let grid = p.grid(nx, ny, scheme.ghost());
                for w in p.initial_primitives(&grid) {
                    assert!(w.rho > 0.0 && w.p > 0.0, "{name}: {w:?}");
                }
            }
        }
    }
}
