use aaad::euler::{interface_average, mat_mul, Matrix};
use aaad::{Direction, Equations, Euler1d, Euler2d, GasModel, PrimitiveState, State};
use proptest::prelude::*;

fn gas() -> GasModel {
    GasModel::new(1.4).unwrap()
}

fn max_abs<const N: usize>(m: &Matrix<N>) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// `max |R^{-1} A R - diag(lambda)| / max(1, max |A|)` with `A` the analytic
/// Jacobian at `w` and the eigensystem built from the average of `w` with
/// itself.
fn residual<const N: usize, E: Equations<N>>(eq: &E, w: &PrimitiveState, dir: Direction) -> f64 {
    let avg = interface_average(w, w, eq.gas()).unwrap();
    let pair = eq.eigensystem(&avg, dir).unwrap();
    let a = eq.jacobian(&eq.conserved(w), dir).unwrap();
    let mut d = mat_mul(&pair.r_inv, &mat_mul(&a, &pair.r));
    for (k, row) in d.iter_mut().enumerate() {
        row[k] -= pair.lambda[k];
    }
    max_abs(&d) / max_abs(&a).max(1.0)
}

fn identity_residual<const N: usize, E: Equations<N>>(eq: &E, w: &PrimitiveState, dir: Direction) -> f64 {
    let avg = interface_average(w, w, eq.gas()).unwrap();
    let pair = eq.eigensystem(&avg, dir).unwrap();
    let mut m = mat_mul(&pair.r_inv, &pair.r);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] -= 1.0;
    }
    max_abs(&m)
}

/// Central-difference Jacobian of the physical flux.
fn fd_jacobian<const N: usize, E: Equations<N>>(eq: &E, u: &State<N>, dir: Direction) -> Matrix<N> {
    let mut jac = [[0.0; N]; N];
    for k in 0..N {
        let h = 1e-6 * u[k].abs().max(1.0);
        let (mut up, mut um) = (*u, *u);
        up[k] += h;
        um[k] -= h;
        let fp = eq.flux(&up, &eq.primitive(&up).unwrap(), dir);
        let fm = eq.flux(&um, &eq.primitive(&um).unwrap(), dir);
        for i in 0..N {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

fn jacobian_mismatch<const N: usize, E: Equations<N>>(eq: &E, w: &PrimitiveState, dir: Direction) -> f64 {
    let u = eq.conserved(w);
    let a = eq.jacobian(&u, dir).unwrap();
    let fd = fd_jacobian(eq, &u, dir);
    let mut worst = 0.0f64;
    for i in 0..N {
        for k in 0..N {
            worst = worst.max((a[i][k] - fd[i][k]).abs() / a[i][k].abs().max(1.0));
        }
    }
    worst
}

fn state_1d() -> impl Strategy<Value = PrimitiveState> {
    (0.05f64..20.0, -5.0f64..5.0, 0.05f64..50.0).prop_map(|(r, u, p)| PrimitiveState::new_1d(r, u, p).unwrap())
}

fn state_2d() -> impl Strategy<Value = PrimitiveState> {
    (0.05f64..20.0, -5.0f64..5.0, -5.0f64..5.0, 0.05f64..50.0)
        .prop_map(|(r, u, v, p)| PrimitiveState::new(r, u, v, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn diagonalizes_1d(w in state_1d()) {
        let eq = Euler1d::new(gas());
        prop_assert!(residual(&eq, &w, Direction::X) < 1e-10);
        prop_assert!(identity_residual(&eq, &w, Direction::X) < 1e-10);
    }

    #[test]
    fn diagonalizes_2d(w in state_2d()) {
        let eq = Euler2d::new(gas());
        for dir in [Direction::X, Direction::Y] {
            prop_assert!(residual(&eq, &w, dir) < 1e-10);
            prop_assert!(identity_residual(&eq, &w, dir) < 1e-10);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences(w in state_2d()) {
        let w1 = PrimitiveState { v: 0.0, ..w };
        prop_assert!(jacobian_mismatch(&Euler1d::new(gas()), &w1, Direction::X) < 1e-6);
        for dir in [Direction::X, Direction::Y] {
            prop_assert!(jacobian_mismatch(&Euler2d::new(gas()), &w, dir) < 1e-6);
        }
    }

    #[test]
    fn eigenvalues_shift_with_velocity(w in state_2d(), s in -3.0f64..3.0) {
        let eq = Euler2d::new(gas());
        let shifted = PrimitiveState { u: w.u + s, ..w };
        let lam = |w: &PrimitiveState| {
            let avg = interface_average(w, w, eq.gas()).unwrap();
            eq.eigensystem(&avg, Direction::X).unwrap().lambda
        };
        let (a, b) = (lam(&w), lam(&shifted));
        for k in 0..4 {
            prop_assert!((b[k] - a[k] - s).abs() < 1e-12 * (1.0 + a[k].abs() + b[k].abs()));
        }
    }

    #[test]
    fn eigenvalues_are_ordered_with_sound_gap(w in state_1d()) {
        let eq = Euler1d::new(gas());
        let avg = interface_average(&w, &w, eq.gas()).unwrap();
        let l = eq.eigensystem(&avg, Direction::X).unwrap().lambda;
        let c = (1.4 * w.p / w.rho).sqrt();
        prop_assert!((l[0] - (w.u - c)).abs() < 1e-12 * (1.0 + c + w.u.abs()));
        prop_assert!((l[1] - w.u).abs() < 1e-14 * (1.0 + w.u.abs()));
        prop_assert!((l[2] - (w.u + c)).abs() < 1e-12 * (1.0 + c + w.u.abs()));
    }
}
