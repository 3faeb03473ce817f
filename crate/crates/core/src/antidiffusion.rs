//! Adaptive artificial anti-diffusion acting in the linearly degenerate
//! characteristic fields.
//!
//! Cells are labelled from normalized minmod smoothness indicators of the
//! density and pressure. Each interface then receives a coefficient that is
//! `O(dx)` next to contact-like cells and of high order elsewhere, and the
//! correction `-Q (U_{j+1} - U_j) / dx` is subtracted from the base flux,
//! where `Q = R diag(0, -C, .., -C, 0) R^{-1}`.

use crate::euler::{EigenPair, Matrix, State};
use crate::reconstruct::minmod2;

/// Cell label used to pick the anti-diffusion strength. Ordered by
/// precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum CellClass {
    #[default]
    Smooth,
    Rough,
    RoughContact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptationConfig {
    /// Tunable constant `C`; zero disables the correction.
    pub c_constant: f64,
    /// Threshold in the density peak test.
    pub epsilon0: f64,
    /// Formal order of the underlying scheme (2 or 5).
    pub order: u8,
}

impl AdaptationConfig {
    pub fn new(c_constant: f64, epsilon0: f64, order: u8) -> Option<Self> {
        let valid = c_constant >= 0.0 && epsilon0 > 0.0 && matches!(order, 2 | 5);
        valid.then_some(Self { c_constant, epsilon0, order })
    }
}

/// `minmod(w_r - w_c, w_c - w_l) / max(w_l, w_c, w_r)` for positive samples.
#[inline]
pub fn smoothness_indicator(w_left: f64, w_center: f64, w_right: f64) -> f64 {
    let m = minmod2(w_right - w_center, w_center - w_left);
    if m == 0.0 {
        return 0.0;
    }
    m / w_left.max(w_center).max(w_right)
}

/// Density and pressure indicators along a line of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SiField {
    pub s_rho: Vec<f64>,
    pub s_p: Vec<f64>,
}

/// Label every cell of a line (ghost cells included).
///
/// A cell `j` whose density indicator peaks (`|s_j| > max(|s_{j-1}|,
/// |s_{j+1}|) + eps0`) marks `j-1, j, j+1` as rough; if its pressure
/// indicator does not peak it marks them as rough-contact instead. Peaks are
/// only tested where the five-cell window `j-2..j+2` lies inside the line,
/// and the `ghost` outermost cells on each side are always smooth.
pub fn classify_cells(rho: &[f64], p: &[f64], eps0: f64, ghost: usize) -> Vec<CellClass> {
    let n = rho.len();
    assert_eq!(n, p.len(), "density and pressure lines differ in length");
    let mut out = vec![CellClass::Smooth; n];
    if n < 5 {
        return out;
    }
    let si = |w: &[f64], j: usize| smoothness_indicator(w[j - 1], w[j], w[j + 1]).abs();
    let s_rho: Vec<f64> = (0..n).map(|j| if j == 0 || j + 1 == n { 0.0 } else { si(rho, j) }).collect();

    // Flags are accumulated first and resolved afterwards so the result does
    // not depend on traversal order.
    let mut rough = vec![false; n];
    let mut contact = vec![false; n];
    for j in 2..n - 2 {
        if s_rho[j] > s_rho[j - 1].max(s_rho[j + 1]) + eps0 {
            rough[j - 1..=j + 1].fill(true);
            let sp = si(p, j);
            if sp < si(p, j - 1).max(si(p, j + 1)) {
                contact[j - 1..=j + 1].fill(true);
            }
        }
    }
    for j in ghost..n.saturating_sub(ghost) {
        out[j] = if contact[j] {
            CellClass::RoughContact
        } else if rough[j] {
            CellClass::Rough
        } else {
            CellClass::Smooth
        };
    }
    out
}

/// Labels of a periodic line of `n >= 5` cells (no ghosts): the line is
/// wrapped so every cell sees the peaks of its cyclic neighbours.
pub fn classify_cells_periodic(rho: &[f64], p: &[f64], eps0: f64) -> Vec<CellClass> {
    let n = rho.len();
    assert_eq!(n, p.len(), "density and pressure lines differ in length");
    if n < 5 {
        return vec![CellClass::Smooth; n];
    }
    const PAD: usize = 3;
    let wrap = |w: &[f64]| -> Vec<f64> { w[n - PAD..].iter().chain(w).chain(&w[..PAD]).copied().collect() };
    let mut cls = classify_cells(&wrap(rho), &wrap(p), eps0, 0);
    cls.drain(..PAD);
    cls.truncate(n);
    cls
}

/// Interface coefficient from the labels of the two adjacent cells.
#[inline]
pub fn ad_coefficient(left: CellClass, right: CellClass, dx: f64, cfg: &AdaptationConfig) -> f64 {
    let c = cfg.c_constant;
    let worst = left.max(right);
    match (cfg.order, worst) {
        (_, CellClass::RoughContact) => c * dx,
        (2, _) => c * dx * dx,
        (_, CellClass::Rough) => c * dx * dx,
        _ => c * dx.powi(5),
    }
}

/// Anti-diffusion matrix acting at one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdMatrix<const N: usize> {
    pub q: Matrix<N>,
}

impl<const N: usize> AdMatrix<N> {
    pub fn is_zero(&self) -> bool {
        self.q.iter().flatten().all(|&x| x == 0.0)
    }
}

/// `Q = R diag(sel) R^{-1}` with `-c_interface` in the `degenerate` slots.
pub fn ad_matrix<const N: usize>(pair: &EigenPair<N>, c_interface: f64, degenerate: &[usize]) -> AdMatrix<N> {
    let mut q = [[0.0; N]; N];
    if c_interface == 0.0 {
        return AdMatrix { q };
    }
    for i in 0..N {
        for j in 0..N {
            q[i][j] = degenerate.iter().map(|&k| pair.r[i][k] * (-c_interface) * pair.r_inv[k][j]).sum();
        }
    }
    AdMatrix { q }
}

/// `F_base - Q (U_{j+1} - U_j) / dx` using cell values.
pub fn apply_ad<const N: usize>(
    flux_base: &State<N>,
    q: &AdMatrix<N>,
    u_left_cell: &State<N>,
    u_right_cell: &State<N>,
    dx: f64,
) -> State<N> {
    if q.is_zero() {
        return *flux_base;
    }
    let mut out = *flux_base;
    for i in 0..N {
        let mut acc = 0.0;
        for j in 0..N {
            acc += q.q[i][j] * (u_right_cell[j] - u_left_cell[j]);
        }
        out[i] -= acc / dx;
    }
    out
}

/// Factored form of [`apply_ad`]: `Q du / dx` evaluated as
/// `R (Lambda (R^{-1} du)) / dx` without forming `Q`.
#[inline]
pub fn ad_flux_correction<const N: usize>(
    pair: &EigenPair<N>,
    c_interface: f64,
    degenerate: &[usize],
    du: &State<N>,
    dx: f64,
) -> State<N> {
    let mut g = [0.0; N];
    for &k in degenerate {
        let row = &pair.r_inv[k];
        let mut acc = 0.0;
        for j in 0..N {
            acc += row[j] * du[j];
        }
        g[k] = -c_interface * acc;
    }
    let mut out = pair.lift(&g);
    for o in &mut out {
        *o /= dx;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{interface_average, mat_vec, Direction, Equations, Euler1d, Euler2d, PrimitiveState};
    use proptest::prelude::*;

    fn cfg(c: f64, order: u8) -> AdaptationConfig {
        AdaptationConfig::new(c, 0.002, order).unwrap()
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(smoothness_indicator(1.0, 1.0, 1.0), 0.0);
        assert_eq!(smoothness_indicator(1.0, 2.0, 4.0), 0.25);
        assert_eq!(smoothness_indicator(1.0, 2.0, 1.0), 0.0);
        assert_eq!(smoothness_indicator(4.0, 2.0, 1.0), -0.25);
    }

    #[test]
    fn constant_data_is_smooth() {
        let rho = vec![1.3; 12];
        let p = vec![0.7; 12];
        assert!(classify_cells(&rho, &p, 0.002, 2).iter().all(|&c| c == CellClass::Smooth));
    }

    /// A sharp step gives zero indicators everywhere (one minmod argument is
    /// always zero), so one intermediate cell is used. Ghosts are 0,1 and 8,9.
    ///
    /// | j     | 3 | 4 | 5    | 6 | 7 |
    /// |-------|---|---|------|---|---|
    /// | rho   | 1 | 1 | 1.5  | 2 | 2 |
    /// | s_rho | 0 | 0 | 0.25 | 0 | 0 |
    /// | s_p   | 0 | 0 | 0    | 0 | 0 |
    ///
    /// The density peaks at j=5. The pressure test `0 < 0` fails, so cells
    /// 4..6 are rough.
    #[test]
    fn density_ramp_with_constant_pressure() {
        let rho = [1.0, 1.0, 1.0, 1.0, 1.0, 1.5, 2.0, 2.0, 2.0, 2.0];
        let p = [1.0; 10];
        let cls = classify_cells(&rho, &p, 0.002, 2);
        let want = [0, 0, 0, 0, 1, 1, 1, 0, 0, 0];
        for (j, (&c, &w)) in cls.iter().zip(&want).enumerate() {
            let expect = if w == 1 { CellClass::Rough } else { CellClass::Smooth };
            assert_eq!(c, expect, "cell {j}");
        }
    }

    /// | j     | 4 | 5   | 6      |
    /// |-------|---|-----|--------|
    /// | rho   | 1 | 1.5 | 2      |
    /// | p     | 1 | 1   | 1.01   |
    /// | s_rho | 0 | 0.25| 0      |
    /// | s_p   | 0 | 0   | 0.0097 |
    ///
    /// At j=5 the pressure indicator is below its neighbour's, so cells 4..6
    /// are rough-contact.
    #[test]
    fn contact_like_step_is_rough_contact() {
        let rho = [1.0, 1.0, 1.0, 1.0, 1.0, 1.5, 2.0, 2.0, 2.0, 2.0];
        let p = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.01, 1.03, 1.06, 1.1];
        let cls = classify_cells(&rho, &p, 0.002, 2);
        assert_eq!(&cls[4..7], &[CellClass::RoughContact; 3]);
        assert_eq!(cls[3], CellClass::Smooth);
        assert_eq!(cls[7], CellClass::Smooth);
    }

    /// Lax-like left/right states with one intermediate cell; density and
    /// pressure both peak at j=5, so no contact is flagged.
    ///
    /// | j     | 4     | 5      | 6     |
    /// |-------|-------|--------|-------|
    /// | rho   | 0.445 | 0.4725 | 0.5   |
    /// | p     | 8.928 | 4.7495 | 0.571 |
    /// | s_rho | 0     | 0.055  | 0     |
    /// | s_p   | 0     | -0.468 | 0     |
    #[test]
    fn shock_like_step_is_rough_only() {
        let rho = [0.445, 0.445, 0.445, 0.445, 0.445, 0.4725, 0.5, 0.5, 0.5, 0.5];
        let p = [8.928, 8.928, 8.928, 8.928, 8.928, 4.7495, 0.571, 0.571, 0.571, 0.571];
        let s = smoothness_indicator(0.445, 0.4725, 0.5);
        assert!((s - 0.055).abs() < 1e-12);
        let cls = classify_cells(&rho, &p, 0.002, 2);
        assert_eq!(&cls[4..7], &[CellClass::Rough; 3]);
        assert!(cls.iter().all(|&c| c != CellClass::RoughContact));
    }

    #[test]
    fn ghosts_are_smooth() {
        let rho = [1.0, 1.5, 2.0, 2.0, 2.0, 2.0];
        let p = [1.0, 1.0, 1.01, 1.03, 1.06, 1.1];
        let cls = classify_cells(&rho, &p, 0.002, 2);
        assert_eq!(cls[0], CellClass::Smooth);
        assert_eq!(cls[1], CellClass::Smooth);
    }

    #[test]
    fn coefficient_examples() {
        use CellClass::*;
        let c2 = cfg(0.1, 2);
        assert!((ad_coefficient(RoughContact, Smooth, 0.01, &c2) - 0.001).abs() < 1e-18);
        assert!((ad_coefficient(Smooth, Smooth, 0.01, &c2) - 1e-5).abs() < 1e-18);
        assert!((ad_coefficient(Rough, Smooth, 0.01, &c2) - 1e-5).abs() < 1e-18);
        let c5 = cfg(0.1, 5);
        assert!((ad_coefficient(Rough, Smooth, 0.1, &c5) - 1e-3).abs() < 1e-16);
        assert!((ad_coefficient(Smooth, Smooth, 0.1, &c5) - 1e-6).abs() < 1e-18);
        assert!((ad_coefficient(Smooth, RoughContact, 0.1, &c5) - 1e-2).abs() < 1e-16);
    }

    #[test]
    fn config_validation() {
        assert!(AdaptationConfig::new(-1.0, 0.002, 2).is_none());
        assert!(AdaptationConfig::new(0.1, 0.0, 2).is_none());
        assert!(AdaptationConfig::new(0.1, 0.002, 3).is_none());
    }

    fn pair1() -> EigenPair<3> {
        let eq = Euler1d::default();
        let a = PrimitiveState::new_1d(1.0, 0.2, 1.0).unwrap();
        let b = PrimitiveState::new_1d(0.6, 0.4, 0.8).unwrap();
        eq.eigensystem(&interface_average(&a, &b, eq.gas()).unwrap(), Direction::X).unwrap()
    }

    fn column<const N: usize>(m: &Matrix<N>, k: usize) -> State<N> {
        let mut c = [0.0; N];
        for i in 0..N {
            c[i] = m[i][k];
        }
        c
    }

    #[test]
    fn zero_coefficient_gives_zero_matrix() {
        assert!(ad_matrix(&pair1(), 0.0, Euler1d::DEGENERATE).is_zero());
    }

    #[test]
    fn q_acts_only_on_contact_field() {
        let pair = pair1();
        let c = 0.37;
        let q = ad_matrix(&pair, c, Euler1d::DEGENERATE);
        for k in [0, 2] {
            let v = mat_vec(&q.q, &column(&pair.r, k));
            assert!(v.iter().all(|x| x.abs() < 1e-12), "{v:?}");
        }
        let r2 = column(&pair.r, 1);
        let v = mat_vec(&q.q, &r2);
        for i in 0..3 {
            assert!((v[i] + c * r2[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn q_2d_annihilates_acoustic_fields() {
        let eq = Euler2d::default();
        let a = PrimitiveState::new(1.0, 0.2, -0.3, 1.0).unwrap();
        let b = PrimitiveState::new(0.5, -0.1, 0.4, 0.6).unwrap();
        let avg = interface_average(&a, &b, eq.gas()).unwrap();
        for dir in [Direction::X, Direction::Y] {
            let pair = eq.eigensystem(&avg, dir).unwrap();
            let q = ad_matrix(&pair, 0.2, Euler2d::DEGENERATE);
            for k in [0, 3] {
                let v = mat_vec(&q.q, &column(&pair.r, k));
                assert!(v.iter().all(|x| x.abs() < 1e-12));
            }
            for k in [1, 2] {
                let rk = column(&pair.r, k);
                let v = mat_vec(&q.q, &rk);
                for i in 0..4 {
                    assert!((v[i] + 0.2 * rk[i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn apply_ad_identities() {
        let pair = pair1();
        let q = ad_matrix(&pair, 0.1, Euler1d::DEGENERATE);
        let f = [0.3, -0.2, 1.1];
        let u = [1.0, 0.5, 2.0];
        assert_eq!(apply_ad(&f, &q, &u, &u, 0.05), f);
        let zero = ad_matrix(&pair, 0.0, Euler1d::DEGENERATE);
        assert_eq!(apply_ad(&f, &zero, &u, &[2.0, 0.0, 5.0], 0.05), f);
    }

    #[test]
    fn contact_jump_correction() {
        // du along r2: Q du = -C du, so F_AD = F + C du / dx.
        let pair = pair1();
        let (c, dx, amp) = (0.05, 0.1, 0.3);
        let r2 = column(&pair.r, 1);
        let ul = [1.0, 0.2, 2.6];
        let ur = [ul[0] + amp * r2[0], ul[1] + amp * r2[1], ul[2] + amp * r2[2]];
        let f = [0.0; 3];
        let q = ad_matrix(&pair, c, Euler1d::DEGENERATE);
        let out = apply_ad(&f, &q, &ul, &ur, dx);
        // direct matrix product
        let du = [ur[0] - ul[0], ur[1] - ul[1], ur[2] - ul[2]];
        let qdu = mat_vec(&q.q, &du);
        for i in 0..3 {
            assert!((out[i] - (-qdu[i] / dx)).abs() < 1e-13);
            assert!((out[i] - c * du[i] / dx).abs() < 1e-12);
        }
        let fac = ad_flux_correction(&pair, c, Euler1d::DEGENERATE, &du, dx);
        for i in 0..3 {
            assert!((fac[i] - qdu[i] / dx).abs() < 1e-13);
        }
    }

    #[test]
    fn periodic_labels_are_shift_equivariant() {
        let rho: Vec<f64> = (0..16).map(|j| if (4..9).contains(&j) { 2.0 } else { 1.0 } + 0.01 * j as f64).collect();
        let rho = {
            let mut r = rho;
            r[8] = 1.55;
            r
        };
        let p: Vec<f64> = (0..16).map(|j| 1.0 + 0.02 * ((j as f64) * 0.7).sin()).collect();
        let base = classify_cells_periodic(&rho, &p, 0.002);
        assert!(base.iter().any(|&c| c != CellClass::Smooth));
        for s in 1..16 {
            let mut r = rho.clone();
            let mut q = p.clone();
            r.rotate_left(s);
            q.rotate_left(s);
            let mut shifted = classify_cells_periodic(&r, &q, 0.002);
            shifted.rotate_right(s);
            assert_eq!(shifted, base, "shift {s}");
        }
    }

    proptest! {
        #[test]
        fn coefficient_monotone(dx in 1e-4f64..0.99, c in 0.0f64..2.0, order in prop::sample::select(vec![2u8, 5])) {
            use CellClass::*;
            let cf = cfg(c, order);
            let s = ad_coefficient(Smooth, Smooth, dx, &cf);
            let r = ad_coefficient(Rough, Smooth, dx, &cf);
            let rc = ad_coefficient(RoughContact, Rough, dx, &cf);
            prop_assert!(rc >= r && r >= s);
        }

        #[test]
        fn classification_is_deterministic_and_bounded(
            rho in prop::collection::vec(0.1f64..3.0, 5..30),
            seed in 0.1f64..2.0,
        ) {
            let p: Vec<f64> = rho.iter().map(|r| seed + r.sin().abs()).collect();
            let a = classify_cells(&rho, &p, 0.002, 2);
            let b = classify_cells(&rho, &p, 0.002, 2);
            prop_assert_eq!(&a, &b);
            for j in 1..rho.len() - 1 {
                prop_assert!(smoothness_indicator(rho[j - 1], rho[j], rho[j + 1]).abs() <= 1.0);
            }
            // reversing the line reverses the labels
            let rr: Vec<f64> = rho.iter().rev().copied().collect();
            let pr: Vec<f64> = p.iter().rev().copied().collect();
            let mut c = classify_cells(&rr, &pr, 0.002, 2);
            c.reverse();
            prop_assert_eq!(a, c);
        }

        #[test]
        fn q_nonzero_eigenvalues(r1 in 0.2f64..2.0, u1 in -1.0f64..1.0, p1 in 0.2f64..2.0, cc in 0.0f64..1.0) {
            let eq = Euler1d::default();
            let w = PrimitiveState::new_1d(r1, u1, p1).unwrap();
            let pair = eq.eigensystem(&interface_average(&w, &w, eq.gas()).unwrap(), Direction::X).unwrap();
            let q = ad_matrix(&pair, cc, Euler1d::DEGENERATE);
            // R^{-1} Q R = diag(0, -C, 0)
            let d = crate::euler::mat_mul(&pair.r_inv, &crate::euler::mat_mul(&q.q, &pair.r));
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == 1 && j == 1 { -cc } else { 0.0 };
                    prop_assert!((d[i][j] - want).abs() < 1e-12);
                }
            }
        }
    }
}
