//! Interface reconstruction in local characteristic variables.
//!
//! Second order: generalized minmod MUSCL slopes. Fifth order: WENO-Z
//! interpolation of point values.

use crate::euler::{EigenPair, State};

/// Generalized minmod of an arbitrary list: the smallest argument if all are
/// positive, the largest if all are negative, zero otherwise.
pub fn minmod(args: &[f64]) -> f64 {
    let Some((&first, rest)) = args.split_first() else {
        return 0.0;
    };
    if args.iter().all(|&z| z > 0.0) {
        rest.iter().fold(first, |m, &z| m.min(z))
    } else if args.iter().all(|&z| z < 0.0) {
        rest.iter().fold(first, |m, &z| m.max(z))
    } else {
        0.0
    }
}

#[inline]
pub fn minmod2(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

#[inline]
pub fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Minmod parameter `theta`, restricted to `[1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterConfig {
    theta: f64,
}

impl LimiterConfig {
    pub fn new(theta: f64) -> Option<Self> {
        (1.0..=2.0).contains(&theta).then_some(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self { theta: 2.0 }
    }
}

/// Limited slope of the middle value of three consecutive samples.
#[inline]
fn limited_slope(left: f64, mid: f64, right: f64, dx: f64, theta: f64) -> f64 {
    minmod3(theta * (mid - left) / dx, (right - left) / (2.0 * dx), theta * (right - mid) / dx)
}

/// Characteristic values on cells `j-1 .. j+2` around the interface
/// `x_{j+1/2}`, producing the left and right interface values.
pub fn muscl_interface_states<const N: usize>(
    stencil: &[State<N>; 4],
    dx: f64,
    cfg: LimiterConfig,
) -> (State<N>, State<N>) {
    let theta = cfg.theta;
    let [gm1, g0, g1, g2] = stencil;
    let mut minus = [0.0; N];
    let mut plus = [0.0; N];
    for k in 0..N {
        let s0 = limited_slope(gm1[k], g0[k], g1[k], dx, theta);
        let s1 = limited_slope(g0[k], g1[k], g2[k], dx, theta);
        minus[k] = g0[k] + 0.5 * dx * s0;
        plus[k] = g1[k] - 0.5 * dx * s1;
    }
    (minus, plus)
}

/// WENO-Z parameters: exponent `p`, regularisation `epsilon`, and the
/// linear weights of the three parabolic sub-stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoConfig {
    pub p_exponent: i32,
    pub epsilon: f64,
    pub d: [f64; 3],
}

impl Default for WenoConfig {
    fn default() -> Self {
        Self { p_exponent: 2, epsilon: 1e-12, d: [1.0 / 16.0, 5.0 / 8.0, 5.0 / 16.0] }
    }
}

/// Values of the three interpolating parabolas at `x_{j+1/2}`, from
/// `psi_{j-2..j+2}`.
#[inline]
pub fn wenoz_parabolas(psi: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *psi;
    [0.375 * a - 1.25 * b + 1.875 * c, -0.125 * b + 0.75 * c + 0.375 * d, 0.375 * c + 0.75 * d - 0.125 * e]
}

#[inline]
pub fn wenoz_smoothness(psi: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *psi;
    const K: f64 = 13.0 / 12.0;
    let sq = |x: f64| x * x;
    [
        K * sq(a - 2.0 * b + c) + 0.25 * sq(a - 4.0 * b + 3.0 * c),
        K * sq(b - 2.0 * c + d) + 0.25 * sq(b - d),
        K * sq(c - 2.0 * d + e) + 0.25 * sq(3.0 * c - 4.0 * d + e),
    ]
}

/// Nonlinear WENO-Z weights for `psi_{j-2..j+2}`.
#[inline]
pub fn wenoz_weights(psi: &[f64; 5], cfg: &WenoConfig) -> [f64; 3] {
    let beta = wenoz_smoothness(psi);
    let tau5 = (beta[2] - beta[0]).abs();
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        let ratio = tau5 / (beta[k] + cfg.epsilon);
        alpha[k] = cfg.d[k] * (1.0 + ratio.powi(cfg.p_exponent));
    }
    let sum = alpha[0] + alpha[1] + alpha[2];
    [alpha[0] / sum, alpha[1] / sum, alpha[2] / sum]
}

/// Left-sided value `psi^-_{j+1/2}` from `psi_{j-2..j+2}`.
#[inline]
pub fn wenoz_minus_with(psi: &[f64; 5], cfg: &WenoConfig) -> f64 {
    let w = wenoz_weights(psi, cfg);
    let p = wenoz_parabolas(psi);
    w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
}

#[inline]
pub fn wenoz_minus(psi: &[f64; 5]) -> f64 {
    wenoz_minus_with(psi, &WenoConfig::default())
}

/// Right-sided value `psi^+_{j+1/2}` from `psi_{j-1..j+3}`, obtained by
/// mirroring the data about the interface.
#[inline]
pub fn wenoz_plus_with(psi: &[f64; 5], cfg: &WenoConfig) -> f64 {
    let [a, b, c, d, e] = *psi;
    wenoz_minus_with(&[e, d, c, b, a], cfg)
}

#[inline]
pub fn wenoz_plus(psi: &[f64; 5]) -> f64 {
    wenoz_plus_with(psi, &WenoConfig::default())
}

/// Characteristic values on cells `j-2 .. j+3` around `x_{j+1/2}`.
pub fn wenoz_interface_states<const N: usize>(stencil: &[State<N>; 6], cfg: &WenoConfig) -> (State<N>, State<N>) {
    let mut minus = [0.0; N];
    let mut plus = [0.0; N];
    for k in 0..N {
        let col = [stencil[0][k], stencil[1][k], stencil[2][k], stencil[3][k], stencil[4][k], stencil[5][k]];
        minus[k] = wenoz_minus_with(&[col[0], col[1], col[2], col[3], col[4]], cfg);
        plus[k] = wenoz_plus_with(&[col[1], col[2], col[3], col[4], col[5]], cfg);
    }
    (minus, plus)
}

pub fn project_characteristic<const N: usize>(states: &[State<N>], pair: &EigenPair<N>) -> Vec<State<N>> {
    states.iter().map(|u| pair.project(u)).collect()
}

pub fn lift_characteristic<const N: usize>(chars: &[State<N>], pair: &EigenPair<N>) -> Vec<State<N>> {
    chars.iter().map(|g| pair.lift(g)).collect()
}
