//! Fifth-order A-WENO flux: a finite-volume interface flux corrected by
//! finite-difference approximations of `F_xx` and `F_xxxx`.

use crate::euler::State;

/// Physical fluxes `F_{j-2} .. F_{j+3}` around `x_{j+1/2}` and the mesh size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionStencil<const N: usize> {
    pub f_values: [State<N>; 6],
    pub h: f64,
}

/// `(1/(48 h^2)) (-5, 39, -34, -34, 39, -5) . F`.
///
/// Mirror pairs are summed first so that reversing the stencil gives a
/// bitwise identical result.
#[inline]
pub fn fxx_correction<const N: usize>(st: &CorrectionStencil<N>) -> State<N> {
    let f = &st.f_values;
    let scale = 1.0 / (48.0 * st.h * st.h);
    let mut out = [0.0; N];
    for k in 0..N {
        let outer = f[0][k] + f[5][k];
        let mid = f[1][k] + f[4][k];
        let inner = f[2][k] + f[3][k];
        out[k] = (-5.0 * outer + 39.0 * mid - 34.0 * inner) * scale;
    }
    out
}

/// `(1/(2 h^4)) (1, -3, 2, 2, -3, 1) . F`.
#[inline]
pub fn fxxxx_correction<const N: usize>(st: &CorrectionStencil<N>) -> State<N> {
    let f = &st.f_values;
    let h2 = st.h * st.h;
    let scale = 1.0 / (2.0 * h2 * h2);
    let mut out = [0.0; N];
    for k in 0..N {
        let outer = f[0][k] + f[5][k];
        let mid = f[1][k] + f[4][k];
        let inner = f[2][k] + f[3][k];
        out[k] = (outer - 3.0 * mid + 2.0 * inner) * scale;
    }
    out
}

/// `H = F^FV - (h^2/24) F_xx + (7 h^4 / 5760) F_xxxx`.
#[inline]
pub fn aweno_flux<const N: usize>(fv: &State<N>, fxx: &State<N>, fxxxx: &State<N>, h: f64) -> State<N> {
    let h2 = h * h;
    let a = h2 / 24.0;
    let b = 7.0 * h2 * h2 / 5760.0;
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = fv[k] - a * fxx[k] + b * fxxxx[k];
    }
    out
}

/// Corrected flux straight from the stencil.
#[inline]
pub fn corrected_flux<const N: usize>(fv: &State<N>, st: &CorrectionStencil<N>) -> State<N> {
    aweno_flux(fv, &fxx_correction(st), &fxxxx_correction(st), st.h)
}
