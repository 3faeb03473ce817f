//! Central-upwind numerical flux with the built-in anti-diffusion term.

use crate::euler::{Direction, Equations, PrimitiveState, State, StateError};
use crate::reconstruct::minmod2;

/// One-sided local propagation speeds, `a_minus <= 0 <= a_plus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPair {
    pub a_plus: f64,
    pub a_minus: f64,
}

impl SpeedPair {
    #[inline]
    pub fn spread(&self) -> f64 {
        self.a_plus - self.a_minus
    }

    /// Speeds whose spread is too small to divide by.
    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.spread() < 1e-10 * self.a_plus.max(-self.a_minus).max(1.0)
    }
}

/// Reconstructed one-sided values `U^-` and `U^+` at an interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceStates<const N: usize> {
    pub u_minus: State<N>,
    pub u_plus: State<N>,
}

/// Which side of an interface produced an invalid reconstructed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum FluxError {
    #[error("reconstructed {side:?} state invalid: {source}")]
    State { side: Side, source: StateError },
    #[error("degenerate local speeds (a+ = {a_plus:e}, a- = {a_minus:e})")]
    DegenerateSpeeds { a_plus: f64, a_minus: f64 },
}

/// Primitive variables and physical flux of both interface states.
#[derive(Debug, Clone, Copy)]
struct Evaluated<const N: usize> {
    w_minus: PrimitiveState,
    w_plus: PrimitiveState,
    f_minus: State<N>,
    f_plus: State<N>,
}

#[inline]
fn evaluate<const N: usize, E: Equations<N>>(
    eq: &E,
    st: &InterfaceStates<N>,
    dir: Direction,
) -> Result<Evaluated<N>, FluxError> {
    let w_minus = eq.primitive(&st.u_minus).map_err(|source| FluxError::State { side: Side::Minus, source })?;
    let w_plus = eq.primitive(&st.u_plus).map_err(|source| FluxError::State { side: Side::Plus, source })?;
    Ok(Evaluated {
        f_minus: eq.flux(&st.u_minus, &w_minus, dir),
        f_plus: eq.flux(&st.u_plus, &w_plus, dir),
        w_minus,
        w_plus,
    })
}

#[inline]
fn speeds_of<const N: usize, E: Equations<N>>(
    eq: &E,
    w_minus: &PrimitiveState,
    w_plus: &PrimitiveState,
    dir: Direction,
) -> SpeedPair {
    let (lo_m, hi_m) = eq.extreme_speeds(w_minus, dir);
    let (lo_p, hi_p) = eq.extreme_speeds(w_plus, dir);
    SpeedPair { a_plus: hi_m.max(hi_p).max(0.0), a_minus: lo_m.min(lo_p).min(0.0) }
}

pub fn local_speeds<const N: usize, E: Equations<N>>(
    eq: &E,
    st: &InterfaceStates<N>,
    dir: Direction,
) -> Result<SpeedPair, FluxError> {
    let ev = evaluate(eq, st, dir)?;
    Ok(speeds_of(eq, &ev.w_minus, &ev.w_plus, dir))
}

#[inline]
fn builtin_term<const N: usize>(
    st: &InterfaceStates<N>,
    f_minus: &State<N>,
    f_plus: &State<N>,
    s: SpeedPair,
) -> State<N> {
    let spread = s.spread();
    let mut q = [0.0; N];
    for k in 0..N {
        let star = (s.a_plus * st.u_plus[k] - s.a_minus * st.u_minus[k] - (f_plus[k] - f_minus[k])) / spread;
        q[k] = minmod2(st.u_plus[k] - star, star - st.u_minus[k]);
    }
    q
}

/// Built-in anti-diffusion `q = minmod(U^+ - U^*, U^* - U^-)`.
pub fn builtin_ad_term<const N: usize, E: Equations<N>>(
    eq: &E,
    st: &InterfaceStates<N>,
    speeds: SpeedPair,
    dir: Direction,
) -> Result<State<N>, FluxError> {
    if speeds.is_degenerate() {
        return Err(FluxError::DegenerateSpeeds { a_plus: speeds.a_plus, a_minus: speeds.a_minus });
    }
    let ev = evaluate(eq, st, dir)?;
    Ok(builtin_term(st, &ev.f_minus, &ev.f_plus, speeds))
}

/// Central-upwind flux at one interface. Degenerate speeds fall back to
/// the arithmetic mean of the one-sided physical fluxes.
pub fn cu_numerical_flux<const N: usize, E: Equations<N>>(
    eq: &E,
    st: &InterfaceStates<N>,
    dir: Direction,
) -> Result<State<N>, FluxError> {
    let ev = evaluate(eq, st, dir)?;
    let s = speeds_of(eq, &ev.w_minus, &ev.w_plus, dir);
    Ok(combine(st, &ev.f_minus, &ev.f_plus, s))
}

#[inline]
fn combine<const N: usize>(st: &InterfaceStates<N>, f_minus: &State<N>, f_plus: &State<N>, s: SpeedPair) -> State<N> {
    let mut out = [0.0; N];
    if s.is_degenerate() {
        for k in 0..N {
            out[k] = 0.5 * (f_minus[k] + f_plus[k]);
        }
        return out;
    }
    let q = builtin_term(st, f_minus, f_plus, s);
    let spread = s.spread();
    let diss = s.a_plus * s.a_minus / spread;
    for k in 0..N {
        out[k] =
            (s.a_plus * f_minus[k] - s.a_minus * f_plus[k]) / spread + diss * ((st.u_plus[k] - st.u_minus[k]) - q[k]);
    }
    out
}
