//! Semi-discrete assembly and SSP-RK3 time marching.

mod grid;
mod integrate;
mod rhs;

use std::fmt;
use std::str::FromStr;

pub use grid::{fill_ghosts, Boundaries, BoundaryCondition, Field, GridSpec};
pub use integrate::{max_stable_dt, ssprk3_step, Combine, MarchError, Simulation};
pub use rhs::semi_discrete_rhs;

use crate::antidiffusion::AdaptationConfig;
use crate::reconstruct::{LimiterConfig, WenoConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Second-order central-upwind.
    Cu2,
    /// Second-order central-upwind with adaptive anti-diffusion.
    Aaad2,
    /// Fifth-order A-WENO.
    Aweno5,
    /// Fifth-order A-WENO with adaptive anti-diffusion.
    Aaad5,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Cu2, Scheme::Aaad2, Scheme::Aweno5, Scheme::Aaad5];

    pub fn order(self) -> u8 {
        match self {
            Scheme::Cu2 | Scheme::Aaad2 => 2,
            Scheme::Aweno5 | Scheme::Aaad5 => 5,
        }
    }

    pub fn adaptive(self) -> bool {
        matches!(self, Scheme::Aaad2 | Scheme::Aaad5)
    }

    /// Ghost-layer width closing the widest stencil of the scheme.
    pub fn ghost(self) -> usize {
        if self.order() == 2 {
            2
        } else {
            3
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cu2 => "cu2",
            Scheme::Aaad2 => "aaad2",
            Scheme::Aweno5 => "aweno5",
            Scheme::Aaad5 => "aaad5",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown scheme `{0}` (expected cu2, aaad2, aweno5 or aaad5)")]
pub struct UnknownScheme(pub String);

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Adaptation constant; ignored by the non-adaptive schemes.
    pub c_constant: f64,
    pub limiter: LimiterConfig,
    pub eps0: f64,
    pub weno: WenoConfig,
    pub cfl: f64,
    /// `k` in the fifth-order accuracy-mode cap `dt <= k min(dx, dy)^(5/3)`.
    pub dt_cap_k: Option<f64>,
    /// Replace the flux at an interface by the first-order central-upwind
    /// flux when its reconstructed states are inadmissible, and recompute a
    /// stage with first-order fluxes around cells it would make
    /// inadmissible.
    pub positivity_fallback: bool,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, c_constant: f64) -> Self {
        Self {
            scheme,
            c_constant,
            limiter: LimiterConfig::default(),
            eps0: 0.002,
            weno: WenoConfig::default(),
            cfl: 0.4,
            dt_cap_k: None,
            positivity_fallback: true,
        }
    }

    /// Adaptation parameters, or `None` when no anti-diffusion is applied.
    pub fn adaptation(&self) -> Option<AdaptationConfig> {
        if !self.scheme.adaptive() || self.c_constant == 0.0 {
            return None;
        }
        AdaptationConfig::new(self.c_constant, self.eps0, self.scheme.order())
    }
}

/// Source terms added to the semi-discrete right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Source {
    #[default]
    None,
    /// Unit gravity along `+y`: `(0, 0, rho, rho v)`.
    GravityY,
}
