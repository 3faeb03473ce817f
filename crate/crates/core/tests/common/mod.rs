//! Test-only oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

/// Exact solution of the 1-D Riemann problem for an ideal gas, following
/// the two-rarefaction/two-shock pressure function with Newton iteration.
#[derive(Debug, Clone, Copy)]
pub struct ExactRiemann {
    pub left: (f64, f64, f64),
    pub right: (f64, f64, f64),
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
}

impl ExactRiemann {
    /// States are `(rho, u, p)`.
    pub fn new(left: (f64, f64, f64), right: (f64, f64, f64), gamma: f64) -> Self {
        let mut s = Self { left, right, gamma, p_star: 0.0, u_star: 0.0 };
        let (_, ul, pl) = left;
        let (_, ur, pr) = right;
        let mut p = (0.5 * (pl + pr)).max(1e-8);
        for _ in 0..100 {
            let (fl, dl) = s.pressure_function(p, left);
            let (fr, dr) = s.pressure_function(p, right);
            let next = (p - (fl + fr + ur - ul) / (dl + dr)).max(1e-10);
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < 1e-15 {
                break;
            }
        }
        let (fl, _) = s.pressure_function(p, left);
        let (fr, _) = s.pressure_function(p, right);
        s.p_star = p;
        s.u_star = 0.5 * (ul + ur) + 0.5 * (fr - fl);
        s
    }

    fn sound(&self, (rho, _, p): (f64, f64, f64)) -> f64 {
        (self.gamma * p / rho).sqrt()
    }

    fn pressure_function(&self, p: f64, w: (f64, f64, f64)) -> (f64, f64) {
        let g = self.gamma;
        let (rho, _, pk) = w;
        let c = self.sound(w);
        if p > pk {
            let a = 2.0 / ((g + 1.0) * rho);
            let b = (g - 1.0) / (g + 1.0) * pk;
            let q = (a / (p + b)).sqrt();
            ((p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (b + p)))
        } else {
            let r = p / pk;
            let f = 2.0 * c / (g - 1.0) * (r.powf((g - 1.0) / (2.0 * g)) - 1.0);
            (f, r.powf(-(g + 1.0) / (2.0 * g)) / (rho * c))
        }
    }

    /// Density left and right of the contact.
    pub fn star_densities(&self) -> (f64, f64) {
        (self.star_density(self.left), self.star_density(self.right))
    }

    fn star_density(&self, (rho, _, p): (f64, f64, f64)) -> f64 {
        let g = self.gamma;
        let r = self.p_star / p;
        if self.p_star > p {
            let m = (g - 1.0) / (g + 1.0);
            rho * (r + m) / (m * r + 1.0)
        } else {
            rho * r.powf(1.0 / g)
        }
    }

    /// `(rho, u, p)` at similarity coordinate `s = (x - x0) / t`.
    pub fn sample(&self, s: f64) -> (f64, f64, f64) {
        let g = self.gamma;
        let (rl, ul, pl) = self.left;
        let (rr, ur, pr) = self.right;
        let (dl, dr) = self.star_densities();
        if s <= self.u_star {
            let cl = self.sound(self.left);
            if self.p_star > pl {
                let sl = ul - cl * ((g + 1.0) / (2.0 * g) * self.p_star / pl + (g - 1.0) / (2.0 * g)).sqrt();
                if s <= sl {
                    self.left
                } else {
                    (dl, self.u_star, self.p_star)
                }
            } else {
                let head = ul - cl;
                let tail = self.u_star - cl * (self.p_star / pl).powf((g - 1.0) / (2.0 * g));
                if s <= head {
                    self.left
                } else if s >= tail {
                    (dl, self.u_star, self.p_star)
                } else {
                    let k = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * cl) * (ul - s);
                    let rho = rl * k.powf(2.0 / (g - 1.0));
                    let u = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * ul + s);
                    (rho, u, pl * k.powf(2.0 * g / (g - 1.0)))
                }
            }
        } else {
            let cr = self.sound(self.right);
            if self.p_star > pr {
                let sr = ur + cr * ((g + 1.0) / (2.0 * g) * self.p_star / pr + (g - 1.0) / (2.0 * g)).sqrt();
                if s >= sr {
                    self.right
                } else {
                    (dr, self.u_star, self.p_star)
                }
            } else {
                let head = ur + cr;
                let tail = self.u_star + cr * (self.p_star / pr).powf((g - 1.0) / (2.0 * g));
                if s >= head {
                    self.right
                } else if s <= tail {
                    (dr, self.u_star, self.p_star)
                } else {
                    let k = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * cr) * (ur - s);
                    let rho = rr * k.powf(2.0 / (g - 1.0));
                    let u = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * ur + s);
                    (rho, u, pr * k.powf(2.0 * g / (g - 1.0)))
                }
            }
        }
    }

    /// Density sampled at cell centres `x` at time `t` for a jump at `x0`.
    pub fn density_at(&self, xs: &[f64], x0: f64, t: f64) -> Vec<f64> {
        xs.iter().map(|&x| self.sample((x - x0) / t).0).collect()
    }
}
