//! Error norms, grid restriction, convergence rates and profile diagnostics.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("field shapes differ ({left} vs {right} values)")]
    ShapeMismatch { left: usize, right: usize },
    #[error("Runge deltas are degenerate (d12 = {d12:e}, d24 = {d24:e})")]
    DegenerateDeltas { d12: f64, d24: f64 },
    #[error("no transition between the given plateau values")]
    NoTransitionFound,
    #[error("cannot restrict {fine} cells onto {coarse}")]
    BadRatio { fine: usize, coarse: usize },
}

/// `sum |a - b| * volume`.
pub fn l1_error(a: &[f64], b: &[f64], cell_volume: f64) -> Result<f64, MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::ShapeMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * cell_volume)
}

/// How a fine solution is represented on a coarser grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// Mean of the fine cells covering each coarse cell (cell averages).
    CellAverage,
    /// Value at the coarse cell centre (point values): the coincident fine
    /// centre for odd ratios, six-point midpoint interpolation for ratio 2.
    PointValue,
}

/// Midpoint interpolation weights on `j-2 .. j+3`, exact for quintics.
const MID6: [f64; 6] = [3.0 / 256.0, -25.0 / 256.0, 150.0 / 256.0, 150.0 / 256.0, -25.0 / 256.0, 3.0 / 256.0];

fn halve_points(fine: &[f64], periodic: bool) -> Vec<f64> {
    let n = fine.len() as isize;
    let at = |k: isize| -> f64 {
        let k = if periodic { k.rem_euclid(n) } else { k.clamp(0, n - 1) };
        fine[k as usize]
    };
    (0..n / 2)
        .map(|c| {
            let b = 2 * c - 2;
            // mirror pairs first
            MID6[0] * (at(b) + at(b + 5)) + MID6[1] * (at(b + 1) + at(b + 4)) + MID6[2] * (at(b + 2) + at(b + 3))
        })
        .collect()
}

/// Restrict a line of `fine.len()` cells onto `coarse_len` cells.
pub fn restrict_line(
    fine: &[f64],
    coarse_len: usize,
    kind: Restriction,
    periodic: bool,
) -> Result<Vec<f64>, MetricError> {
    let bad = MetricError::BadRatio { fine: fine.len(), coarse: coarse_len };
    if coarse_len == 0 || !fine.len().is_multiple_of(coarse_len) {
        return Err(bad);
    }
    let r = fine.len() / coarse_len;
    match kind {
        Restriction::CellAverage => Ok(fine.chunks(r).map(|c| c.iter().sum::<f64>() / r as f64).collect()),
        Restriction::PointValue if r % 2 == 1 => Ok(fine.iter().skip(r / 2).step_by(r).copied().collect()),
        Restriction::PointValue if r.is_power_of_two() => {
            let mut v = fine.to_vec();
            while v.len() > coarse_len {
                v = halve_points(&v, periodic);
            }
            Ok(v)
        }
        Restriction::PointValue => Err(bad),
    }
}

/// Tensor-product restriction of a row-major `nx * ny` field.
#[allow(clippy::too_many_arguments)]
pub fn restrict_grid(
    fine: &[f64],
    (nx, ny): (usize, usize),
    (cx, cy): (usize, usize),
    kind: Restriction,
    (periodic_x, periodic_y): (bool, bool),
) -> Result<Vec<f64>, MetricError> {
    if fine.len() != nx * ny {
        return Err(MetricError::ShapeMismatch { left: fine.len(), right: nx * ny });
    }
    let mut rows = Vec::with_capacity(cx * ny);
    for j in 0..ny {
        rows.extend(restrict_line(&fine[j * nx..(j + 1) * nx], cx, kind, periodic_x)?);
    }
    let mut out = vec![0.0; cx * cy];
    for i in 0..cx {
        let col: Vec<f64> = (0..ny).map(|j| rows[j * cx + i]).collect();
        for (j, v) in restrict_line(&col, cy, kind, periodic_y)?.into_iter().enumerate() {
            out[j * cx + i] = v;
        }
    }
    Ok(out)
}

/// Runge estimates from `d12 = |u_h - u_2h|` and `d24 = |u_2h - u_4h|`:
/// `(d12^2 / |d12 - d24|, log2(d24 / d12))`.
pub fn runge_error_rate(d12: f64, d24: f64) -> Result<(f64, f64), MetricError> {
    let degenerate =
        !(d12 > 0.0 && d24 > 0.0) || !(d12.is_finite() && d24.is_finite()) || (d12 - d24).abs() <= 1e-14 * d12.max(d24);
    if degenerate {
        return Err(MetricError::DegenerateDeltas { d12, d24 });
    }
    Ok((d12 * d12 / (d12 - d24).abs(), (d24 / d12).log2()))
}

/// Errors and observed rates over a sequence of refined meshes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Cells per direction, coarse to fine.
    pub meshes: Vec<usize>,
    pub errors: Vec<Option<f64>>,
    pub rates: Vec<Option<f64>>,
}

impl ConvergenceReport {
    /// From successive differences `deltas[k] = |u_k - u_{k-1}|` (the first
    /// entry is unused). Levels without two coarser neighbours get no
    /// estimate.
    pub fn from_runge(meshes: Vec<usize>, deltas: &[f64]) -> Result<Self, MetricError> {
        let n = meshes.len();
        if deltas.len() != n {
            return Err(MetricError::ShapeMismatch { left: deltas.len(), right: n });
        }
        let mut errors = vec![None; n];
        let mut rates = vec![None; n];
        for k in 2..n {
            let (e, r) = runge_error_rate(deltas[k], deltas[k - 1])?;
            errors[k] = Some(e);
            rates[k] = Some(r);
        }
        Ok(Self { meshes, errors, rates })
    }

    /// From errors against a known solution; rates between neighbours.
    pub fn from_errors(meshes: Vec<usize>, errs: &[f64]) -> Self {
        let n = meshes.len();
        let mut rates = vec![None; n];
        for k in 1..n {
            let ratio = meshes[k] as f64 / meshes[k - 1] as f64;
            rates[k] = Some((errs[k - 1] / errs[k]).ln() / ratio.ln());
        }
        Self { meshes, errors: errs.iter().map(|&e| Some(e)).collect(), rates }
    }

    pub fn to_table(&self) -> String {
        let mut s = String::from("cells        error      rate\n");
        for k in 0..self.meshes.len() {
            let e = self.errors[k].map_or("       ---".into(), |e| format!("{e:10.3e}"));
            let r = self.rates[k].map_or("  ---".into(), |r| format!("{r:5.2}"));
            let _ = writeln!(s, "{:>5}   {e}   {r}", self.meshes[k]);
        }
        s
    }
}

/// Cells inside the 10%-90% band of the transition from `rho_left` to
/// `rho_right`.
///
/// The transition is located where the profile crosses the mid value in
/// the direction of the jump; the window extends from there while the
/// profile stays monotone.
pub fn contact_width(profile: &[f64], rho_left: f64, rho_right: f64) -> Result<usize, MetricError> {
    let lo = rho_left.min(rho_right);
    let jump = (rho_right - rho_left).abs();
    if !(jump > 0.0) || profile.len() < 2 {
        return Err(MetricError::NoTransitionFound);
    }
    let rising = rho_right > rho_left;
    // orient the profile so the transition is increasing
    let v = |k: usize| if rising { profile[k] } else { -profile[k] };
    let mid = if rising { lo + 0.5 * jump } else { -(lo + 0.5 * jump) };
    let k = (0..profile.len() - 1).find(|&k| v(k) <= mid && v(k + 1) > mid).ok_or(MetricError::NoTransitionFound)?;
    let mut a = k;
    while a > 0 && v(a - 1) <= v(a) {
        a -= 1;
    }
    let mut b = k + 1;
    while b + 1 < profile.len() && v(b + 1) >= v(b) {
        b += 1;
    }
    let (band_lo, band_hi) = (lo + 0.1 * jump, lo + 0.9 * jump);
    Ok(profile[a..=b].iter().filter(|&&r| r > band_lo && r < band_hi).count())
}

/// Largest excursion of `profile` outside the local range of `reference`
/// (min/max over `+-halfwidth` cells), over cells `range`.
pub fn envelope_excess(
    profile: &[f64],
    reference: &[f64],
    halfwidth: usize,
    range: std::ops::Range<usize>,
) -> Result<f64, MetricError> {
    if profile.len() != reference.len() {
        return Err(MetricError::ShapeMismatch { left: profile.len(), right: reference.len() });
    }
    let n = profile.len();
    let mut worst = 0.0f64;
    for i in range.start..range.end.min(n) {
        let win = &reference[i.saturating_sub(halfwidth)..(i + halfwidth + 1).min(n)];
        let hi = win.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = win.iter().copied().fold(f64::INFINITY, f64::min);
        worst = worst.max(profile[i] - hi).max(lo - profile[i]);
    }
    Ok(worst)
}
