//! Solution files: CSV profiles (1-D), plain structured text and legacy VTK
//! (2-D), with readers for the text formats.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::euler::PrimitiveState;
use crate::march::GridSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

fn io_err(path: &Path, e: std::io::Error) -> OutputError {
    OutputError::Io { path: path.to_path_buf(), message: e.to_string() }
}

fn parse_err(path: &Path, line: usize, message: impl ToString) -> OutputError {
    OutputError::Parse { path: path.to_path_buf(), line, message: message.to_string() }
}

fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn read_text(path: &Path) -> Result<String, OutputError> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// A 1-D density/velocity/pressure profile at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1d {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
}

impl Profile1d {
    pub fn from_primitives(grid: &GridSpec, prims: &[PrimitiveState]) -> Self {
        Self {
            x: (0..grid.nx).map(|i| grid.x_center(i)).collect(),
            rho: prims.iter().map(|w| w.rho).collect(),
            u: prims.iter().map(|w| w.u).collect(),
            p: prims.iter().map(|w| w.p).collect(),
        }
    }
}

/// `x,rho,u,p` rows at full precision.
pub fn write_csv(path: &Path, profile: &Profile1d) -> Result<(), OutputError> {
    let mut s = String::with_capacity(80 * profile.x.len() + 16);
    s.push_str("x,rho,u,p\n");
    for i in 0..profile.x.len() {
        let _ =
            writeln!(s, "{:.17e},{:.17e},{:.17e},{:.17e}", profile.x[i], profile.rho[i], profile.u[i], profile.p[i]);
    }
    write_text(path, &s)
}

pub fn read_csv(path: &Path) -> Result<Profile1d, OutputError> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "x,rho,u,p" => {}
        _ => return Err(parse_err(path, 1, "expected header `x,rho,u,p`")),
    }
    let mut prof = Profile1d { x: vec![], rho: vec![], u: vec![], p: vec![] };
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let vals = line
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| parse_err(path, n + 1, e)))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() != 4 {
            return Err(parse_err(path, n + 1, format!("expected 4 columns, found {}", vals.len())));
        }
        prof.x.push(vals[0]);
        prof.rho.push(vals[1]);
        prof.u.push(vals[2]);
        prof.p.push(vals[3]);
    }
    Ok(prof)
}

/// 2-D fields on a uniform grid, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridData {
    pub nx: usize,
    pub ny: usize,
    /// `(x_min, x_max, y_min, y_max)`.
    pub bounds: (f64, f64, f64, f64),
    pub t: f64,
    pub rho: Vec<f64>,
    /// Velocity and pressure, present for full-state files.
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
}

impl GridData {
    pub fn from_primitives(grid: &GridSpec, prims: &[PrimitiveState], t: f64, full_state: bool) -> Self {
        let pick = |f: fn(&PrimitiveState) -> f64| prims.iter().map(f).collect::<Vec<_>>();
        Self {
            nx: grid.nx,
            ny: grid.ny,
            bounds: (grid.x_min, grid.x_max, grid.y_min, grid.y_max),
            t,
            rho: pick(|w| w.rho),
            u: full_state.then(|| pick(|w| w.u)),
            v: full_state.then(|| pick(|w| w.v)),
            p: full_state.then(|| pick(|w| w.p)),
        }
    }

    pub fn dx(&self) -> f64 {
        (self.bounds.1 - self.bounds.0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.bounds.3 - self.bounds.2) / self.ny as f64
    }
}

/// Header `nx ny`, bounds, time and field list, then one block of `ny`
/// rows per field.
pub fn write_grid(path: &Path, data: &GridData) -> Result<(), OutputError> {
    let mut s = String::with_capacity(25 * data.rho.len() * 4 + 128);
    let (x0, x1, y0, y1) = data.bounds;
    let _ = writeln!(s, "{} {}", data.nx, data.ny);
    let _ = writeln!(s, "{x0:.17e} {x1:.17e} {y0:.17e} {y1:.17e}");
    let _ = writeln!(s, "t {:.17e}", data.t);
    let mut fields: Vec<(&str, &[f64])> = vec![("rho", &data.rho)];
    if let (Some(u), Some(v), Some(p)) = (&data.u, &data.v, &data.p) {
        fields.extend([("u", u.as_slice()), ("v", v.as_slice()), ("p", p.as_slice())]);
    }
    let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let _ = writeln!(s, "fields {}", names.join(" "));
    for (_, vals) in fields {
        for row in vals.chunks(data.nx) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
    }
    write_text(path, &s)
}

pub fn read_grid(path: &Path) -> Result<GridData, OutputError> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut next = |what: &str| lines.next().ok_or_else(|| parse_err(path, 0, format!("missing {what}")));
    let nums = |(n, l): (usize, &str)| -> Result<Vec<f64>, OutputError> {
        l.split_whitespace().map(|v| v.parse::<f64>().map_err(|e| parse_err(path, n + 1, e))).collect()
    };
    let (n0, l0) = next("size line")?;
    let dims: Vec<usize> = l0
        .split_whitespace()
        .map(|v| v.parse::<usize>().map_err(|e| parse_err(path, n0 + 1, e)))
        .collect::<Result<_, _>>()?;
    let [nx, ny] = dims[..] else {
        return Err(parse_err(path, n0 + 1, "expected `nx ny`"));
    };
    let b = nums(next("bounds")?)?;
    if b.len() != 4 {
        return Err(parse_err(path, n0 + 2, "expected four bounds"));
    }
    let (nt, lt) = next("time")?;
    let t = lt
        .strip_prefix("t ")
        .ok_or_else(|| parse_err(path, nt + 1, "expected `t <time>`"))?
        .trim()
        .parse::<f64>()
        .map_err(|e| parse_err(path, nt + 1, e))?;
    let (nf, lf) = next("field list")?;
    let names: Vec<String> = lf
        .strip_prefix("fields")
        .ok_or_else(|| parse_err(path, nf + 1, "expected `fields ...`"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let mut blocks = Vec::new();
    for name in &names {
        let mut vals = Vec::with_capacity(nx * ny);
        for _ in 0..ny {
            let row = nums(next(name)?)?;
            if row.len() != nx {
                return Err(parse_err(path, 0, format!("row of `{name}` has {} values", row.len())));
            }
            vals.extend(row);
        }
        blocks.push(vals);
    }
    let mut take = |name: &str| names.iter().position(|n| n == name).map(|k| std::mem::take(&mut blocks[k]));
    let rho = take("rho").ok_or_else(|| parse_err(path, nf + 1, "no density field"))?;
    Ok(GridData { nx, ny, bounds: (b[0], b[1], b[2], b[3]), t, rho, u: take("u"), v: take("v"), p: take("p") })
}

/// Legacy-VTK structured points with cell-centred samples as points.
pub fn write_vtk(path: &Path, data: &GridData) -> Result<(), OutputError> {
    let mut s = String::with_capacity(20 * data.rho.len() * 5 + 256);
    let (dx, dy) = (data.dx(), data.dy());
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "density at t = {}", data.t);
    s.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", data.nx, data.ny);
    let _ = writeln!(s, "ORIGIN {} {} 0", data.bounds.0 + 0.5 * dx, data.bounds.2 + 0.5 * dy);
    let _ = writeln!(s, "SPACING {dx} {dy} 1");
    let _ = writeln!(s, "POINT_DATA {}", data.rho.len());
    let scalar = |s: &mut String, name: &str, vals: &[f64]| {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in vals {
            let _ = writeln!(s, "{v:e}");
        }
    };
    scalar(&mut s, "rho", &data.rho);
    if let (Some(u), Some(v), Some(p)) = (&data.u, &data.v, &data.p) {
        scalar(&mut s, "p", p);
        s.push_str("VECTORS velocity double\n");
        for k in 0..u.len() {
            let _ = writeln!(s, "{:e} {:e} 0", u[k], v[k]);
        }
    }
    write_text(path, &s)
}

/// Either kind of solution file, chosen by extension (`.csv` or not).
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionFile {
    Line(Profile1d),
    Grid(GridData),
}

impl SolutionFile {
    pub fn read(path: &Path) -> Result<Self, OutputError> {
        if path.extension().is_some_and(|e| e == "csv") {
            read_csv(path).map(SolutionFile::Line)
        } else {
            read_grid(path).map(SolutionFile::Grid)
        }
    }

    pub fn density(&self) -> &[f64] {
        match self {
            SolutionFile::Line(p) => &p.rho,
            SolutionFile::Grid(g) => &g.rho,
        }
    }

    /// `(nx, ny)`; `ny = 1` for profiles.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            SolutionFile::Line(p) => (p.x.len(), 1),
            SolutionFile::Grid(g) => (g.nx, g.ny),
        }
    }

    /// Domain extent `(x_min, x_max, y_min, y_max)` (y is `(0, 1)` in 1-D).
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match self {
            SolutionFile::Line(p) => {
                let n = p.x.len();
                let dx = if n > 1 { (p.x[n - 1] - p.x[0]) / (n - 1) as f64 } else { 1.0 };
                (p.x[0] - 0.5 * dx, p.x[n - 1] + 0.5 * dx, 0.0, 1.0)
            }
            SolutionFile::Grid(g) => g.bounds,
        }
    }

    pub fn cell_volume(&self) -> f64 {
        let (x0, x1, y0, y1) = self.bounds();
        let (nx, ny) = self.shape();
        match self {
            SolutionFile::Line(_) => (x1 - x0) / nx as f64,
            SolutionFile::Grid(_) => (x1 - x0) / nx as f64 * (y1 - y0) / ny as f64,
        }
    }
}
