//! Text formats: manifests, coefficient and atom lists, spectrogram grids.
//!
//! Every file is written to a temporary sibling and renamed into place.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::Path;

use gul_core::fock::{FockAtom, FockFunction};
use gul_core::gabor::SpectrogramGrid;
use gul_core::Complex64;

use crate::CliError;

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::create_dir_all(parent).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Shortest round-tripping decimal, switching to exponent form outside
/// `[1e-4, 1e6)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Ordered `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Self {
        let value = value.to_string().replace(['\n', '\r'], " ");
        self.entries.push((key.to_string(), value));
        self
    }

    pub fn push_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, num(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) =
                line.split_once(" = ").ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            if k.trim().is_empty() {
                return Err(format!("line {}: empty key", lineno + 1));
            }
            out.entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| CliError::Input(format!("manifest is missing `{key}`")))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CliError> {
        let v = self.require(key)?;
        v.parse().map_err(|_| CliError::Input(format!("manifest `{key}` is not a number: {v}")))
    }

    pub fn require_i64(&self, key: &str) -> Result<i64, CliError> {
        let v = self.require(key)?;
        v.parse().map_err(|_| CliError::Input(format!("manifest `{key}` is not an integer: {v}")))
    }
}

/// `n re im` per line.
pub fn render_coeffs(coeffs: &[Complex64]) -> String {
    coeffs.iter().enumerate().map(|(n, c)| format!("{n} {:.16e} {:.16e}\n", c.re, c.im)).collect()
}

pub fn parse_coeffs(text: &str) -> Result<Vec<Complex64>, String> {
    let mut out: Vec<Complex64> = Vec::new();
    for (lineno, line) in data_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [n, re, im] = f.as_slice() else {
            return Err(format!("line {lineno}: expected `n re im`"));
        };
        let n: usize = n.parse().map_err(|_| format!("line {lineno}: bad index `{n}`"))?;
        let c = Complex64::new(parse_f64(re, lineno)?, parse_f64(im, lineno)?);
        if n >= out.len() {
            out.resize(n + 1, Complex64::new(0.0, 0.0));
        }
        out[n] += c;
    }
    Ok(out)
}

/// `power coeff_re coeff_im expo_re expo_im` per line.
pub fn render_atoms(f: &FockFunction) -> String {
    f.atoms()
        .iter()
        .map(|a| format!("{} {:.16e} {:.16e} {:.16e} {:.16e}\n", a.power, a.coeff.re, a.coeff.im, a.expo.re, a.expo.im))
        .collect()
}

pub fn parse_atoms(text: &str) -> Result<FockFunction, String> {
    let mut atoms = Vec::new();
    for (lineno, line) in data_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [p, cr, ci, br, bi] = f.as_slice() else {
            return Err(format!("line {lineno}: expected `power coeff_re coeff_im expo_re expo_im`"));
        };
        let power: u32 = p.parse().map_err(|_| format!("line {lineno}: bad power `{p}`"))?;
        atoms.push(FockAtom::new(
            Complex64::new(parse_f64(cr, lineno)?, parse_f64(ci, lineno)?),
            power,
            Complex64::new(parse_f64(br, lineno)?, parse_f64(bi, lineno)?),
        ));
    }
    Ok(FockFunction::from_atoms(atoms))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("line {lineno}: bad number `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("line {lineno}: non-finite number `{s}`"))
    }
}

/// Header `x,omega,magnitude`, `x` outer, 17 significant digits.
pub fn render_csv(grid: &SpectrogramGrid) -> String {
    let mut s = String::with_capacity(64 * grid.nx * grid.nw + 32);
    s.push_str("x,omega,magnitude\n");
    for i in 0..grid.nx {
        for j in 0..grid.nw {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", grid.x(i), grid.w(j), grid.value(i, j)));
        }
    }
    s
}

/// Plain (P2) PGM with maxval 65535, linear in `[0, max]`. Columns run along
/// `x`, rows along `ω` with the largest `ω` on top.
pub fn render_pgm(grid: &SpectrogramGrid) -> String {
    let max = grid.max();
    let mut s = format!(
        "P2\n# |Gf| on x in [{}, {}], omega in [{}, {}], max {}\n{} {}\n65535\n",
        num(grid.x(0)),
        num(grid.x(grid.nx - 1)),
        num(grid.w(0)),
        num(grid.w(grid.nw - 1)),
        num(max),
        grid.nx,
        grid.nw
    );
    for j in (0..grid.nw).rev() {
        let row: Vec<String> = (0..grid.nx)
            .map(|i| {
                let level = if max > 0.0 { (grid.value(i, j) / max * 65535.0).round() } else { 0.0 };
                (level as u32).min(65535).to_string()
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
