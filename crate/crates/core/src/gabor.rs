//! Gabor transform evaluation, sampling sets and spectrogram grids.
//!
//! The fast path evaluates `Gf(x, ω) = e^{-πixω} Bf(x − iω) e^{-π(x²+ω²)/2}`
//! from a Fock image. [`gabor_quadrature`] integrates the defining integral
//! directly and serves as the oracle for it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::FockFunction;
use crate::quadrature::{integrate_real_line, snap_half_width, BASE_STEP};
use crate::signals::TimeDomain;
use crate::{Error, Result, FOURTH_ROOT_TWO};

/// Default number of materialised lines on each side of the origin.
pub const DEFAULT_LINE_RADIUS: i64 = 20;
/// Default cap on the number of cells of a spectrogram grid.
pub const DEFAULT_CELL_CAP: usize = 10_000_000;

/// `Gf(x, ω)` from the Bargmann image `F = Bf`.
pub fn gabor_eval(image: &FockFunction, x: f64, w: f64) -> Complex64 {
    let z = Complex64::new(x, -w);
    let log_weight = Complex64::new(-PI * (x * x + w * w) / 2.0, -PI * x * w);
    image.eval_weighted(z, log_weight)
}

/// `Gf(x, ω) = 2^{1/4} ∫ f(t) e^{-π(t−x)²} e^{-2πitω} dt` by adaptive trapezoid.
pub fn gabor_quadrature<S: TimeDomain>(f: &S, x: f64, w: f64, tol: f64) -> Result<Complex64> {
    if tol.is_nan() || tol < 1e-12 {
        return Err(Error::invalid(format!("quadrature tolerance must be >= 1e-12, got {tol}")));
    }
    if !x.is_finite() || !w.is_finite() {
        return Err(Error::invalid("time-frequency point must be finite"));
    }
    let integrand = |t: f64| {
        let v = f.value(t);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        let d = t - x;
        v * Complex64::new(-PI * d * d, -2.0 * PI * t * w).exp() * FOURTH_ROOT_TWO
    };
    let half_width = 4f64.max(x.abs() + 4.0);
    Ok(integrate_real_line(integrand, half_width, tol)?.value)
}

/// A signal tabulated on the dyadic quadrature nodes of `[-T, T]`.
///
/// Quadrature nodes up to the table resolution are served from the table;
/// anything else falls through to the source.
pub struct Tabulated<S> {
    source: S,
    half_width: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl<S: TimeDomain> Tabulated<S> {
    /// Tabulate with step `BASE_STEP / 2^levels`.
    pub fn new(source: S, half_width: f64, levels: u32) -> Self {
        let half_width = snap_half_width(half_width);
        let step = BASE_STEP / (1u64 << levels) as f64;
        let n = (2.0 * half_width / step).round() as usize;
        let values = (0..=n).into_par_iter().map(|k| source.value(-half_width + k as f64 * step)).collect();
        Self { source, half_width, step, values }
    }
}

impl<S: TimeDomain> TimeDomain for Tabulated<S> {
    fn value(&self, t: f64) -> Complex64 {
        let pos = (t + self.half_width) / self.step;
        let k = pos.round();
        if (pos - k).abs() < 1e-9 && k >= 0.0 && (k as usize) < self.values.len() {
            self.values[k as usize]
        } else {
            self.source.value(t)
        }
    }
}

/// The line family `R_θ(ℝ × aℤ) + λ₀` of the time-frequency plane, with the
/// lines `n_min..=n_max` materialised.
///
/// Line `n` is `{e^{iθ}(s + ian) + λ₀ : s ∈ ℝ}` with `x + iω` identified
/// with a complex number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFamily {
    pub a: f64,
    pub theta: f64,
    pub lambda0: Complex64,
    pub n_min: i64,
    pub n_max: i64,
}

impl LineFamily {
    pub fn new(a: f64, theta: f64, lambda0: Complex64, n_min: i64, n_max: i64) -> Result<Self> {
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::invalid(format!("line spacing a must be positive, got {a}")));
        }
        if !theta.is_finite() || !lambda0.re.is_finite() || !lambda0.im.is_finite() {
            return Err(Error::invalid("theta and lambda0 must be finite"));
        }
        if n_min > n_max {
            return Err(Error::invalid(format!("empty line range {n_min}..={n_max}")));
        }
        Ok(Self { a, theta, lambda0, n_min, n_max })
    }

    /// `ℝ × aℤ` with the default window of lines.
    pub fn horizontal(a: f64) -> Result<Self> {
        Self::new(a, 0.0, Complex64::new(0.0, 0.0), -DEFAULT_LINE_RADIUS, DEFAULT_LINE_RADIUS)
    }

    pub fn with_lines(self, n_min: i64, n_max: i64) -> Result<Self> {
        Self::new(self.a, self.theta, self.lambda0, n_min, n_max)
    }

    pub fn point(&self, line: i64, s: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.theta) * Complex64::new(s, self.a * line as f64) + self.lambda0
    }

    /// Index of the closest line (not restricted to the materialised range)
    /// and the distance to it.
    pub fn nearest_line(&self, p: Complex64) -> (i64, f64) {
        let local = Complex64::from_polar(1.0, -self.theta) * (p - self.lambda0);
        let n = (local.im / self.a).round();
        (n as i64, (local.im - n * self.a).abs())
    }

    /// Distance to the closest materialised line.
    pub fn distance_to_materialised(&self, p: Complex64) -> f64 {
        let local = Complex64::from_polar(1.0, -self.theta) * (p - self.lambda0);
        let n = (local.im / self.a).round().clamp(self.n_min as f64, self.n_max as f64);
        (local.im - n * self.a).abs()
    }
}

/// One sample on a line family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePoint {
    pub line: i64,
    /// Arc-length coordinate along the line.
    pub s: f64,
    /// `x + iω`.
    pub point: Complex64,
    pub x: f64,
    pub w: f64,
}

impl LinePoint {
    /// The Fock-side argument `x − iω` used by [`gabor_eval`].
    pub fn fock_arg(&self) -> Complex64 {
        self.point.conj()
    }
}

pub(crate) fn grid_count(min: f64, max: f64, step: f64) -> Result<usize> {
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if !min.is_finite() || !max.is_finite() || max < min {
        return Err(Error::invalid(format!("empty range [{min}, {max}]")));
    }
    Ok(((max - min) / step + 1e-9).floor() as usize + 1)
}

/// Enumerate `s = x_min, x_min + x_step, …, ≤ x_max` on every materialised
/// line, line-major.
pub fn sample_line_family(fam: &LineFamily, x_min: f64, x_max: f64, x_step: f64) -> Result<Vec<LinePoint>> {
    let count = grid_count(x_min, x_max, x_step)?;
    let mut out = Vec::with_capacity(count * (fam.n_max - fam.n_min + 1) as usize);
    for line in fam.n_min..=fam.n_max {
        for i in 0..count {
            let s = x_min + i as f64 * x_step;
            let point = fam.point(line, s);
            out.push(LinePoint { line, s, point, x: point.re, w: point.im });
        }
    }
    Ok(out)
}

/// A lattice `LZᵏ`, `k ∈ {1, 2}`, given by the columns of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    columns: Vec<[f64; 2]>,
}

impl LatticeSpec {
    pub fn new(columns: Vec<[f64; 2]>) -> Result<Self> {
        if columns.is_empty() || columns.len() > 2 {
            return Err(Error::invalid(format!("lattice needs 1 or 2 basis columns, got {}", columns.len())));
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("lattice basis must be finite"));
        }
        let norms: Vec<f64> = columns.iter().map(|c| c[0].hypot(c[1])).collect();
        if norms.contains(&0.0) {
            return Err(Error::invalid("lattice basis has a zero column"));
        }
        if columns.len() == 2 {
            let det = columns[0][0] * columns[1][1] - columns[0][1] * columns[1][0];
            if det.abs() <= 1e-12 * norms[0] * norms[1] {
                return Err(Error::invalid("lattice basis columns are linearly dependent"));
            }
        }
        Ok(Self { columns })
    }

    /// `a·I`.
    pub fn square(a: f64) -> Result<Self> {
        Self::new(vec![[a, 0.0], [0.0, a]])
    }

    pub fn columns(&self) -> &[[f64; 2]] {
        &self.columns
    }

    pub fn point(&self, coords: &[i64]) -> Complex64 {
        self.columns.iter().zip(coords).map(|(c, &m)| Complex64::new(c[0], c[1]) * m as f64).sum()
    }
}

/// Lagrange–Gauss reduction of a rank-2 basis; the first vector is shortest.
fn gauss_reduce(mut v1: Complex64, mut v2: Complex64) -> (Complex64, Complex64) {
    if v2.norm_sqr() < v1.norm_sqr() {
        std::mem::swap(&mut v1, &mut v2);
    }
    loop {
        let mu = ((v1.conj() * v2).re / v1.norm_sqr()).round();
        if mu == 0.0 {
            break;
        }
        v2 -= v1 * mu;
        if v2.norm_sqr() < v1.norm_sqr() {
            std::mem::swap(&mut v1, &mut v2);
        } else {
            break;
        }
    }
    (v1, v2)
}

/// A line family containing every point of the lattice.
///
/// Rank 2: the lines run along the first column `v₁` and are spaced
/// `|det L|/|v₁|` apart. Rank 1: the single line through the origin along
/// the column. See [`lattice_embed_reduced`] for the widest-spaced choice.
pub fn lattice_embed(lattice: &LatticeSpec) -> Result<LineFamily> {
    embed(lattice, false)
}

/// Like [`lattice_embed`], but the basis is Lagrange–Gauss reduced first so
/// the lines run along a shortest lattice vector and the spacing is maximal.
pub fn lattice_embed_reduced(lattice: &LatticeSpec) -> Result<LineFamily> {
    embed(lattice, true)
}

fn embed(lattice: &LatticeSpec, reduce: bool) -> Result<LineFamily> {
    let cols: Vec<Complex64> = lattice.columns.iter().map(|c| Complex64::new(c[0], c[1])).collect();
    let origin = Complex64::new(0.0, 0.0);
    match cols.as_slice() {
        [v] => LineFamily::new(v.norm(), v.arg(), origin, 0, 0),
        [v1, v2] => {
            let (v1, v2) = if reduce { gauss_reduce(*v1, *v2) } else { (*v1, *v2) };
            let det = (v1.conj() * v2).im;
            LineFamily::new(det.abs() / v1.norm(), v1.arg(), origin, -DEFAULT_LINE_RADIUS, DEFAULT_LINE_RADIUS)
        }
        _ => unreachable!("validated by LatticeSpec::new"),
    }
}

/// Rectangle of `(x, ω)` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub x_step: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub w_step: f64,
}

impl GridSpec {
    pub fn square(min: f64, max: f64, step: f64) -> Self {
        Self { x_min: min, x_max: max, x_step: step, w_min: min, w_max: max, w_step: step }
    }

    pub fn shape(&self) -> Result<(usize, usize)> {
        Ok((grid_count(self.x_min, self.x_max, self.x_step)?, grid_count(self.w_min, self.w_max, self.w_step)?))
    }
}

/// `|Gf|` tabulated on a [`GridSpec`]; `value(i, j)` sits at
/// `(x_min + i·x_step, w_min + j·w_step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrogramGrid {
    pub spec: GridSpec,
    pub nx: usize,
    pub nw: usize,
    values: Vec<f64>,
}

impl SpectrogramGrid {
    pub fn x(&self, i: usize) -> f64 {
        self.spec.x_min + i as f64 * self.spec.x_step
    }

    pub fn w(&self, j: usize) -> f64 {
        self.spec.w_min + j as f64 * self.spec.w_step
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nw + j]
    }

    /// Row-major values, `x` outer.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn argmax(&self) -> (usize, usize) {
        let k = self.values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).unwrap_or(0);
        (k / self.nw, k % self.nw)
    }
}

pub fn spectrogram_grid(image: &FockFunction, grid: &GridSpec) -> Result<SpectrogramGrid> {
    spectrogram_grid_with_cap(image, grid, DEFAULT_CELL_CAP)
}

pub fn spectrogram_grid_with_cap(image: &FockFunction, grid: &GridSpec, cell_cap: usize) -> Result<SpectrogramGrid> {
    let (nx, nw) = grid.shape()?;
    let cells = nx.saturating_mul(nw);
    if cells > cell_cap {
        return Err(Error::invalid(format!("grid has {cells} cells, above the cap of {cell_cap}")));
    }
    let values = (0..cells)
        .into_par_iter()
        .map(|k| {
            let x = grid.x_min + (k / nw) as f64 * grid.x_step;
            let w = grid.w_min + (k % nw) as f64 * grid.w_step;
            gabor_eval(image, x, w).norm()
        })
        .collect();
    Ok(SpectrogramGrid { spec: *grid, nx, nw, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::ClosedFormSignal;

    #[test]
    fn gaussian_spectrogram() {
        let one = FockFunction::one();
        assert!((gabor_eval(&one, 0.0, 0.0).norm() - 1.0).abs() < 1e-15);
        let v = gabor_eval(&one, 0.7, -1.2).norm();
        assert!((v - (-PI * (0.49 + 1.44) / 2.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn hermite_five_spectrogram_values() {
        let e5 = FockFunction::basis(5);
        let expected = (PI.powi(5) / 120.0).sqrt() * (-PI / 2.0).exp();
        assert!((gabor_eval(&e5, 1.0, 0.0).norm() - expected).abs() < 1e-14);
        assert!((expected - 0.3320).abs() < 1e-4);
        assert_eq!(gabor_eval(&e5, 0.0, 0.0).norm(), 0.0);
    }

    #[test]
    fn quadrature_of_gaussian_at_origin() {
        let v = gabor_quadrature(&ClosedFormSignal::Gaussian, 0.0, 0.0, 1e-12).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn line_family_sampling() {
        let fam = LineFamily::new(1.0, 0.0, Complex64::new(0.0, 0.0), 0, 0).unwrap();
        let pts = sample_line_family(&fam, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point, Complex64::new(0.0, 0.0));

        let fam = LineFamily::new(0.25, 0.0, Complex64::new(0.0, 0.0), -1, 1).unwrap();
        let pts = sample_line_family(&fam, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(pts.len(), 9);
        let mut ims: Vec<f64> = pts.iter().map(|p| p.w).collect();
        ims.dedup();
        assert_eq!(ims, vec![-0.25, 0.0, 0.25]);
    }

    #[test]
    fn sampling_rejects_empty_ranges() {
        let fam = LineFamily::horizontal(1.0).unwrap();
        assert!(sample_line_family(&fam, 1.0, 0.0, 0.1).is_err());
        assert!(sample_line_family(&fam, 0.0, 1.0, 0.0).is_err());
        assert!(LineFamily::new(1.0, 0.0, Complex64::new(0.0, 0.0), 2, 1).is_err());
        assert!(LineFamily::new(-1.0, 0.0, Complex64::new(0.0, 0.0), 0, 1).is_err());
    }

    #[test]
    fn rotated_family_gives_vertical_lines() {
        let a = 0.5;
        let lambda0 = Complex64::new(0.3, 1.0);
        let fam = LineFamily::new(a, PI / 2.0, lambda0, -2, 2).unwrap();
        for p in sample_line_family(&fam, -1.0, 1.0, 0.5).unwrap() {
            // R_{π/2}(s, an) = (-an, s)
            assert!((p.x - (lambda0.re - a * p.line as f64)).abs() < 1e-14);
            assert!((p.w - (lambda0.im + p.s)).abs() < 1e-14);
        }
    }

    #[test]
    fn lattice_embedding_examples() {
        let fam = lattice_embed(&LatticeSpec::square(0.25).unwrap()).unwrap();
        assert_eq!(fam.theta, 0.0);
        assert!((fam.a - 0.25).abs() < 1e-15);

        let fam = lattice_embed(&LatticeSpec::new(vec![[1.0, 0.0], [0.5, 0.7]]).unwrap()).unwrap();
        assert!(fam.theta.abs() < 1e-15);
        assert!((fam.a - 0.7).abs() < 1e-14);

        let fam = lattice_embed(&LatticeSpec::new(vec![[1.0, 1.0]]).unwrap()).unwrap();
        assert!((fam.theta - PI / 4.0).abs() < 1e-15);
        assert_eq!((fam.n_min, fam.n_max), (0, 0));
    }

    #[test]
    fn lattice_rejects_rank_deficiency() {
        assert!(LatticeSpec::new(vec![[1.0, 2.0], [2.0, 4.0]]).is_err());
        assert!(LatticeSpec::new(vec![[0.0, 0.0]]).is_err());
        assert!(LatticeSpec::new(vec![]).is_err());
    }

    #[test]
    fn reduction_picks_shortest_direction() {
        // (1, 0) and (10.5, 0.7) generate the same lattice as (1, 0), (0.5, 0.7),
        // whose shortest vector is (0.5, 0.7)
        let lattice = LatticeSpec::new(vec![[10.5, 0.7], [1.0, 0.0]]).unwrap();
        let fam = lattice_embed_reduced(&lattice).unwrap();
        // (±0.5, 0.7) are both shortest
        let v = Complex64::new(0.5, 0.7);
        let dir = Complex64::from_polar(v.norm(), fam.theta);
        let shortest = [v, -v, v.conj(), -v.conj()];
        assert!(shortest.iter().any(|s| (dir - s).norm() < 1e-12), "{dir}");
        assert!((fam.a - 0.7 / v.norm()).abs() < 1e-12);
        let plain = lattice_embed(&lattice).unwrap();
        assert!(fam.a > plain.a);
    }

    #[test]
    fn small_gaussian_grid() {
        let g = spectrogram_grid(&FockFunction::one(), &GridSpec::square(-1.0, 1.0, 1.0)).unwrap();
        assert_eq!((g.nx, g.nw), (3, 3));
        for i in 0..3 {
            for j in 0..3 {
                let (x, w) = (g.x(i), g.w(j));
                assert!((g.value(i, j) - (-PI * (x * x + w * w) / 2.0).exp()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn grid_cap_and_empty_ranges() {
        let spec = GridSpec::square(-1.0, 1.0, 0.001);
        assert!(spectrogram_grid_with_cap(&FockFunction::one(), &spec, 1000).is_err());
        let empty = GridSpec::square(1.0, -1.0, 0.1);
        assert!(spectrogram_grid(&FockFunction::one(), &empty).is_err());
    }

    #[test]
    fn hermite_five_ring_radius() {
        let grid = spectrogram_grid(&FockFunction::basis(5), &GridSpec::square(-3.0, 3.0, 0.05)).unwrap();
        let (i, j) = grid.argmax();
        let r = grid.x(i).hypot(grid.w(j));
        // maximiser of r⁵ e^{-πr²/2}
        assert!((r - (5.0 / PI).sqrt()).abs() < 0.05, "r = {r}");
    }
}
