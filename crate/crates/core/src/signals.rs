//! Time-domain signals and the Bargmann transform.
//!
//! A [`TimeSignal`] is a finite expansion `Σ cₙ Hₙ` in the Hermite functions
//! normalised by `BHₙ = eₙ`, so the Bargmann transform and its inverse are
//! coefficient relabelings against [`fock::monomial_coeffs`]. The resulting
//! Hermite family is
//!
//! ```text
//! Hₙ(t) = 2^{1/4} (2ⁿ n!)^{-1/2} Hₙ^{phys}(√(2π) t) e^{-πt²}
//! ```
//!
//! evaluated with the three-term recurrence
//! `Hₙ₊₁ = √(2/(n+1))·√(2π)t·Hₙ − √(n/(n+1))·Hₙ₋₁`. This follows from
//! expanding the Bargmann kernel `2^{1/4}e^{2πtz−πt²−πz²/2}` in powers of `z`.
//!
//! [`ClosedFormSignal`]s are evaluable pointwise without truncation and feed
//! the quadrature oracles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fock::{self, FockAtom, FockFunction, Sign};
use crate::quadrature::integrate_real_line;
use crate::{Error, Result, FOURTH_ROOT_TWO};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest Hermite index accepted by [`hermite_eval`].
pub const DEFAULT_HERMITE_MAX: usize = 64;

/// Largest `π|z|²/2` for which the Bargmann integrand stays in `f64` range.
const MAX_LOG_KERNEL: f64 = 700.0;

/// `[H₀(t), …, H_{count-1}(t)]`.
pub fn hermite_values(count: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let x = (2.0 * PI).sqrt() * t;
    let h0 = FOURTH_ROOT_TWO * (-PI * t * t).exp();
    out.push(h0);
    if count == 1 {
        return out;
    }
    out.push(2f64.sqrt() * x * h0);
    for n in 1..count - 1 {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// `Hₙ(t)` for `n ≤ DEFAULT_HERMITE_MAX`.
pub fn hermite_eval(n: usize, t: f64) -> Result<f64> {
    hermite_eval_with_limit(n, t, DEFAULT_HERMITE_MAX)
}

pub fn hermite_eval_with_limit(n: usize, t: f64, n_max: usize) -> Result<f64> {
    if n > n_max {
        return Err(Error::invalid(format!("Hermite index {n} exceeds the limit {n_max}")));
    }
    Ok(hermite_values(n + 1, t)[n])
}

/// A closed real interval `[lo, hi]` carrying a certified quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// `value ± radius`, clamped at zero for nonnegative quantities.
    pub fn around_nonnegative(value: f64, radius: f64) -> Self {
        Self { lo: (value - radius).max(0.0), hi: value + radius }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Pointwise evaluation on the real line.
pub trait TimeDomain: Sync {
    fn value(&self, t: f64) -> Complex64;
}

impl<T: TimeDomain + ?Sized> TimeDomain for &T {
    fn value(&self, t: f64) -> Complex64 {
        (**self).value(t)
    }
}

/// `f = Σ cₙ Hₙ` plus an ℓ² bound on whatever was truncated away.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl TimeSignal {
    pub fn new(coeffs: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if tail_bound < 0.0 || !tail_bound.is_finite() {
            return Err(Error::invalid(format!("tail bound must be finite and >= 0, got {tail_bound}")));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("Hermite coefficients must be finite"));
        }
        Ok(Self { coeffs, tail_bound })
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new(), tail_bound: 0.0 }
    }

    /// `Hₙ`.
    pub fn hermite(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self { coeffs, tail_bound: 0.0 }
    }

    /// The normalised Gaussian `φ = H₀`.
    pub fn gaussian() -> Self {
        Self::hermite(0)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| v * c).collect(), tail_bound: self.tail_bound * c.norm() }
    }

    pub fn norm(&self) -> Interval {
        let head = self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Interval::new(head, (head * head + self.tail_bound * self.tail_bound).sqrt())
    }

    /// `T_u f`, computed on the Fock side and pulled back with tolerance `tol`.
    pub fn translate(&self, u: f64, tol: f64) -> TimeSignal {
        if u == 0.0 {
            return self.clone();
        }
        let image = fock_translate(&bargmann_series(self), u);
        let mut out = inverse_bargmann(&image, tol);
        out.tail_bound += self.tail_bound;
        out
    }
}

impl TimeDomain for TimeSignal {
    fn value(&self, t: f64) -> Complex64 {
        hermite_values(self.coeffs.len(), t).iter().zip(&self.coeffs).map(|(h, c)| c * h).sum()
    }
}

/// Signals with an exact pointwise formula.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormSignal {
    /// `φ(t) = 2^{1/4} e^{-πt²}`.
    Gaussian,
    /// `φ(t - shift)`.
    ShiftedGaussian {
        shift: f64,
    },
    /// `φ(t)(cosh(πt/a) ± i sinh(πt/a))`.
    BasePair {
        a: f64,
        sign: Sign,
    },
    /// The Hermite function `Hₙ`.
    Hermite {
        n: usize,
    },
    Translated {
        inner: Box<ClosedFormSignal>,
        shift: f64,
    },
    Combination(Vec<(Complex64, ClosedFormSignal)>),
}

impl ClosedFormSignal {
    pub fn base_pair(a: f64, sign: Sign) -> Result<Self> {
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::invalid(format!("line spacing a must be positive, got {a}")));
        }
        Ok(Self::BasePair { a, sign })
    }

    /// `T_u` of this signal, staying in closed form.
    pub fn translate(&self, u: f64) -> Self {
        if u == 0.0 {
            return self.clone();
        }
        match self {
            Self::Gaussian => Self::ShiftedGaussian { shift: u },
            Self::ShiftedGaussian { shift } => Self::ShiftedGaussian { shift: shift + u },
            Self::Translated { inner, shift } => Self::Translated { inner: inner.clone(), shift: shift + u },
            other => Self::Translated { inner: Box::new(other.clone()), shift: u },
        }
    }

    /// The exact Bargmann image.
    pub fn bargmann_image(&self) -> FockFunction {
        match self {
            Self::Gaussian => FockFunction::one(),
            Self::ShiftedGaussian { shift } => fock_translate(&FockFunction::one(), *shift),
            Self::BasePair { a, sign } => base_pair_image(*a, *sign),
            Self::Hermite { n } => FockFunction::basis(*n as u32),
            Self::Translated { inner, shift } => fock_translate(&inner.bargmann_image(), *shift),
            Self::Combination(terms) => {
                terms.iter().fold(FockFunction::zero(), |acc, (c, s)| &acc + &s.bargmann_image().scale(*c))
            }
        }
    }
}

impl TimeDomain for ClosedFormSignal {
    fn value(&self, t: f64) -> Complex64 {
        match self {
            Self::Gaussian => Complex64::new(FOURTH_ROOT_TWO * (-PI * t * t).exp(), 0.0),
            Self::ShiftedGaussian { shift } => {
                let s = t - shift;
                Complex64::new(FOURTH_ROOT_TWO * (-PI * s * s).exp(), 0.0)
            }
            Self::BasePair { a, sign } => {
                // e^{x}(1±i)/2 + e^{-x}(1∓i)/2 with x = πt/a, exponents merged
                // with the Gaussian so that neither factor overflows.
                let s = sign.value();
                let g = -PI * t * t;
                let up = (g + PI * t / a).exp();
                let down = (g - PI * t / a).exp();
                Complex64::new(up + down, s * (up - down)) * (0.5 * FOURTH_ROOT_TWO)
            }
            Self::Hermite { n } => Complex64::new(hermite_values(n + 1, t)[*n], 0.0),
            Self::Translated { inner, shift } => inner.value(t - shift),
            Self::Combination(terms) => terms.iter().map(|(c, s)| c * s.value(t)).sum(),
        }
    }
}

/// Exact Bargmann image of `h±` for spacing `a`:
/// `(e^{π/(8a²)}/2)·(1∓i + (1±i)e^{πz/a})·e^{-πz/(2a)}`.
///
/// From `B[φ·e^{bt}](z) = e^{b²/(8π)} e^{bz/2}` with `b = ±π/a`.
pub fn base_pair_image(a: f64, sign: Sign) -> FockFunction {
    let k = (PI / (8.0 * a * a)).exp() / 2.0;
    let s = sign.value();
    let rate = Complex64::new(PI / (2.0 * a), 0.0);
    FockFunction::from_atoms([FockAtom::new((ONE + I * s) * k, 0, rate), FockAtom::new((ONE - I * s) * k, 0, -rate)])
}

/// Fock-side time shift: `B(T_u f)(z) = Bf(z - u)·e^{πuz}·e^{-πu²/2}`.
pub fn fock_translate(image: &FockFunction, u: f64) -> FockFunction {
    if u == 0.0 {
        return image.clone();
    }
    let phase = FockFunction::exponential(Complex64::new((-PI * u * u / 2.0).exp(), 0.0), Complex64::new(PI * u, 0.0));
    fock::multiply(&image.shift_argument(Complex64::new(u, 0.0)), &phase)
}

/// `Σ cₙ Hₙ ↦ Σ cₙ eₙ`. The tail bound of `f` is not represented.
pub fn bargmann_series(f: &TimeSignal) -> FockFunction {
    FockFunction::from_basis_coeffs(&f.coeffs)
}

/// Pull a Fock function back to a Hermite expansion with tail `≤ tol`.
pub fn inverse_bargmann(image: &FockFunction, tol: f64) -> TimeSignal {
    let series = fock::monomial_coeffs(image, tol);
    TimeSignal { coeffs: series.coeffs, tail_bound: series.tail_bound }
}

/// `Bf(z) = 2^{1/4} ∫ f(t) e^{2πtz − πt² − πz²/2} dt` by adaptive trapezoid.
///
/// The window starts at `T = max(4, |z| + 4)` and is widened while the
/// integrand is not negligible at `±T`.
pub fn bargmann_quadrature<S: TimeDomain>(f: &S, z: Complex64, tol: f64) -> Result<Complex64> {
    if tol.is_nan() || tol < 1e-12 {
        return Err(Error::invalid(format!("quadrature tolerance must be >= 1e-12, got {tol}")));
    }
    if PI * z.norm_sqr() / 2.0 > MAX_LOG_KERNEL {
        return Err(Error::Overflow(format!("Bargmann kernel overflows at |z| = {}", z.norm())));
    }
    let shift = -PI * z * z / 2.0;
    let integrand = |t: f64| {
        let v = f.value(t);
        if v == ZERO {
            return ZERO;
        }
        v * (2.0 * PI * t * z - PI * t * t + shift).exp() * FOURTH_ROOT_TWO
    };
    let half_width = 4f64.max(z.norm() + 4.0);
    Ok(integrate_real_line(integrand, half_width, tol)?.value)
}

/// Coefficient-space `‖f - g‖₂` widened by both tail bounds.
pub fn l2_distance(f: &TimeSignal, g: &TimeSignal) -> Interval {
    let n = f.coeffs.len().max(g.coeffs.len());
    let d = (0..n)
        .map(|i| {
            let a = f.coeffs.get(i).copied().unwrap_or(ZERO);
            let b = g.coeffs.get(i).copied().unwrap_or(ZERO);
            (a - b).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    Interval::around_nonnegative(d, f.tail_bound + g.tail_bound)
}

/// Result of aligning two signals over the global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDistance {
    /// Minimiser of `‖g − e^{iα} f‖`, in `[0, 2π)`.
    pub alpha: f64,
    /// `min_α ‖g − e^{iα} f‖` on the represented coefficients.
    pub dist: f64,
    /// `dist` widened by both tail bounds.
    pub bounds: Interval,
}

/// `min_α ‖g − e^{iα} f‖₂` and its minimiser `α* = arg⟨g, f⟩`.
///
/// Zero (within the tails) exactly when `f` and `g` agree up to global phase.
pub fn phase_distance(f: &TimeSignal, g: &TimeSignal) -> PhaseDistance {
    let n = f.coeffs.len().max(g.coeffs.len());
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or(ZERO);
    let overlap: Complex64 = (0..n).map(|i| get(&g.coeffs, i) * get(&f.coeffs, i).conj()).sum();
    let alpha = overlap.arg().rem_euclid(2.0 * PI);
    let rot = Complex64::from_polar(1.0, alpha);
    let dist = (0..n).map(|i| (get(&g.coeffs, i) - rot * get(&f.coeffs, i)).norm_sqr()).sum::<f64>().sqrt();
    PhaseDistance { alpha, dist, bounds: Interval::around_nonnegative(dist, f.tail_bound + g.tail_bound) }
}
