//! Numerical integration used as an independent oracle.
//!
//! Every integrand met here is analytic and decays like a Gaussian, where the
//! composite trapezoid rule converges geometrically in the step size. The
//! 1-D rule halves the step until two successive levels agree to `tol/2` (or
//! until the difference reaches the floating-point rounding floor of the
//! sum), and the half-width is widened until the endpoint values are
//! negligible.

use num_complex::Complex64;

use crate::special::CompensatedSum;
use crate::{Error, Result};

/// Coarsest step; the half-width is always a multiple of it so that nodes of
/// every level are dyadic offsets from `-T`.
pub const BASE_STEP: f64 = 0.25;
const MIN_LEVEL: u32 = 2;
const MAX_LEVEL: u32 = 12;
const MAX_HALF_WIDTH: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineQuadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub half_width: f64,
    pub step: f64,
}

/// Round a half-width up to a multiple of [`BASE_STEP`].
pub fn snap_half_width(t: f64) -> f64 {
    (t / BASE_STEP).ceil() * BASE_STEP
}

/// `∫_ℝ integrand(t) dt` on `[-T, T]`, starting from `T = half_width`.
pub fn integrate_real_line<F>(integrand: F, half_width: f64, tol: f64) -> Result<LineQuadrature>
where
    F: Fn(f64) -> Complex64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let mut t_max = snap_half_width(half_width.max(BASE_STEP));
    let negligible = tol * 1e-3;
    while integrand(-t_max).norm().max(integrand(t_max).norm()) > negligible {
        t_max += 2.0;
        if t_max > MAX_HALF_WIDTH {
            return Err(Error::NoConvergence(format!("integrand not negligible within |t| <= {MAX_HALF_WIDTH}")));
        }
    }

    let check = |v: Complex64, t: f64| -> Result<Complex64> {
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(format!("integrand is not finite at t = {t}")))
        }
    };

    let coarse_nodes = (2.0 * t_max / BASE_STEP).round() as i64;
    let mut sum = CompensatedSum::default();
    let mut abs_sum = 0.0;
    for k in 0..=coarse_nodes {
        let t = -t_max + k as f64 * BASE_STEP;
        let v = check(integrand(t), t)?;
        let w = if k == 0 || k == coarse_nodes { 0.5 } else { 1.0 };
        sum.add(v * w);
        abs_sum += v.norm() * w;
    }
    let mut step = BASE_STEP;
    let mut estimate = sum.value() * step;

    for level in 1..=MAX_LEVEL {
        let finer = step / 2.0;
        let new_nodes = coarse_nodes << (level - 1);
        for k in 0..new_nodes {
            let t = -t_max + (2 * k + 1) as f64 * finer;
            let v = check(integrand(t), t)?;
            sum.add(v);
            abs_sum += v.norm();
        }
        step = finer;
        let refined = sum.value() * step;
        let diff = (refined - estimate).norm();
        estimate = refined;
        let floor = 64.0 * f64::EPSILON * abs_sum * step;
        if level >= MIN_LEVEL && (diff <= tol / 2.0 || diff <= floor) {
            return Ok(LineQuadrature { value: estimate, error_estimate: diff, half_width: t_max, step });
        }
    }
    Err(Error::NoConvergence(format!("step halving did not reach tolerance {tol} at step {step}")))
}

/// Trapezoid approximation of the Fock integral
/// `∫_ℂ F(z) conj(G(z)) e^{-π|z|²} dz` over the square `center ± half_width`.
///
/// Only pointwise evaluations of `F` and `G` are used, which keeps this
/// independent of the closed-form kernel identities.
pub fn fock_integral<F, G>(f: F, g: G, center: Complex64, half_width: f64, step: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let n = (2.0 * half_width / step).round() as i64;
    let mut sum = CompensatedSum::default();
    for i in 0..=n {
        let x = center.re - half_width + i as f64 * step;
        for j in 0..=n {
            let y = center.im - half_width + j as f64 * step;
            let z = Complex64::new(x, y);
            let weight = (-std::f64::consts::PI * z.norm_sqr()).exp();
            sum.add(f(z) * g(z).conj() * weight);
        }
    }
    sum.value() * step * step
}
