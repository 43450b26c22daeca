use std::f64::consts::PI;

use num_complex::Complex64;

pub(crate) fn ln_factorial(n: u32) -> f64 {
    statrs::function::factorial::ln_factorial(n as u64)
}

pub(crate) fn ln_binomial(n: u32, k: u32) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln sqrt(πⁿ / n!)`, the log of the scale turning `zⁿ` into `eₙ`.
pub(crate) fn ln_basis_scale(n: u32) -> f64 {
    0.5 * (n as f64 * PI.ln() - ln_factorial(n))
}

/// Complex logarithm that maps 0 to `-inf` real part instead of NaN.
pub(crate) fn cln(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        Complex64::new(f64::NEG_INFINITY, 0.0)
    } else {
        z.ln()
    }
}

/// `exp` of a complex log that tolerates `-inf` real parts.
pub(crate) fn cexp(w: Complex64) -> Complex64 {
    if w.re == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        w.exp()
    }
}

/// Compensated (Neumaier) sum of complex values.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: Complex64) {
        self.sum = Complex64::new(
            neumaier_step(self.sum.re, v.re, &mut self.carry.re),
            neumaier_step(self.sum.im, v.im, &mut self.carry.im),
        );
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn neumaier_step(sum: f64, v: f64, carry: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *carry += (sum - t) + v;
    } else {
        *carry += (v - t) + sum;
    }
    t
}
