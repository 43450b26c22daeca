//! Numerical probes around Gaussian uniqueness on square lattices.
//!
//! The uniqueness statement for `a < 1` is a theorem, not an algorithm. What
//! can be run at desk scale is
//!
//! * a check of the two growth hypotheses of the Iyer–Pfluger criterion for a
//!   given `F` on a finite window, and
//! * a least-squares search for `F = Σ_{n≤N} cₙeₙ` with `|F(λ)| = 1` on
//!   `aℤ² ∩ D(0, R)`, reporting whether every feasible fit found is close to
//!   a unimodular constant.
//!
//! Neither proves anything; the verdicts carry that caveat.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::fock::{self, FockFunction};
use crate::special::ln_basis_scale;
use crate::{Error, Result};

const ANGLES: usize = 256;
const CURVE_POINTS: usize = 32;
const MAX_ITERATIONS: usize = 500;
const GRADIENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// Order of `F`: 0 for polynomials, 1 as soon as an exponential appears.
    pub order: f64,
    /// Exponential type `max |β|`.
    pub exp_type: f64,
    /// `limsup log M(r)/r²`, zero for every function of finite order ≤ 1.
    pub ratio_limsup: f64,
    /// Sampled `(r, log M(r)/r²)` with `M(r)` the maximum over 256 angles.
    pub ratio_curve: Vec<(f64, f64)>,
    pub growth_ok: bool,
    pub lattice_points: usize,
    pub violations: usize,
    /// Violating lattice point of smallest modulus.
    pub first_violation: Option<Complex64>,
    /// Lattice point with the largest `|F|`, and that value.
    pub worst: (Complex64, f64),
    pub lattice_ok: bool,
    pub kappa: f64,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.growth_ok && self.lattice_ok
    }
}

/// Check `limsup log M(r)/r² < π/2` and `|F(m + in)| ≤ κ` for `|m|, |n| ≤ r_max`.
pub fn growth_hypothesis_check(f: &FockFunction, kappa: f64, r_max: f64) -> Result<GrowthReport> {
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::invalid(format!("kappa must be positive, got {kappa}")));
    }
    if r_max <= 2.0 || !r_max.is_finite() {
        return Err(Error::invalid(format!("r_max must exceed 2, got {r_max}")));
    }
    let order = if f.is_polynomial() { 0.0 } else { 1.0 };
    let ratio_curve = (1..=CURVE_POINTS)
        .map(|k| {
            let r = r_max * k as f64 / CURVE_POINTS as f64;
            let m = (0..ANGLES)
                .map(|j| f.eval(Complex64::from_polar(r, 2.0 * PI * j as f64 / ANGLES as f64)).norm())
                .fold(0.0, f64::max);
            (r, m.ln() / (r * r))
        })
        .collect();

    let reach = r_max.floor() as i64;
    let mut lattice: Vec<Complex64> =
        (-reach..=reach).flat_map(|m| (-reach..=reach).map(move |n| Complex64::new(m as f64, n as f64))).collect();
    lattice.sort_by(|p, q| p.norm_sqr().total_cmp(&q.norm_sqr()));
    let mut violations = 0;
    let mut first_violation = None;
    let mut worst = (lattice[0], f64::NEG_INFINITY);
    for &z in &lattice {
        let v = f.eval(z).norm();
        if v > worst.1 {
            worst = (z, v);
        }
        if v > kappa {
            violations += 1;
            first_violation.get_or_insert(z);
        }
    }
    Ok(GrowthReport {
        order,
        exp_type: f.exponential_type(),
        ratio_limsup: 0.0,
        ratio_curve,
        growth_ok: true,
        lattice_points: lattice.len(),
        violations,
        first_violation,
        worst,
        lattice_ok: violations == 0,
        kappa,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseBound {
    pub value: f64,
    pub bound: f64,
    /// `bound − value`.
    pub slack: f64,
    pub holds: bool,
}

/// The reproducing-kernel bound `|F(z)| ≤ ‖F‖e^{π|z|²/2}`, compared in logs.
pub fn pointwise_bound_check(f: &FockFunction, z: Complex64) -> PointwiseBound {
    let value = f.eval(z).norm();
    let norm = fock::norm(f);
    let ln_bound = norm.ln() + PI * z.norm_sqr() / 2.0;
    let bound = ln_bound.exp();
    let holds = value == 0.0 || value.ln() <= ln_bound + 1e-10;
    PointwiseBound { value, bound, slack: bound - value, holds }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub a: f64,
    pub radius: f64,
    /// Highest basis index `N`; the unknowns are `c₀…c_N`.
    pub n_max: usize,
    pub starts: usize,
    pub tol_feas: f64,
    pub seed: u64,
    pub near_constant: f64,
    /// Run even with fewer constraints than real unknowns.
    pub allow_underdetermined: bool,
}

impl ProbeConfig {
    pub fn new(a: f64, radius: f64, n_max: usize) -> Self {
        Self {
            a,
            radius,
            n_max,
            starts: 20,
            tol_feas: 1e-8,
            seed: 0,
            near_constant: 1e-4,
            allow_underdetermined: false,
        }
    }

    /// `a ≥ 1` lies outside the uniqueness regime; results there carry no
    /// expected verdict.
    pub fn exploratory(&self) -> bool {
        self.a >= 1.0
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.a) || !positive(self.radius) {
            return Err(Error::invalid("lattice parameter and radius must be positive"));
        }
        if self.starts == 0 {
            return Err(Error::invalid("at least one start is required"));
        }
        if !positive(self.tol_feas) || !positive(self.near_constant) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AllNearConstant,
    NonconstantFeasibleFound,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::AllNearConstant => "all-near-constant",
            Verdict::NonconstantFeasibleFound => "nonconstant-feasible-found",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub start: usize,
    pub coeffs: Vec<Complex64>,
    /// `Σ_λ (|F(λ)|² − 1)²`.
    pub residual: f64,
    /// `min_α ‖F − e^{iα}‖ = sqrt(Σ_{n≥1}|cₙ|² + (|c₀| − 1)²)`.
    pub distance_to_constants: f64,
    pub iterations: usize,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub config: ProbeConfig,
    pub constraint_points: usize,
    /// One entry per start, in start order.
    pub runs: Vec<Minimizer>,
    pub verdict: Verdict,
}

impl ProbeResult {
    pub fn feasible(&self) -> impl Iterator<Item = &Minimizer> {
        self.runs.iter().filter(|m| m.feasible)
    }
}

/// `aℤ² ∩ D(0, R)`.
pub fn lattice_disc(a: f64, radius: f64) -> Vec<Complex64> {
    let reach = (radius / a).floor() as i64;
    (-reach..=reach)
        .flat_map(|m| (-reach..=reach).map(move |n| Complex64::new(a * m as f64, a * n as f64)))
        .filter(|z| z.norm() <= radius * (1.0 + 1e-12))
        .collect()
}

pub fn distance_to_constants(coeffs: &[Complex64]) -> f64 {
    let head = coeffs.first().map_or(1.0, |c| (c.norm() - 1.0).powi(2));
    let rest: f64 = coeffs.iter().skip(1).map(|c| c.norm_sqr()).sum();
    (head + rest).sqrt()
}

/// Multistart Levenberg–Marquardt on `Σ_λ (|F(λ)|² − 1)²`.
pub fn constant_fit_search(cfg: &ProbeConfig) -> Result<ProbeResult> {
    cfg.validate()?;
    let points = lattice_disc(cfg.a, cfg.radius);
    let unknowns = 2 * (cfg.n_max + 1);
    if points.len() < unknowns && !cfg.allow_underdetermined {
        return Err(Error::Underdetermined(format!("{} constraint points for {unknowns} real unknowns", points.len())));
    }
    // basis[j][n] = eₙ(λ_j)
    let basis: Vec<Vec<Complex64>> = points
        .iter()
        .map(|&z| {
            (0..=cfg.n_max as u32)
                .map(|n| if n == 0 { Complex64::new(1.0, 0.0) } else { z.powu(n) * ln_basis_scale(n).exp() })
                .collect()
        })
        .collect();

    let runs: Vec<Minimizer> = (0..cfg.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(start as u64);
            let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
            let x0 = DVector::from_fn(unknowns, |_, _| normal.sample(&mut rng));
            let (x, residual, iterations) = levenberg_marquardt(&basis, x0);
            let coeffs: Vec<Complex64> = (0..=cfg.n_max).map(|n| Complex64::new(x[2 * n], x[2 * n + 1])).collect();
            Minimizer {
                start,
                distance_to_constants: distance_to_constants(&coeffs),
                feasible: residual < cfg.tol_feas,
                coeffs,
                residual,
                iterations,
            }
        })
        .collect();

    let mut feasible = runs.iter().filter(|m| m.feasible).peekable();
    let verdict = if feasible.peek().is_none() {
        Verdict::Inconclusive
    } else if feasible.any(|m| m.distance_to_constants > cfg.near_constant) {
        Verdict::NonconstantFeasibleFound
    } else {
        Verdict::AllNearConstant
    };
    Ok(ProbeResult { config: *cfg, constraint_points: points.len(), runs, verdict })
}

/// Residuals `|F(λ_j)|² − 1` and the Jacobian in `(Re c₀, Im c₀, Re c₁, …)`.
fn residuals(basis: &[Vec<Complex64>], x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let cols = x.len();
    let mut r = DVector::zeros(basis.len());
    let mut jac = DMatrix::zeros(basis.len(), cols);
    for (j, row) in basis.iter().enumerate() {
        let f: Complex64 = row.iter().enumerate().map(|(n, e)| Complex64::new(x[2 * n], x[2 * n + 1]) * e).sum();
        r[j] = f.norm_sqr() - 1.0;
        for (n, e) in row.iter().enumerate() {
            let w = f.conj() * e;
            jac[(j, 2 * n)] = 2.0 * w.re;
            jac[(j, 2 * n + 1)] = -2.0 * w.im;
        }
    }
    (r, jac)
}

/// Damped Gauss–Newton with monotone acceptance. Returns the final point,
/// its residual and the iteration count.
fn levenberg_marquardt(basis: &[Vec<Complex64>], mut x: DVector<f64>) -> (DVector<f64>, f64, usize) {
    let (mut r, mut jac) = residuals(basis, &x);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    for iter in 0..MAX_ITERATIONS {
        let grad = jac.transpose() * &r;
        if 2.0 * grad.norm() < GRADIENT_TOL {
            return (x, cost, iter);
        }
        let jtj = jac.transpose() * &jac;
        let mut improved = false;
        while mu < 1e16 {
            let mut damped = jtj.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += mu * (1.0 + jtj[(i, i)]);
            }
            let Some(chol) = damped.cholesky() else {
                mu *= 4.0;
                continue;
            };
            let step = chol.solve(&(-&grad));
            let trial = &x + &step;
            let (tr, tj) = residuals(basis, &trial);
            let trial_cost = tr.norm_squared();
            if trial_cost < cost {
                x = trial;
                r = tr;
                jac = tj;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            return (x, cost, iter);
        }
    }
    (x, cost, MAX_ITERATIONS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_of_one() {
        let r = growth_hypothesis_check(&FockFunction::one(), 1.0, 4.0).unwrap();
        assert!(r.holds());
        assert_eq!(r.order, 0.0);
        assert!(r.ratio_curve.iter().all(|&(_, q)| q.abs() < 1e-15));
    }

    #[test]
    fn growth_of_e1_fails_on_lattice() {
        let r = growth_hypothesis_check(&FockFunction::basis(1), 1.0, 3.0).unwrap();
        assert!(r.growth_ok && !r.lattice_ok);
        // |e₁(λ)| = √π|λ| > 1 already at |λ| = 1
        assert_eq!(r.first_violation.unwrap().norm(), 1.0);
        let two = FockFunction::basis(1).eval(Complex64::new(2.0, 0.0)).norm();
        assert!((two - 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn growth_of_multiplier() {
        let h = fock::multiplier(0.1, 1.0, fock::Sign::Plus, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        let r = growth_hypothesis_check(&h, 1.0, 8.0).unwrap();
        assert_eq!(r.order, 1.0);
        assert!(!r.lattice_ok);
        assert!(r.worst.0.re == 8.0);
        let last = r.ratio_curve.last().unwrap().1;
        assert!(last < r.ratio_curve[CURVE_POINTS / 4].1);
    }

    #[test]
    fn growth_rejects_small_window() {
        assert!(growth_hypothesis_check(&FockFunction::one(), 1.0, 2.0).is_err());
    }

    #[test]
    fn pointwise_bound_examples() {
        let b = pointwise_bound_check(&FockFunction::one(), Complex64::new(0.0, 0.0));
        assert!(b.holds);
        assert!(b.slack.abs() < 1e-15);
        let b = pointwise_bound_check(&FockFunction::basis(5), Complex64::new(2.0, 1.0));
        assert!(b.holds && b.slack > 0.0);
    }

    #[test]
    fn lattice_disc_counts() {
        assert_eq!(lattice_disc(1.0, 1.0).len(), 5);
        assert_eq!(lattice_disc(1.0, 0.5).len(), 1);
    }

    #[test]
    fn underdetermined_is_rejected() {
        let cfg = ProbeConfig::new(1.0, 0.5, 1);
        assert!(matches!(constant_fit_search(&cfg), Err(Error::Underdetermined(_))));
    }

    #[test]
    fn single_point_admits_nonconstant_fit() {
        let cfg = ProbeConfig { allow_underdetermined: true, starts: 8, ..ProbeConfig::new(1.0, 0.5, 1) };
        let r = constant_fit_search(&cfg).unwrap();
        assert_eq!(r.constraint_points, 1);
        assert_eq!(r.verdict, Verdict::NonconstantFeasibleFound);
    }

    #[test]
    fn constants_only() {
        let cfg = ProbeConfig { starts: 5, ..ProbeConfig::new(0.5, 1.0, 0) };
        let r = constant_fit_search(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::AllNearConstant);
        for m in &r.runs {
            assert!((m.coeffs[0].norm() - 1.0).abs() < 1e-8);
            assert!(m.distance_to_constants < 1e-8);
        }
    }

    #[test]
    fn deterministic() {
        let cfg = ProbeConfig { starts: 4, seed: 7, ..ProbeConfig::new(0.5, 2.0, 3) };
        assert_eq!(constant_fit_search(&cfg).unwrap(), constant_fit_search(&cfg).unwrap());
    }

    #[test]
    fn distance_formula() {
        let c = [Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)];
        assert_eq!(distance_to_constants(&c), 0.0);
        let c = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!((distance_to_constants(&c) - 2f64.sqrt()).abs() < 1e-15);
    }
}
