//! Entire functions of the form `Σ c·zⁿ·e^{βz}` inside the Fock space.
//!
//! The Fock space carries the inner product
//! `(F, G) = ∫_ℂ F(z) conj(G(z)) e^{-π|z|²} dz`, for which the normalised
//! monomials `eₙ(z) = (πⁿ/n!)^{1/2} zⁿ` form an orthonormal basis. Every atom
//! `c·zⁿ·e^{βz}` has finite exponential type, so the class is a subspace of
//! the Fock space closed under sums, products and argument translation.
//!
//! Inner products are evaluated in closed form from the kernel identity
//! `(e^{βz}, e^{γz}) = e^{βγ̄/π}` and its derivatives in `β` and `γ̄`. All
//! per-term arithmetic runs in the log domain so that tiny coefficients
//! multiplying huge exponentials (the regime of the multipliers `H±_δ`) do not
//! overflow.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::special::{cexp, cln, ln_basis_scale, ln_binomial, ln_factorial, CompensatedSum};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// One term `coeff·z^power·e^{expo·z}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockAtom {
    pub coeff: Complex64,
    pub power: u32,
    pub expo: Complex64,
}

impl FockAtom {
    pub fn new(coeff: Complex64, power: u32, expo: Complex64) -> Self {
        Self { coeff, power, expo }
    }

    /// `log(coeff·zⁿ·e^{βz}) + log_weight`, with `-inf` real part for a zero term.
    fn ln_value(&self, z: Complex64, log_weight: Complex64) -> Complex64 {
        let mut acc = cln(self.coeff) + self.expo * z + log_weight;
        if self.power > 0 {
            if z == ZERO {
                return Complex64::new(f64::NEG_INFINITY, 0.0);
            }
            acc += self.power as f64 * z.ln();
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        cexp(self.ln_value(z, ZERO))
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.expo
            .re
            .total_cmp(&other.expo.re)
            .then(self.expo.im.total_cmp(&other.expo.im))
            .then(self.power.cmp(&other.power))
    }

    fn same_key(&self, other: &Self) -> bool {
        self.power == other.power && self.expo == other.expo
    }
}

/// A canonical finite sum of [`FockAtom`]s.
///
/// Atoms sharing `(power, expo)` are merged, zero coefficients dropped and the
/// rest ordered by `(Re β, Im β, n)`, so two representations of the same sum
/// compare equal structurally.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockFunction {
    atoms: Vec<FockAtom>,
}

impl FockFunction {
    pub fn from_atoms(atoms: impl IntoIterator<Item = FockAtom>) -> Self {
        let mut atoms: Vec<FockAtom> = atoms.into_iter().filter(|a| a.coeff != ZERO).collect();
        atoms.sort_by(FockAtom::key_cmp);
        let mut merged: Vec<FockAtom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.same_key(&atom) => last.coeff += atom.coeff,
                _ => merged.push(atom),
            }
        }
        merged.retain(|a| a.coeff != ZERO);
        Self { atoms: merged }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_atoms([FockAtom::new(c, 0, ZERO)])
    }

    /// `c·zⁿ`.
    pub fn monomial(c: Complex64, n: u32) -> Self {
        Self::from_atoms([FockAtom::new(c, n, ZERO)])
    }

    /// `c·e^{βz}`.
    pub fn exponential(c: Complex64, beta: Complex64) -> Self {
        Self::from_atoms([FockAtom::new(c, 0, beta)])
    }

    /// The orthonormal basis element `eₙ(z) = (πⁿ/n!)^{1/2} zⁿ`.
    pub fn basis(n: u32) -> Self {
        Self::monomial(Complex64::new(ln_basis_scale(n).exp(), 0.0), n)
    }

    /// `Σ cₙ eₙ` for coefficients in the orthonormal monomial basis.
    pub fn from_basis_coeffs(coeffs: &[Complex64]) -> Self {
        Self::from_atoms(coeffs.iter().enumerate().map(|(n, &c)| {
            let n = n as u32;
            FockAtom::new(c * ln_basis_scale(n).exp(), n, ZERO)
        }))
    }

    pub fn atoms(&self) -> &[FockAtom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// True when every atom has `β = 0`.
    pub fn is_polynomial(&self) -> bool {
        self.atoms.iter().all(|a| a.expo == ZERO)
    }

    pub fn degree(&self) -> Option<u32> {
        self.atoms.iter().map(|a| a.power).max()
    }

    /// Largest `|β|`: the exponential type of the function (0 for polynomials).
    pub fn exponential_type(&self) -> f64 {
        self.atoms.iter().map(|a| a.expo.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_weighted(z, ZERO)
    }

    /// `F(z)·e^{log_weight}`, with the weight folded into each atom's exponent.
    pub fn eval_weighted(&self, z: Complex64, log_weight: Complex64) -> Complex64 {
        let mut sum = CompensatedSum::default();
        for atom in &self.atoms {
            sum.add(cexp(atom.ln_value(z, log_weight)));
        }
        sum.value()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_atoms(self.atoms.iter().map(|a| FockAtom::new(a.coeff * c, a.power, a.expo)))
    }

    /// The argument translation `z ↦ F(z - u)`.
    pub fn shift_argument(&self, u: Complex64) -> Self {
        let mut out = Vec::new();
        for atom in &self.atoms {
            // c (z-u)^n e^{β(z-u)} = c e^{-βu} Σ_k C(n,k) (-u)^{n-k} z^k e^{βz}
            let base = atom.coeff * (-atom.expo * u).exp();
            for k in 0..=atom.power {
                let j = atom.power - k;
                let binom = ln_binomial(atom.power, k).exp();
                let c = base * binom * (-u).powu(j);
                out.push(FockAtom::new(c, k, atom.expo));
            }
        }
        Self::from_atoms(out)
    }
}

impl fmt::Display for FockFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·z^{}·e^({}·z)", a.coeff, a.power, a.expo)?;
        }
        Ok(())
    }
}

impl Add for &FockFunction {
    type Output = FockFunction;
    fn add(self, rhs: &FockFunction) -> FockFunction {
        FockFunction::from_atoms(self.atoms.iter().chain(rhs.atoms.iter()).copied())
    }
}

impl Sub for &FockFunction {
    type Output = FockFunction;
    fn sub(self, rhs: &FockFunction) -> FockFunction {
        self + &(-rhs)
    }
}

impl Neg for &FockFunction {
    type Output = FockFunction;
    fn neg(self) -> FockFunction {
        self.scale(-ONE)
    }
}

impl Mul for &FockFunction {
    type Output = FockFunction;
    fn mul(self, rhs: &FockFunction) -> FockFunction {
        multiply(self, rhs)
    }
}

impl Mul<Complex64> for &FockFunction {
    type Output = FockFunction;
    fn mul(self, rhs: Complex64) -> FockFunction {
        self.scale(rhs)
    }
}

pub fn eval(f: &FockFunction, z: Complex64) -> Complex64 {
    f.eval(z)
}

/// Canonical product of two functions of the atom class.
pub fn multiply(f: &FockFunction, g: &FockFunction) -> FockFunction {
    let mut out = Vec::with_capacity(f.atoms.len() * g.atoms.len());
    for a in &f.atoms {
        for b in &g.atoms {
            out.push(FockAtom::new(a.coeff * b.coeff, a.power + b.power, a.expo + b.expo));
        }
    }
    FockFunction::from_atoms(out)
}

/// `(zⁿe^{βz}, z^m e^{γz})` times `c₁·conj(c₂)`, as a sum of log-domain terms.
fn atom_inner(a: &FockAtom, b: &FockAtom) -> Complex64 {
    let (n, m) = (a.power, b.power);
    let beta = a.expo;
    let gamma_bar = b.expo.conj();
    let ln_pi = PI.ln();
    let common = cln(a.coeff) + cln(b.coeff).conj() + beta * gamma_bar / PI;
    let ln_beta = cln(beta);
    let ln_gamma_bar = cln(gamma_bar);
    let mut sum = CompensatedSum::default();
    for k in 0..=n.min(m) {
        // ∂_β^n ∂_γ̄^m e^{βγ̄/π}
        //   = e^{βγ̄/π} Σ_k C(n,k) m!/(m-k)! π^{-(m+n-k)} β^{m-k} γ̄^{n-k}
        let pb = m - k;
        let pg = n - k;
        if (pb > 0 && beta == ZERO) || (pg > 0 && gamma_bar == ZERO) {
            continue;
        }
        let mut ln_term =
            common + (ln_binomial(n, k) + ln_factorial(m) - ln_factorial(pb) - (m + n - k) as f64 * ln_pi);
        if pb > 0 {
            ln_term += pb as f64 * ln_beta;
        }
        if pg > 0 {
            ln_term += pg as f64 * ln_gamma_bar;
        }
        sum.add(cexp(ln_term));
    }
    sum.value()
}

/// The Fock inner product `(F, G)`, linear in `F` and conjugate-linear in `G`.
pub fn inner(f: &FockFunction, g: &FockFunction) -> Complex64 {
    let mut sum = CompensatedSum::default();
    for a in &f.atoms {
        for b in &g.atoms {
            sum.add(atom_inner(a, b));
        }
    }
    sum.value()
}

pub fn norm(f: &FockFunction) -> f64 {
    inner(f, f).re.max(0.0).sqrt()
}

/// Sign selector for the `±` members of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Parameters of the multipliers `H±_δ(z) = 1 ± iδ·exp((πe^{iθ}/a)(z - λ̄₀))`.
///
/// On the Fock side the two magnitudes agree on `e^{-iθ}(ℝ + iaℤ) + λ̄₀`, which
/// under the Gabor convention `z = x - iω` is the line family
/// `R_θ(ℝ × aℤ) + λ₀` of the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierParams {
    pub a: f64,
    pub delta: f64,
    pub theta: f64,
    pub lambda0: Complex64,
}

impl MultiplierParams {
    pub fn new(a: f64, delta: f64, theta: f64, lambda0: Complex64) -> Result<Self> {
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::invalid(format!("line spacing a must be positive, got {a}")));
        }
        if delta <= 0.0 || !delta.is_finite() {
            return Err(Error::invalid(format!("delta must be positive, got {delta}")));
        }
        if !theta.is_finite() || !lambda0.re.is_finite() || !lambda0.im.is_finite() {
            return Err(Error::invalid("theta and lambda0 must be finite"));
        }
        Ok(Self { a, delta, theta, lambda0 })
    }

    /// The exponent rate `πe^{iθ}/a`.
    pub fn rate(&self) -> Complex64 {
        Complex64::from_polar(PI / self.a, self.theta)
    }

    /// `z ↦ exp(rate·(z - λ̄₀))` as a single atom.
    pub fn exponential(&self) -> FockFunction {
        let rate = self.rate();
        FockFunction::exponential((-rate * self.lambda0.conj()).exp(), rate)
    }

    pub fn build(&self, sign: Sign) -> FockFunction {
        let rate = self.rate();
        let c = I * sign.value() * self.delta * (-rate * self.lambda0.conj()).exp();
        FockFunction::from_atoms([FockAtom::new(ONE, 0, ZERO), FockAtom::new(c, 0, rate)])
    }

    /// The `k`-th zero of `H^sign_δ`, in closed form.
    ///
    /// `1 ± iδe^{w} = 0` means `e^{w} = ±i/δ`, so
    /// `w = ln(1/δ) + i(±π/2 + 2πk)` and `z = λ̄₀ + w/rate`.
    pub fn root(&self, sign: Sign, k: i64) -> Complex64 {
        let w = Complex64::new(-self.delta.ln(), sign.value() * PI / 2.0 + 2.0 * PI * k as f64);
        self.lambda0.conj() + w / self.rate()
    }
}

/// The multiplier `H^sign_δ` for the line family `R_θ(ℝ × aℤ) + λ₀`.
pub fn multiplier(delta: f64, a: f64, sign: Sign, theta: f64, lambda0: Complex64) -> Result<FockFunction> {
    Ok(MultiplierParams::new(a, delta, theta, lambda0)?.build(sign))
}

/// Coefficients in the orthonormal basis `eₙ` with a certified ℓ² tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    pub coeffs: Vec<Complex64>,
    pub tail_bound: f64,
}

impl CoefficientSeries {
    pub fn head_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

struct ExpansionAtom {
    ln_coeff: Complex64,
    power: u32,
    ln_beta: Complex64,
    beta_sq: f64,
}

impl ExpansionAtom {
    /// `log` of the coefficient of `e_{p+k}` in `c zᵖ e^{βz}`:
    /// `c βᵏ/k! · sqrt((p+k)!/π^{p+k})`.
    fn ln_term(&self, k: u32) -> Complex64 {
        let n = self.power + k;
        let mut t = self.ln_coeff - ln_factorial(k) - ln_basis_scale(n);
        if k > 0 {
            t += k as f64 * self.ln_beta;
        }
        t
    }

    /// `|t_{k+1}|² / |t_k|²`, decreasing in `k`.
    fn ratio(&self, k: u32) -> f64 {
        self.beta_sq * (self.power + k + 1) as f64 / (PI * ((k + 1) as f64).powi(2))
    }

    /// Log of the geometric majorant for `Σ_{k > last} |t_k|²`, if the ratio
    /// test already applies there.
    fn ln_tail_sq(&self, last: u32) -> Option<f64> {
        let r = self.ratio(last + 1);
        if r < 1.0 {
            Some(2.0 * self.ln_term(last + 1).re - (1.0 - r).ln())
        } else {
            None
        }
    }
}

/// Expand `F` in the basis `eₙ`, truncating once the certified tail is `≤ tol`.
///
/// Each `e^{βz}` factor is expanded in its Taylor series. Terms are summed
/// until the ratio of consecutive squared coefficients drops below one and the
/// geometric majorant of the remainder is below `tol²/2`; the reported bound
/// doubles that majorant. Bounds of different atoms add by the triangle
/// inequality.
pub fn monomial_coeffs(f: &FockFunction, tol: f64) -> CoefficientSeries {
    let tol = if tol.is_finite() && tol > 1e-300 { tol } else { 1e-300 };
    let ln_pi_half = |n: u32| ln_basis_scale(n);

    let mut polynomial_degree = 0u32;
    let mut expanding = Vec::new();
    for atom in &f.atoms {
        if atom.expo == ZERO {
            polynomial_degree = polynomial_degree.max(atom.power);
        } else {
            expanding.push(ExpansionAtom {
                ln_coeff: cln(atom.coeff),
                power: atom.power,
                ln_beta: atom.expo.ln(),
                beta_sq: atom.expo.norm_sqr(),
            });
        }
    }

    let per_atom_tol = tol / expanding.len().max(1) as f64;
    let ln_target = (per_atom_tol * per_atom_tol / 2.0).ln();
    let mut top = polynomial_degree;
    for atom in &expanding {
        let mut last = 0u32;
        loop {
            if let Some(ln_tail) = atom.ln_tail_sq(last) {
                if ln_tail <= ln_target {
                    break;
                }
            }
            last += 1;
        }
        top = top.max(atom.power + last);
    }

    let mut coeffs = vec![ZERO; top as usize + 1];
    for atom in &f.atoms {
        if atom.expo == ZERO {
            // c zᵖ = c sqrt(p!/πᵖ) eₚ
            coeffs[atom.power as usize] += atom.coeff * (-ln_pi_half(atom.power)).exp();
        }
    }
    let mut tail_bound = 0.0;
    for atom in &expanding {
        let last = top - atom.power;
        for k in 0..=last {
            coeffs[(atom.power + k) as usize] += cexp(atom.ln_term(k));
        }
        let ln_tail = atom.ln_tail_sq(last).expect("ratio test holds beyond the stopping index");
        tail_bound += (2.0 * ln_tail.exp()).sqrt();
    }
    CoefficientSeries { coeffs, tail_bound }
}

/// Phase-aligned distance between two Fock functions, `min_α ‖G - e^{iα}F‖`.
///
/// Returns `(α*, distance)` with `α* = arg (G, F)` in `[0, 2π)`.
pub fn phase_distance(f: &FockFunction, g: &FockFunction) -> (f64, f64) {
    let overlap = inner(g, f);
    let alpha = overlap.arg().rem_euclid(2.0 * PI);
    let aligned = g - &f.scale(Complex64::from_polar(1.0, alpha));
    (alpha, norm(&aligned))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_constant_and_basis() {
        assert_eq!(FockFunction::one().eval(c(3.0, -2.0)), ONE);
        let e5 = FockFunction::basis(5);
        assert_relative_eq!(e5.eval(ONE).re, (PI.powi(5) / 120.0).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(e5.eval(ONE).re, 1.5969, epsilon = 1e-4);
        assert_eq!(e5.eval(ZERO), ZERO);
    }

    #[test]
    fn multiplier_vanishes_at_closed_form_root() {
        let a = 0.25;
        let delta = (-PI).exp();
        let h = multiplier(delta, a, Sign::Plus, 0.0, ZERO).unwrap();
        let z = c(0.25, 0.125);
        assert!(h.eval(z).norm() < 1e-12);
        let params = MultiplierParams::new(a, delta, 0.0, ZERO).unwrap();
        assert!((params.root(Sign::Plus, 0) - z).norm() < 1e-15);
    }

    #[test]
    fn multiplier_rejects_bad_parameters() {
        assert!(multiplier(0.0, 1.0, Sign::Plus, 0.0, ZERO).is_err());
        assert!(multiplier(-1.0, 1.0, Sign::Plus, 0.0, ZERO).is_err());
        assert!(multiplier(0.1, 0.0, Sign::Minus, 0.0, ZERO).is_err());
        assert!(multiplier(0.1, f64::NAN, Sign::Minus, 0.0, ZERO).is_err());
    }

    #[test]
    fn multiplier_at_origin() {
        let h = multiplier(0.3, 0.5, Sign::Plus, 0.0, ZERO).unwrap();
        assert!((h.eval(ZERO) - c(1.0, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn basis_is_orthonormal() {
        for n in 0..=8 {
            for m in 0..=8 {
                let v = inner(&FockFunction::basis(n), &FockFunction::basis(m));
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((v - expected).norm() < 1e-12, "({n},{m}) -> {v}");
            }
        }
    }

    #[test]
    fn unit_constant_and_zero_norms() {
        assert!((inner(&FockFunction::one(), &FockFunction::one()) - ONE).norm() < 1e-15);
        assert_eq!(norm(&FockFunction::zero()), 0.0);
    }

    #[test]
    fn exponential_norm_matches_series() {
        // (e^z, e^z) = Σ (1/π)ⁿ/n!
        let series: f64 = (0..40).map(|n| (1.0 / PI).powi(n) / statrs::function::factorial::factorial(n as u64)).sum();
        let e = FockFunction::exponential(ONE, ONE);
        assert_relative_eq!(inner(&e, &e).re, series, max_relative = 1e-14);
        assert_relative_eq!(series, 1.374_802, epsilon = 1e-6);
    }

    #[test]
    fn first_derivative_kernel_terms() {
        // (z e^{βz}, e^{γz}) = (γ̄/π) e^{βγ̄/π}
        let beta = c(0.3, -0.7);
        let gamma = c(-1.1, 0.4);
        let lhs =
            inner(&FockFunction::from_atoms([FockAtom::new(ONE, 1, beta)]), &FockFunction::exponential(ONE, gamma));
        let k = (beta * gamma.conj() / PI).exp();
        assert!((lhs - gamma.conj() / PI * k).norm() < 1e-14);
        let rhs =
            inner(&FockFunction::exponential(ONE, beta), &FockFunction::from_atoms([FockAtom::new(ONE, 1, gamma)]));
        assert!((rhs - beta / PI * k).norm() < 1e-14);
    }

    #[test]
    fn inner_is_conjugate_symmetric_and_linear() {
        let f = FockFunction::from_atoms([
            FockAtom::new(c(1.0, 0.5), 2, c(0.5, 0.0)),
            FockAtom::new(c(-0.2, 1.0), 0, c(0.0, -1.0)),
        ]);
        let g = FockFunction::from_atoms([
            FockAtom::new(c(0.3, 0.0), 3, c(-0.25, 0.5)),
            FockAtom::new(c(0.0, 2.0), 1, ZERO),
        ]);
        let fg = inner(&f, &g);
        let gf = inner(&g, &f);
        assert!((fg - gf.conj()).norm() < 1e-13);
        let s = c(0.7, -1.3);
        assert!((inner(&f.scale(s), &g) - s * fg).norm() < 1e-12);
        assert!((inner(&f, &g.scale(s)) - s.conj() * fg).norm() < 1e-12);
    }

    #[test]
    fn product_of_basis_elements() {
        // e₁·e₁ = π z² = √2 e₂
        let p = multiply(&FockFunction::basis(1), &FockFunction::basis(1));
        assert_eq!(p.atoms().len(), 1);
        assert_relative_eq!(p.atoms()[0].coeff.re, PI, max_relative = 1e-14);
        let e2 = FockFunction::basis(2).scale(c(2f64.sqrt(), 0.0));
        assert_relative_eq!(p.atoms()[0].coeff.re, e2.atoms()[0].coeff.re, max_relative = 1e-14);
    }

    #[test]
    fn product_with_multiplier_has_two_atoms() {
        let a = 0.25;
        let delta = 1e-3;
        let e5 = FockFunction::basis(5);
        let h = multiplier(delta, a, Sign::Plus, 0.0, ZERO).unwrap();
        let g = multiply(&e5, &h);
        let c5 = e5.atoms()[0].coeff;
        assert_eq!(g.atoms().len(), 2);
        assert_eq!(g.atoms()[0], FockAtom::new(c5, 5, ZERO));
        assert_eq!(g.atoms()[1].power, 5);
        assert_eq!(g.atoms()[1].expo, c(PI / a, 0.0));
        assert!((g.atoms()[1].coeff - I * delta * c5).norm() < 1e-15);
        assert_eq!(multiply(&e5, &FockFunction::one()), e5);
    }

    #[test]
    fn canonical_merge_drops_cancelled_atoms() {
        let f = FockFunction::from_atoms([
            FockAtom::new(ONE, 1, c(1.0, 0.0)),
            FockAtom::new(-ONE, 1, c(1.0, 0.0)),
            FockAtom::new(c(2.0, 0.0), 0, ZERO),
        ]);
        assert_eq!(f, FockFunction::constant(c(2.0, 0.0)));
    }

    #[test]
    fn series_of_basis_element_is_exact() {
        let s = monomial_coeffs(&FockFunction::basis(3), 1e-12);
        assert_eq!(s.tail_bound, 0.0);
        assert_eq!(s.coeffs.len(), 4);
        for (n, v) in s.coeffs.iter().enumerate() {
            let expected = if n == 3 { 1.0 } else { 0.0 };
            assert!((v - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn series_of_exponential_matches_norm() {
        let e = FockFunction::exponential(ONE, ONE);
        let s = monomial_coeffs(&e, 1e-10);
        assert!(s.tail_bound <= 1e-10);
        let diff = (s.head_norm_sq() - (1.0 / PI).exp()).abs();
        assert!(diff <= s.tail_bound.powi(2) + 1e-13, "diff {diff}");
    }

    #[test]
    fn series_of_multiplier_matches_norm() {
        let h = multiplier(1e-3, 0.25, Sign::Plus, 0.0, ZERO).unwrap();
        let s = monomial_coeffs(&h, 1e-10);
        let closed = norm(&h);
        let series = s.head_norm_sq().sqrt();
        assert!(
            (closed - series).abs() <= s.tail_bound + 1e-12 * closed,
            "closed {closed} series {series} tail {}",
            s.tail_bound
        );
    }

    #[test]
    fn shift_argument_matches_pointwise() {
        let f = FockFunction::from_atoms([
            FockAtom::new(c(1.0, -0.5), 3, c(0.4, 0.2)),
            FockAtom::new(c(0.5, 0.0), 1, ZERO),
        ]);
        let u = c(0.7, -0.3);
        let g = f.shift_argument(u);
        for z in [c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.5)] {
            assert!((g.eval(z) - f.eval(z - u)).norm() < 1e-12);
        }
    }

    #[test]
    fn fock_phase_distance_detects_global_phase() {
        let f =
            FockFunction::from_atoms([FockAtom::new(c(1.0, 0.0), 0, ZERO), FockAtom::new(c(0.3, 0.1), 2, c(0.5, 0.0))]);
        let g = f.scale(Complex64::from_polar(1.0, 1.0));
        let (alpha, d) = phase_distance(&f, &g);
        assert!((alpha - 1.0).abs() < 1e-12);
        assert!(d < 1e-7, "{d}");
    }
}
