//! Counterexample pairs and their certificates.
//!
//! Every pair built here has Fock images of the form `G± = c±·Q·H±_δ`, where
//! `|c⁺| = |c⁻|` and `|H⁺_δ| = |H⁻_δ|` on the line family. Agreement of the
//! sampled Gabor magnitudes is then an algebraic identity; the numerical
//! reports only certify it on a finite window.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::{self, FockFunction, MultiplierParams, Sign};
use crate::gabor::{self, gabor_eval, gabor_quadrature, LineFamily, LinePoint, Tabulated};
use crate::signals::{self, ClosedFormSignal, Interval, PhaseDistance, TimeDomain, TimeSignal};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default threshold on the phase distance for [`verify_distinct`].
pub const DEFAULT_DIST_TOL: f64 = 1e-8;
/// Relative tolerance of the Hermite expansions produced by the constructors.
const PULLBACK_REL_TOL: f64 = 1e-12;
/// Closed-form roots of `H⁺_δ` scanned for a witness.
const ROOT_SCAN: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Base,
    Shifted,
    Perturb,
    Density,
    /// Two arbitrary images, no multiplier structure.
    Custom,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Base => "base",
            Mode::Shifted => "shifted",
            Mode::Perturb => "perturb",
            Mode::Density => "density",
            Mode::Custom => "custom",
        }
    }
}

/// One signal of a pair: its Hermite expansion and its exact Fock image.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMember {
    pub time: TimeSignal,
    pub image: FockFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairMeta {
    pub mode: Mode,
    pub a: f64,
    pub delta: f64,
    pub theta: f64,
    pub lambda0: Complex64,
    /// The polynomial `P` of the density and perturbation constructions.
    pub poly: Option<FockFunction>,
    pub epsilon: Option<f64>,
}

/// `G± = phase±·common·H±_δ`, with `|phase⁺| = |phase⁻|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierStructure {
    pub common: FockFunction,
    pub phase_plus: Complex64,
    pub phase_minus: Complex64,
    pub params: MultiplierParams,
}

impl MultiplierStructure {
    pub fn expected(&self, sign: Sign) -> FockFunction {
        let phase = match sign {
            Sign::Plus => self.phase_plus,
            Sign::Minus => self.phase_minus,
        };
        fock::multiply(&self.common, &self.params.build(sign)).scale(phase)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Certificates {
    pub agreement: Option<AgreementReport>,
    /// Enclosure of `‖f − g±‖₂` over both signs, for constructions that
    /// approximate a reference signal.
    pub distance: Option<Interval>,
    pub phase_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexamplePair {
    pub plus: PairMember,
    pub minus: PairMember,
    pub family: LineFamily,
    pub meta: PairMeta,
    pub structure: Option<MultiplierStructure>,
    /// Exact time-domain formulas, when the construction has them.
    pub closed_form: Option<(ClosedFormSignal, ClosedFormSignal)>,
    pub certificates: Certificates,
}

impl CounterexamplePair {
    /// A pair from two arbitrary images, e.g. to exercise failure reports.
    pub fn from_images(plus: FockFunction, minus: FockFunction, family: LineFamily) -> Self {
        let (plus, minus) = (member(plus), member(minus));
        let meta = PairMeta {
            mode: Mode::Custom,
            a: family.a,
            delta: f64::NAN,
            theta: family.theta,
            lambda0: family.lambda0,
            poly: None,
            epsilon: None,
        };
        finish(plus, minus, family, meta, None, None, None)
    }

    pub fn member(&self, sign: Sign) -> &PairMember {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    /// Whether `G± = phase±·common·H±_δ` holds at the representation level
    /// for multiplier parameters matching the line family.
    pub fn symbolic_agreement(&self) -> bool {
        let Some(s) = &self.structure else { return false };
        let p = &s.params;
        let fam = &self.family;
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-14 * x.abs().max(y.abs()).max(1.0);
        let same_family = close(p.a, fam.a)
            && close(p.theta, fam.theta)
            && close(p.lambda0.re, fam.lambda0.re)
            && close(p.lambda0.im, fam.lambda0.im);
        let same_modulus = close(s.phase_plus.norm(), s.phase_minus.norm());
        same_family
            && same_modulus
            && [Sign::Plus, Sign::Minus].into_iter().all(|sign| {
                let image = &self.member(sign).image;
                let residual = fock::norm(&(image - &s.expected(sign)));
                residual <= 1e-12 * fock::norm(image).max(f64::MIN_POSITIVE)
            })
    }

    /// Run [`verify_agreement`] on the default window and keep the report.
    pub fn certify_agreement(mut self, tol: f64) -> Result<Self> {
        let report = verify_agreement(&self, &AgreementWindow::default(), tol, EvalMode::Fast)?;
        self.certificates.agreement = Some(report);
        Ok(self)
    }
}

fn member(image: FockFunction) -> PairMember {
    let tol = PULLBACK_REL_TOL * fock::norm(&image).max(1.0);
    PairMember { time: signals::inverse_bargmann(&image, tol), image }
}

fn finish(
    plus: PairMember,
    minus: PairMember,
    family: LineFamily,
    meta: PairMeta,
    structure: Option<MultiplierStructure>,
    closed_form: Option<(ClosedFormSignal, ClosedFormSignal)>,
    distance: Option<Interval>,
) -> CounterexamplePair {
    let pd = signals::phase_distance(&plus.time, &minus.time);
    CounterexamplePair {
        plus,
        minus,
        family,
        meta,
        structure,
        closed_form,
        certificates: Certificates { agreement: None, distance, phase_distance: Some(pd.dist) },
    }
}

fn check_representable(image: &FockFunction, what: &str) -> Result<()> {
    let bad = image.is_zero() || image.atoms().iter().any(|a| !a.coeff.re.is_finite() || !a.coeff.im.is_finite());
    if bad {
        Err(Error::Overflow(format!("{what}: Fock image not representable in f64")))
    } else {
        Ok(())
    }
}

/// `h±(t) = φ(t)(cosh(πt/a) ± i sinh(πt/a))` with exact two-atom images.
///
/// `Bh± = (e^{π/(8a²)}/2)·(1∓i)·e^{-πz/(2a)}·H±₁`, so the pair agrees on
/// `ℝ × aℤ`.
pub fn base_pair(a: f64) -> Result<CounterexamplePair> {
    let cf_plus = ClosedFormSignal::base_pair(a, Sign::Plus)?;
    let cf_minus = ClosedFormSignal::base_pair(a, Sign::Minus)?;
    let params = MultiplierParams::new(a, 1.0, 0.0, ZERO)?;
    let k = (PI / (8.0 * a * a)).exp() / 2.0;
    let structure = MultiplierStructure {
        common: FockFunction::exponential(Complex64::new(k, 0.0), Complex64::new(-PI / (2.0 * a), 0.0)),
        phase_plus: ONE - I,
        phase_minus: ONE + I,
        params,
    };
    let plus = member(cf_plus.bargmann_image());
    let minus = member(cf_minus.bargmann_image());
    check_representable(&plus.image, "base pair")?;
    let meta = PairMeta { mode: Mode::Base, a, delta: 1.0, theta: 0.0, lambda0: ZERO, poly: None, epsilon: None };
    Ok(finish(plus, minus, LineFamily::horizontal(a)?, meta, Some(structure), Some((cf_plus, cf_minus)), None))
}

/// The time shift `u = −(a/π) log δ` that turns the base pair into `H±_δ`.
pub fn shift_for_delta(a: f64, delta: f64) -> f64 {
    -(a / PI) * delta.ln()
}

/// `T_u h±` with `u = −(a/π) log δ`.
///
/// Multiplying the images by `δ^{az}e^{πz/(2a)}·(1±i)/2` leaves exactly
/// `C·H±_δ` with `C = (e^{π/(8a²)}/2)·δ^{-1/2}·e^{-πu²/2}`; the structure
/// records the equivalent factorisation `G± = (1∓i)·C·δ^{-az}e^{-πz/(2a)}·H±_δ`.
pub fn shifted_pair(a: f64, delta: f64) -> Result<CounterexamplePair> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    let base = base_pair(a)?;
    let u = shift_for_delta(a, delta);
    let (cf_plus, cf_minus) = base.closed_form.expect("base pair has closed forms");
    let (cf_plus, cf_minus) = (cf_plus.translate(u), cf_minus.translate(u));
    let plus = member(signals::fock_translate(&base.plus.image, u));
    let minus = member(signals::fock_translate(&base.minus.image, u));
    check_representable(&plus.image, "shifted pair")?;
    check_representable(&minus.image, "shifted pair")?;

    let ln_c = PI / (8.0 * a * a) - std::f64::consts::LN_2 - 0.5 * delta.ln() - PI * u * u / 2.0;
    let structure = MultiplierStructure {
        common: FockFunction::exponential(
            Complex64::new(ln_c.exp(), 0.0),
            Complex64::new(-a * delta.ln() - PI / (2.0 * a), 0.0),
        ),
        phase_plus: ONE - I,
        phase_minus: ONE + I,
        params: MultiplierParams::new(a, delta, 0.0, ZERO)?,
    };
    let meta = PairMeta { mode: Mode::Shifted, delta, ..base.meta };
    Ok(finish(plus, minus, base.family, meta, Some(structure), Some((cf_plus, cf_minus)), None))
}

/// `‖F·e^{(πe^{iθ}/a)(z−λ̄₀)}‖`, the slope of `δ ↦ ‖F − F·H±_δ‖`.
pub fn perturbation_scale(f: &FockFunction, fam: &LineFamily) -> Result<f64> {
    let params = MultiplierParams::new(fam.a, 1.0, fam.theta, fam.lambda0)?;
    Ok(fock::norm(&fock::multiply(f, &params.exponential())))
}

/// `G± = F·H±_δ` with `δ = ε/(4‖F·E‖)`, comfortably inside `δ < ε/‖F·E‖`.
///
/// Both pullbacks are within `ε/4` (plus expansion tails) of `B⁻¹F`.
pub fn perturb_pair(f: &FockFunction, epsilon: f64, fam: &LineFamily) -> Result<CounterexamplePair> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if f.is_zero() {
        return Err(Error::invalid("cannot perturb the zero function"));
    }
    let scale = perturbation_scale(f, fam)?;
    let mut pair = perturb_pair_with_delta(f, epsilon / (4.0 * scale), fam)?;
    pair.meta.epsilon = Some(epsilon);
    Ok(pair)
}

/// `G± = F·H±_δ` for a prescribed `δ`.
pub fn perturb_pair_with_delta(f: &FockFunction, delta: f64, fam: &LineFamily) -> Result<CounterexamplePair> {
    if f.is_zero() {
        return Err(Error::invalid("cannot perturb the zero function"));
    }
    let params = MultiplierParams::new(fam.a, delta, fam.theta, fam.lambda0)?;
    let plus = member(fock::multiply(f, &params.build(Sign::Plus)));
    let minus = member(fock::multiply(f, &params.build(Sign::Minus)));
    check_representable(&plus.image, "perturbed pair")?;

    let reference = member(f.clone()).time;
    let distance = hull(signals::l2_distance(&reference, &plus.time), signals::l2_distance(&reference, &minus.time));
    let structure = MultiplierStructure { common: f.clone(), phase_plus: ONE, phase_minus: ONE, params };
    let meta = PairMeta {
        mode: Mode::Perturb,
        a: fam.a,
        delta,
        theta: fam.theta,
        lambda0: fam.lambda0,
        poly: Some(f.clone()),
        epsilon: None,
    };
    Ok(finish(plus, minus, *fam, meta, Some(structure), None, Some(distance)))
}

fn hull(x: Interval, y: Interval) -> Interval {
    Interval::new(x.lo.min(y.lo), x.hi.max(y.hi))
}

/// Smallest `N` with `sqrt(Σ_{n>N} |cₙ|²) + extra < bound`, and that tail.
fn truncation_index(coeffs: &[Complex64], extra: f64, bound: f64) -> Option<(usize, f64)> {
    // suffix[n] = Σ_{k ≥ n} |c_k|²
    let mut suffix = vec![0.0; coeffs.len() + 1];
    for n in (0..coeffs.len()).rev() {
        suffix[n] = suffix[n + 1] + coeffs[n].norm_sqr();
    }
    (0..coeffs.len()).find_map(|n| {
        let tail = suffix[n + 1].sqrt();
        (tail + extra < bound).then_some((n, tail))
    })
}

/// Approximate `f` within `ε` by a counterexample pair.
///
/// `Bf` is truncated to a polynomial `P` with `‖Bf − P‖ < ε/4`, then
/// `δ = ε/(4‖P·E‖)` makes `‖P − P·H±_δ‖ = δ‖P·E‖ = ε/4`. The distance
/// certificate adds both truncations and the pullback tail.
pub fn density_construct(f: &TimeSignal, epsilon: f64, fam: &LineFamily) -> Result<CounterexamplePair> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let quarter = epsilon / 4.0;
    if f.tail_bound() >= quarter {
        return Err(Error::invalid(format!("signal tail bound {} is not below epsilon/4 = {quarter}", f.tail_bound())));
    }
    let (n, trunc) = truncation_index(f.coeffs(), f.tail_bound(), quarter)
        .ok_or_else(|| Error::invalid("signal has no Hermite coefficients"))?;
    let poly = FockFunction::from_basis_coeffs(&f.coeffs()[..=n]);
    if poly.is_zero() {
        return Err(Error::invalid("signal is within epsilon/4 of zero; no nontrivial pair"));
    }
    let scale = perturbation_scale(&poly, fam)?;
    let delta = quarter / scale;
    let params = MultiplierParams::new(fam.a, delta, fam.theta, fam.lambda0)?;

    let pull_tol = (PULLBACK_REL_TOL * fock::norm(&poly).max(1.0)).min(epsilon * 1e-6);
    let pull = |sign| {
        let image = fock::multiply(&poly, &params.build(sign));
        PairMember { time: signals::inverse_bargmann(&image, pull_tol), image }
    };
    let (plus, minus) = (pull(Sign::Plus), pull(Sign::Minus));
    check_representable(&plus.image, "density pair")?;

    let perturbation = delta * scale;
    let pull_tail = plus.time.tail_bound().max(minus.time.tail_bound());
    let slack = trunc + f.tail_bound() + pull_tail;
    let distance = Interval::new((perturbation - slack).max(0.0), perturbation + slack);

    let structure = MultiplierStructure { common: poly.clone(), phase_plus: ONE, phase_minus: ONE, params };
    let meta = PairMeta {
        mode: Mode::Density,
        a: fam.a,
        delta,
        theta: fam.theta,
        lambda0: fam.lambda0,
        poly: Some(poly),
        epsilon: Some(epsilon),
    };
    Ok(finish(plus, minus, *fam, meta, Some(structure), None, Some(distance)))
}

/// Points `x_min..=x_max` (step `x_step`) on lines `n_min..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub x_step: f64,
    pub n_min: i64,
    pub n_max: i64,
}

impl Default for AgreementWindow {
    fn default() -> Self {
        Self { x_min: -5.0, x_max: 5.0, x_step: 0.1, n_min: -20, n_max: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Closed-form evaluation from the Fock images.
    Fast,
    /// Direct quadrature of the Gabor integral of the time signals.
    Oracle,
}

impl EvalMode {
    pub fn name(self) -> &'static str {
        match self {
            EvalMode::Fast => "fast",
            EvalMode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub max_magnitude: f64,
    pub points_checked: usize,
    /// Where `max_abs_diff` is attained.
    pub argmax_abs: Option<LinePoint>,
    /// Where `max_rel_diff` is attained.
    pub argmax_rel: Option<LinePoint>,
    pub tol: f64,
    pub mode: EvalMode,
    /// Agreement holds as an identity of the representation.
    pub symbolic: bool,
    pub pass: bool,
}

/// Compare `|Gg⁺|` and `|Gg⁻|` on the pair's own line family.
pub fn verify_agreement(
    pair: &CounterexamplePair,
    window: &AgreementWindow,
    tol: f64,
    mode: EvalMode,
) -> Result<AgreementReport> {
    let mut report = verify_agreement_on(pair, &pair.family, window, tol, mode)?;
    report.symbolic = pair.symbolic_agreement();
    Ok(report)
}

/// Compare `|Gg⁺|` and `|Gg⁻|` on an arbitrary line family, e.g. the
/// half-spacing lines where the pair is expected to differ.
///
/// Passes iff `max_abs_diff ≤ tol·(1 + max magnitude)`.
pub fn verify_agreement_on(
    pair: &CounterexamplePair,
    fam: &LineFamily,
    window: &AgreementWindow,
    tol: f64,
    mode: EvalMode,
) -> Result<AgreementReport> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let fam = fam.with_lines(window.n_min, window.n_max)?;
    let points = gabor::sample_line_family(&fam, window.x_min, window.x_max, window.x_step)?;

    let magnitudes: Vec<(f64, f64)> = match mode {
        EvalMode::Fast => points
            .par_iter()
            .map(|p| (gabor_eval(&pair.plus.image, p.x, p.w).norm(), gabor_eval(&pair.minus.image, p.x, p.w).norm()))
            .collect(),
        EvalMode::Oracle => {
            let reach = points.iter().map(|p| p.x.abs()).fold(0.0, f64::max) + 8.0;
            let qtol = (tol * 1e-2).max(1e-12);
            let eval = |s: &dyn TimeDomain, p: &LinePoint| gabor_quadrature(&s, p.x, p.w, qtol).map(|v| v.norm());
            let pair_values = |sp: &dyn TimeDomain, sm: &dyn TimeDomain| -> Result<Vec<(f64, f64)>> {
                points.par_iter().map(|p| Ok((eval(sp, p)?, eval(sm, p)?))).collect()
            };
            match &pair.closed_form {
                Some((cp, cm)) => pair_values(&Tabulated::new(cp, reach, 4), &Tabulated::new(cm, reach, 4))?,
                None => pair_values(
                    &Tabulated::new(&pair.plus.time, reach, 4),
                    &Tabulated::new(&pair.minus.time, reach, 4),
                )?,
            }
        }
    };

    let mut report = AgreementReport {
        max_abs_diff: 0.0,
        max_rel_diff: 0.0,
        max_magnitude: 0.0,
        points_checked: points.len(),
        argmax_abs: None,
        argmax_rel: None,
        tol,
        mode,
        symbolic: false,
        pass: false,
    };
    for (p, &(mp, mm)) in points.iter().zip(&magnitudes) {
        let diff = (mp - mm).abs();
        let top = mp.max(mm);
        report.max_magnitude = report.max_magnitude.max(top);
        if diff > report.max_abs_diff || report.argmax_abs.is_none() {
            report.max_abs_diff = diff;
            report.argmax_abs = Some(*p);
        }
        let rel = if top > 0.0 { diff / top } else { 0.0 };
        if rel > report.max_rel_diff || report.argmax_rel.is_none() {
            report.max_rel_diff = rel;
            report.argmax_rel = Some(*p);
        }
    }
    report.pass = report.max_abs_diff <= tol * (1.0 + report.max_magnitude);
    Ok(report)
}

/// A zero of `G⁺` where `G⁻` does not vanish, on the Fock side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootWitness {
    pub z: Complex64,
    pub plus_abs: f64,
    pub minus_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinctReport {
    pub phase: PhaseDistance,
    pub root_witness: Option<RootWitness>,
    pub tol: f64,
    pub pass: bool,
}

/// Certify `g⁺ ≁ g⁻` with [`DEFAULT_DIST_TOL`] and the default window.
pub fn verify_distinct(pair: &CounterexamplePair) -> DistinctReport {
    verify_distinct_with(pair, &AgreementWindow::default(), DEFAULT_DIST_TOL)
}

/// Passes iff the lower end of the phase-aligned distance exceeds `tol`.
///
/// The root witness is the closed-form zero of `H⁺_δ` with smallest `|Im z|`
/// whose real part lies in the window, kept only if `G⁻` is clearly nonzero
/// there (the common factor may vanish at the same point).
pub fn verify_distinct_with(pair: &CounterexamplePair, window: &AgreementWindow, tol: f64) -> DistinctReport {
    let phase = signals::phase_distance(&pair.plus.time, &pair.minus.time);
    let root_witness = pair.structure.as_ref().and_then(|s| {
        let mut roots: Vec<Complex64> = (-ROOT_SCAN..=ROOT_SCAN)
            .map(|k| s.params.root(Sign::Plus, k))
            .filter(|z| z.re >= window.x_min && z.re <= window.x_max)
            .collect();
        roots.sort_by(|p, q| p.im.abs().total_cmp(&q.im.abs()));
        roots.into_iter().find_map(|z| {
            let plus_abs = pair.plus.image.eval(z).norm();
            let minus_abs = pair.minus.image.eval(z).norm();
            (minus_abs > 0.0 && plus_abs <= 1e-8 * minus_abs).then_some(RootWitness { z, plus_abs, minus_abs })
        })
    });
    DistinctReport { pass: phase.bounds.lo > tol, phase, root_witness, tol }
}
