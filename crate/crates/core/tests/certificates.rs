//! Counterexample certificates checked against time-domain oracles.

use std::f64::consts::PI;

use gul_core::counterexamples::{
    base_pair, density_construct, perturb_pair_with_delta, shifted_pair, verify_agreement, verify_agreement_on,
    verify_distinct, AgreementWindow, EvalMode,
};
use gul_core::fock::{self, FockFunction};
use gul_core::gabor::{gabor_quadrature, LineFamily};
use gul_core::signals::{bargmann_quadrature, TimeDomain, TimeSignal};
use gul_core::{Complex64, FOURTH_ROOT_TWO};

fn figure_one_delta() -> f64 {
    (-10.0 * PI).exp() / 50.0
}

/// `h±(t) = φ(t)(cosh(πt/a) ± i sinh(πt/a))`, written out directly.
struct BasePair {
    a: f64,
    sign: f64,
}

impl TimeDomain for BasePair {
    fn value(&self, t: f64) -> Complex64 {
        let x = PI * t / self.a;
        let g = -PI * t * t;
        let cosh = ((g + x).exp() + (g - x).exp()) / 2.0;
        let sinh = ((g + x).exp() - (g - x).exp()) / 2.0;
        Complex64::new(cosh, self.sign * sinh) * FOURTH_ROOT_TWO
    }
}

#[test]
fn figure_one_delta_value() {
    assert!((figure_one_delta() - 4.542_202_136_648_193e-16).abs() < 1e-28);
}

#[test]
fn figure_one_pair() {
    let fam = LineFamily::horizontal(0.25).unwrap();
    let pair = perturb_pair_with_delta(&FockFunction::basis(5), figure_one_delta(), &fam).unwrap();
    let fast = verify_agreement(&pair, &AgreementWindow::default(), 1e-10, EvalMode::Fast).unwrap();
    assert!(fast.pass && fast.symbolic);
    assert_eq!(fast.points_checked, 101 * 41);

    let distinct = verify_distinct(&pair);
    assert!(distinct.pass);
    let w = distinct.root_witness.unwrap();
    let x_star = (50.0 * (10.0 * PI).exp()).ln() / (4.0 * PI);
    assert!((w.z.re - x_star).abs() < 1e-12);
    assert!((w.z.im.abs() - 0.125).abs() < 1e-12);
    assert!((x_star - 2.81).abs() < 0.01);

    // ‖g± − H₅‖ = δ‖e₅e^{4πz}‖, computed from the series Σ_k |coefficient|².
    let delta = figure_one_delta();
    let series: f64 = (0..400u32)
        .map(|k| {
            // e₅·e^{βz} = Σ_k β^k/k! sqrt(π⁵/5!) z^{5+k}, ‖z^n‖² = n!/πⁿ
            let n = 5 + k;
            let ln = 2.0 * k as f64 * (4.0 * PI).ln() - 2.0 * ln_fact(k) + 5.0 * PI.ln() - ln_fact(5) + ln_fact(n)
                - n as f64 * PI.ln();
            ln.exp()
        })
        .sum::<f64>()
        .sqrt();
    let d = pair.certificates.distance.unwrap();
    assert!((d.mid() - delta * series).abs() < 1e-9 * delta * series);
    assert!((delta * series - 0.0768).abs() < 5e-4);
}

fn ln_fact(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

#[test]
fn figure_one_off_lattice() {
    let fam = LineFamily::horizontal(0.25).unwrap();
    let pair = perturb_pair_with_delta(&FockFunction::basis(5), figure_one_delta(), &fam).unwrap();
    let half = LineFamily::new(0.25, 0.0, Complex64::new(0.0, 0.125), 0, 0).unwrap();
    let window = AgreementWindow { x_min: 2.5, x_max: 3.1, x_step: 0.01, n_min: 0, n_max: 0 };
    let report = verify_agreement_on(&pair, &half, &window, 1e-10, EvalMode::Fast).unwrap();
    assert!(report.max_rel_diff >= 1e-3);
    assert!((report.argmax_rel.unwrap().x - 2.81).abs() < 0.02);
}

#[test]
fn density_certificates_against_quadrature() {
    let f = TimeSignal::hermite(5);
    let fam = LineFamily::horizontal(0.25).unwrap();
    let mut previous = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3] {
        let pair = density_construct(&f, eps, &fam).unwrap();
        assert_eq!(pair.meta.poly, Some(FockFunction::basis(5)));
        let e = FockFunction::exponential(Complex64::new(1.0, 0.0), Complex64::new(4.0 * PI, 0.0));
        let scale = fock::norm(&(&FockFunction::basis(5) * &e));
        assert!(pair.meta.delta <= (eps / 2.0) / scale);
        let d = pair.certificates.distance.unwrap();
        assert!(d.hi < eps);
        assert!(d.hi < previous);
        previous = d.hi;
        for member in [&pair.plus, &pair.minus] {
            let direct = time_domain_distance(&f, &member.time);
            assert!(direct <= d.hi + 1e-12);
            assert!((d.hi - direct).abs() < 1e-6, "eps={eps}: {} vs {direct}", d.hi);
        }
    }
}

/// `(∫|f − g|²)^{1/2}` by a plain trapezoid sum on `[-16, 16]`.
fn time_domain_distance(f: &TimeSignal, g: &TimeSignal) -> f64 {
    let h = 1.0 / 128.0;
    let n = (32.0 / h) as i64;
    let s: f64 = (0..=n)
        .map(|k| {
            let t = -16.0 + k as f64 * h;
            (f.value(t) - g.value(t)).norm_sqr()
        })
        .sum();
    (s * h).sqrt()
}

#[test]
fn base_pair_agreement_by_quadrature() {
    let a = 0.5;
    let (hp, hm) = (BasePair { a, sign: 1.0 }, BasePair { a, sign: -1.0 });
    for x in [-1.0, 0.3, 2.0] {
        for n in -2..=2 {
            let w = a * n as f64;
            let p = gabor_quadrature(&hp, x, w, 1e-12).unwrap().norm();
            let m = gabor_quadrature(&hm, x, w, 1e-12).unwrap().norm();
            assert!((p - m).abs() < 1e-9, "x={x} n={n}: {p} vs {m}");
        }
    }
}

#[test]
fn base_pair_image_constant_by_quadrature() {
    for a in [0.25, 0.5, 1.0] {
        let pair = base_pair(a).unwrap();
        let origin = Complex64::new(0.0, 0.0);
        let q = bargmann_quadrature(&BasePair { a, sign: 1.0 }, origin, 1e-12).unwrap();
        // image at 0: (e^{π/(8a²)}/2)·((1+i) + (1−i)) = e^{π/(8a²)}
        assert!((q - pair.plus.image.eval(origin)).norm() < 1e-10 * q.norm());
        assert!((q.re - (PI / (8.0 * a * a)).exp()).abs() < 1e-10 * q.norm());
    }
}

#[test]
fn shifted_pair_agreement_by_quadrature() {
    let (a, delta) = (0.25, (-PI).exp());
    let pair = shifted_pair(a, delta).unwrap();
    let u = 0.25;
    let tp = |t: f64| BasePair { a, sign: 1.0 }.value(t - u);
    let tm = |t: f64| BasePair { a, sign: -1.0 }.value(t - u);
    struct F<G>(G);
    impl<G: Fn(f64) -> Complex64 + Sync> TimeDomain for F<G> {
        fn value(&self, t: f64) -> Complex64 {
            (self.0)(t)
        }
    }
    let (sp, sm) = (F(tp), F(tm));
    for k in 0..50 {
        let x = -2.0 + 0.4 * (k % 10) as f64;
        let n = (k / 10) as i64 - 2;
        let w = a * n as f64;
        let p = gabor_quadrature(&sp, x, w, 1e-12).unwrap();
        let m = gabor_quadrature(&sm, x, w, 1e-12).unwrap();
        assert!((p.norm() - m.norm()).abs() < 1e-9 * (1.0 + p.norm()), "x={x} n={n}");
        let fast = gul_core::gabor::gabor_eval(&pair.plus.image, x, w);
        assert!((fast - p).norm() < 1e-8 * (1.0 + p.norm()));
    }
    let distinct = verify_distinct(&pair);
    assert!(distinct.pass && distinct.root_witness.is_some());
}

#[test]
fn oracle_mode_on_figure_one_window_sample() {
    let fam = LineFamily::horizontal(0.25).unwrap();
    let pair = perturb_pair_with_delta(&FockFunction::basis(5), figure_one_delta(), &fam).unwrap();
    let window = AgreementWindow { x_min: -5.0, x_max: 5.0, x_step: 0.5, n_min: -4, n_max: 4 };
    let report = verify_agreement(&pair, &window, 1e-8, EvalMode::Oracle).unwrap();
    assert!(report.pass, "{report:?}");
}
