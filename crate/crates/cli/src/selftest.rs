//! In-process acceptance checks behind `gul selftest`.

use std::f64::consts::PI;
use std::time::Instant;

use gul_core::counterexamples::{
    base_pair, density_construct, perturb_pair_with_delta, verify_agreement, verify_agreement_on, verify_distinct,
    AgreementWindow, EvalMode,
};
use gul_core::fock::{self, FockAtom, FockFunction, Sign};
use gul_core::gabor::{gabor_eval, gabor_quadrature, LineFamily};
use gul_core::probe::{constant_fit_search, pointwise_bound_check, ProbeConfig, Verdict};
use gul_core::quadrature::{fock_integral, integrate_real_line};
use gul_core::signals::{self, ClosedFormSignal, TimeDomain, TimeSignal};
use gul_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::files::{num, Manifest};

/// `(1/50)e^{-10π}`.
pub fn figure_one_delta() -> f64 {
    (-10.0 * PI).exp() / 50.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn() -> (bool, String);

pub fn run_all() -> Vec<CriterionResult> {
    let checks: [(u8, &'static str, Check); 8] = [
        (1, "oracle-equivalence", oracle_equivalence),
        (2, "figure-1-certification", figure_one_certification),
        (3, "off-lattice-distinctness", off_lattice_distinctness),
        (4, "density-procedure", density_procedure),
        (5, "base-pair", base_pair_check),
        (6, "fock-identities", fock_identities),
        (7, "gaussian-probe", gaussian_probe),
        (8, "cli-contract", cli_contract),
    ];
    checks
        .into_iter()
        .map(|(id, name, check)| {
            let start = Instant::now();
            let (pass, detail) = check();
            CriterionResult { id, name, pass, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

pub fn render_table(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "{} {} {:<26} {} ({:.2}s)\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail,
            r.seconds
        ));
    }
    let passed = results.iter().filter(|r| r.pass).count();
    s.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    s
}

fn failure(e: impl std::fmt::Display) -> (bool, String) {
    (false, format!("error: {e}"))
}

fn oracle_equivalence() -> (bool, String) {
    let mut signals: Vec<(String, ClosedFormSignal, FockFunction)> = (0..=8)
        .map(|n| {
            let cf = if n == 0 { ClosedFormSignal::Gaussian } else { ClosedFormSignal::Hermite { n } };
            (format!("H{n}"), cf, FockFunction::basis(n as u32))
        })
        .collect();
    for sign in [Sign::Plus, Sign::Minus] {
        let cf = ClosedFormSignal::BasePair { a: 0.25, sign };
        let image = signals::base_pair_image(0.25, sign);
        signals.push((format!("h{}", sign.symbol()), cf, image));
    }
    let points: Vec<(f64, f64)> =
        (0..25).flat_map(|i| (0..25).map(move |j| (-3.0 + 0.25 * i as f64, -3.0 + 0.25 * j as f64))).collect();
    let mut worst = (0.0, String::new());
    for (name, cf, image) in &signals {
        let diffs: Result<Vec<f64>, _> = points
            .par_iter()
            .map(|&(x, w)| {
                let q = gabor_quadrature(cf, x, w, 1e-12)?;
                Ok::<f64, gul_core::Error>((gabor_eval(image, x, w).norm() - q.norm()).abs())
            })
            .collect();
        let max = match diffs {
            Ok(d) => d.into_iter().fold(0.0, f64::max),
            Err(e) => return failure(e),
        };
        if max >= worst.0 {
            worst = (max, name.clone());
        }
    }
    (worst.0 <= 1e-8, format!("max ||G|-|G_quad|| = {} ({}) <= 1e-8", num(worst.0), worst.1))
}

fn figure_one_pair() -> gul_core::Result<gul_core::counterexamples::CounterexamplePair> {
    let fam = LineFamily::horizontal(0.25)?;
    perturb_pair_with_delta(&FockFunction::basis(5), figure_one_delta(), &fam)
}

fn figure_one_certification() -> (bool, String) {
    let pair = match figure_one_pair() {
        Ok(p) => p,
        Err(e) => return failure(e),
    };
    let window = AgreementWindow::default();
    let fast = verify_agreement(&pair, &window, 1e-10, EvalMode::Fast);
    let oracle = verify_agreement(&pair, &window, 1e-8, EvalMode::Oracle);
    let (fast, oracle) = match (fast, oracle) {
        (Ok(f), Ok(o)) => (f, o),
        (Err(e), _) | (_, Err(e)) => return failure(e),
    };
    let distinct = verify_distinct(&pair);
    let witness = distinct.root_witness;
    let pass = fast.pass && oracle.pass && distinct.pass && witness.is_some();
    (
        pass,
        format!(
            "fast {} (max {}), oracle {} (max {}), phase distance {}, witness {}",
            fast.pass,
            num(fast.max_abs_diff),
            oracle.pass,
            num(oracle.max_abs_diff),
            num(distinct.phase.bounds.lo),
            witness.map_or("none".into(), |w| format!("{:.6}{:+.6}i", w.z.re, w.z.im))
        ),
    )
}

fn off_lattice_distinctness() -> (bool, String) {
    let run = || -> gul_core::Result<(bool, String)> {
        let pair = figure_one_pair()?;
        let half = LineFamily::new(0.25, 0.0, Complex64::new(0.0, 0.125), 0, 0)?;
        let window = AgreementWindow { x_min: 2.5, x_max: 3.1, x_step: 0.01, n_min: 0, n_max: 0 };
        let r = verify_agreement_on(&pair, &half, &window, 1e-10, EvalMode::Fast)?;
        let x = r.argmax_rel.map_or(f64::NAN, |p| p.x);
        let expected = (50.0 * (10.0 * PI).exp()).ln() / (4.0 * PI);
        let pass = r.max_rel_diff >= 1e-3 && (x - expected).abs() < 0.05;
        Ok((
            pass,
            format!("max rel diff {} at x = {} on omega = 1/8 (zero at {:.4})", num(r.max_rel_diff), num(x), expected),
        ))
    };
    run().unwrap_or_else(failure)
}

fn density_procedure() -> (bool, String) {
    let run = || -> gul_core::Result<(bool, String)> {
        let f = TimeSignal::hermite(5);
        let fam = LineFamily::horizontal(0.25)?;
        let mut pass = true;
        let mut parts = Vec::new();
        for eps in [1e-1, 1e-2, 1e-3] {
            let pair = density_construct(&f, eps, &fam)?;
            let d = pair.certificates.distance.expect("density pairs carry a distance");
            let mut gap: f64 = 0.0;
            for member in [&pair.plus, &pair.minus] {
                let direct = integrate_real_line(
                    |t| Complex64::new((f.value(t) - member.time.value(t)).norm_sqr(), 0.0),
                    8.0,
                    1e-16,
                )?
                .value
                .re
                .sqrt();
                gap = gap.max((d.hi - direct).abs());
            }
            pass &= d.hi < eps && gap <= 1e-6;
            parts.push(format!("eps {}: d_high {} gap {}", num(eps), num(d.hi), num(gap)));
        }
        Ok((pass, parts.join("; ")))
    };
    run().unwrap_or_else(failure)
}

fn base_pair_check() -> (bool, String) {
    let run = || -> gul_core::Result<(bool, String)> {
        let mut agree: f64 = 0.0;
        let mut values: f64 = 0.0;
        for a in [0.25, 0.5] {
            let pair = base_pair(a)?;
            let (hp, hm) = pair.closed_form.clone().expect("base pair has closed forms");
            let points: Vec<(f64, f64)> =
                (-2..=2).flat_map(|n| (0..101).map(move |i| (-5.0 + 0.1 * i as f64, a * n as f64))).collect();
            let diffs: gul_core::Result<Vec<f64>> = points
                .par_iter()
                .map(|&(x, w)| {
                    Ok((gabor_quadrature(&hp, x, w, 1e-12)?.norm() - gabor_quadrature(&hm, x, w, 1e-12)?.norm()).abs())
                })
                .collect();
            agree = agree.max(diffs?.into_iter().fold(0.0, f64::max));
            for (cf, member) in [(&hp, &pair.plus), (&hm, &pair.minus)] {
                let series = signals::inverse_bargmann(&member.image, 1e-10);
                for k in 0..50 {
                    let t = -2.45 + 0.1 * k as f64;
                    values = values.max((cf.value(t) - series.value(t)).norm());
                }
            }
        }
        Ok((
            agree <= 1e-9 && values <= 1e-8,
            format!("max ||Gh+|-|Gh-|| = {} <= 1e-9, max |h - B^-1 Bh| = {} <= 1e-8", num(agree), num(values)),
        ))
    };
    run().unwrap_or_else(failure)
}

fn fock_identities() -> (bool, String) {
    let norms = (0..=8u32).map(|n| (fock::norm(&FockFunction::basis(n)) - 1.0).abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut polar = |r: f64| Complex64::from_polar(rng.random_range(0.0..r), rng.random_range(0.0..2.0 * PI));
    let pairs: Vec<(Complex64, Complex64)> = (0..20).map(|_| (polar(2.0), polar(2.0))).collect();
    let kernel = pairs
        .par_iter()
        .map(|&(b, g)| {
            let (fb, fg) = (
                FockFunction::exponential(Complex64::new(1.0, 0.0), b),
                FockFunction::exponential(Complex64::new(1.0, 0.0), g),
            );
            let q = fock_integral(|z| fb.eval(z), |z| fg.eval(z), (b.conj() + g) / (2.0 * PI), 7.0, 0.05);
            (fock::inner(&fb, &fg) - q).norm()
        })
        .reduce(|| 0.0, f64::max);
    let mut violations = 0;
    for _ in 0..100 {
        let atoms: Vec<FockAtom> = (0..rng.random_range(1..=6))
            .map(|_| {
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let beta = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                FockAtom::new(c, rng.random_range(0..4), beta)
            })
            .collect();
        let f = FockFunction::from_atoms(atoms);
        let z = Complex64::from_polar(rng.random_range(0.0..3.0), rng.random_range(0.0..2.0 * PI));
        if !f.is_zero() && !pointwise_bound_check(&f, z).holds {
            violations += 1;
        }
    }
    (
        norms <= 1e-12 && kernel <= 1e-6 && violations == 0,
        format!(
            "max |‖e_n‖-1| = {}, kernel vs quadrature {}, bound violations {violations}/100",
            num(norms),
            num(kernel)
        ),
    )
}

fn gaussian_probe() -> (bool, String) {
    let mut cells = 0;
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for a in [0.25, 0.5, 0.75] {
        for radius in [2.0, 3.0] {
            for n in [4, 8] {
                let cfg = ProbeConfig { seed: 2024, ..ProbeConfig::new(a, radius, n) };
                match constant_fit_search(&cfg) {
                    Ok(r) if r.verdict == Verdict::AllNearConstant => {
                        cells += 1;
                        worst = r.feasible().map(|m| m.distance_to_constants).fold(worst, f64::max);
                    }
                    Ok(r) => failed.push(format!("a={a} R={radius} N={n}: {}", r.verdict.name())),
                    Err(e) => failed.push(format!("a={a} R={radius} N={n}: {e}")),
                }
            }
        }
    }
    let mut detail = format!("{cells}/12 cells all-near-constant, max feasible distance {}", num(worst));
    if !failed.is_empty() {
        detail.push_str(&format!("; {}", failed.join("; ")));
    }
    (cells == 12, detail)
}

fn cli_contract() -> (bool, String) {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return failure(e),
    };
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let call = |args: &[&str]| -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = crate::run(std::iter::once("gul").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8_lossy(&err).into_owned())
    };
    let pair = path("pair");
    let delta = format!("{:e}", figure_one_delta());
    let mut problems = Vec::new();
    let mut expect = |what: &str, got: (i32, String), want: i32| {
        if got.0 != want {
            problems.push(format!("{what}: exit {} (want {want}) {}", got.0, got.1.trim()));
        }
    };
    expect(
        "construct",
        call(&["construct", "--mode", "perturb", "--hermite", "5", "--a", "0.25", "--delta", &delta, "--out", &pair]),
        0,
    );
    expect("verify", call(&["verify", "--pair", &pair]), 0);
    let (csv, pgm) = (path("grid.csv"), path("grid.pgm"));
    let grid = ["--xmin", "-3", "--xmax", "3", "--xstep", "0.1", "--wmin", "-3", "--wmax", "3", "--wstep", "0.1"];
    let spectro = |fmt: &str, out: &str| {
        let mut a = vec!["spectrogram", "--pair", pair.as_str(), "--format", fmt, "--out", out];
        a.extend(grid);
        call(&a)
    };
    expect("spectrogram csv", spectro("csv", &csv), 0);
    expect("spectrogram pgm", spectro("pgm", &pgm), 0);
    expect(
        "empty range",
        call(&[
            "spectrogram",
            "--hermite",
            "5",
            "--format",
            "pgm",
            "--xmin",
            "1",
            "--xmax",
            "0",
            "--out",
            &path("x.pgm"),
        ]),
        2,
    );
    expect("unknown flag", call(&["construct", "--bogus"]), 2);
    expect("bad number", call(&["probe", "--a", "abc", "--out", &path("p")]), 2);

    let read = |p: &str| std::fs::read_to_string(p).unwrap_or_default();
    let manifest_ok = Manifest::parse(&read(&format!("{pair}/manifest.txt")))
        .map(|m| m.get("files").is_some_and(|f| f.contains("g_plus.txt")))
        .unwrap_or(false);
    let verify_ok = read(&format!("{pair}/verify.txt")).contains("agreement_pass = true");
    let csv_text = read(&csv);
    let csv_ok = csv_text.starts_with("x,omega,magnitude\n") && csv_text.lines().count() == 1 + 61 * 61;
    let pgm_ok =
        read(&pgm).lines().filter(|l| !l.starts_with('#')).take(3).collect::<Vec<_>>() == ["P2", "61 61", "65535"];
    for (ok, what) in [(manifest_ok, "manifest"), (verify_ok, "verify report"), (csv_ok, "csv"), (pgm_ok, "pgm")] {
        if !ok {
            problems.push(format!("{what} malformed"));
        }
    }
    if problems.is_empty() {
        (true, "construct -> verify -> spectrogram round trip ok; malformed input exits 2".into())
    } else {
        (false, problems.join("; "))
    }
}
