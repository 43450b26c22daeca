use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gul_core::counterexamples::{
    self, verify_agreement, verify_distinct_with, AgreementWindow, CounterexamplePair, EvalMode,
};
use gul_core::fock::{FockFunction, Sign};
use gul_core::gabor::{spectrogram_grid, GridSpec, LineFamily};
use gul_core::probe::{constant_fit_search, ProbeConfig, Verdict};
use gul_core::signals::TimeSignal;
use gul_core::Complex64;

use crate::args::{Cli, Command, ConstructArgs, FormatArg, ModeArg, ProbeArgs, SignArg, SpectrogramArgs, VerifyArgs};
use crate::files::{num, parse_coeffs, read_input, render_csv, render_pgm, write_atomic, Manifest};
use crate::{pair_store, selftest, CliError};

pub const VERIFY_REPORT: &str = "verify.txt";

pub fn dispatch(cli: Cli, echo: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Construct(a) => construct(a, echo, out),
        Command::Verify(a) => verify(a, echo, out),
        Command::Spectrogram(a) => spectrogram(a, echo, out),
        Command::Probe(a) => probe(a, echo, out),
        Command::Selftest => {
            let results = selftest::run_all();
            let _ = write!(out, "{}", selftest::render_table(&results));
            let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.id.to_string()).collect();
            if failed.is_empty() {
                Ok(0)
            } else {
                Err(CliError::Verification(format!("selftest failed criteria {}", failed.join(","))))
            }
        }
    }
}

fn header(echo: &str) -> Manifest {
    let mut m = Manifest::default();
    m.push("tool", "gul").push("version", env!("CARGO_PKG_VERSION")).push("command", echo);
    m
}

fn finish(m: &mut Manifest, files: &[String], start: Instant) {
    m.push("files", files.join(",")).push("wall_time_s", format!("{:.3}", start.elapsed().as_secs_f64()));
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Hermite coefficients from `--hermite n` or `--coeffs FILE`.
fn source_coeffs(args: &ConstructArgs) -> Result<Option<Vec<Complex64>>, CliError> {
    if let Some(n) = args.hermite {
        return Ok(Some(TimeSignal::hermite(n as usize).coeffs().to_vec()));
    }
    match &args.coeffs {
        Some(path) => {
            let coeffs =
                parse_coeffs(&read_input(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Some(coeffs))
        }
        None => Ok(None),
    }
}

fn construct(args: &ConstructArgs, echo: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    if args.lines < 0 {
        return Err(usage(format!("--lines must be >= 0, got {}", args.lines)));
    }
    let lambda0 = Complex64::new(args.lambda0_re, args.lambda0_im);
    let fam = LineFamily::new(args.a, args.theta, lambda0, -args.lines, args.lines)?;
    let source = source_coeffs(args)?;
    let rotated = args.theta != 0.0 || lambda0 != Complex64::new(0.0, 0.0);
    let name = match args.mode {
        ModeArg::Base => "base",
        ModeArg::Shifted => "shifted",
        ModeArg::Perturb => "perturb",
        ModeArg::Density => "density",
    };

    let pair: CounterexamplePair = match args.mode {
        ModeArg::Base | ModeArg::Shifted => {
            if source.is_some() || args.epsilon.is_some() {
                return Err(usage(format!("--mode {name} takes no signal source or --epsilon")));
            }
            if rotated {
                return Err(usage(format!("--mode {name} lives on R x aZ; drop --theta/--lambda0")));
            }
            let mut pair = match (args.mode, args.delta) {
                (ModeArg::Base, None) => counterexamples::base_pair(args.a)?,
                (ModeArg::Base, Some(_)) => return Err(usage("--mode base takes no --delta")),
                (_, Some(delta)) => counterexamples::shifted_pair(args.a, delta)?,
                (_, None) => return Err(usage("--mode shifted needs --delta")),
            };
            pair.family = fam;
            pair
        }
        ModeArg::Perturb => {
            let coeffs = source.ok_or_else(|| usage("--mode perturb needs --hermite or --coeffs"))?;
            let f = FockFunction::from_basis_coeffs(&coeffs);
            match (args.delta, args.epsilon) {
                (Some(delta), None) => counterexamples::perturb_pair_with_delta(&f, delta, &fam)?,
                (None, Some(eps)) => counterexamples::perturb_pair(&f, eps, &fam)?,
                _ => return Err(usage("--mode perturb needs exactly one of --delta, --epsilon")),
            }
        }
        ModeArg::Density => {
            let coeffs = source.ok_or_else(|| usage("--mode density needs --hermite or --coeffs"))?;
            if args.delta.is_some() {
                return Err(usage("--mode density chooses delta itself; drop --delta"));
            }
            let eps = args.epsilon.ok_or_else(|| usage("--mode density needs --epsilon"))?;
            counterexamples::density_construct(&TimeSignal::new(coeffs, 0.0)?, eps, &fam)?
        }
    };

    let mut files = pair_store::save(&args.out, &pair)?;
    files.push(pair_store::MANIFEST.to_string());
    let mut m = header(echo);
    pair_store::describe(&pair, &mut m);
    finish(&mut m, &files, start);
    write_atomic(&args.out.join(pair_store::MANIFEST), &m.render())?;
    let _ = writeln!(
        out,
        "wrote {} pair to {} (delta = {}, {} Hermite terms)",
        name,
        args.out.display(),
        num(pair.meta.delta),
        pair.plus.time.coeffs().len()
    );
    Ok(0)
}

fn verify(args: &VerifyArgs, echo: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let pair = pair_store::load(&args.pair)?;
    let mode = if args.oracle { EvalMode::Oracle } else { EvalMode::Fast };
    let tol = args.tol.unwrap_or(if args.oracle { 1e-8 } else { 1e-10 });
    if args.dist_tol <= 0.0 || !args.dist_tol.is_finite() {
        return Err(usage(format!("--dist-tol must be positive, got {}", args.dist_tol)));
    }
    let w = &args.window;
    let window = AgreementWindow { x_min: w.xmin, x_max: w.xmax, x_step: w.xstep, n_min: w.nmin, n_max: w.nmax };
    let agreement = verify_agreement(&pair, &window, tol, mode)?;
    let distinct = verify_distinct_with(&pair, &window, args.dist_tol);

    let mut m = header(echo);
    m.push("pair", args.pair.display())
        .push("eval_mode", mode.name())
        .push_num("tol", tol)
        .push_num("x_min", window.x_min)
        .push_num("x_max", window.x_max)
        .push_num("x_step", window.x_step)
        .push("n_min", window.n_min)
        .push("n_max", window.n_max)
        .push("agreement_pass", agreement.pass)
        .push("symbolic_agreement", agreement.symbolic)
        .push("points_checked", agreement.points_checked)
        .push_num("max_abs_diff", agreement.max_abs_diff)
        .push_num("max_rel_diff", agreement.max_rel_diff)
        .push_num("max_magnitude", agreement.max_magnitude);
    if let Some(p) = agreement.argmax_abs {
        m.push_num("argmax_abs_x", p.x).push_num("argmax_abs_omega", p.w);
    }
    if let Some(p) = agreement.argmax_rel {
        m.push_num("argmax_rel_x", p.x).push_num("argmax_rel_omega", p.w);
    }
    m.push("distinct_pass", distinct.pass)
        .push_num("dist_tol", distinct.tol)
        .push_num("phase_distance", distinct.phase.dist)
        .push_num("phase_distance_lo", distinct.phase.bounds.lo)
        .push_num("phase_distance_hi", distinct.phase.bounds.hi)
        .push_num("alpha", distinct.phase.alpha);
    match distinct.root_witness {
        Some(rw) => {
            m.push_num("root_witness_re", rw.z.re)
                .push_num("root_witness_im", rw.z.im)
                .push_num("root_witness_plus_abs", rw.plus_abs)
                .push_num("root_witness_minus_abs", rw.minus_abs);
        }
        None => {
            m.push("root_witness", "none");
        }
    }
    let dir = args.out.clone().unwrap_or_else(|| args.pair.clone());
    finish(&mut m, &[VERIFY_REPORT.to_string()], start);
    write_atomic(&dir.join(VERIFY_REPORT), &m.render())?;
    let _ = write!(out, "{}", m.render());

    if !agreement.pass {
        let at = agreement.argmax_abs.map_or(String::new(), |p| format!(" at x = {}, omega = {}", num(p.x), num(p.w)));
        return Err(CliError::Verification(format!(
            "agreement failed: max_abs_diff = {}{at}",
            num(agreement.max_abs_diff)
        )));
    }
    if !distinct.pass {
        return Err(CliError::Verification(format!(
            "pair not distinct: phase distance lower bound {} <= {}",
            num(distinct.phase.bounds.lo),
            num(distinct.tol)
        )));
    }
    Ok(0)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.txt");
    PathBuf::from(s)
}

fn spectrogram(args: &SpectrogramArgs, echo: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let spec = GridSpec {
        x_min: args.xmin,
        x_max: args.xmax,
        x_step: args.xstep,
        w_min: args.wmin,
        w_max: args.wmax,
        w_step: args.wstep,
    };
    spec.shape()?;
    let (image, source) = match (&args.pair, args.hermite) {
        (Some(dir), _) => {
            let pair = pair_store::load(dir)?;
            let sign = match args.sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            (pair.member(sign).image.clone(), format!("{} g{}", dir.display(), sign.symbol()))
        }
        (None, Some(n)) => (FockFunction::basis(n), format!("hermite {n}")),
        (None, None) => return Err(usage("need --pair or --hermite")),
    };
    let grid = spectrogram_grid(&image, &spec)?;
    let (text, format) = match args.format {
        FormatArg::Csv => (render_csv(&grid), "csv"),
        FormatArg::Pgm => (render_pgm(&grid), "pgm"),
    };
    write_atomic(&args.out, &text)?;

    let mpath = manifest_path(&args.out);
    let mut m = header(echo);
    let (ai, aj) = grid.argmax();
    m.push("source", source)
        .push("format", format)
        .push_num("x_min", spec.x_min)
        .push_num("x_max", spec.x_max)
        .push_num("x_step", spec.x_step)
        .push_num("omega_min", spec.w_min)
        .push_num("omega_max", spec.w_max)
        .push_num("omega_step", spec.w_step)
        .push("nx", grid.nx)
        .push("nomega", grid.nw)
        .push_num("max_magnitude", grid.max())
        .push_num("argmax_x", grid.x(ai))
        .push_num("argmax_omega", grid.w(aj));
    let name = |p: &Path| p.file_name().map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into_owned());
    finish(&mut m, &[name(&args.out), name(&mpath)], start);
    write_atomic(&mpath, &m.render())?;
    let _ = writeln!(out, "wrote {}x{} grid to {}", grid.nx, grid.nw, args.out.display());
    Ok(0)
}

fn probe(args: &ProbeArgs, echo: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let cfg = ProbeConfig {
        a: args.a,
        radius: args.radius,
        n_max: args.n_max,
        starts: args.starts,
        tol_feas: args.tol_feas,
        seed: args.seed,
        near_constant: args.near_constant,
        allow_underdetermined: args.allow_underdetermined,
    };
    let result = constant_fit_search(&cfg)?;

    let mut runs = String::from("# start residual distance_to_constants iterations feasible\n");
    let mut coeffs = String::from("# start n re im (feasible minimizers)\n");
    for r in &result.runs {
        runs.push_str(&format!(
            "{} {:.16e} {:.16e} {} {}\n",
            r.start, r.residual, r.distance_to_constants, r.iterations, r.feasible
        ));
        if r.feasible {
            for (n, c) in r.coeffs.iter().enumerate() {
                coeffs.push_str(&format!("{} {n} {:.16e} {:.16e}\n", r.start, c.re, c.im));
            }
        }
    }
    let files = ["probe_runs.txt", "minimizers.txt", "manifest.txt"].map(String::from);
    write_atomic(&args.out.join(&files[0]), &runs)?;
    write_atomic(&args.out.join(&files[1]), &coeffs)?;

    let feasible: Vec<f64> = result.feasible().map(|m| m.distance_to_constants).collect();
    let mut m = header(echo);
    m.push_num("a", cfg.a)
        .push_num("R", cfg.radius)
        .push("N", cfg.n_max)
        .push("starts", cfg.starts)
        .push("seed", cfg.seed)
        .push_num("tol_feas", cfg.tol_feas)
        .push_num("near_constant", cfg.near_constant)
        .push("constraint_points", result.constraint_points)
        .push("feasible", feasible.len())
        .push_num("max_feasible_distance", feasible.iter().copied().fold(0.0, f64::max))
        .push("verdict", result.verdict.name())
        .push("exploratory", cfg.exploratory())
        .push("caveat", "finite-window least-squares search; corroborates but does not prove uniqueness");
    finish(&mut m, &files, start);
    write_atomic(&args.out.join(&files[2]), &m.render())?;
    let _ = writeln!(out, "verdict = {}", result.verdict.name());

    match result.verdict {
        Verdict::AllNearConstant => Ok(0),
        _ if cfg.exploratory() => Ok(0),
        v => Err(CliError::Verification(format!("probe verdict {}", v.name()))),
    }
}
