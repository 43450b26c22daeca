//! Pair directories: Hermite coefficients, exact Fock atoms and a manifest.

use std::path::Path;

use gul_core::counterexamples::{
    shift_for_delta, Certificates, CounterexamplePair, Mode, MultiplierStructure, PairMember, PairMeta,
};
use gul_core::fock::{MultiplierParams, Sign};
use gul_core::gabor::LineFamily;
use gul_core::signals::{ClosedFormSignal, TimeSignal};
use gul_core::Complex64;

use crate::files::{parse_atoms, parse_coeffs, read_input, render_atoms, render_coeffs, write_atomic, Manifest};
use crate::CliError;

pub const MANIFEST: &str = "manifest.txt";
const PLUS: &str = "g_plus.txt";
const MINUS: &str = "g_minus.txt";
const PLUS_ATOMS: &str = "g_plus.atoms";
const MINUS_ATOMS: &str = "g_minus.atoms";
const COMMON_ATOMS: &str = "common.atoms";

/// Pair-describing manifest entries, in a fixed order.
pub fn describe(pair: &CounterexamplePair, m: &mut Manifest) {
    let meta = &pair.meta;
    m.push("mode", meta.mode.name())
        .push_num("a", meta.a)
        .push_num("delta", meta.delta)
        .push_num("theta", meta.theta)
        .push_num("lambda0_re", meta.lambda0.re)
        .push_num("lambda0_im", meta.lambda0.im)
        .push("n_min", pair.family.n_min)
        .push("n_max", pair.family.n_max);
    if let Some(eps) = meta.epsilon {
        m.push_num("epsilon", eps);
    }
    if let Some(p) = &meta.poly {
        m.push("poly_degree", p.degree().map_or("none".to_string(), |d| d.to_string()));
    }
    m.push_num("tail_plus", pair.plus.time.tail_bound())
        .push_num("tail_minus", pair.minus.time.tail_bound())
        .push("hermite_terms", pair.plus.time.coeffs().len().max(pair.minus.time.coeffs().len()));
    if let Some(pd) = pair.certificates.phase_distance {
        m.push_num("phase_distance", pd);
    }
    if let Some(d) = pair.certificates.distance {
        m.push_num("distance_lo", d.lo).push_num("distance_hi", d.hi);
    }
    if let Some(s) = &pair.structure {
        m.push_num("phase_plus_re", s.phase_plus.re)
            .push_num("phase_plus_im", s.phase_plus.im)
            .push_num("phase_minus_re", s.phase_minus.re)
            .push_num("phase_minus_im", s.phase_minus.im);
    }
    m.push("symbolic_agreement", pair.symbolic_agreement());
}

/// Write the pair files; returns their names.
pub fn save(dir: &Path, pair: &CounterexamplePair) -> Result<Vec<String>, CliError> {
    let mut files = vec![
        (PLUS, render_coeffs(pair.plus.time.coeffs())),
        (MINUS, render_coeffs(pair.minus.time.coeffs())),
        (PLUS_ATOMS, render_atoms(&pair.plus.image)),
        (MINUS_ATOMS, render_atoms(&pair.minus.image)),
    ];
    if let Some(s) = &pair.structure {
        files.push((COMMON_ATOMS, render_atoms(&s.common)));
    }
    for (name, text) in &files {
        write_atomic(&dir.join(name), text)?;
    }
    Ok(files.into_iter().map(|(n, _)| n.to_string()).collect())
}

fn mode_from(name: &str) -> Result<Mode, CliError> {
    Ok(match name {
        "base" => Mode::Base,
        "shifted" => Mode::Shifted,
        "perturb" => Mode::Perturb,
        "density" => Mode::Density,
        "custom" => Mode::Custom,
        other => return Err(CliError::Input(format!("unknown pair mode `{other}`"))),
    })
}

fn read_with<T>(dir: &Path, name: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, CliError> {
    let path = dir.join(name);
    parse(&read_input(&path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load(dir: &Path) -> Result<CounterexamplePair, CliError> {
    let manifest = read_with(dir, MANIFEST, Manifest::parse)?;
    let mode = mode_from(manifest.require("mode")?)?;
    let a = manifest.require_f64("a")?;
    let delta = manifest.require_f64("delta")?;
    let theta = manifest.require_f64("theta")?;
    let lambda0 = Complex64::new(manifest.require_f64("lambda0_re")?, manifest.require_f64("lambda0_im")?);
    let family = LineFamily::new(a, theta, lambda0, manifest.require_i64("n_min")?, manifest.require_i64("n_max")?)?;

    let signal = |coeffs_name: &str, atoms_name: &str, tail_key: &str| -> Result<PairMember, CliError> {
        let coeffs = read_with(dir, coeffs_name, parse_coeffs)?;
        let time = TimeSignal::new(coeffs, manifest.require_f64(tail_key)?)?;
        Ok(PairMember { time, image: read_with(dir, atoms_name, parse_atoms)? })
    };
    let plus = signal(PLUS, PLUS_ATOMS, "tail_plus")?;
    let minus = signal(MINUS, MINUS_ATOMS, "tail_minus")?;

    let structure = if dir.join(COMMON_ATOMS).exists() && mode != Mode::Custom {
        let phase = |k: &str| -> Result<Complex64, CliError> {
            Ok(Complex64::new(manifest.require_f64(&format!("{k}_re"))?, manifest.require_f64(&format!("{k}_im"))?))
        };
        Some(MultiplierStructure {
            common: read_with(dir, COMMON_ATOMS, parse_atoms)?,
            phase_plus: phase("phase_plus")?,
            phase_minus: phase("phase_minus")?,
            params: MultiplierParams::new(a, delta, theta, lambda0)?,
        })
    } else {
        None
    };
    let closed_form = match mode {
        Mode::Base | Mode::Shifted => {
            let u = shift_for_delta(a, delta);
            Some((
                ClosedFormSignal::base_pair(a, Sign::Plus)?.translate(u),
                ClosedFormSignal::base_pair(a, Sign::Minus)?.translate(u),
            ))
        }
        _ => None,
    };
    let poly = match mode {
        Mode::Perturb | Mode::Density => structure.as_ref().map(|s| s.common.clone()),
        _ => None,
    };
    let epsilon = manifest
        .get("epsilon")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| CliError::Input("manifest `epsilon` is not a number".into()))?;
    let meta = PairMeta { mode, a, delta, theta, lambda0, poly, epsilon };
    let distance = match (manifest.get("distance_lo"), manifest.get("distance_hi")) {
        (Some(_), Some(_)) => Some(gul_core::signals::Interval::new(
            manifest.require_f64("distance_lo")?,
            manifest.require_f64("distance_hi")?,
        )),
        _ => None,
    };
    let phase_distance = manifest.get("phase_distance").and_then(|v| v.parse().ok());
    Ok(CounterexamplePair {
        plus,
        minus,
        family,
        meta,
        structure,
        closed_form,
        certificates: Certificates { agreement: None, distance, phase_distance },
    })
}
