use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clifwave::field::MultivectorField;
use clifwave::io::{read_file, write_atomic, write_file, Payload};
use clifwave::profile::Profile;
use clifwave::simgroup::Rotation;
use clifwave::verify::run_identity_suite;
use clifwave::wavelet::{admissibility, inverse_transform, transform_direct, transform_spectral, WaveletCoefficients};
use serde_json::{json, Value};

use crate::args::{Cli, Command, Method};
use crate::config::{load_wavelet, resolve};
use crate::Usage;

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Gabor { profile, output } => gabor(&resolve(config, profile)?.profile, output),
        Command::Transform {
            profile,
            input,
            output,
            save_signal,
            method,
        } => {
            let resolved = resolve(config, profile)?;
            transform(&resolved, profile.wavelet.as_deref(), input.as_deref(), output, save_signal.as_deref(), *method)
        }
        Command::Invert {
            input,
            output,
            reference,
            bound,
        } => invert(input, output, reference.as_deref(), *bound),
        Command::Admissibility { profile } => {
            let resolved = resolve(config, profile)?;
            let psi = resolved.mother()?;
            let c = admissibility(&psi, &resolved.profile.grid()?)?;
            println!("parity: {:?} (epsilon = {:+})", c.parity, c.parity.epsilon());
            println!("C = {}", c.value);
            for (name, v) in psi.dim().blade_names().iter().zip(c.value.coeffs()) {
                println!("  {name:>5} {v:.12e}");
            }
            println!("C^-1 = {}", c.inverse);
            println!("C' = {}", c.c_prime);
            println!("scalar constant: {}", c.is_scalar());
            println!("invertible: yes");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { profile, report } => {
            let resolved = resolve(config, profile)?;
            if resolved.sampled.is_some() {
                return Err(Usage("verify needs a closed-form (Gabor) wavelet".into()).into());
            }
            let result = run_identity_suite(&resolved.profile);
            let text = result.to_string();
            print!("{text}");
            if let Some(path) = report {
                write_atomic(path, text.as_bytes())?;
            }
            Ok(if result.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::ExportPlot {
            input,
            output,
            delimiter,
            scale,
            rotation,
        } => export_plot(input, output, delimiter, *scale, *rotation),
    }
}

fn gabor(profile: &Profile, output: &Path) -> Result<ExitCode> {
    let psi = profile.mother()?;
    let grid = profile.grid()?;
    let field = psi.sample(&grid)?;
    let meta = json!({ "wavelet": profile.wavelet });
    write_file(output, &Payload::Field(field), &meta)?;
    let report = psi.zero_mean_report(&grid)?;
    println!("wrote {}", output.display());
    println!("parity: {:?}", psi.parity());
    println!("component means: {}", report.means);
    println!("tolerance: {:e}", report.tolerance);
    println!("zero mean: {}", if report.passed { "PASS" } else { "FAIL" });
    Ok(ExitCode::SUCCESS)
}

fn field_of(path: &Path) -> Result<MultivectorField> {
    match read_file(path).with_context(|| format!("reading {}", path.display()))?.payload {
        Payload::Field(f) => Ok(f),
        _ => Err(Usage(format!("{} does not hold a field", path.display())).into()),
    }
}

fn suite_signal(profile: &Profile) -> Result<MultivectorField> {
    let dim = profile.dim()?;
    let grid = profile.grid()?;
    let parity = (dim.n() == 2).then(|| profile.mother().map(|m| m.parity())).transpose()?;
    let packets = profile.suite(parity).packets(dim, &grid)?;
    let first = packets
        .first()
        .ok_or_else(|| Usage("the signal suite is empty".into()))?;
    Ok(first.sample(&grid)?)
}

fn transform(
    resolved: &crate::config::Resolved,
    wavelet: Option<&Path>,
    input: Option<&Path>,
    output: &Path,
    save_signal: Option<&Path>,
    method: Method,
) -> Result<ExitCode> {
    let profile = &resolved.profile;
    let psi = resolved.mother()?;
    let group = profile.group_grid()?;
    let (signal, source) = match input {
        Some(path) => {
            let f = field_of(path)?;
            f.grid()
                .ensure_same(group.translations())
                .map_err(|e| Usage(format!("signal grid does not match the profile grid: {e}")))?;
            (f, json!({ "source": "file", "path": path.display().to_string() }))
        }
        None => (suite_signal(profile)?, json!({ "source": "suite", "index": 0 })),
    };
    log::info!("transforming over {} group nodes ({:?})", group.len(), method);
    let coeffs = match method {
        Method::Spectral => transform_spectral(&psi, &signal, &group)?,
        Method::Direct => transform_direct(&psi, &signal, &group)?,
    };
    let wavelet_file = match (&resolved.sampled, wavelet) {
        (Some(_), Some(p)) => Value::String(p.display().to_string()),
        _ => Value::Null,
    };
    let meta = json!({
        "profile": profile,
        "signal": source,
        "wavelet_file": wavelet_file,
        "method": format!("{method:?}").to_lowercase(),
    });
    if let Some(path) = save_signal {
        write_file(path, &Payload::Field(signal.clone()), &json!({ "signal": meta["signal"] }))?;
    }
    write_file(output, &Payload::Coefficients(coeffs.clone()), &meta)?;
    println!("wrote {} ({} group nodes)", output.display(), coeffs.len());
    println!("max |T f| = {:.6e}", coeffs.max_abs());
    Ok(ExitCode::SUCCESS)
}

fn coefficients_of(path: &Path) -> Result<(WaveletCoefficients, Value)> {
    let file = read_file(path).with_context(|| format!("reading {}", path.display()))?;
    match file.payload {
        Payload::Coefficients(c) => Ok((c, file.meta)),
        _ => Err(Usage(format!("{} does not hold wavelet coefficients", path.display())).into()),
    }
}

fn invert(input: &Path, output: &Path, reference: Option<&Path>, bound: f64) -> Result<ExitCode> {
    let (coeffs, meta) = coefficients_of(input)?;
    let profile: Profile = serde_json::from_value(meta.get("profile").cloned().unwrap_or(Value::Null))
        .map_err(|e| Usage(format!("{}: no usable profile in metadata ({e})", input.display())))?;
    let psi = match meta.get("wavelet_file").and_then(Value::as_str) {
        Some(p) => load_wavelet(Path::new(p))?,
        None => profile.mother()?,
    };
    let c = admissibility(&psi, coeffs.grid().translations())?;
    let rec = inverse_transform(&coeffs, &psi, &c)?;
    write_file(output, &Payload::Field(rec.clone()), &json!({ "reconstructed_from": input.display().to_string() }))?;
    println!("wrote {}", output.display());

    let original = match reference {
        Some(path) => Some(field_of(path)?),
        None => match meta["signal"]["source"].as_str() {
            Some("suite") => Some(suite_signal(&profile)?),
            Some("file") => meta["signal"]["path"].as_str().map(|p| field_of(Path::new(p))).transpose()?,
            _ => None,
        },
    };
    let Some(original) = original else {
        println!("no reference signal; reconstruction error not computed");
        return Ok(ExitCode::SUCCESS);
    };
    let err = rec.sub(&original)?.norm() / original.norm();
    let ok = err <= bound;
    println!(
        "relative L2 reconstruction error: {err:.6e} (bound {bound:e}) {}",
        if ok { "PASS" } else { "FAIL" }
    );
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn export_plot(input: &Path, output: &Path, delimiter: &str, scale: Option<usize>, rotation: Option<usize>) -> Result<ExitCode> {
    let (coeffs, _) = coefficients_of(input)?;
    let grid = coeffs.grid();
    let n = grid.dim().n();
    if scale.is_some_and(|j| j >= grid.scales().len()) || rotation.is_some_and(|k| k >= grid.rotations().len()) {
        return Err(Usage("scale or rotation index out of range".into()).into());
    }
    let d = delimiter;
    let mut text = String::new();
    let mut header = vec!["scale_index", "scale", "rotation_index"];
    header.extend(if n == 2 { &["angle"][..] } else { &["q0", "q1", "q2", "q3"][..] });
    header.extend(&["b1", "b2", "b3"][..n]);
    header.push("modulus");
    text.push_str(&header.join(d));
    text.push('\n');
    let translations = grid.translations();
    for slot in 0..grid.orientation_count() {
        let (j, k) = grid.orientation(slot);
        if scale.is_some_and(|s| s != j) || rotation.is_some_and(|r| r != k) {
            continue;
        }
        let rot = match grid.rotations()[k] {
            Rotation::Planar { angle } => format!("{angle}"),
            Rotation::Spatial { quaternion: q } => q.map(|c| c.to_string()).join(d),
        };
        let a = grid.scales()[j];
        for (t, value) in coeffs.slot(slot).iter().enumerate() {
            let b = translations.point(t);
            let _ = write!(text, "{j}{d}{a}{d}{k}{d}{rot}");
            for bk in &b[..n] {
                let _ = write!(text, "{d}{bk}");
            }
            let _ = writeln!(text, "{d}{}", value.modulus());
        }
    }
    write_atomic(output, text.as_bytes())?;
    println!("wrote {}", output.display());
    Ok(ExitCode::SUCCESS)
}
