//! Profile resolution: built-in defaults, then the TOML file, then flags.

use std::path::Path;

use anyhow::{Context, Result};
use clifwave::io::{read_file, Payload};
use clifwave::profile::{Profile, ScaleRange};
use clifwave::wavelet::{GaborParams, MotherWavelet};
use clifwave::{AlgebraDim, Multivector};

use crate::args::ProfileArgs;
use crate::Usage;

/// A resolved profile plus an optional sampled mother that replaces the
/// profile's Gabor parameters.
pub struct Resolved {
    pub profile: Profile,
    pub sampled: Option<MotherWavelet>,
}

impl Resolved {
    pub fn mother(&self) -> Result<MotherWavelet> {
        match &self.sampled {
            Some(m) => Ok(m.clone()),
            None => Ok(self.profile.mother()?),
        }
    }
}

pub fn resolve(config: Option<&Path>, args: &ProfileArgs) -> Result<Resolved> {
    let table = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            text.parse::<toml::Table>()
                .map_err(|e| Usage(format!("config {}: {e}", path.display())))?
        }
        None => toml::Table::new(),
    };

    let wavelet = match &args.wavelet {
        Some(path) => Some(load_wavelet(path)?),
        None => None,
    };
    let file_n = table
        .get("n")
        .map(|v| v.as_integer().ok_or_else(|| Usage("config: n must be an integer".into())))
        .transpose()?;
    let n = args
        .n
        .or(file_n.map(|v| v as usize))
        .or(wavelet.as_ref().map(|w| w.dim().n()))
        .unwrap_or(2);
    let base = Profile::desk(n).map_err(|e| Usage(e.to_string()))?;
    let mut merged = toml::Table::try_from(&base).context("serializing defaults")?;
    merge(&mut merged, table);
    let mut profile: Profile = merged
        .try_into()
        .map_err(|e: toml::de::Error| Usage(format!("config: {}", e.message())))?;
    if profile.n != n {
        return Err(Usage(format!("config n = {} conflicts with n = {n}", profile.n)).into());
    }
    apply_flags(&mut profile, args)?;

    let sampled = match wavelet {
        Some(w) if w.dim().n() != n => {
            return Err(Usage(format!("wavelet file has n = {}, profile has n = {n}", w.dim().n())).into())
        }
        Some(w) => match w.gabor_params() {
            Some(params) => {
                profile.wavelet = params;
                None
            }
            None => Some(w),
        },
        None => None,
    };
    log::info!("profile: {}", serde_json::to_string(&profile).unwrap_or_default());
    if sampled.is_some() {
        profile.grid()?;
        profile.group_grid()?;
    } else {
        profile.validate()?;
    }
    Ok(Resolved { profile, sampled })
}

/// Loads a mother wavelet file: closed form when the file records Gabor
/// parameters, sampled otherwise.
pub fn load_wavelet(path: &Path) -> Result<MotherWavelet> {
    let file = read_file(path).with_context(|| format!("reading {}", path.display()))?;
    let Payload::Field(field) = file.payload else {
        return Err(Usage(format!("{} does not hold a field", path.display())).into());
    };
    if let Some(params) = file.meta.get("wavelet") {
        let params: GaborParams = serde_json::from_value(params.clone()).context("wavelet metadata")?;
        return Ok(MotherWavelet::from_gabor_params(field.dim(), &params)?);
    }
    Ok(MotherWavelet::from_field(field)?)
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (key, value) in over {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

fn list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Usage(format!("{what}: `{s}` is not a number")).into())
        })
        .collect()
}

fn apply_flags(profile: &mut Profile, args: &ProfileArgs) -> Result<()> {
    let n = profile.n;
    if let Some(g) = args.grid {
        profile.samples = g;
    }
    if let Some(e) = args.extent {
        profile.extent = e;
    }
    if let Some(s) = &args.scales {
        let v = list(s, "--scales")?;
        if v.len() != 3 || v[2] < 1.0 || v[2].fract() != 0.0 {
            return Err(Usage("--scales expects MIN,MAX,J with integer J >= 1".into()).into());
        }
        profile.scales = ScaleRange {
            min: v[0],
            max: v[1],
            count: v[2] as usize,
        };
    }
    if let Some(k) = args.rotations {
        profile.rotations = k;
    }
    if let Some(s) = &args.sigma {
        profile.wavelet.sigma = list(s, "--sigma")?;
    }
    if let Some(w) = &args.omega0 {
        profile.wavelet.omega0 = list(w, "--omega0")?;
    }
    if let Some(a) = &args.amplitude {
        let dim = AlgebraDim::new(n)?;
        profile.wavelet.amplitude = Multivector::parse(dim, a)?.coeffs().to_vec();
    }
    if let Some(seed) = args.seed {
        profile.signals.seed = seed;
    }
    if let Some(count) = args.signals {
        profile.signals.count = count;
    }
    if profile.wavelet.sigma.len() != n || profile.wavelet.omega0.len() != n {
        return Err(Usage(format!("--sigma and --omega0 need {n} components")).into());
    }
    Ok(())
}
