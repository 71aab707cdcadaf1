//! Numerical checks of the transform identities and of the uncertainty
//! inequalities, and the report that collects them.
//!
//! Every measurement here is deterministic: signals come from fixed seeds
//! and all reductions run in a fixed order.

use std::f64::consts::PI;
use std::fmt;

use crate::algebra::{AlgebraDim, Multivector};
use crate::cft::{cft_forward, cft_parity_behavior_check, exp_sum_to_frequency};
use crate::error::{Error, Result};
use crate::field::{GridSpec, MultivectorField};
use crate::profile::Profile;
use crate::signals::{grid_center, WavePacket};
use crate::simgroup::{l2g_inner_product, l2g_norm_squared, GroupGrid, GroupPoint, Rotation, RotationSampling};
use crate::wavelet::{
    admissibility, daughter, daughter_spectrum, inverse_transform, reproduce_coefficients, transform_direct,
    transform_spectral, AdmissibilityConstant, MotherWavelet, WaveletCoefficients,
};

/// Gaussian tail used to decide whether a daughter is resolved and contained.
pub const IN_BAND_TAIL: f64 = 1e-8;

/// Documented tolerances of the identity suite.
pub mod tolerance {
    pub const CROSS_PATH: f64 = 1e-8;
    pub const DAUGHTER: f64 = 1e-6;
    pub const PLANCHEREL: f64 = 1e-10;
    pub const PARITY_LEAKAGE: f64 = 1e-14;
    pub const COVARIANCE: f64 = 1e-8;
    pub const INNER_PRODUCT: f64 = 0.02;
    pub const INVERSION: f64 = 0.05;
    pub const REPRODUCING: f64 = 0.05;
    pub const UNCERTAINTY_SLACK: f64 = 1e-6;
    pub const EPSILON_INDEPENDENCE: f64 = 1e-10;
    pub const ADMISSIBILITY_SYMMETRY: f64 = 1e-12;
    pub const ADMISSIBILITY_INVERSE: f64 = 1e-10;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            tolerance,
            bound: Bound::AtMost,
            passed: measured <= tolerance,
            note: None,
        }
    }

    pub fn at_least(name: &str, measured: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            tolerance,
            bound: Bound::AtLeast,
            passed: measured >= tolerance,
            note: None,
        }
    }

    pub fn failed(name: &str, note: String) -> Check {
        Check {
            name: name.into(),
            measured: f64::NAN,
            tolerance: f64::NAN,
            bound: Bound::AtMost,
            passed: false,
            note: Some(note),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        write!(
            f,
            "{} {:.6e} {}{:.6e} {}",
            self.name,
            self.measured,
            op,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        if let Some(note) = &self.note {
            write!(f, " # {note}")?;
        }
        Ok(())
    }
}

/// Ordered list of checks with a commented header.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    /// One `# ` line per header entry, then `name measured tolerance PASS|FAIL`
    /// per check.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.header {
            writeln!(f, "# {h}")?;
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn relative(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

// ---------------------------------------------------------------------------
// Uncertainty principles

/// Both sides of an uncertainty inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintyReport {
    /// `‖b T_ψ f‖²` over the group grid, `b` measured from the grid center.
    pub position: f64,
    /// The frequency factor.
    pub frequency: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; NaN when degenerate.
    pub ratio: f64,
    /// Both sides vanish (zero signal).
    pub degenerate: bool,
}

impl UncertaintyReport {
    fn new(position: f64, frequency: f64, rhs: f64) -> Self {
        let lhs = position * frequency;
        let degenerate = rhs == 0.0 && lhs == 0.0;
        UncertaintyReport {
            position,
            frequency,
            lhs,
            rhs,
            ratio: if degenerate { f64::NAN } else { lhs / rhs },
            degenerate,
        }
    }
}

/// `Σ_nodes |b - c|² |T(node)|² dλ` with `c` the center of the translation grid.
pub fn position_variance(coeffs: &WaveletCoefficients) -> f64 {
    let grid = coeffs.grid();
    let translations = grid.translations();
    let center = grid_center(translations);
    let n = translations.n();
    let r2: Vec<f64> = (0..translations.len())
        .map(|i| {
            let p = translations.point(i);
            (0..n).map(|k| (p[k] - center[k]).powi(2)).sum()
        })
        .collect();
    let cell = translations.cell_volume();
    (0..grid.orientation_count())
        .map(|slot| {
            let s: f64 = coeffs
                .slot(slot)
                .iter()
                .zip(&r2)
                .map(|(t, r)| r * t.modulus_squared())
                .sum();
            s * grid.orientation_weight(slot) * cell
        })
        .sum()
}

/// `Σ_k ∫ ω_k² f̂~(ω) f̂(ω) dⁿω`.
fn frequency_moment(f: &MultivectorField) -> Result<Multivector> {
    let spectrum = cft_forward(f)?;
    let n = f.grid().n();
    let mut acc = Multivector::zero(f.dim());
    for (i, s) in spectrum.data().iter().enumerate() {
        let w = spectrum.omega(i);
        let r2: f64 = w[..n].iter().map(|c| c * c).sum();
        acc += (s.reverse() * *s) * r2;
    }
    Ok(acc * spectrum.frequency_grid().cell_volume())
}

/// `C_ψ ∗ ((ω f̂)~, (ω f̂)~)`, i.e. `⟨C_ψ Σ_k ∫ (ω_k f̂)~ (ω_k f̂) dω⟩₀`.
pub fn frequency_term(f: &MultivectorField, constant: &AdmissibilityConstant) -> Result<f64> {
    Ok((constant.value * frequency_moment(f)?).scalar_part())
}

/// `∫ dμ ‖ω F_b{T_ψ f(a,θ,·)}‖²` over the group grid.
pub fn integrated_variance(coeffs: &WaveletCoefficients) -> Result<f64> {
    let grid = coeffs.grid();
    let n = grid.dim().n();
    let mut total = 0.0;
    for slot in 0..grid.orientation_count() {
        let spectrum = exp_sum_to_frequency(&coeffs.slot_field(slot), -1.0)?;
        let mut s = 0.0;
        for (i, v) in spectrum.data().iter().enumerate() {
            let w = spectrum.omega(i);
            let r2: f64 = w[..n].iter().map(|c| c * c).sum();
            s += r2 * v.modulus_squared();
        }
        total += s * spectrum.frequency_grid().cell_volume() * grid.orientation_weight(slot);
    }
    Ok(total)
}

/// General inequality
/// `‖b T_ψ f‖² · C_ψ ∗ ((ωf̂)~, (ωf̂)~) ≥ n (2π)ⁿ / 4 · [C_ψ ∗ (f, f)]²`.
pub fn check_uncertainty_general(
    psi: &MotherWavelet,
    constant: &AdmissibilityConstant,
    f: &MultivectorField,
    grid: &GroupGrid,
) -> Result<UncertaintyReport> {
    let coeffs = transform_spectral(psi, f, grid)?;
    uncertainty_general_from(&coeffs, constant, f)
}

pub fn uncertainty_general_from(
    coeffs: &WaveletCoefficients,
    constant: &AdmissibilityConstant,
    f: &MultivectorField,
) -> Result<UncertaintyReport> {
    let n = f.grid().n() as f64;
    let position = position_variance(coeffs);
    let frequency = frequency_term(f, constant)?;
    let cff = (constant.value * f.inner_product(f)?).scalar_part();
    let rhs = n * (2.0 * PI).powf(n) / 4.0 * cff * cff;
    Ok(UncertaintyReport::new(position, frequency, rhs))
}

/// Scalar-constant form
/// `‖b T_ψ f‖² ‖ω f̂‖² ≥ n C_ψ (2π)ⁿ / 4 ‖f‖⁴`.
pub fn check_uncertainty_scalar(
    psi: &MotherWavelet,
    constant: &AdmissibilityConstant,
    f: &MultivectorField,
    grid: &GroupGrid,
) -> Result<UncertaintyReport> {
    scalar_constant(constant)?;
    let coeffs = transform_spectral(psi, f, grid)?;
    uncertainty_scalar_from(&coeffs, constant, f)
}

fn scalar_constant(constant: &AdmissibilityConstant) -> Result<f64> {
    let vector = constant.value.filter_grades(|k| k == 1).modulus();
    if vector > 1e-8 * constant.value.modulus() {
        return Err(Error::NonScalarConstant(vector));
    }
    Ok(constant.value.scalar_part())
}

pub fn uncertainty_scalar_from(
    coeffs: &WaveletCoefficients,
    constant: &AdmissibilityConstant,
    f: &MultivectorField,
) -> Result<UncertaintyReport> {
    let c = scalar_constant(constant)?;
    let n = f.grid().n() as f64;
    let position = position_variance(coeffs);
    let frequency = frequency_moment(f)?.scalar_part();
    let norm2 = f.norm_squared();
    let rhs = n * c * (2.0 * PI).powf(n) / 4.0 * norm2 * norm2;
    Ok(UncertaintyReport::new(position, frequency, rhs))
}

/// Integrated variances for an even and an odd mother (n = 2) and their
/// relative difference.
pub fn epsilon_independence(
    even: &MotherWavelet,
    odd: &MotherWavelet,
    f: &MultivectorField,
    grid: &GroupGrid,
) -> Result<(f64, f64, f64)> {
    let ve = integrated_variance(&transform_spectral(even, f, grid)?)?;
    let vo = integrated_variance(&transform_spectral(odd, f, grid)?)?;
    Ok((ve, vo, relative((ve - vo).abs(), ve.abs().max(vo.abs()))))
}

// ---------------------------------------------------------------------------
// Transform identities

/// `max |direct - spectral| / max |direct|`.
pub fn cross_path_error(psi: &MotherWavelet, f: &MultivectorField, grid: &GroupGrid) -> Result<f64> {
    let direct = transform_direct(psi, f, grid)?;
    let spectral = transform_spectral(psi, f, grid)?;
    Ok(relative(direct.max_abs_diff(&spectral)?, direct.max_abs()))
}

/// Daughter norm and spectrum errors at the given group points:
/// `max |‖ψ_g‖ - ‖ψ‖| / ‖ψ‖` and `max |cft(ψ_g) - closed form| / max |closed form|`.
pub fn daughter_errors(psi: &MotherWavelet, points: &[GroupPoint], grid: &GridSpec) -> Result<(f64, f64)> {
    let reference = psi
        .analytic_norm()
        .ok_or_else(|| Error::InvalidParameter("closed-form mother required".into()))?;
    let mut norm_err: f64 = 0.0;
    let mut spec_err: f64 = 0.0;
    for g in points {
        let d = daughter(psi, g, grid)?;
        norm_err = norm_err.max((d.norm() - reference).abs() / reference);
        let spectrum = cft_forward(&d)?;
        let mut diff: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (i, s) in spectrum.data().iter().enumerate() {
            let exact = daughter_spectrum(psi, g, spectrum.omega(i)).expect("closed form");
            diff = diff.max((*s - exact).max_abs());
            scale = scale.max(exact.max_abs());
        }
        spec_err = spec_err.max(relative(diff, scale));
    }
    Ok((norm_err, spec_err))
}

/// In-band group points of `grid` near the box center: resolved and
/// contained scales, every `stride`-th rotation, a few translations.
pub fn in_band_points(psi: &MotherWavelet, grid: &GroupGrid, limit: usize) -> Vec<GroupPoint> {
    let translations = grid.translations();
    let center = grid_center(translations);
    let n = translations.n();
    let mut out = Vec::new();
    let offsets: [[f64; 3]; 3] = [[0.0; 3], [0.7, -0.4, 0.3], [-1.1, 0.9, -0.6]];
    for (j, &a) in grid.scales().iter().enumerate() {
        for (k, rotation) in grid.rotations().iter().enumerate() {
            if (j + k) % 3 != 0 {
                continue;
            }
            let off = offsets[(j + k) % offsets.len()];
            let mut b = [0.0; 3];
            for i in 0..n {
                b[i] = center[i] + off[i];
            }
            if psi.in_band(a, &b[..n], translations, IN_BAND_TAIL) {
                out.push(GroupPoint {
                    a,
                    rotation: *rotation,
                    b,
                });
            }
            if out.len() >= limit {
                return out;
            }
        }
    }
    out
}

/// Indices of scales whose daughters stay inside the box around its center.
pub fn contained_scales(psi: &MotherWavelet, grid: &GroupGrid, margin: f64) -> Vec<usize> {
    let translations = grid.translations();
    let center = grid_center(translations);
    let n = translations.n();
    let mut b = center;
    for v in b.iter_mut().take(n) {
        *v += margin;
    }
    grid.scales()
        .iter()
        .enumerate()
        .filter(|(_, a)| psi.contained(**a, &b[..n], translations, IN_BAND_TAIL))
        .map(|(j, _)| j)
        .collect()
}

/// Scales `a` at which the quadrature of `∫ f(c x) ψ̃_a(x - b) dx` on `grid`
/// is alias-free up to `tol`, for a signal made of packets with carriers up
/// to `k_max` and envelope widths at least `w_min`. The integrand spectrum is
/// a Gaussian around `c k + ω0/a` whose width combines both factors; it must
/// stay clear of the first quadrature alias at `2π/Δx`.
pub fn quadrature_resolved(psi: &MotherWavelet, a: f64, grid: &GridSpec, c: f64, k_max: f64, w_min: f64, tol: f64) -> bool {
    let Some((w0, sigma)) = psi.spectral_envelope() else {
        return false;
    };
    let t = (2.0 * (1.0 / tol).ln()).sqrt();
    let center = c * k_max + w0 / a;
    let width = ((c / w_min).powi(2) + (1.0 / (a * sigma)).powi(2)).sqrt();
    (0..grid.n()).all(|k| 2.0 * PI / grid.spacing(k) - center >= t * width)
}

/// Translation covariance `T[f(· - x0)](a,θ,b) = T f(a,θ,b - x0)` for the
/// lattice shift `shift`. Returns `max |lhs - rhs| / max |rhs|`.
pub fn translation_covariance_error(
    psi: &MotherWavelet,
    f: &MultivectorField,
    grid: &GroupGrid,
    shift: &[i64],
) -> Result<f64> {
    let base = transform_spectral(psi, f, grid)?;
    let moved = transform_spectral(psi, &f.roll(shift), grid)?;
    let mut diff: f64 = 0.0;
    for slot in 0..grid.orientation_count() {
        let expected = base.slot_field(slot).roll(shift);
        diff = diff.max(moved.slot_field(slot).max_abs_diff(&expected)?);
    }
    Ok(relative(diff, base.max_abs()))
}

/// Lattice permutation for a rotation whose matrix is a signed
/// permutation, on a centered cubic grid: flat index of `r x` for each `x`.
fn rotate_indices(grid: &GridSpec, rotation: &Rotation) -> Result<Vec<usize>> {
    let n = grid.n();
    let m = rotation.matrix();
    let mut perm = [[0i64; 3]; 3];
    for i in 0..n {
        for j in 0..n {
            let r = m[i][j].round();
            if (m[i][j] - r).abs() > 1e-9 {
                return Err(Error::InvalidParameter("rotation does not preserve the lattice".into()));
            }
            perm[i][j] = r as i64;
        }
    }
    let size = grid.samples()[0];
    let h = grid.spacing(0);
    for k in 0..n {
        let centered = grid.lower()[k] + (size / 2) as f64 * h;
        if grid.samples()[k] != size || (grid.spacing(k) - h).abs() > 1e-12 * h || centered.abs() > 1e-9 * h {
            return Err(Error::GridMismatch("lattice rotations need a centered cubic grid".into()));
        }
    }
    let half = (size / 2) as i64;
    Ok((0..grid.len())
        .map(|flat| {
            let idx = grid.multi_index(flat);
            let mut out = [0usize; 3];
            for i in 0..n {
                let mut v = 0;
                for j in 0..n {
                    v += perm[i][j] * (idx[j] as i64 - half);
                }
                out[i] = (v + half).rem_euclid(size as i64) as usize;
            }
            grid.flat_index(&out[..n])
        })
        .collect())
}

/// Rotation covariance `T[f(r0 ·)](a,θ,b) = T f(a,θ',r0 b)` with
/// `r_θ' = r0 r_θ`, for a lattice-preserving `r0` whose compositions stay in
/// the rotation set. Compared over the scales in `scales`.
pub fn rotation_covariance_error(
    psi: &MotherWavelet,
    f: &MultivectorField,
    grid: &GroupGrid,
    r0: &Rotation,
    scales: &[usize],
) -> Result<f64> {
    let translations = grid.translations();
    let map = rotate_indices(translations, r0)?;
    let rotated_data = map.iter().map(|&src| f.data()[src]).collect();
    let rotated = MultivectorField::new(f.dim(), translations.clone(), rotated_data)?;
    let base = transform_spectral(psi, f, grid)?;
    let moved = transform_spectral(psi, &rotated, grid)?;
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &j in scales {
        for (k, r) in grid.rotations().iter().enumerate() {
            let k2 = grid
                .rotation_index(&r0.compose(r)?)
                .ok_or_else(|| Error::InvalidParameter("rotation set is not closed under r0".into()))?;
            for (b, &rb) in map.iter().enumerate() {
                let lhs = moved.get(grid.node_index(j, k, b));
                let rhs = base.get(grid.node_index(j, k2, rb));
                diff = diff.max((lhs - rhs).max_abs());
                scale = scale.max(rhs.max_abs());
            }
        }
    }
    Ok(relative(diff, scale))
}

/// Dilation covariance `T[f(c ·)](a,θ,b) = c^{-n/2} T f(ca,θ,cb)` for an
/// integer `c` and scales `scales`. Compared at translation nodes `b` whose
/// multiple `cb` is again a node of the centered grid and where the daughter
/// at `(ca, cb)` stays inside the box, so that periodic wrap-around of the
/// signal does not enter.
pub fn dilation_covariance_error(
    psi: &MotherWavelet,
    signal: &dyn Fn(&[f64]) -> Multivector,
    translations: &GridSpec,
    sampling: &RotationSampling,
    scales: &[f64],
    c: u32,
) -> Result<f64> {
    let dim = psi.dim();
    let n = dim.n();
    let cf = c as f64;
    let weights = vec![1.0; scales.len()];
    let small = GroupGrid::with_scales(dim, scales.to_vec(), weights.clone(), sampling.clone(), translations.clone())?;
    let large = GroupGrid::with_scales(
        dim,
        scales.iter().map(|a| a * cf).collect(),
        weights,
        sampling.clone(),
        translations.clone(),
    )?;
    let squeezed = MultivectorField::from_fn(dim, translations.clone(), |x| {
        let mut y = [0.0; 3];
        for k in 0..n {
            y[k] = cf * x[k];
        }
        signal(&y[..n])
    })?;
    let plain = MultivectorField::from_fn(dim, translations.clone(), signal)?;
    let lhs = transform_spectral(psi, &squeezed, &small)?;
    let rhs = transform_spectral(psi, &plain, &large)?;
    let size: Vec<i64> = translations.samples().iter().map(|&s| s as i64).collect();
    let factor = cf.powf(-(n as f64) / 2.0);
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for b in 0..translations.len() {
        let idx = translations.multi_index(b);
        let mut target = [0usize; 3];
        let mut inside = true;
        for k in 0..n {
            let half = size[k] / 2;
            let m = (idx[k] as i64 - half) * c as i64 + half;
            if m < 0 || m >= size[k] {
                inside = false;
                break;
            }
            target[k] = m as usize;
        }
        if !inside {
            continue;
        }
        let cb = translations.flat_index(&target[..n]);
        let cb_point = translations.point(cb);
        for slot in 0..small.orientation_count() {
            let (j, k) = small.orientation(slot);
            if !psi.contained(large.scales()[j], &cb_point[..n], translations, IN_BAND_TAIL) {
                continue;
            }
            let l = lhs.get(small.node_index(j, k, b));
            let r = rhs.get(large.node_index(j, k, cb)) * factor;
            diff = diff.max((l - r).max_abs());
            scale = scale.max(r.max_abs());
        }
    }
    Ok(relative(diff, scale))
}

/// Errors of the inner-product relation `(T f, T g) = (f C', g)` and the
/// norm relation `‖T f‖² = Sc(f C', f)`, relative to `‖f C'‖ ‖g‖` and
/// `Sc(f C', f)`.
pub fn relation_errors(
    psi: &MotherWavelet,
    constant: &AdmissibilityConstant,
    f: &MultivectorField,
    g: &MultivectorField,
    grid: &GroupGrid,
) -> Result<(f64, f64)> {
    let tf = transform_spectral(psi, f, grid)?;
    let tg = transform_spectral(psi, g, grid)?;
    let fc = f.scale_right(&constant.c_prime);
    let expected = fc.inner_product(g)?;
    let ip = l2g_inner_product(&tf, &tg)?;
    let ip_err = (ip - expected).modulus() / (fc.norm() * g.norm());
    let norm_expected = fc.inner_product(f)?.scalar_part();
    let norm_err = (l2g_norm_squared(&tf) - norm_expected).abs() / norm_expected.abs();
    Ok((ip_err, norm_err))
}

/// Relative L² error of analysis followed by synthesis.
pub fn reconstruction_error(
    psi: &MotherWavelet,
    constant: &AdmissibilityConstant,
    f: &MultivectorField,
    grid: &GroupGrid,
) -> Result<f64> {
    let coeffs = transform_spectral(psi, f, grid)?;
    let rec = inverse_transform(&coeffs, psi, constant)?;
    Ok(rec.sub(f)?.norm() / f.norm())
}

/// 25 probe nodes of `grid`: five interior scales × five (rotation,
/// translation) combinations around `center`.
pub fn probe_nodes(grid: &GroupGrid, center: &[f64]) -> Vec<usize> {
    let translations = grid.translations();
    let n = translations.n();
    let j_count = grid.scales().len();
    let k_count = grid.rotations().len();
    let scales: Vec<usize> = (1..=5).map(|i| (i * j_count) / 6).collect();
    let steps: [[i64; 3]; 5] = [[0, 0, 0], [2, 0, 0], [0, 2, 1], [-2, 0, -1], [0, -2, 0]];
    let mut nearest = [0usize; 3];
    for k in 0..n {
        let t = ((center[k] - translations.lower()[k]) / translations.spacing(k)).round() as i64;
        nearest[k] = t.clamp(0, translations.samples()[k] as i64 - 1) as usize;
    }
    let mut out = Vec::with_capacity(25);
    for &j in &scales {
        for (c, step) in steps.iter().enumerate() {
            let k = (c * k_count) / steps.len();
            let mut idx = [0usize; 3];
            for i in 0..n {
                let s = translations.samples()[i] as i64;
                idx[i] = (nearest[i] as i64 + step[i]).rem_euclid(s) as usize;
            }
            out.push(grid.node_index(j, k, translations.flat_index(&idx[..n])));
        }
    }
    out
}

/// Reproducing-kernel check at `probes` (node indices of the coefficient
/// grid): `‖R - T‖ / ‖T‖` over the probe vector, where `R` is the kernel
/// integral of the coefficients.
pub fn reproducing_error(
    psi: &MotherWavelet,
    constant: &AdmissibilityConstant,
    coeffs: &WaveletCoefficients,
    probes: &[usize],
) -> Result<f64> {
    let points: Vec<GroupPoint> = probes.iter().map(|&p| coeffs.grid().point(p)).collect();
    let reproduced = reproduce_coefficients(psi, constant, coeffs, &points)?;
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (&p, r) in probes.iter().zip(&reproduced) {
        let t = coeffs.get(p);
        diff += (*r - t).modulus_squared();
        norm += t.modulus_squared();
    }
    Ok(relative(diff.sqrt(), norm.sqrt()))
}

/// Plancherel `(f̂, f̂) = (2π)ⁿ (f, f)`, relative error.
pub fn plancherel_error(f: &MultivectorField) -> Result<f64> {
    let n = f.grid().n() as i32;
    let spectrum = cft_forward(f)?;
    let lhs = spectrum.as_field().inner_product(spectrum.as_field())?;
    let rhs = f.inner_product(f)? * (2.0 * PI).powi(n);
    Ok((lhs - rhs).modulus() / rhs.modulus())
}

// ---------------------------------------------------------------------------
// Suite

fn packets_field(dim: AlgebraDim, packets: &[WavePacket], grid: &GridSpec) -> Result<MultivectorField> {
    crate::signals::superpose(dim, packets, grid)
}

/// Runs every identity check on `profile` and collects the results.
/// Failures of individual checks are recorded, never propagated.
pub fn run_identity_suite(profile: &Profile) -> Report {
    let mut report = Report::default();
    report.header = vec![
        "clifwave identity suite".into(),
        format!(
            "profile: n={} samples={} extent={} scales=[{}, {}]x{} rotations={}",
            profile.n,
            profile.samples,
            profile.extent,
            profile.scales.min,
            profile.scales.max,
            profile.scales.count,
            profile.rotations
        ),
        "uncertainty frequency factor: C * Int (w f^)~ (w f^) dw, reverse on the left factor".into(),
        "norm relation compared against Sc(f C', f) with C' = C".into(),
        "columns: name measured tolerance verdict".into(),
    ];
    if let Err(e) = suite_body(profile, &mut report) {
        report.push(Check::failed("suite_setup", e.to_string()));
    }
    report
}

fn suite_body(profile: &Profile, report: &mut Report) -> Result<()> {
    let dim = profile.dim()?;
    let grid = profile.grid()?;
    let group = profile.group_grid()?;
    let psi = profile.mother()?;

    let constant = match admissibility(&psi, &grid) {
        Ok(c) => c,
        Err(e) => {
            report.push(Check::failed("admissibility", e.to_string()));
            return Ok(());
        }
    };
    let c = constant.value;
    report.push(Check::at_most(
        "admissibility_reverse_symmetry",
        (c - c.reverse()).modulus() / c.modulus(),
        tolerance::ADMISSIBILITY_SYMMETRY,
    ));
    report.push(Check::at_least("admissibility_scalar_part", c.scalar_part(), f64::MIN_POSITIVE));
    report.push(Check::at_most(
        "admissibility_inverse",
        (c * constant.inverse - Multivector::one(dim)).max_abs(),
        tolerance::ADMISSIBILITY_INVERSE,
    ));

    let parity = (dim.n() == 2).then_some(psi.parity());
    let packets = profile.suite(parity).packets(dim, &grid)?;
    let fields: Vec<MultivectorField> = packets.iter().map(|p| p.sample(&grid)).collect::<Result<_>>()?;
    if fields.len() < 2 {
        return Err(Error::InvalidParameter("suite needs at least two signals".into()));
    }
    let f = &fields[0];
    let g = &fields[1];

    report.push(Check::at_most("plancherel", plancherel_error(f)?, tolerance::PLANCHEREL));
    if dim.n() == 2 {
        let mixed = packets_field(dim, &profile.suite(None).packets(dim, &grid)?[..1], &grid)?;
        report.push(Check::at_most(
            "cft_parity_leakage",
            cft_parity_behavior_check(&mixed)?.max_leakage(),
            tolerance::PARITY_LEAKAGE,
        ));
    }

    // Cross-path check on a reduced problem.
    let small_grid = GridSpec::cube(dim.n(), profile.extent / 2.0, 16)?;
    let small_group = GroupGrid::new(
        dim,
        (profile.scales.min, profile.scales.max, 4),
        RotationSampling::default_for(dim, 4),
        small_grid.clone(),
    )?;
    let small_f = packets[0].sample(&small_grid)?;
    report.push(Check::at_most(
        "cross_path_direct_spectral",
        cross_path_error(&psi, &small_f, &small_group)?,
        tolerance::CROSS_PATH,
    ));

    let points = in_band_points(&psi, &group, 12);
    if points.is_empty() {
        report.push(Check::failed("daughter_norm", "no in-band group points".into()));
    } else {
        let (norm_err, spec_err) = daughter_errors(&psi, &points, &grid)?;
        report.push(Check::at_most("daughter_norm", norm_err, tolerance::DAUGHTER));
        report.push(Check::at_most("daughter_spectrum", spec_err, tolerance::DAUGHTER));
    }

    report.push(Check::at_most(
        "translation_covariance",
        translation_covariance_error(&psi, f, &group, &[5, -3, 2][..dim.n()])?,
        tolerance::COVARIANCE,
    ));
    let contained = contained_scales(&psi, &group, 0.0);
    let quarter = match dim.n() {
        2 => Rotation::planar(PI / 2.0),
        _ => Rotation::axis_angle([0.0, 0.0, 1.0], PI / 2.0)?,
    };
    // The check needs a rotation set closed under the quarter turn.
    let closed_sampling = match dim.n() {
        2 => RotationSampling::Uniform {
            count: group.rotations().len().div_ceil(4) * 4,
        },
        _ => RotationSampling::Octahedral,
    };
    let closed = if *group.sampling() == closed_sampling {
        group.clone()
    } else {
        GroupGrid::with_scales(
            dim,
            group.scales().to_vec(),
            group.scale_weights().to_vec(),
            closed_sampling,
            grid.clone(),
        )?
    };
    match rotation_covariance_error(&psi, f, &closed, &quarter, &contained) {
        Ok(e) => report.push(Check::at_most("rotation_covariance", e, tolerance::COVARIANCE)),
        Err(e) => report.push(Check::failed("rotation_covariance", e.to_string())),
    }
    let dilation_scales: Vec<f64> = group
        .scales()
        .iter()
        .copied()
        .filter(|a| {
            let (k_max, w_min) = (profile.signals.band.1, profile.signals.width.0);
            quadrature_resolved(&psi, *a, &grid, 2.0, k_max, w_min, IN_BAND_TAIL)
                && psi.contained(2.0 * a, &grid_center(&grid)[..dim.n()], &grid, IN_BAND_TAIL)
        })
        .collect();
    if dilation_scales.is_empty() {
        report.push(Check::failed("dilation_covariance", "no admissible scale pairs".into()));
    } else {
        let packet = packets[0].clone();
        let err = dilation_covariance_error(
            &psi,
            &|x: &[f64]| packet.eval(x),
            &grid,
            group.sampling(),
            &dilation_scales,
            2,
        )?;
        report.push(Check::at_most("dilation_covariance", err, tolerance::COVARIANCE));
    }

    let (ip_err, norm_err) = relation_errors(&psi, &constant, f, g, &group)?;
    report.push(Check::at_most("inner_product_relation", ip_err, tolerance::INNER_PRODUCT));
    report.push(Check::at_most("norm_relation", norm_err, tolerance::INNER_PRODUCT));

    let coeffs = transform_spectral(&psi, f, &group)?;
    let rec = inverse_transform(&coeffs, &psi, &constant)?;
    report.push(Check::at_most(
        "inversion",
        rec.sub(f)?.norm() / f.norm(),
        tolerance::INVERSION,
    ));
    let probes = probe_nodes(&group, &packets[0].center[..dim.n()]);
    report.push(Check::at_most(
        "reproducing_kernel",
        reproducing_error(&psi, &constant, &coeffs, &probes)?,
        tolerance::REPRODUCING,
    ));

    let mut worst_general = f64::INFINITY;
    let mut worst_scalar = f64::INFINITY;
    let scalar_ok = scalar_constant(&constant).is_ok();
    for field in &fields {
        let coeffs = transform_spectral(&psi, field, &group)?;
        worst_general = worst_general.min(uncertainty_general_from(&coeffs, &constant, field)?.ratio);
        if scalar_ok {
            worst_scalar = worst_scalar.min(uncertainty_scalar_from(&coeffs, &constant, field)?.ratio);
        }
    }
    let bound = 1.0 - tolerance::UNCERTAINTY_SLACK;
    report.push(
        Check::at_least("uncertainty_general_min_ratio", worst_general, bound)
            .with_note(format!("{} signals", fields.len())),
    );
    if scalar_ok {
        report.push(Check::at_least("uncertainty_scalar_min_ratio", worst_scalar, bound));
    }

    if dim.n() == 2 {
        let params = psi.gabor_params().expect("profile mothers are closed form");
        let even = MotherWavelet::gabor(dim, &params.sigma, &params.omega0, Multivector::one(dim))?;
        let odd = MotherWavelet::gabor(dim, &params.sigma, &params.omega0, Multivector::basis(dim, 1))?;
        let (_, _, rel) = epsilon_independence(&even, &odd, f, &group)?;
        report.push(Check::at_most(
            "epsilon_independence",
            rel,
            tolerance::EPSILON_INDEPENDENCE,
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_lines() {
        let mut r = Report::default();
        r.header.push("head".into());
        r.push(Check::at_most("a", 0.5, 1.0));
        r.push(Check::at_least("b", 0.5, 1.0));
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# head");
        assert!(lines[1].starts_with("a 5.000000e-1 <=1.000000e0 PASS"));
        assert!(lines[2].ends_with("FAIL"));
        assert!(!r.all_passed());
    }

    #[test]
    fn zero_signal_is_degenerate() {
        let d = AlgebraDim::TWO;
        let grid = GridSpec::cube(2, 24.0, 64).unwrap();
        let psi = MotherWavelet::gabor(d, &[1.0, 1.0], &[3.0, 0.0], Multivector::one(d)).unwrap();
        let c = admissibility(&psi, &grid).unwrap();
        let group = GroupGrid::new(d, (1.0, 2.0, 2), RotationSampling::Uniform { count: 2 }, grid.clone()).unwrap();
        let zero = MultivectorField::zeros(d, grid).unwrap();
        let r = check_uncertainty_general(&psi, &c, &zero, &group).unwrap();
        assert!(r.degenerate && r.ratio.is_nan());
    }

    #[test]
    fn non_scalar_constant_rejected() {
        let d = AlgebraDim::THREE;
        let grid = GridSpec::cube(3, 12.0, 16).unwrap();
        let psi = MotherWavelet::gabor(d, &[1.0; 3], &[2.5, 0.0, 0.0], Multivector::parse(d, "2 + e1").unwrap())
            .unwrap();
        let c = admissibility(&psi, &grid).unwrap();
        let group = GroupGrid::new(d, (1.0, 2.0, 1), RotationSampling::Octahedral, grid.clone()).unwrap();
        let f = MultivectorField::zeros(d, grid).unwrap();
        assert!(matches!(
            check_uncertainty_scalar(&psi, &c, &f, &group),
            Err(Error::NonScalarConstant(_))
        ));
    }
}
