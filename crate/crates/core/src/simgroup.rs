//! The similitude group SIM(n) = R⁺ × SO(n) ⋉ Rⁿ and quadrature grids for
//! its left Haar measure `dλ = da dθ dⁿb / a^{n+1}`.
//!
//! The SO(n) Haar measure is normalized to total mass 1 throughout; the
//! admissibility constant in [`crate::wavelet`] uses the same normalization.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDim, Multivector};
use crate::error::{Error, Result};
use crate::field::GridSpec;
use crate::wavelet::WaveletCoefficients;

pub type Matrix3 = [[f64; 3]; 3];

/// An element of SO(2) (angle) or SO(3) (unit quaternion `w, x, y, z`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rotation {
    Planar { angle: f64 },
    Spatial { quaternion: [f64; 4] },
}

impl Rotation {
    pub fn identity(dim: AlgebraDim) -> Rotation {
        match dim.n() {
            2 => Rotation::Planar { angle: 0.0 },
            _ => Rotation::Spatial {
                quaternion: [1.0, 0.0, 0.0, 0.0],
            },
        }
    }

    pub fn planar(angle: f64) -> Rotation {
        Rotation::Planar {
            angle: angle.rem_euclid(2.0 * PI),
        }
    }

    /// Normalizes `q`; fails for a zero or non-finite quaternion.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Rotation> {
        let norm = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("degenerate quaternion".into()));
        }
        Ok(Rotation::Spatial {
            quaternion: q.map(|c| c / norm),
        })
    }

    /// Rotation by `angle` about `axis` (right-hand rule).
    pub fn axis_angle(axis: [f64; 3], angle: f64) -> Result<Rotation> {
        let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero rotation axis".into()));
        }
        let (s, c) = (0.5 * angle).sin_cos();
        Rotation::from_quaternion([c, s * axis[0] / norm, s * axis[1] / norm, s * axis[2] / norm])
    }

    pub fn n(&self) -> usize {
        match self {
            Rotation::Planar { .. } => 2,
            Rotation::Spatial { .. } => 3,
        }
    }

    /// Rotation matrix; for n = 2 the trailing row and column are those of
    /// the identity.
    pub fn matrix(&self) -> Matrix3 {
        match *self {
            Rotation::Planar { angle } => {
                let (s, c) = angle.sin_cos();
                [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
            }
            Rotation::Spatial {
                quaternion: [w, x, y, z],
            } => [
                [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
                [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
                [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
            ],
        }
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        mat_vec(&self.matrix(), v)
    }

    pub fn apply_inverse(&self, v: [f64; 3]) -> [f64; 3] {
        mat_vec(&transpose(&self.matrix()), v)
    }

    pub fn inverse(&self) -> Rotation {
        match *self {
            Rotation::Planar { angle } => Rotation::planar(-angle),
            Rotation::Spatial {
                quaternion: [w, x, y, z],
            } => Rotation::Spatial {
                quaternion: [w, -x, -y, -z],
            },
        }
    }

    /// `self ∘ other`, the rotation with matrix `R_self R_other`.
    pub fn compose(&self, other: &Rotation) -> Result<Rotation> {
        match (*self, *other) {
            (Rotation::Planar { angle: a }, Rotation::Planar { angle: b }) => Ok(Rotation::planar(a + b)),
            (
                Rotation::Spatial {
                    quaternion: [w1, x1, y1, z1],
                },
                Rotation::Spatial {
                    quaternion: [w2, x2, y2, z2],
                },
            ) => Rotation::from_quaternion([
                w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            ]),
            _ => Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            }),
        }
    }

    /// Same rotation up to `tol` in every matrix entry (so `q ~ -q`).
    pub fn approx_eq(&self, other: &Rotation, tol: f64) -> bool {
        let (a, b) = (self.matrix(), other.matrix());
        (0..3).all(|i| (0..3).all(|j| (a[i][j] - b[i][j]).abs() <= tol))
    }
}

fn mat_vec(m: &Matrix3, v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

fn transpose(m: &Matrix3) -> Matrix3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn determinant(m: &Matrix3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn matrix_to_quaternion(m: &Matrix3) -> [f64; 4] {
    let trace = m[0][0] + m[1][1] + m[2][2];
    if trace > 0.0 {
        let s = 2.0 * (trace + 1.0).sqrt();
        [0.25 * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s, (m[1][0] - m[0][1]) / s]
    } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
        let s = 2.0 * (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt();
        [(m[2][1] - m[1][2]) / s, 0.25 * s, (m[0][1] + m[1][0]) / s, (m[0][2] + m[2][0]) / s]
    } else if m[1][1] > m[2][2] {
        let s = 2.0 * (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt();
        [(m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, 0.25 * s, (m[1][2] + m[2][1]) / s]
    } else {
        let s = 2.0 * (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt();
        [(m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s, 0.25 * s]
    }
}

/// One element `(a, r_θ, b)` of SIM(n).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub a: f64,
    pub rotation: Rotation,
    pub b: [f64; 3],
}

impl GroupPoint {
    pub fn new(a: f64, rotation: Rotation, b: [f64; 3]) -> Result<GroupPoint> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation a = {a} must be positive")));
        }
        Ok(GroupPoint { a, rotation, b })
    }

    pub fn identity(dim: AlgebraDim) -> GroupPoint {
        GroupPoint {
            a: 1.0,
            rotation: Rotation::identity(dim),
            b: [0.0; 3],
        }
    }

    pub fn n(&self) -> usize {
        self.rotation.n()
    }

    /// `x ↦ a r_θ x + b`.
    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        let r = self.rotation.apply(x);
        let mut out = [0.0; 3];
        for k in 0..self.n() {
            out[k] = self.a * r[k] + self.b[k];
        }
        out
    }

    /// `x ↦ r_θ^{-1}((x - b)/a)`.
    pub fn inverse_apply(&self, x: [f64; 3]) -> [f64; 3] {
        let mut d = [0.0; 3];
        for k in 0..self.n() {
            d[k] = (x[k] - self.b[k]) / self.a;
        }
        self.rotation.apply_inverse(d)
    }

    /// `self ∘ other`: `(a1 a2, r1 r2, a1 r1 b2 + b1)`.
    pub fn compose(&self, other: &GroupPoint) -> Result<GroupPoint> {
        let rotation = self.rotation.compose(&other.rotation)?;
        let rb = self.rotation.apply(other.b);
        let mut b = [0.0; 3];
        for k in 0..self.n() {
            b[k] = self.a * rb[k] + self.b[k];
        }
        GroupPoint::new(self.a * other.a, rotation, b)
    }
}

/// Rotation matrix of `rotation`; `det = 1` and `RᵀR = I`.
pub fn rotation_matrix(rotation: &Rotation) -> Matrix3 {
    rotation.matrix()
}

/// How the SO(n) factor of a [`GroupGrid`] is sampled. All schemes use
/// equal weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotationSampling {
    /// Angles `2πk/K` (n = 2).
    Uniform { count: usize },
    /// Super-Fibonacci spiral of unit quaternions (n = 3).
    SuperFibonacci { count: usize },
    /// The 24 rotations of the cube (n = 3).
    Octahedral,
}

impl RotationSampling {
    pub fn default_for(dim: AlgebraDim, count: usize) -> RotationSampling {
        match dim.n() {
            2 => RotationSampling::Uniform { count },
            _ => RotationSampling::SuperFibonacci { count },
        }
    }

    pub fn rotations(&self, dim: AlgebraDim) -> Result<Vec<Rotation>> {
        match (self, dim.n()) {
            (RotationSampling::Uniform { count }, 2) if *count > 0 => Ok((0..*count)
                .map(|k| Rotation::planar(2.0 * PI * k as f64 / *count as f64))
                .collect()),
            (RotationSampling::SuperFibonacci { count }, 3) if *count > 0 => Ok(super_fibonacci(*count)),
            (RotationSampling::Octahedral, 3) => Ok(octahedral()),
            _ => Err(Error::InvalidParameter(format!(
                "rotation sampling {self:?} is not valid for n = {}",
                dim.n()
            ))),
        }
    }
}

/// Super-Fibonacci spiral samples of SO(3).
fn super_fibonacci(count: usize) -> Vec<Rotation> {
    let phi = 2f64.sqrt();
    // Real root of ψ⁴ = ψ + 4.
    let psi = 1.533_751_168_755_204_3_f64;
    (0..count)
        .map(|i| {
            let s = i as f64 + 0.5;
            let t = s / count as f64;
            let (r, big_r) = (t.sqrt(), (1.0 - t).sqrt());
            let alpha = 2.0 * PI * s / phi;
            let beta = 2.0 * PI * s / psi;
            Rotation::Spatial {
                quaternion: [
                    r * alpha.sin(),
                    r * alpha.cos(),
                    big_r * beta.sin(),
                    big_r * beta.cos(),
                ],
            }
        })
        .collect()
}

/// Signed permutation matrices with determinant +1.
fn octahedral() -> Vec<Rotation> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(24);
    for perm in PERMS {
        for signs in 0..8u32 {
            let mut m = [[0.0; 3]; 3];
            for row in 0..3 {
                m[row][perm[row]] = if signs & (1 << row) != 0 { -1.0 } else { 1.0 };
            }
            if determinant(&m) > 0.0 {
                let q = matrix_to_quaternion(&m);
                out.push(Rotation::from_quaternion(q).expect("unit quaternion"));
            }
        }
    }
    out
}

/// Discretization of SIM(n): scales × rotations × spatial translations.
///
/// Scales are log-uniform midpoints on `[a_min, a_max]`; the weight of scale
/// `a_j` is `a_j^{-n} Δ(ln a)`, the midpoint rule for `da / a^{n+1} =
/// d(ln a) / aⁿ`. Translations are the points of the spatial grid, each
/// carrying the cell volume. Node order is scale-major, then rotation, then
/// translation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupGrid {
    dim: AlgebraDim,
    scales: Vec<f64>,
    scale_weights: Vec<f64>,
    sampling: RotationSampling,
    rotations: Vec<Rotation>,
    rotation_weights: Vec<f64>,
    translations: GridSpec,
}

impl GroupGrid {
    pub fn new(
        dim: AlgebraDim,
        scales: (f64, f64, usize),
        sampling: RotationSampling,
        translations: GridSpec,
    ) -> Result<GroupGrid> {
        let (a_min, a_max, count) = scales;
        if !(a_min > 0.0 && a_max >= a_min && a_max.is_finite()) || count == 0 {
            return Err(Error::InvalidParameter(format!(
                "scale range [{a_min}, {a_max}] with {count} nodes"
            )));
        }
        let step = (a_max / a_min).ln() / count as f64;
        let n = dim.n() as i32;
        let scale_nodes: Vec<f64> = (0..count)
            .map(|j| a_min * ((j as f64 + 0.5) * step).exp())
            .collect();
        let weights = scale_nodes.iter().map(|a| a.powi(-n) * step).collect();
        Self::with_scales(dim, scale_nodes, weights, sampling, translations)
    }

    /// Grid with explicit scale nodes and weights.
    pub fn with_scales(
        dim: AlgebraDim,
        scales: Vec<f64>,
        scale_weights: Vec<f64>,
        sampling: RotationSampling,
        translations: GridSpec,
    ) -> Result<GroupGrid> {
        if scales.is_empty() || scales.len() != scale_weights.len() {
            return Err(Error::InvalidParameter("scale nodes and weights differ in length".into()));
        }
        if scales.iter().any(|a| !(a.is_finite() && *a > 0.0)) || scale_weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidParameter("scales and weights must be positive".into()));
        }
        if translations.n() != dim.n() {
            return Err(Error::GridMismatch("translation grid dimension".into()));
        }
        let rotations = sampling.rotations(dim)?;
        let rotation_weights = vec![1.0 / rotations.len() as f64; rotations.len()];
        Ok(GroupGrid {
            dim,
            scales,
            scale_weights,
            sampling,
            rotations,
            rotation_weights,
            translations,
        })
    }

    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn scale_weights(&self) -> &[f64] {
        &self.scale_weights
    }

    pub fn sampling(&self) -> &RotationSampling {
        &self.sampling
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn rotation_weights(&self) -> &[f64] {
        &self.rotation_weights
    }

    pub fn translations(&self) -> &GridSpec {
        &self.translations
    }

    /// Number of (scale, rotation) pairs.
    pub fn orientation_count(&self) -> usize {
        self.scales.len() * self.rotations.len()
    }

    pub fn len(&self) -> usize {
        self.orientation_count() * self.translations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(scale index, rotation index)` of orientation slot `s`.
    pub fn orientation(&self, slot: usize) -> (usize, usize) {
        (slot / self.rotations.len(), slot % self.rotations.len())
    }

    /// Haar weight `dμ` of orientation slot `s` (without the translation cell).
    pub fn orientation_weight(&self, slot: usize) -> f64 {
        let (j, k) = self.orientation(slot);
        self.scale_weights[j] * self.rotation_weights[k]
    }

    pub fn node_index(&self, scale: usize, rotation: usize, translation: usize) -> usize {
        (scale * self.rotations.len() + rotation) * self.translations.len() + translation
    }

    pub fn point(&self, node: usize) -> GroupPoint {
        let per = self.translations.len();
        let (j, k) = self.orientation(node / per);
        GroupPoint {
            a: self.scales[j],
            rotation: self.rotations[k],
            b: self.translations.point(node % per),
        }
    }

    /// Full Haar weight `dμ dⁿb` of a node.
    pub fn weight(&self, node: usize) -> f64 {
        self.orientation_weight(node / self.translations.len()) * self.translations.cell_volume()
    }

    pub fn rotation_index(&self, rotation: &Rotation) -> Option<usize> {
        self.rotations.iter().position(|r| r.approx_eq(rotation, 1e-9))
    }

    pub fn ensure_same(&self, other: &GroupGrid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch("group grids differ".into()));
        }
        Ok(())
    }
}

/// `(F, G)_{L²(G)} = Σ_nodes F G̃ dλ`.
pub fn l2g_inner_product(f: &WaveletCoefficients, g: &WaveletCoefficients) -> Result<Multivector> {
    f.grid().ensure_same(g.grid())?;
    let grid = f.grid();
    let cell = grid.translations().cell_volume();
    let mut total = Multivector::zero(grid.dim());
    for slot in 0..grid.orientation_count() {
        let mut acc = Multivector::zero(grid.dim());
        for (a, b) in f.slot(slot).iter().zip(&g.slot(slot)) {
            acc += *a * b.reverse();
        }
        total += acc * (grid.orientation_weight(slot) * cell);
    }
    Ok(total)
}

pub fn l2g_norm_squared(f: &WaveletCoefficients) -> f64 {
    let grid = f.grid();
    let stride = grid.translations().len() * grid.dim().blade_count();
    let cell = grid.translations().cell_volume();
    (0..grid.orientation_count())
        .map(|slot| {
            let s: f64 = f.raw()[slot * stride..(slot + 1) * stride].iter().map(|c| c * c).sum();
            s * grid.orientation_weight(slot) * cell
        })
        .sum()
}

pub fn l2g_norm(f: &WaveletCoefficients) -> f64 {
    l2g_norm_squared(f).sqrt()
}
