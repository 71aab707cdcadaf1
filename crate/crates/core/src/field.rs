//! Multivector-valued functions sampled on uniform periodic grids over a box
//! in Rⁿ, with the L² inner product `(f, g) = ∫ f(x) g̃(x) dⁿx`.
//!
//! Integrals are plain Riemann sums over the grid, which for periodic (or
//! decayed-to-zero) integrands coincide with the trapezoid rule and converge
//! spectrally. Fields that do not decay before the box boundary are
//! wrapped periodically; keep at least 6σ of a Gaussian envelope inside the
//! box per axis.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDim, Multivector};
use crate::error::{Error, Result};

/// Uniform grid on the box `[lower, upper)` with `samples[k]` points per
/// axis. Flat indices are row-major: the first axis varies slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
    samples: Vec<usize>,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, samples: Vec<usize>) -> Result<Self> {
        let n = samples.len();
        if lower.len() != n || upper.len() != n {
            return Err(Error::InvalidGrid("axis count mismatch".into()));
        }
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidGrid(format!("{n} axes")));
        }
        for k in 0..n {
            if samples[k] == 0 {
                return Err(Error::InvalidGrid(format!("axis {k} has no samples")));
            }
            if !(lower[k].is_finite() && upper[k].is_finite() && upper[k] > lower[k]) {
                return Err(Error::InvalidGrid(format!(
                    "axis {k} extent [{}, {}) is empty",
                    lower[k], upper[k]
                )));
            }
        }
        Ok(GridSpec {
            lower,
            upper,
            samples,
        })
    }

    /// Box `[-extent/2, extent/2)ⁿ` with `samples` points per axis.
    pub fn cube(n: usize, extent: f64, samples: usize) -> Result<Self> {
        let h = extent / 2.0;
        GridSpec::new(vec![-h; n], vec![h; n], vec![samples; n])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[usize] {
        &self.samples
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    #[inline]
    pub fn spacing(&self, axis: usize) -> f64 {
        self.extent(axis) / self.samples[axis] as f64
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.samples.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight `Π Δx_k` of a single grid cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.n()).map(|k| self.spacing(k)).product()
    }

    pub fn volume(&self) -> f64 {
        (0..self.n()).map(|k| self.extent(k)).product()
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for k in (0..self.n()).rev() {
            idx[k] = rest % self.samples[k];
            rest /= self.samples[k];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for k in 0..self.n() {
            flat = flat * self.samples[k] + idx[k];
        }
        flat
    }

    /// Coordinates of grid point `flat`; components past `n` are zero.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let mut x = [0.0; 3];
        for k in 0..self.n() {
            x[k] = self.lower[k] + idx[k] as f64 * self.spacing(k);
        }
        x
    }

    /// Lowest index offset of the centered lattice, `floor(N/2)`.
    fn half(&self, axis: usize) -> usize {
        self.samples[axis] / 2
    }

    /// Grid with the same spacing whose points are the minimum-image lattice
    /// displacements `m Δx`, `m ∈ [-floor(N/2), N - floor(N/2))`.
    pub fn centered(&self) -> GridSpec {
        let n = self.n();
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for k in 0..n {
            let h = self.spacing(k);
            lower[k] = -(self.half(k) as f64) * h;
            upper[k] = lower[k] + self.samples[k] as f64 * h;
        }
        GridSpec {
            lower,
            upper,
            samples: self.samples.clone(),
        }
    }

    /// Angular-frequency grid dual to this grid under the DFT:
    /// `ω_m = 2π m / L` with `m` centered like [`GridSpec::centered`].
    pub fn frequency_grid(&self) -> GridSpec {
        let n = self.n();
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for k in 0..n {
            let dw = 2.0 * std::f64::consts::PI / self.extent(k);
            lower[k] = -(self.half(k) as f64) * dw;
            upper[k] = lower[k] + self.samples[k] as f64 * dw;
        }
        GridSpec {
            lower,
            upper,
            samples: self.samples.clone(),
        }
    }

    /// Wraps a displacement into the periodic box `[-L/2, L/2)` per axis.
    pub fn wrap_displacement(&self, d: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for k in 0..self.n() {
            let l = self.extent(k);
            out[k] = d[k] - l * ((d[k] + 0.5 * l) / l).floor();
        }
        out
    }

    /// Minimum-image lattice offset between flat indices, as signed steps per axis.
    pub fn index_displacement(&self, from: usize, to: usize) -> [i64; 3] {
        let a = self.multi_index(from);
        let b = self.multi_index(to);
        let mut out = [0i64; 3];
        for k in 0..self.n() {
            let nk = self.samples[k] as i64;
            let half = self.half(k) as i64;
            let m = (b[k] as i64 - a[k] as i64).rem_euclid(nk);
            out[k] = if m >= nk - half { m - nk } else { m };
        }
        out
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// A multivector-valued function sampled on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct MultivectorField {
    dim: AlgebraDim,
    grid: GridSpec,
    data: Vec<Multivector>,
}

impl MultivectorField {
    pub fn new(dim: AlgebraDim, grid: GridSpec, data: Vec<Multivector>) -> Result<Self> {
        if grid.n() != dim.n() {
            return Err(Error::GridMismatch(format!(
                "grid has {} axes, algebra has n = {}",
                grid.n(),
                dim.n()
            )));
        }
        if data.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                data.len(),
                grid.len()
            )));
        }
        if let Some(m) = data.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim.n(),
                right: m.dim().n(),
            });
        }
        Ok(MultivectorField { dim, grid, data })
    }

    pub fn zeros(dim: AlgebraDim, grid: GridSpec) -> Result<Self> {
        let data = vec![Multivector::zero(dim); grid.len()];
        Self::new(dim, grid, data)
    }

    pub fn constant(dim: AlgebraDim, grid: GridSpec, value: Multivector) -> Result<Self> {
        let data = vec![value; grid.len()];
        Self::new(dim, grid, data)
    }

    /// Samples `f` at every grid point. The closure receives the first `n`
    /// coordinates.
    pub fn from_fn(
        dim: AlgebraDim,
        grid: GridSpec,
        f: impl Fn(&[f64]) -> Multivector,
    ) -> Result<Self> {
        let n = grid.n();
        let data = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                f(&x[..n])
            })
            .collect();
        Self::new(dim, grid, data)
    }

    pub(crate) fn from_parts_unchecked(dim: AlgebraDim, grid: GridSpec, data: Vec<Multivector>) -> Self {
        debug_assert_eq!(data.len(), grid.len());
        MultivectorField { dim, grid, data }
    }

    #[inline]
    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn data(&self) -> &[Multivector] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Multivector] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Multivector> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn ensure_compatible(&self, other: &MultivectorField) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.n(),
                right: other.dim.n(),
            });
        }
        self.grid.ensure_same(&other.grid)
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> MultivectorField {
        let data = self.data.iter().map(f).collect();
        MultivectorField::from_parts_unchecked(self.dim, self.grid.clone(), data)
    }

    pub fn zip_with(
        &self,
        other: &MultivectorField,
        f: impl Fn(&Multivector, &Multivector) -> Multivector,
    ) -> Result<MultivectorField> {
        self.ensure_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(MultivectorField::from_parts_unchecked(self.dim, self.grid.clone(), data))
    }

    pub fn add(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.zip_with(other, |a, b| *a + *b)
    }

    pub fn sub(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.zip_with(other, |a, b| *a - *b)
    }

    /// Pointwise `λ f(x)`.
    pub fn scale_left(&self, lambda: &Multivector) -> MultivectorField {
        self.map(|m| *lambda * *m)
    }

    /// Pointwise `f(x) λ`.
    pub fn scale_right(&self, lambda: &Multivector) -> MultivectorField {
        self.map(|m| *m * *lambda)
    }

    pub fn scale(&self, s: f64) -> MultivectorField {
        self.map(|m| *m * s)
    }

    pub fn reverse(&self) -> MultivectorField {
        self.map(Multivector::reverse)
    }

    pub fn parity_split(&self) -> (MultivectorField, MultivectorField) {
        (self.map(Multivector::even), self.map(Multivector::odd))
    }

    /// `(f, g) = Σ f(x) g̃(x) Π Δx_k`.
    pub fn inner_product(&self, other: &MultivectorField) -> Result<Multivector> {
        self.ensure_compatible(other)?;
        let mut acc = Multivector::zero(self.dim);
        for (a, b) in self.data.iter().zip(&other.data) {
            acc += *a * b.reverse();
        }
        Ok(acc * self.grid.cell_volume())
    }

    /// `‖f‖² = Σ |f(x)|² Π Δx_k`.
    pub fn norm_squared(&self) -> f64 {
        let sum: f64 = self.data.iter().map(Multivector::modulus_squared).sum();
        sum * self.grid.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `∫ f dⁿx` per blade component.
    pub fn integral(&self) -> Multivector {
        let mut acc = Multivector::zero(self.dim);
        for m in &self.data {
            acc += *m;
        }
        acc * self.grid.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, m| acc.max(m.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Multivector::is_finite)
    }

    /// Largest coefficient of the sample-wise difference.
    pub fn max_abs_diff(&self, other: &MultivectorField) -> Result<f64> {
        self.ensure_compatible(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((*a - *b).max_abs())))
    }

    /// Periodic shift by whole grid steps: `g(x) = f(x - shift·Δx)`.
    pub fn roll(&self, shift: &[i64]) -> MultivectorField {
        let n = self.grid.n();
        let mut data = vec![Multivector::zero(self.dim); self.data.len()];
        for (i, slot) in data.iter_mut().enumerate() {
            let idx = self.grid.multi_index(i);
            let mut src = [0usize; 3];
            for k in 0..n {
                let nk = self.grid.samples()[k] as i64;
                src[k] = (idx[k] as i64 - shift[k]).rem_euclid(nk) as usize;
            }
            *slot = self.data[self.grid.flat_index(&src)];
        }
        MultivectorField::from_parts_unchecked(self.dim, self.grid.clone(), data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D2: AlgebraDim = AlgebraDim::TWO;
    const D3: AlgebraDim = AlgebraDim::THREE;

    fn random_field(dim: AlgebraDim, grid: &GridSpec, seed: u64) -> MultivectorField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let data = (0..grid.len())
            .map(|_| {
                let c: Vec<f64> = (0..dim.blade_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
                Multivector::from_coeffs(dim, &c).unwrap()
            })
            .collect();
        MultivectorField::new(dim, grid.clone(), data).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(vec![0.0], vec![0.0], vec![4]).is_err());
        assert!(GridSpec::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![4, 0]).is_err());
        assert!(GridSpec::new(vec![0.0, 0.0], vec![1.0], vec![4, 4]).is_err());
        let g = GridSpec::cube(2, 4.0, 8).unwrap();
        assert_eq!(g.spacing(0), 0.5);
        assert_eq!(g.cell_volume(), 0.25);
        assert_eq!(g.point(0)[..2], [-2.0, -2.0]);
        assert_eq!(g.point(9)[..2], [-1.5, -1.5]);
        assert_eq!(g.flat_index(&g.multi_index(37)), 37);
    }

    #[test]
    fn centered_and_frequency_grids() {
        let g = GridSpec::new(vec![1.0, -3.0], vec![3.0, 5.0], vec![4, 5]).unwrap();
        let c = g.centered();
        assert_eq!(c.lower(), &[-1.0, -3.2]);
        assert_eq!(c.spacing(1), g.spacing(1));
        let w = g.frequency_grid();
        assert!((w.spacing(0) - std::f64::consts::PI).abs() < 1e-15);
        assert!((w.lower()[1] + 2.0 * 2.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert_eq!(g.index_displacement(0, g.flat_index(&[3, 4])), [-1, -1, 0]);
        assert_eq!(g.index_displacement(0, g.flat_index(&[2, 2])), [-2, 2, 0]);
        let wrapped = g.wrap_displacement([1.5, 4.5, 0.0]);
        assert_eq!(wrapped[..2], [-0.5, -3.5]);
    }

    #[test]
    fn inner_product_basics() {
        let g = GridSpec::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![8, 8]).unwrap();
        let one = MultivectorField::constant(D2, g.clone(), Multivector::one(D2)).unwrap();
        let e1 = MultivectorField::constant(D2, g.clone(), Multivector::basis(D2, 1)).unwrap();
        let ip = one.inner_product(&e1).unwrap();
        assert!((ip - Multivector::basis(D2, 1)).max_abs() < 1e-15);

        let left = MultivectorField::from_fn(D2, g.clone(), |x| {
            Multivector::scalar(D2, if x[0] < 0.5 { 1.0 } else { 0.0 })
        })
        .unwrap();
        let right = MultivectorField::from_fn(D2, g.clone(), |x| {
            Multivector::basis(D2, 3) * if x[0] >= 0.5 { 2.0 } else { 0.0 }
        })
        .unwrap();
        assert_eq!(left.inner_product(&right).unwrap(), Multivector::zero(D2));

        let f = random_field(D2, &g, 1);
        assert!(f.inner_product(&f).unwrap().scalar_part() >= 0.0);
        assert!((f.inner_product(&f).unwrap().scalar_part() - f.norm_squared()).abs() < 1e-13);
    }

    #[test]
    fn norms() {
        let g = GridSpec::new(vec![0.0; 3], vec![2.0, 1.0, 3.0], vec![4, 5, 6]).unwrap();
        assert_eq!(MultivectorField::zeros(D3, g.clone()).unwrap().norm(), 0.0);
        let c = Multivector::parse(D3, "3*e1 + 4*e123").unwrap();
        let f = MultivectorField::constant(D3, g.clone(), c).unwrap();
        assert!((f.norm() - 5.0 * 6f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn field_algebra() {
        let g = GridSpec::cube(2, 2.0, 6).unwrap();
        let f = random_field(D2, &g, 7);
        let zero = f.add(&f.scale(-1.0)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        let i2 = Multivector::pseudoscalar(D2);
        assert!((f.scale_left(&i2).norm() - f.norm()).abs() < 1e-14 * f.norm());
        let (even, odd) = f.parity_split();
        assert_eq!(even.add(&odd).unwrap(), f);
        let other = MultivectorField::zeros(D2, GridSpec::cube(2, 2.0, 4).unwrap()).unwrap();
        assert!(matches!(f.add(&other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn inner_product_reverse_symmetry() {
        let g = GridSpec::cube(3, 2.0, 4).unwrap();
        let f = random_field(D3, &g, 2);
        let h = random_field(D3, &g, 3);
        let fg = f.inner_product(&h).unwrap();
        let gf = h.inner_product(&f).unwrap();
        assert!((fg - gf.reverse()).max_abs() < 1e-12);
        assert!(f.add(&h).unwrap().norm() <= f.norm() + h.norm());
    }

    #[test]
    fn gaussian_riemann_sum() {
        // ∫ exp(-|x|²/(2σ²)) = (2π σ²)^{n/2}
        let sigma: f64 = 0.7;
        let g = GridSpec::cube(2, 16.0 * sigma, 64).unwrap();
        let f = MultivectorField::from_fn(D2, g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            Multivector::scalar(D2, (-r2 / (2.0 * sigma * sigma)).exp())
        })
        .unwrap();
        let exact = 2.0 * std::f64::consts::PI * sigma * sigma;
        assert!((f.integral().scalar_part() - exact).abs() < 1e-8);
    }

    #[test]
    fn roll_is_periodic_shift() {
        let g = GridSpec::cube(2, 4.0, 4).unwrap();
        let f = random_field(D2, &g, 11);
        let back = f.roll(&[1, -3]).roll(&[-1, 3]);
        assert_eq!(back, f);
        let r = f.roll(&[1, 0]);
        assert_eq!(r.data()[g.flat_index(&[1, 2])], f.data()[g.flat_index(&[0, 2])]);
    }
}
