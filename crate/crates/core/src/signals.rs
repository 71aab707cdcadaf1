//! Deterministic test signals.
//!
//! Everything random is driven by `ChaCha8Rng` seeded explicitly, so the
//! same seed gives bit-identical fields on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDim, Multivector};
use crate::error::{Error, Result};
use crate::field::{GridSpec, MultivectorField};
use crate::wavelet::Parity;

/// A Gaussian wave packet
///
/// ```text
/// f(x) = g(x - c) (A cos(k·(x - c)) + B sin(k·(x - c))),   g(y) = exp(-|y|²/(2w²))
/// ```
///
/// with multivector amplitudes `A`, `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    pub center: [f64; 3],
    pub width: f64,
    pub wavevector: [f64; 3],
    pub cos_amplitude: Multivector,
    pub sin_amplitude: Multivector,
}

impl WavePacket {
    pub fn eval(&self, x: &[f64]) -> Multivector {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for (k, xk) in x.iter().enumerate() {
            let y = xk - self.center[k];
            r2 += y * y;
            phase += self.wavevector[k] * y;
        }
        let env = (-r2 / (2.0 * self.width * self.width)).exp();
        let (s, c) = phase.sin_cos();
        self.cos_amplitude * (env * c) + self.sin_amplitude * (env * s)
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<MultivectorField> {
        MultivectorField::from_fn(self.cos_amplitude.dim(), grid.clone(), |x| self.eval(x))
    }
}

/// Sum of packets sampled on `grid`.
pub fn superpose(dim: AlgebraDim, packets: &[WavePacket], grid: &GridSpec) -> Result<MultivectorField> {
    MultivectorField::from_fn(dim, grid.clone(), |x| {
        packets
            .iter()
            .fold(Multivector::zero(dim), |acc, p| acc + p.eval(x))
    })
}

/// Multivector with independent standard normal coefficients.
pub fn random_multivector<R: Rng>(rng: &mut R, dim: AlgebraDim) -> Multivector {
    let mut coeffs = [0.0; 8];
    for c in coeffs.iter_mut().take(dim.blade_count()) {
        *c = standard_normal(rng);
    }
    Multivector::from_coeffs(dim, &coeffs[..dim.blade_count()]).expect("blade count")
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

fn project(m: Multivector, parity: Option<Parity>) -> Multivector {
    match parity {
        Some(Parity::Even) => m.even(),
        Some(Parity::Odd) => m.odd(),
        None => m,
    }
}

/// Parameters of a random packet suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketSuite {
    pub count: usize,
    pub seed: u64,
    /// Range of the carrier magnitude `|k|`.
    pub band: (f64, f64),
    /// Range of the envelope width `w`.
    pub width: (f64, f64),
    /// Largest distance of a packet center from the grid center.
    pub offset: f64,
    /// Optional parity projection of the amplitudes (n = 2).
    pub parity: Option<Parity>,
}

impl PacketSuite {
    pub fn packets(&self, dim: AlgebraDim, grid: &GridSpec) -> Result<Vec<WavePacket>> {
        if grid.n() != dim.n() {
            return Err(Error::GridMismatch("suite grid dimension".into()));
        }
        let (k0, k1) = self.band;
        let (w0, w1) = self.width;
        if !(0.0 <= k0 && k0 <= k1 && 0.0 < w0 && w0 <= w1 && self.offset >= 0.0) {
            return Err(Error::InvalidParameter("packet suite ranges".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n = dim.n();
        let middle = grid_center(grid);
        let mut out = Vec::with_capacity(self.count);
        for _ in 0..self.count {
            let direction = random_direction(&mut rng, n);
            let magnitude = sample(&mut rng, k0, k1);
            let width = sample(&mut rng, w0, w1);
            let mut center = middle;
            let mut wavevector = [0.0; 3];
            for k in 0..n {
                center[k] += sample(&mut rng, -self.offset, self.offset) / (n as f64).sqrt();
                wavevector[k] = magnitude * direction[k];
            }
            out.push(WavePacket {
                center,
                width,
                wavevector,
                cos_amplitude: project(random_multivector(&mut rng, dim), self.parity),
                sin_amplitude: project(random_multivector(&mut rng, dim), self.parity),
            });
        }
        Ok(out)
    }

    /// One field per packet.
    pub fn fields(&self, dim: AlgebraDim, grid: &GridSpec) -> Result<Vec<MultivectorField>> {
        self.packets(dim, grid)?.iter().map(|p| p.sample(grid)).collect()
    }
}

fn sample<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

fn random_direction<R: Rng>(rng: &mut R, n: usize) -> [f64; 3] {
    loop {
        let mut v = [0.0; 3];
        for c in v.iter_mut().take(n) {
            *c = standard_normal(rng);
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.map(|c| c / norm);
        }
    }
}

/// Midpoint of the grid box.
pub fn grid_center(grid: &GridSpec) -> [f64; 3] {
    let mut c = [0.0; 3];
    for k in 0..grid.n() {
        c[k] = grid.lower()[k] + 0.5 * grid.extent(k);
    }
    c
}

/// Signal made of a few packets with carriers in `band`, centered in the grid.
pub fn band_limited_signal(dim: AlgebraDim, grid: &GridSpec, band: (f64, f64), seed: u64) -> Result<MultivectorField> {
    let suite = PacketSuite {
        count: 3,
        seed,
        band,
        width: (2.5, 3.5),
        offset: 1.0,
        parity: None,
    };
    superpose(dim, &suite.packets(dim, grid)?, grid)
}
