//! Run profiles: grid, group discretization, mother wavelet and test signals
//! bundled in one serializable struct.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDim, Multivector};
use crate::error::{Error, Result};
use crate::field::GridSpec;
use crate::signals::PacketSuite;
use crate::simgroup::{GroupGrid, RotationSampling};
use crate::wavelet::{GaborParams, MotherWavelet, Parity};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for ScaleRange {
    fn default() -> Self {
        ScaleRange {
            min: 0.5,
            max: 4.0,
            count: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalParams {
    pub seed: u64,
    pub count: usize,
    pub band: (f64, f64),
    pub width: (f64, f64),
    pub offset: f64,
}

impl Default for SignalParams {
    fn default() -> Self {
        SignalParams {
            seed: 20,
            count: 20,
            band: (1.3, 1.7),
            width: (2.5, 3.5),
            offset: 1.0,
        }
    }
}

/// Everything a transform or verification run needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Profile {
    pub n: usize,
    /// Samples per axis.
    pub samples: usize,
    /// Edge length of the (centered) spatial box.
    pub extent: f64,
    pub scales: ScaleRange,
    /// Rotation count K (0 = octahedral group for n = 3).
    pub rotations: usize,
    pub wavelet: GaborParams,
    pub signals: SignalParams,
}

impl Default for Profile {
    fn default() -> Self {
        Profile::desk(2).expect("n = 2 is supported")
    }
}

impl Profile {
    /// Desk-scale profile: 64² samples on a box of edge 24, 16 scales in
    /// [0.5, 4] and 16 rotations for n = 2; 24³ samples on a box of edge 16,
    /// 6 scales in [0.8, 2.4], the 24 octahedral rotations and 4 signals for
    /// n = 3. The n = 3 profile is a smoke profile: its scale range is too
    /// narrow for the quadrature-limited relations to close.
    pub fn desk(n: usize) -> Result<Self> {
        let amplitude = match n {
            2 => vec![1.0, 0.0, 0.0, 0.0],
            3 => vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            _ => return Err(Error::UnsupportedDimension(n)),
        };
        let (samples, extent, scales, rotations, signals) = if n == 2 {
            (64, 24.0, ScaleRange::default(), 16, SignalParams::default())
        } else {
            (
                24,
                16.0,
                ScaleRange {
                    min: 0.8,
                    max: 2.4,
                    count: 6,
                },
                0,
                SignalParams {
                    count: 4,
                    band: (1.2, 2.0),
                    width: (2.0, 2.5),
                    ..SignalParams::default()
                },
            )
        };
        let mut omega0 = vec![0.0; n];
        omega0[0] = if n == 2 { 3.0 } else { 2.0 };
        Ok(Profile {
            n,
            samples,
            extent,
            scales,
            rotations,
            wavelet: GaborParams {
                sigma: vec![1.0; n],
                omega0,
                amplitude,
            },
            signals,
        })
    }

    pub fn dim(&self) -> Result<AlgebraDim> {
        AlgebraDim::new(self.n)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::cube(self.n, self.extent, self.samples)
    }

    pub fn sampling(&self) -> Result<RotationSampling> {
        match (self.n, self.rotations) {
            (3, 0) => Ok(RotationSampling::Octahedral),
            (_, 0) => Err(Error::InvalidParameter("rotation count must be positive".into())),
            (n, k) => Ok(RotationSampling::default_for(AlgebraDim::new(n)?, k)),
        }
    }

    pub fn group_grid(&self) -> Result<GroupGrid> {
        GroupGrid::new(
            self.dim()?,
            (self.scales.min, self.scales.max, self.scales.count),
            self.sampling()?,
            self.grid()?,
        )
    }

    pub fn mother(&self) -> Result<MotherWavelet> {
        MotherWavelet::from_gabor_params(self.dim()?, &self.wavelet)
    }

    pub fn amplitude(&self) -> Result<Multivector> {
        Multivector::from_coeffs(self.dim()?, &self.wavelet.amplitude)
    }

    /// Random signal suite; amplitudes projected to `parity` when given.
    pub fn suite(&self, parity: Option<Parity>) -> PacketSuite {
        PacketSuite {
            count: self.signals.count,
            seed: self.signals.seed,
            band: self.signals.band,
            width: self.signals.width,
            offset: self.signals.offset,
            parity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.group_grid()?;
        self.mother()?;
        Ok(())
    }
}
