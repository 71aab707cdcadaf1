//! Continuous wavelet transform for multivector-valued signals over the
//! Euclidean Clifford algebras Cl(2,0) and Cl(3,0).
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: dense multivectors, geometric product, reverse, duality.
//! * [`field`]: multivector fields sampled on periodic grids and their L²
//!   geometry.
//! * [`cft`]: the Clifford Fourier transform with the pseudoscalar as the
//!   imaginary unit, evaluated with complex FFTs.
//! * [`simgroup`]: the similitude group of dilations, rotations and
//!   translations, and quadrature grids for its Haar measure.
//! * [`wavelet`]: mother and daughter wavelets, admissibility, analysis,
//!   synthesis and the reproducing kernel.
//! * [`verify`]: numerical checks of the transform identities and the
//!   uncertainty inequalities.
//! * [`io`]: the checksummed CLWF binary container.
//! * [`profile`], [`signals`]: run configurations and seeded test signals.

pub mod algebra;
pub mod cft;
pub mod error;
pub mod field;
pub mod io;
pub mod profile;
pub mod signals;
pub mod simgroup;
pub mod verify;
pub mod wavelet;

pub use algebra::{AlgebraDim, Blade, Multivector};
pub use cft::SpectrumField;
pub use error::{Error, Result};
pub use field::{GridSpec, MultivectorField};
pub use simgroup::{GroupGrid, GroupPoint, Rotation};
pub use wavelet::{AdmissibilityConstant, MotherWavelet, Parity, WaveletCoefficients};
