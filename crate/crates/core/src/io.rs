//! CLWF: a small little-endian container for multivector fields, spectra
//! and wavelet coefficients.
//!
//! ```text
//! magic      4 bytes  "CLWF"
//! version    u16      1
//! kind       u8       0 field, 1 spectrum, 2 coefficients
//! n          u8       2 or 3
//! blades     u64      first 8 bytes of SHA-256 over the blade order string
//! axes       n × (lower f64, upper f64, samples u64)
//! meta_len   u32
//! meta       meta_len bytes of UTF-8 JSON
//! count      u64      number of multivectors
//! data       count × 2^n f64, blade-major, points in row-major order
//! crc        u64      CRC-64/XZ over everything above
//! ```
//!
//! Spectrum files store the spatial grid in the axis table; the frequency
//! grid follows from it. Coefficient files store the translation grid there
//! and the scale and rotation discretization under `"group"` in the JSON
//! metadata.

use std::io::Write;
use std::path::Path;

use crc::{Crc, CRC_64_XZ};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraDim, Multivector};
use crate::cft::SpectrumField;
use crate::error::{Error, Result};
use crate::field::{GridSpec, MultivectorField};
use crate::simgroup::{GroupGrid, RotationSampling};
use crate::wavelet::WaveletCoefficients;

pub const MAGIC: &[u8; 4] = b"CLWF";
pub const VERSION: u16 = 1;

const CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Field = 0,
    Spectrum = 1,
    Coefficients = 2,
}

impl Kind {
    fn from_byte(b: u8) -> Result<Kind> {
        match b {
            0 => Ok(Kind::Field),
            1 => Ok(Kind::Spectrum),
            2 => Ok(Kind::Coefficients),
            other => Err(Error::Format(format!("unknown content kind {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Field(MultivectorField),
    Spectrum(SpectrumField),
    Coefficients(WaveletCoefficients),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Field(_) => Kind::Field,
            Payload::Spectrum(_) => Kind::Spectrum,
            Payload::Coefficients(_) => Kind::Coefficients,
        }
    }
}

/// Decoded file: payload plus free-form metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct ClwfFile {
    pub payload: Payload,
    pub meta: Value,
}

/// Scale and rotation part of a [`GroupGrid`], as stored in metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupHeader {
    pub scales: Vec<f64>,
    pub scale_weights: Vec<f64>,
    pub sampling: RotationSampling,
}

impl GroupHeader {
    pub fn of(grid: &GroupGrid) -> Self {
        GroupHeader {
            scales: grid.scales().to_vec(),
            scale_weights: grid.scale_weights().to_vec(),
            sampling: grid.sampling().clone(),
        }
    }

    pub fn rebuild(&self, dim: AlgebraDim, translations: GridSpec) -> Result<GroupGrid> {
        GroupGrid::with_scales(
            dim,
            self.scales.clone(),
            self.scale_weights.clone(),
            self.sampling.clone(),
            translations,
        )
    }
}

/// Digest identifying the canonical blade order of `dim`.
pub fn blade_order_digest(dim: AlgebraDim) -> u64 {
    let hash = Sha256::digest(dim.blade_order_string().as_bytes());
    let mut first = [0u8; 8];
    first.copy_from_slice(&hash[..8]);
    u64::from_le_bytes(first)
}

fn values_blade_major(dim: AlgebraDim, count: usize, get: impl Fn(usize) -> Multivector) -> Vec<f64> {
    let bc = dim.blade_count();
    let mut out = vec![0.0; bc * count];
    for i in 0..count {
        let m = get(i);
        for (blade, c) in m.coeffs().iter().enumerate() {
            out[blade * count + i] = *c;
        }
    }
    out
}

/// Serializes `payload` with `meta` (a JSON object or null).
pub fn encode(payload: &Payload, meta: &Value) -> Result<Vec<u8>> {
    let (dim, grid, count, values, meta) = match payload {
        Payload::Field(f) => {
            let values = values_blade_major(f.dim(), f.len(), |i| f.data()[i]);
            (f.dim(), f.grid().clone(), f.len(), values, meta.clone())
        }
        Payload::Spectrum(s) => {
            let data = s.data();
            let values = values_blade_major(s.dim(), data.len(), |i| data[i]);
            (s.dim(), s.spatial_grid().clone(), data.len(), values, meta.clone())
        }
        Payload::Coefficients(c) => {
            let mut meta = match meta {
                Value::Null => Value::Object(Default::default()),
                Value::Object(_) => meta.clone(),
                _ => return Err(Error::Format("metadata must be a JSON object".into())),
            };
            let header = serde_json::to_value(GroupHeader::of(c.grid())).map_err(|e| Error::Format(e.to_string()))?;
            meta.as_object_mut().expect("object").insert("group".into(), header);
            let values = values_blade_major(c.dim(), c.len(), |i| c.get(i));
            (c.dim(), c.grid().translations().clone(), c.len(), values, meta)
        }
    };
    let meta_bytes = serde_json::to_vec(&meta).map_err(|e| Error::Format(e.to_string()))?;
    let mut out = Vec::with_capacity(64 + meta_bytes.len() + 8 * values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(payload.kind() as u8);
    out.push(dim.n() as u8);
    out.extend_from_slice(&blade_order_digest(dim).to_le_bytes());
    for k in 0..grid.n() {
        out.extend_from_slice(&grid.lower()[k].to_le_bytes());
        out.extend_from_slice(&grid.upper()[k].to_le_bytes());
        out.extend_from_slice(&(grid.samples()[k] as u64).to_le_bytes());
    }
    let meta_len = u32::try_from(meta_bytes.len()).map_err(|_| Error::Format("metadata too large".into()))?;
    out.extend_from_slice(&meta_len.to_le_bytes());
    out.extend_from_slice(&meta_bytes);
    out.extend_from_slice(&(count as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let crc = CRC64.checksum(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|e| *e <= self.bytes.len())
            .ok_or_else(|| Error::Format("unexpected end of data".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }
}

pub fn decode(bytes: &[u8]) -> Result<ClwfFile> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::Format("not a CLWF file (bad magic)".into()));
    }
    if bytes.len() < 4 + 2 + 8 {
        return Err(Error::Format("truncated file".into()));
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(trailer.try_into().expect("8 bytes"));
    let computed = CRC64.checksum(body);
    let mut r = Reader { bytes: body, pos: 4 };
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported CLWF version {version}")));
    }
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    let kind = Kind::from_byte(r.u8()?)?;
    let dim = AlgebraDim::new(r.u8()? as usize)?;
    let digest = r.u64()?;
    if digest != blade_order_digest(dim) {
        return Err(Error::Format("blade order digest does not match this build".into()));
    }
    let n = dim.n();
    let (mut lower, mut upper, mut samples) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        lower.push(r.f64()?);
        upper.push(r.f64()?);
        let s = usize::try_from(r.u64()?).map_err(|_| Error::Format("axis length".into()))?;
        samples.push(s);
    }
    let grid = GridSpec::new(lower, upper, samples)?;
    let meta_len = r.u32()? as usize;
    let meta: Value = serde_json::from_slice(r.take(meta_len)?).map_err(|e| Error::Format(format!("metadata: {e}")))?;
    let count = usize::try_from(r.u64()?).map_err(|_| Error::Format("count".into()))?;
    let bc = dim.blade_count();
    let byte_len = count
        .checked_mul(bc * 8)
        .ok_or_else(|| Error::Format("count overflows".into()))?;
    let raw = r.take(byte_len)?;
    if r.pos != body.len() {
        return Err(Error::Format("trailing bytes after data".into()));
    }
    let values: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let multivectors: Vec<Multivector> = (0..count)
        .map(|i| {
            let mut coeffs = [0.0; 8];
            for (blade, c) in coeffs.iter_mut().take(bc).enumerate() {
                *c = values[blade * count + i];
            }
            Multivector::from_coeffs(dim, &coeffs[..bc])
        })
        .collect::<Result<_>>()?;
    let payload = match kind {
        Kind::Field => Payload::Field(MultivectorField::new(dim, grid, multivectors)?),
        Kind::Spectrum => Payload::Spectrum(SpectrumField::new(dim, grid, multivectors)?),
        Kind::Coefficients => {
            let header: GroupHeader = serde_json::from_value(
                meta.get("group")
                    .cloned()
                    .ok_or_else(|| Error::Format("coefficient file without group header".into()))?,
            )
            .map_err(|e| Error::Format(format!("group header: {e}")))?;
            let group = header.rebuild(dim, grid)?;
            Payload::Coefficients(WaveletCoefficients::from_values(group, &multivectors)?)
        }
    };
    Ok(ClwfFile { payload, meta })
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so that a failed write never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_file(path: &Path, payload: &Payload, meta: &Value) -> Result<()> {
    write_atomic(path, &encode(payload, meta)?)
}

pub fn read_file(path: &Path) -> Result<ClwfFile> {
    decode(&std::fs::read(path)?)
}
