//! Integer mapping: bounding-box normalization followed by decimal truncation
//! to `u` digits, and the fixed bit width `L` those integers are handled at.

use thiserror::Error;

use crate::mesh_io::{Face, FloatMesh};

/// Largest truncation coefficient accepted by [`quantize`]. Above 9 the bit
/// length jumps to 64 and labels no longer fit the 6-bit code.
pub const MAX_SUPPORTED_U: u32 = 9;

#[derive(Debug, Error, PartialEq)]
pub enum QuantError {
    #[error("truncation coefficient u = {u} outside [{min}, {max}]")]
    OutOfRange { u: u32, min: u32, max: u32 },
    #[error("all vertices coincide; bounding box has zero extent")]
    DegenerateMesh,
    #[error("value {value} does not fit in {bits} bits")]
    Overflow { value: u64, bits: u32 },
    #[error("vertex {vertex}: coordinate {coord} is not a {bits}-bit integer at u = {u}")]
    NotQuantized {
        vertex: usize,
        coord: f64,
        bits: u32,
        u: u32,
    },
}

/// Bit length `L` used for coordinates truncated at `u` decimal digits.
pub fn bit_length(u: u32) -> Result<u32, QuantError> {
    match u {
        1..=2 => Ok(8),
        3..=4 => Ok(16),
        5..=9 => Ok(32),
        10..=33 => Ok(64),
        _ => Err(QuantError::OutOfRange { u, min: 1, max: 33 }),
    }
}

/// Axis-aligned box with one shared extent for all three axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub extent: f64,
}

impl BoundingBox {
    pub fn of(vertices: &[[f64; 3]]) -> Option<Self> {
        let first = *vertices.first()?;
        let (mut lo, mut hi) = (first, first);
        for v in vertices {
            for a in 0..3 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
        let extent = (0..3).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);
        Some(Self { min: lo, extent })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantParams {
    pub u: u32,
    pub bits: u32,
    pub bbox: BoundingBox,
}

impl QuantParams {
    pub fn new(u: u32, bbox: BoundingBox) -> Result<Self, QuantError> {
        if !(1..=MAX_SUPPORTED_U).contains(&u) {
            return Err(QuantError::OutOfRange {
                u,
                min: 1,
                max: MAX_SUPPORTED_U,
            });
        }
        if !(bbox.extent > 0.0 && bbox.extent.is_finite()) {
            return Err(QuantError::DegenerateMesh);
        }
        Ok(Self {
            u,
            bits: bit_length(u)?,
            bbox,
        })
    }

    fn scale(&self) -> f64 {
        10f64.powi(self.u as i32)
    }

    /// One quantization step in model units.
    pub fn step(&self) -> f64 {
        self.bbox.extent / self.scale()
    }
}

/// Quantized mesh: `bits`-wide unsigned coordinates plus the parameters
/// needed to map them back.
#[derive(Debug, Clone, PartialEq)]
pub struct IntMesh {
    pub params: QuantParams,
    pub coords: Vec<[u64; 3]>,
    pub faces: Vec<Face>,
}

impl IntMesh {
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    /// Raw integer values divided by 10^u, without undoing the bounding box.
    /// This is how encrypted and marked meshes are stored as OFF.
    pub fn to_raw_float(&self) -> FloatMesh {
        let scale = self.params.scale();
        FloatMesh {
            vertices: self
                .coords
                .iter()
                .map(|c| c.map(|q| q as f64 / scale))
                .collect(),
            faces: self.faces.clone(),
        }
    }

    /// Inverse of [`IntMesh::to_raw_float`]; each coordinate must be an
    /// integer multiple of 10^-u that fits in `params.bits` bits.
    pub fn from_raw_float(mesh: &FloatMesh, params: QuantParams) -> Result<Self, QuantError> {
        let scale = params.scale();
        let limit = 1u64 << params.bits;
        let mut coords = Vec::with_capacity(mesh.vertices.len());
        for (vertex, v) in mesh.vertices.iter().enumerate() {
            let mut q = [0u64; 3];
            for a in 0..3 {
                let x = v[a] * scale;
                let r = x.round();
                if !(r >= 0.0 && r < limit as f64 && (x - r).abs() < 1e-3) {
                    return Err(QuantError::NotQuantized {
                        vertex,
                        coord: v[a],
                        bits: params.bits,
                        u: params.u,
                    });
                }
                q[a] = r as u64;
            }
            coords.push(q);
        }
        Ok(Self {
            params,
            coords,
            faces: mesh.faces.clone(),
        })
    }
}

/// Truncates one normalized coordinate in `[0, 1)` to `u` decimal digits.
pub fn quantize_scalar(normalized: f64, u: u32) -> u64 {
    let scale = 10u64.pow(u);
    let q = (normalized * scale as f64).floor().max(0.0) as u64;
    // The far face of the box normalizes to exactly 1.0.
    q.min(scale - 1)
}

pub fn quantize(mesh: &FloatMesh, u: u32) -> Result<IntMesh, QuantError> {
    let bbox = BoundingBox::of(&mesh.vertices).ok_or(QuantError::DegenerateMesh)?;
    let params = QuantParams::new(u, bbox)?;
    let coords = mesh
        .vertices
        .iter()
        .map(|v| {
            let mut q = [0u64; 3];
            for a in 0..3 {
                q[a] = quantize_scalar((v[a] - bbox.min[a]) / bbox.extent, u);
            }
            q
        })
        .collect();
    Ok(IntMesh {
        params,
        coords,
        faces: mesh.faces.clone(),
    })
}

pub fn dequantize(mesh: &IntMesh) -> FloatMesh {
    let p = &mesh.params;
    let scale = p.scale();
    FloatMesh {
        vertices: mesh
            .coords
            .iter()
            .map(|c| {
                let mut v = [0.0; 3];
                for a in 0..3 {
                    v[a] = p.bbox.min[a] + (c[a] as f64 / scale) * p.bbox.extent;
                }
                v
            })
            .collect(),
        faces: mesh.faces.clone(),
    }
}

/// `bits` binary digits of `value`, most significant first.
pub fn to_bits(value: u64, bits: u32) -> Result<Vec<bool>, QuantError> {
    if bits == 0 || bits > 64 || (bits < 64 && value >> bits != 0) {
        return Err(QuantError::Overflow { value, bits });
    }
    Ok((0..bits).rev().map(|k| (value >> k) & 1 == 1).collect())
}

/// Positional value of an MSB-first bit vector (at most 64 bits).
pub fn from_bits(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}
