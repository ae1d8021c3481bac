//! The four roles: content owner (vacate room, encrypt), data hider (embed),
//! and receivers holding the data-hiding key, the encryption key, or both.
//!
//! Embedding slots are visited in one global order: embedded vertices
//! ascending, then x, y, z, then bit positions 1..n-1 from the most
//! significant end, where `n` is the vertex label. Extraction and recovery
//! both derive the slots from the mesh faces plus the auxiliary record; no
//! other state is shared between roles.

mod container;
mod sidecar;

pub use container::OVERHEAD_BITS;
pub use sidecar::{AuxRecord, SidecarError};

use thiserror::Error;

use crate::arith_coder::{self, CoderError};
use crate::bits::BitBuf;
use crate::cipher::{self, Key, KeyRole, Suite};
use crate::mesh_io::{self, FloatMesh, OffError};
use crate::predictor::{self, gather_axis, PredictError};
use crate::quantize::{self, IntMesh, QuantError};
use crate::topology::{self, Parity, Partition};

use container::Unframe;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error(transparent)]
    Off(#[from] OffError),
    #[error(transparent)]
    Coder(#[from] CoderError),
    #[error(transparent)]
    Sidecar(#[from] SidecarError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error("payload needs {requested} bits (with {OVERHEAD_BITS}-bit framing) but capacity is {capacity}")]
    CapacityExceeded { capacity: u64, requested: u64 },
    #[error("extracted payload failed its checksum (wrong data-hiding key or altered mesh)")]
    ChecksumMismatch,
    #[error("declared payload length {declared} bits exceeds the {available} bits available")]
    LengthOverflow { declared: u64, available: u64 },
    #[error("expected a{} {expected} key, got a{} {got} key", article(.expected), article(.got))]
    WrongKeyRole { expected: KeyRole, got: KeyRole },
    #[error("auxiliary record does not match mesh: {0}")]
    AuxMismatch(String),
}

fn article(role: &KeyRole) -> &'static str {
    match role {
        KeyRole::Encryption => "n",
        KeyRole::DataHiding => "",
    }
}

fn require_role(key: &Key, expected: KeyRole) -> Result<(), PipelineError> {
    if key.role() == expected {
        Ok(())
    } else {
        Err(PipelineError::WrongKeyRole {
            expected,
            got: key.role(),
        })
    }
}

/// Quantizes, labels and encrypts `mesh`. The labels are computed on the
/// plaintext integers and travel in the returned record.
pub fn vacate_and_encrypt(
    mesh: &FloatMesh,
    u: u32,
    parity: Parity,
    key_e: &Key,
) -> Result<(IntMesh, AuxRecord), PipelineError> {
    require_role(key_e, KeyRole::Encryption)?;
    let quantized = quantize::quantize(mesh, u)?;
    let adjacency = topology::build_adjacency(quantized.vertex_count(), &quantized.faces);
    let partition = topology::partition(quantized.vertex_count(), &adjacency, parity);
    let labels = predictor::detect_all(&quantized, &partition);
    let aux = AuxRecord {
        u,
        parity,
        suite: Suite::default(),
        bbox: quantized.params.bbox,
        capacity_bits: labels.capacity(),
        labels: arith_coder::encode(&labels.labels)?,
    };
    Ok((cipher::xor_mesh(&quantized, key_e), aux))
}

/// Partition and decoded labels for `mesh` under `aux`, after checking that
/// the two belong together.
fn layout(mesh: &IntMesh, aux: &AuxRecord) -> Result<(Partition, Vec<u8>), PipelineError> {
    let params = aux.params()?;
    if mesh.params.u != params.u || mesh.params.bits != params.bits {
        return Err(PipelineError::AuxMismatch(format!(
            "mesh quantized at u = {}, record says u = {}",
            mesh.params.u, params.u
        )));
    }
    let labels = aux.validate()?;
    let adjacency = topology::build_adjacency(mesh.vertex_count(), &mesh.faces);
    let partition = topology::partition(mesh.vertex_count(), &adjacency, aux.parity);
    if partition.len() != labels.len() {
        return Err(PipelineError::AuxMismatch(format!(
            "{} labels for {} embedding vertices",
            labels.len(),
            partition.len()
        )));
    }
    if let Some(i) =
        (0..labels.len()).find(|&i| labels[i] > 0 && partition.predictors[i].is_empty())
    {
        return Err(PipelineError::AuxMismatch(format!(
            "vertex {} has label {} but no predictors",
            partition.embedded[i], labels[i]
        )));
    }
    if let Some(&bad) = labels.iter().find(|&&n| u32::from(n) > params.bits + 1) {
        return Err(PipelineError::AuxMismatch(format!(
            "label {bad} exceeds {}-bit coordinates",
            params.bits
        )));
    }
    Ok((partition, labels))
}

/// `(vertex, axis, bit shift)` for every embedding slot in global order.
fn slots<'a>(
    partition: &'a Partition,
    labels: &'a [u8],
    bits: u32,
) -> impl Iterator<Item = (usize, usize, u32)> + 'a {
    partition
        .embedded
        .iter()
        .zip(labels)
        .flat_map(move |(&v, &n)| {
            (0..3).flat_map(move |axis| {
                (1..u32::from(n)).map(move |position| (v, axis, bits - position))
            })
        })
}

/// Writes the framed, `key_d`-encrypted payload into the top bits of the
/// embedding-set coordinates. Bits beyond the container stay untouched.
pub fn embed(
    encrypted: &IntMesh,
    aux: &AuxRecord,
    payload: &BitBuf,
    key_d: &Key,
) -> Result<IntMesh, PipelineError> {
    require_role(key_d, KeyRole::DataHiding)?;
    let (partition, labels) = layout(encrypted, aux)?;
    let requested = payload.len() as u64 + OVERHEAD_BITS as u64;
    if requested > aux.capacity_bits {
        return Err(PipelineError::CapacityExceeded {
            capacity: aux.capacity_bits,
            requested,
        });
    }
    let mut data = container::frame(payload);
    data.xor_assign_prefix(&cipher::keystream(key_d, data.len()));

    let mut marked = encrypted.clone();
    for ((v, axis, shift), bit) in
        slots(&partition, &labels, encrypted.params.bits).zip(data.iter())
    {
        let c = &mut marked.coords[v][axis];
        *c = (*c & !(1u64 << shift)) | (u64::from(bit) << shift);
    }
    Ok(marked)
}

/// Reads and decrypts the payload with the data-hiding key alone. Works on
/// the marked mesh as received, before any decryption.
pub fn extract(marked: &IntMesh, aux: &AuxRecord, key_d: &Key) -> Result<BitBuf, PipelineError> {
    require_role(key_d, KeyRole::DataHiding)?;
    let (partition, labels) = layout(marked, aux)?;
    let mut data: BitBuf = slots(&partition, &labels, marked.params.bits)
        .map(|(v, axis, shift)| (marked.coords[v][axis] >> shift) & 1 == 1)
        .collect();
    data.xor_assign_prefix(&cipher::keystream(key_d, data.len()));
    match container::unframe(&data) {
        Unframe::Ok(payload) => Ok(payload),
        Unframe::TooLong { declared } => Err(PipelineError::LengthOverflow {
            declared,
            available: (data.len().saturating_sub(OVERHEAD_BITS)) as u64,
        }),
        Unframe::Corrupt => Err(PipelineError::ChecksumMismatch),
    }
}

/// Decrypts with the encryption key and re-predicts the overwritten top bits
/// of every embedding vertex from its unmodified predictors. Needs no payload
/// extraction. A wrong key yields scrambled geometry, not an error.
pub fn recover_integer(
    marked: &IntMesh,
    aux: &AuxRecord,
    key_e: &Key,
) -> Result<IntMesh, PipelineError> {
    require_role(key_e, KeyRole::Encryption)?;
    let (partition, labels) = layout(marked, aux)?;
    let mut plain = cipher::xor_mesh(marked, key_e);
    let bits = plain.params.bits;
    let mut scratch = Vec::new();
    for ((v, preds), &n) in partition.iter().zip(&labels) {
        if n < 2 {
            continue;
        }
        for axis in 0..3 {
            gather_axis(&plain, preds, axis, &mut scratch);
            plain.coords[v][axis] =
                predictor::restore_msbs(plain.coords[v][axis], &scratch, bits, n)?;
        }
    }
    Ok(plain)
}

/// [`recover_integer`] followed by the inverse integer mapping.
pub fn recover(marked: &IntMesh, aux: &AuxRecord, key_e: &Key) -> Result<FloatMesh, PipelineError> {
    Ok(quantize::dequantize(&recover_integer(marked, aux, key_e)?))
}

/// Receiver holding both keys: extraction runs on the marked mesh first,
/// then recovery.
pub fn extract_and_recover(
    marked: &IntMesh,
    aux: &AuxRecord,
    key_d: &Key,
    key_e: &Key,
) -> Result<(BitBuf, FloatMesh), PipelineError> {
    let payload = extract(marked, aux, key_d)?;
    let mesh = recover(marked, aux, key_e)?;
    Ok((payload, mesh))
}

/// OFF text for an encrypted or marked mesh: raw integers divided by 10^u,
/// printed with u decimals.
pub fn encrypted_off_text(mesh: &IntMesh) -> String {
    mesh_io::write_off(&mesh.to_raw_float(), mesh.params.u as usize)
}

/// Reads an encrypted or marked mesh written by [`encrypted_off_text`].
pub fn parse_encrypted_off(text: &str, aux: &AuxRecord) -> Result<IntMesh, PipelineError> {
    let mesh = mesh_io::parse_off(text)?;
    Ok(IntMesh::from_raw_float(&mesh, aux.params()?)?)
}
