//! Multi-MSB prediction by bitwise majority vote over a vertex's predictors.
//!
//! Bit positions here are 1-based from the most significant end of an
//! `L`-bit coordinate: position 1 is bit `L-1`, position `L` is bit 0.
//! A coordinate's label `l` is the first position where it disagrees with the
//! majority of its predictors, or `L + 1` when it never does. A vertex label
//! `n` is the minimum over x, y, z, and the top `n - 1` bits of each of its
//! coordinates can be overwritten and later re-derived from the predictors.

use thiserror::Error;

use crate::quantize::IntMesh;
use crate::topology::Partition;

/// Largest label the 6-bit code can carry.
pub const MAX_LABEL: u8 = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PredictError {
    #[error("majority vote needs at least one predictor")]
    EmptyPredictors,
}

/// 1 when at least as many predictors vote 1 as vote 0. Ties resolve to 1 in
/// both detection and recovery.
pub fn majority_bit<I: IntoIterator<Item = bool>>(bits: I) -> Result<bool, PredictError> {
    let (mut ones, mut total) = (0usize, 0usize);
    for b in bits {
        ones += usize::from(b);
        total += 1;
    }
    if total == 0 {
        return Err(PredictError::EmptyPredictors);
    }
    Ok(2 * ones >= total)
}

#[inline]
fn bit_at(value: u64, bits: u32, position: u32) -> bool {
    (value >> (bits - position)) & 1 == 1
}

fn predicted_bit(predictors: &[u64], bits: u32, position: u32) -> Result<bool, PredictError> {
    majority_bit(predictors.iter().map(|&p| bit_at(p, bits, position)))
}

/// Label of a single coordinate against its predictors' values of the same
/// axis.
pub fn detect_coord_label(coord: u64, predictors: &[u64], bits: u32) -> Result<u32, PredictError> {
    if predictors.is_empty() {
        return Err(PredictError::EmptyPredictors);
    }
    for position in 1..=bits {
        if bit_at(coord, bits, position) != predicted_bit(predictors, bits, position)? {
            return Ok(position);
        }
    }
    Ok(bits + 1)
}

pub fn vertex_label(l: [u32; 3]) -> u8 {
    l.into_iter().min().unwrap_or(0).min(u32::from(MAX_LABEL)) as u8
}

/// Overwrites the top `label - 1` bits of `coord` with the predictors'
/// majority. Inverse of any substitution confined to those bits, provided
/// `label` was detected on the original coordinate.
pub fn restore_msbs(
    coord: u64,
    predictors: &[u64],
    bits: u32,
    label: u8,
) -> Result<u64, PredictError> {
    let mut out = coord;
    for position in 1..u32::from(label) {
        let shift = bits - position;
        let bit = u64::from(predicted_bit(predictors, bits, position)?);
        out = (out & !(1u64 << shift)) | (bit << shift);
    }
    Ok(out)
}

/// Per-embedded-vertex labels, in partition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelStream {
    pub bits: u32,
    pub labels: Vec<u8>,
}

impl LabelStream {
    pub fn capacity(&self) -> u64 {
        capacity(&self.labels)
    }
}

/// Embeddable bits: `3 * (n - 1)` per vertex with label `n >= 1`.
pub fn capacity(labels: &[u8]) -> u64 {
    labels
        .iter()
        .map(|&n| 3 * u64::from(n.saturating_sub(1)))
        .sum()
}

/// Gathers one axis of the predictor coordinates into `scratch`.
pub(crate) fn gather_axis(
    mesh: &IntMesh,
    predictors: &[usize],
    axis: usize,
    scratch: &mut Vec<u64>,
) {
    scratch.clear();
    scratch.extend(predictors.iter().map(|&p| mesh.coords[p][axis]));
}

/// Labels every embedded vertex from the plaintext quantized coordinates.
pub fn detect_all(mesh: &IntMesh, partition: &Partition) -> LabelStream {
    let bits = mesh.params.bits;
    let mut scratch = Vec::new();
    let labels = partition
        .iter()
        .map(|(v, preds)| {
            if preds.is_empty() {
                return 0;
            }
            let mut l = [0u32; 3];
            for (axis, slot) in l.iter_mut().enumerate() {
                gather_axis(mesh, preds, axis, &mut scratch);
                *slot = detect_coord_label(mesh.coords[v][axis], &scratch, bits)
                    .expect("predictor list is non-empty");
            }
            vertex_label(l)
        })
        .collect();
    LabelStream { bits, labels }
}
