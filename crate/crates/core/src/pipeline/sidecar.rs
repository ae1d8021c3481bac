//! Auxiliary record and its text sidecar form.
//!
//! ```text
//! u: 5
//! parity: odd
//! suite: chacha20-ietf-msb-v1
//! bbox: <min_x> <min_y> <min_z> <extent>
//! labels_count: <embedded vertices>
//! labels_bits: <coded label bits>
//! capacity_bits: <total slot bits>
//! labels_hex: <coded labels, MSB-first, zero-padded to a byte>
//! ```
//!
//! Reals are written in shortest round-trip form so the bounding box is
//! restored bit-exactly.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arith_coder::{self, CodedLabels, CoderError};
use crate::bits::BitBuf;
use crate::cipher::Suite;
use crate::predictor;
use crate::quantize::{BoundingBox, QuantError, QuantParams};
use crate::topology::Parity;

#[derive(Debug, Error, PartialEq)]
pub enum SidecarError {
    #[error("sidecar line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("sidecar is missing field {0:?}")]
    MissingField(&'static str),
    #[error("sidecar field {field:?}: {msg}")]
    BadValue { field: &'static str, msg: String },
    #[error("sidecar labels: {0}")]
    Labels(#[from] CoderError),
    #[error("sidecar parameters: {0}")]
    Params(#[from] QuantError),
    #[error("sidecar capacity {recorded} disagrees with its labels ({computed})")]
    CapacityMismatch { recorded: u64, computed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxRecord {
    pub u: u32,
    pub parity: Parity,
    pub suite: Suite,
    pub bbox: BoundingBox,
    pub labels: CodedLabels,
    pub capacity_bits: u64,
}

impl AuxRecord {
    pub fn embedded_count(&self) -> usize {
        self.labels.symbol_count
    }

    pub fn params(&self) -> Result<QuantParams, QuantError> {
        QuantParams::new(self.u, self.bbox)
    }

    pub fn decode_labels(&self) -> Result<Vec<u8>, CoderError> {
        arith_coder::decode(&self.labels)
    }

    /// Bits the labels would take with the plain 6-bit code.
    pub fn uncompressed_label_bits(&self) -> u64 {
        6 * self.labels.symbol_count as u64
    }

    /// Checks that parameters are in range and that the recorded capacity
    /// matches the capacity implied by the coded labels.
    pub fn validate(&self) -> Result<Vec<u8>, SidecarError> {
        self.params()?;
        let labels = self.decode_labels()?;
        let computed = predictor::capacity(&labels);
        if computed != self.capacity_bits {
            return Err(SidecarError::CapacityMismatch {
                recorded: self.capacity_bits,
                computed,
            });
        }
        Ok(labels)
    }

    pub fn to_sidecar(&self) -> String {
        let b = &self.bbox;
        let mut s = String::new();
        let _ = writeln!(s, "u: {}", self.u);
        let _ = writeln!(s, "parity: {}", self.parity);
        let _ = writeln!(s, "suite: {}", self.suite);
        let _ = writeln!(
            s,
            "bbox: {:?} {:?} {:?} {:?}",
            b.min[0], b.min[1], b.min[2], b.extent
        );
        let _ = writeln!(s, "labels_count: {}", self.labels.symbol_count);
        let _ = writeln!(s, "labels_bits: {}", self.labels.bits.len());
        let _ = writeln!(s, "capacity_bits: {}", self.capacity_bits);
        let _ = writeln!(
            s,
            "labels_hex: {}",
            hex::encode(self.labels.bits.as_bytes())
        );
        s
    }

    /// Parses and validates a sidecar.
    pub fn from_sidecar(text: &str) -> Result<Self, SidecarError> {
        const FIELDS: [&str; 8] = [
            "u",
            "parity",
            "suite",
            "bbox",
            "labels_count",
            "labels_bits",
            "capacity_bits",
            "labels_hex",
        ];
        let mut values: [Option<&str>; 8] = [None; 8];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| SidecarError::Syntax {
                line: i + 1,
                msg: "expected \"key: value\"".into(),
            })?;
            let key = key.trim();
            let slot =
                FIELDS
                    .iter()
                    .position(|f| *f == key)
                    .ok_or_else(|| SidecarError::Syntax {
                        line: i + 1,
                        msg: format!("unknown field {key:?}"),
                    })?;
            if values[slot].replace(value.trim()).is_some() {
                return Err(SidecarError::Syntax {
                    line: i + 1,
                    msg: format!("duplicate field {key:?}"),
                });
            }
        }
        let get = |i: usize| values[i].ok_or(SidecarError::MissingField(FIELDS[i]));

        let u = parse_num(get(0)?, "u")?;
        let parity = get(1)?.parse().map_err(|msg| SidecarError::BadValue {
            field: "parity",
            msg,
        })?;
        let suite = get(2)?.parse().map_err(|msg| SidecarError::BadValue {
            field: "suite",
            msg,
        })?;
        let nums = get(3)?
            .split_whitespace()
            .map(|t| parse_num::<f64>(t, "bbox"))
            .collect::<Result<Vec<_>, _>>()?;
        let [x, y, z, extent] = nums[..] else {
            return Err(SidecarError::BadValue {
                field: "bbox",
                msg: format!("expected 4 numbers, got {}", nums.len()),
            });
        };
        let symbol_count = parse_num(get(4)?, "labels_count")?;
        let bit_len: usize = parse_num(get(5)?, "labels_bits")?;
        let capacity_bits = parse_num(get(6)?, "capacity_bits")?;
        let bytes = hex::decode(get(7)?).map_err(|e| SidecarError::BadValue {
            field: "labels_hex",
            msg: e.to_string(),
        })?;
        if bytes.len() != bit_len.div_ceil(8) {
            return Err(SidecarError::BadValue {
                field: "labels_hex",
                msg: format!("{} bytes for {bit_len} bits", bytes.len()),
            });
        }
        let bits = BitBuf::from_bytes_with_len(&bytes, bit_len).expect("length checked");

        let aux = AuxRecord {
            u,
            parity,
            suite,
            bbox: BoundingBox {
                min: [x, y, z],
                extent,
            },
            labels: CodedLabels { symbol_count, bits },
            capacity_bits,
        };
        aux.validate()?;
        Ok(aux)
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, field: &'static str) -> Result<T, SidecarError>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| SidecarError::BadValue {
        field,
        msg: format!("{s:?}: {e}"),
    })
}
