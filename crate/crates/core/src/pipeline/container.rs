//! Payload framing: 64-bit bit length, the payload bits, CRC-32 (IEEE) of
//! the payload packed MSB-first into zero-padded bytes.

use crate::bits::BitBuf;

pub const HEADER_BITS: usize = 64;
pub const CRC_BITS: usize = 32;
pub const OVERHEAD_BITS: usize = HEADER_BITS + CRC_BITS;

/// Length values with any of their top 32 bits set are never produced for a
/// mesh-sized carrier; seeing one means the header itself is garbage.
const PLAUSIBLE_LENGTH_LIMIT: u64 = 1 << 32;

fn crc(payload: &BitBuf) -> u32 {
    crc32fast::hash(payload.as_bytes())
}

pub fn frame(payload: &BitBuf) -> BitBuf {
    let mut out = BitBuf::with_capacity(payload.len() + OVERHEAD_BITS);
    out.push_bits(payload.len() as u64, HEADER_BITS as u32);
    for b in payload.iter() {
        out.push(b);
    }
    out.push_bits(u64::from(crc(payload)), CRC_BITS as u32);
    out
}

#[derive(Debug, PartialEq, Eq)]
pub enum Unframe {
    Ok(BitBuf),
    /// Plausible length that does not fit in the available bits.
    TooLong {
        declared: u64,
    },
    /// Length field is garbage or the CRC does not match.
    Corrupt,
}

/// Parses a container from the front of `bits` (trailing bits are ignored).
pub fn unframe(bits: &BitBuf) -> Unframe {
    let Some(declared) = bits.read_bits(0, HEADER_BITS as u32) else {
        return Unframe::Corrupt;
    };
    if declared >= PLAUSIBLE_LENGTH_LIMIT {
        return Unframe::Corrupt;
    }
    let available = bits.len().saturating_sub(OVERHEAD_BITS) as u64;
    if declared > available {
        return Unframe::TooLong { declared };
    }
    let len = declared as usize;
    let payload: BitBuf = (HEADER_BITS..HEADER_BITS + len)
        .map(|i| bits.get(i).expect("within bounds"))
        .collect();
    let stored = bits
        .read_bits(HEADER_BITS + len, CRC_BITS as u32)
        .expect("within bounds");
    if stored == u64::from(crc(&payload)) {
        Unframe::Ok(payload)
    } else {
        Unframe::Corrupt
    }
}
