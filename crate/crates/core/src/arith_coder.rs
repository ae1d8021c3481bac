//! Adaptive order-0 arithmetic coder for 6-bit labels.
//!
//! Integer-only binary arithmetic coder with 32-bit `low`/`high` registers,
//! E1/E2 output and E3 underflow tracking. The model starts with every one of
//! the 64 symbol counts at 1, adds 1 to the coded symbol afterwards, and
//! halves all counts (floor 1) once the total reaches 2^16. Termination
//! writes the pending-bit-resolved 32-bit `low` register, so the decoder
//! consumes exactly as many bits as the encoder produced.

use thiserror::Error;

use crate::bits::{BitBuf, BitReader};

pub const ALPHABET: usize = 64;

const PRECISION: u32 = 32;
const WHOLE: u64 = 1 << PRECISION;
const HALF: u64 = WHOLE / 2;
const QUARTER: u64 = WHOLE / 4;
const MAX_TOTAL: u32 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoderError {
    #[error("symbol {symbol} at position {position} outside [0, 63]")]
    SymbolOutOfRange { position: usize, symbol: u8 },
    #[error("bitstream exhausted after {decoded} of {expected} symbols")]
    TruncatedStream { decoded: usize, expected: usize },
}

/// Compressed label stream. `symbol_count` travels alongside the bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedLabels {
    pub symbol_count: usize,
    pub bits: BitBuf,
}

impl CodedLabels {
    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }
}

#[derive(Debug, Clone)]
struct AdaptiveModel {
    counts: [u32; ALPHABET],
    total: u32,
}

impl AdaptiveModel {
    fn new() -> Self {
        Self {
            counts: [1; ALPHABET],
            total: ALPHABET as u32,
        }
    }

    /// Cumulative interval `[lo, hi)` of `symbol`.
    fn interval(&self, symbol: usize) -> (u32, u32) {
        let lo: u32 = self.counts[..symbol].iter().sum();
        (lo, lo + self.counts[symbol])
    }

    /// Symbol whose interval contains `target`, with that interval.
    fn find(&self, target: u32) -> (usize, u32, u32) {
        let mut lo = 0;
        for (s, &c) in self.counts.iter().enumerate() {
            if target < lo + c {
                return (s, lo, lo + c);
            }
            lo += c;
        }
        unreachable!("target {target} beyond total {}", self.total)
    }

    fn update(&mut self, symbol: usize) {
        self.counts[symbol] += 1;
        self.total += 1;
        if self.total >= MAX_TOTAL {
            self.total = 0;
            for c in &mut self.counts {
                *c = (*c / 2).max(1);
                self.total += *c;
            }
        }
    }
}

struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitBuf,
}

impl Encoder {
    fn new() -> Self {
        Self {
            low: 0,
            high: WHOLE - 1,
            pending: 0,
            out: BitBuf::new(),
        }
    }

    fn emit(&mut self, bit: bool) {
        self.out.push(bit);
        for _ in 0..self.pending {
            self.out.push(!bit);
        }
        self.pending = 0;
    }

    fn encode(&mut self, lo: u32, hi: u32, total: u32) {
        let range = self.high - self.low + 1;
        self.high = self.low + range * u64::from(hi) / u64::from(total) - 1;
        self.low += range * u64::from(lo) / u64::from(total);
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    fn finish(mut self) -> BitBuf {
        let low = self.low;
        self.emit(low & HALF != 0);
        self.out.push_bits(low, PRECISION - 1);
        self.out
    }
}

pub fn encode(symbols: &[u8]) -> Result<CodedLabels, CoderError> {
    if let Some(position) = symbols.iter().position(|&s| usize::from(s) >= ALPHABET) {
        return Err(CoderError::SymbolOutOfRange {
            position,
            symbol: symbols[position],
        });
    }
    if symbols.is_empty() {
        return Ok(CodedLabels {
            symbol_count: 0,
            bits: BitBuf::new(),
        });
    }
    let mut model = AdaptiveModel::new();
    let mut enc = Encoder::new();
    for &s in symbols {
        let s = usize::from(s);
        let (lo, hi) = model.interval(s);
        enc.encode(lo, hi, model.total);
        model.update(s);
    }
    Ok(CodedLabels {
        symbol_count: symbols.len(),
        bits: enc.finish(),
    })
}

pub fn decode(coded: &CodedLabels) -> Result<Vec<u8>, CoderError> {
    let expected = coded.symbol_count;
    let mut out = Vec::with_capacity(expected);
    if expected == 0 {
        return Ok(out);
    }
    let truncated = |decoded| CoderError::TruncatedStream { decoded, expected };
    let mut reader = BitReader::new(&coded.bits);
    let mut value = 0u64;
    for _ in 0..PRECISION {
        let bit = reader.read_bit().ok_or(truncated(0))?;
        value = (value << 1) | u64::from(bit);
    }
    let (mut low, mut high) = (0u64, WHOLE - 1);
    let mut model = AdaptiveModel::new();
    while out.len() < expected {
        let range = high - low + 1;
        let total = u64::from(model.total);
        let target = (((value - low + 1) * total - 1) / range) as u32;
        let (s, lo, hi) = model.find(target);
        high = low + range * u64::from(hi) / total - 1;
        low += range * u64::from(lo) / total;
        out.push(s as u8);
        model.update(s);
        // Renormalizing after the last symbol too consumes exactly the bits
        // the encoder wrote, so any truncation is caught.
        loop {
            if high < HALF {
            } else if low >= HALF {
                low -= HALF;
                high -= HALF;
                value -= HALF;
            } else if low >= QUARTER && high < HALF + QUARTER {
                low -= QUARTER;
                high -= QUARTER;
                value -= QUARTER;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1;
            let bit = reader.read_bit().ok_or(truncated(out.len()))?;
            value = (value << 1) | u64::from(bit);
        }
    }
    Ok(out)
}
