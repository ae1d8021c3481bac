//! MSB-first bit buffer shared by the payload container, keystreams and the
//! arithmetic coder output.

use std::fmt;

/// Growable bit sequence packed big-endian into bytes. Bit 0 of the sequence
/// is the most significant bit of byte 0; the tail of the last byte is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitBuf {
    bytes: Vec<u8>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// All 8·n bits of `bytes`.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            bytes: bytes.to_vec(),
            len: bytes.len() * 8,
        }
    }

    /// First `len` bits of `bytes`. Bits past `len` in the final byte are
    /// cleared so equality is well-defined.
    ///
    /// Returns `None` when `bytes` holds fewer than `len` bits.
    pub fn from_bytes_with_len(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() * 8 < len {
            return None;
        }
        let mut bytes = bytes[..len.div_ceil(8)].to_vec();
        if !len.is_multiple_of(8) {
            if let Some(last) = bytes.last_mut() {
                *last &= 0xffu8 << (8 - len % 8);
            }
        }
        Some(Self { bytes, len })
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut buf = Self::new();
        for b in bits {
            buf.push(b);
        }
        buf
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed bytes, zero-padded to a byte boundary.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let idx = self.len / 8;
            self.bytes[idx] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        for shift in (0..width).rev() {
            self.push((value >> shift) & 1 == 1);
        }
    }

    pub fn get(&self, idx: usize) -> Option<bool> {
        (idx < self.len).then(|| self.bytes[idx / 8] & (0x80 >> (idx % 8)) != 0)
    }

    pub fn set(&mut self, idx: usize, bit: bool) {
        assert!(idx < self.len, "bit index {idx} out of range {}", self.len);
        let mask = 0x80 >> (idx % 8);
        if bit {
            self.bytes[idx / 8] |= mask;
        } else {
            self.bytes[idx / 8] &= !mask;
        }
    }

    /// Reads `width` bits starting at `start` as an MSB-first integer.
    pub fn read_bits(&self, start: usize, width: u32) -> Option<u64> {
        if width > 64 || start.checked_add(width as usize)? > self.len {
            return None;
        }
        let mut v = 0u64;
        for i in 0..width as usize {
            let bit = self.bytes[(start + i) / 8] >> (7 - (start + i) % 8) & 1;
            v = (v << 1) | u64::from(bit);
        }
        Some(v)
    }

    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.bytes.truncate(len.div_ceil(8));
        if !len.is_multiple_of(8) {
            if let Some(last) = self.bytes.last_mut() {
                *last &= 0xffu8 << (8 - len % 8);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    /// In-place XOR with the leading `self.len()` bits of `other`.
    ///
    /// Panics when `other` is shorter than `self`.
    pub fn xor_assign_prefix(&mut self, other: &BitBuf) {
        assert!(other.len >= self.len, "keystream shorter than data");
        let n = self.bytes.len();
        for (a, b) in self.bytes.iter_mut().zip(&other.bytes[..n]) {
            *a ^= b;
        }
        // Re-clear the padding bits `other` may have set.
        self.truncate_padding();
    }

    fn truncate_padding(&mut self) {
        if !self.len.is_multiple_of(8) {
            if let Some(last) = self.bytes.last_mut() {
                *last &= 0xffu8 << (8 - self.len % 8);
            }
        }
    }
}

impl fmt::Debug for BitBuf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBuf({} bits: ", self.len)?;
        for (i, b) in self.iter().enumerate() {
            if i == 64 {
                return write!(f, "...)");
            }
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl FromIterator<bool> for BitBuf {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bools(iter)
    }
}

/// Sequential MSB-first reader over a [`BitBuf`].
#[derive(Debug)]
pub struct BitReader<'a> {
    buf: &'a BitBuf,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(buf: &'a BitBuf) -> Self {
        Self { buf, pos: 0 }
    }

    /// Next bit, or `None` once the buffer is exhausted.
    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.buf.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }
}
