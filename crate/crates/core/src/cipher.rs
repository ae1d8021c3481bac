//! Keyed keystreams and XOR encryption of quantized coordinates.
//!
//! Suite `chacha20-ietf-msb-v1`: the keystream is the RFC 8439 ChaCha20
//! block function output for the 256-bit key, block counter starting at 0 and
//! a 96-bit nonce fixed per key role (`b"rdh-mesh-enc"` for the content
//! owner's key, `b"rdh-payload!"` for the data hider's key). Bytes are
//! consumed in order and each byte is read most significant bit first.

use std::fmt;
use std::str::FromStr;

use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;
use thiserror::Error;

use crate::bits::BitBuf;
use crate::quantize::IntMesh;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KeyError {
    #[error("key must be 64 hex characters, got {0}")]
    BadLength(usize),
    #[error("key is not valid hex: {0}")]
    BadHex(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyRole {
    /// Content owner's key, encrypts mesh coordinates.
    Encryption,
    /// Data hider's key, encrypts the payload container.
    DataHiding,
}

impl KeyRole {
    fn nonce(self) -> [u8; 12] {
        match self {
            KeyRole::Encryption => *b"rdh-mesh-enc",
            KeyRole::DataHiding => *b"rdh-payload!",
        }
    }
}

impl fmt::Display for KeyRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeyRole::Encryption => "encryption",
            KeyRole::DataHiding => "data-hiding",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Key {
    bytes: [u8; 32],
    role: KeyRole,
}

impl Key {
    pub fn new(bytes: [u8; 32], role: KeyRole) -> Self {
        Self { bytes, role }
    }

    /// Parses 64 hex characters; surrounding whitespace is ignored.
    pub fn from_hex(s: &str, role: KeyRole) -> Result<Self, KeyError> {
        let s = s.trim();
        if s.len() != 64 {
            return Err(KeyError::BadLength(s.len()));
        }
        let mut bytes = [0u8; 32];
        hex::decode_to_slice(s, &mut bytes).map_err(|e| KeyError::BadHex(e.to_string()))?;
        Ok(Self { bytes, role })
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.bytes)
    }

    pub fn role(&self) -> KeyRole {
        self.role
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.bytes
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Key")
            .field("role", &self.role)
            .finish_non_exhaustive()
    }
}

/// Keystream construction identifier, recorded in the sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Suite {
    #[default]
    ChaCha20MsbV1,
}

impl Suite {
    pub fn id(self) -> &'static str {
        match self {
            Suite::ChaCha20MsbV1 => "chacha20-ietf-msb-v1",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chacha20-ietf-msb-v1" => Ok(Suite::ChaCha20MsbV1),
            other => Err(format!("unknown keystream suite {other:?}")),
        }
    }
}

/// First `count` keystream bits for `key`. Prefix-stable in `count`.
pub fn keystream(key: &Key, count: usize) -> BitBuf {
    let mut bytes = vec![0u8; count.div_ceil(8)];
    let mut c = ChaCha20::new(&key.bytes.into(), &key.role.nonce().into());
    c.apply_keystream(&mut bytes);
    BitBuf::from_bytes_with_len(&bytes, count).expect("buffer sized for count")
}

/// XORs every coordinate bit with `stream`, consumed vertex by vertex, x then
/// y then z, `L` bits each MSB first. Panics when `stream` is too short.
pub fn apply_keystream(mesh: &IntMesh, stream: &BitBuf) -> IntMesh {
    let bits = mesh.params.bits;
    let width = bits as usize;
    assert!(
        stream.len() >= 3 * width * mesh.coords.len(),
        "keystream too short"
    );
    let coords = mesh
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut out = *c;
            for (axis, v) in out.iter_mut().enumerate() {
                let start = (3 * i + axis) * width;
                *v ^= stream.read_bits(start, bits).expect("length checked");
            }
            out
        })
        .collect();
    IntMesh {
        params: mesh.params,
        coords,
        faces: mesh.faces.clone(),
    }
}

/// Encrypts (or, applied again, decrypts) all coordinates under `key`.
pub fn xor_mesh(mesh: &IntMesh, key: &Key) -> IntMesh {
    let stream = keystream(key, 3 * mesh.params.bits as usize * mesh.coords.len());
    apply_keystream(mesh, &stream)
}
