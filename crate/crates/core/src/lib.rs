//! Reversible data hiding in encrypted triangle meshes.
//!
//! A content owner quantizes a mesh, records for every vertex of one parity
//! class how many most significant bits its opposite-parity 1-ring neighbors
//! predict correctly by majority vote, and encrypts the coordinates with a
//! keystream. A data hider then overwrites those predictable bits with an
//! encrypted payload. A receiver with the data-hiding key reads the payload
//! back; a receiver with the encryption key decrypts and re-predicts the
//! overwritten bits, recovering the quantized mesh exactly.
//!
//! ```
//! use mesh_rdh::{bits::BitBuf, cipher::{Key, KeyRole}, pipeline, topology::Parity, FloatMesh};
//!
//! // A gently curved 8x8 grid.
//! let n = 8;
//! let vertices = (0..n * n)
//!     .map(|i| {
//!         let (x, y) = ((i % n) as f64, (i / n) as f64);
//!         [x, y, 0.01 * (x * x + y * y)]
//!     })
//!     .collect();
//! let mut faces = Vec::new();
//! for r in 0..n - 1 {
//!     for c in 0..n - 1 {
//!         let i = r * n + c;
//!         faces.push([i, i + 1, i + n]);
//!         faces.push([i + 1, i + n + 1, i + n]);
//!     }
//! }
//! let mesh = FloatMesh::new(vertices, faces)?;
//! let ke = Key::new([1; 32], KeyRole::Encryption);
//! let kd = Key::new([2; 32], KeyRole::DataHiding);
//!
//! let (encrypted, aux) = pipeline::vacate_and_encrypt(&mesh, 5, Parity::Odd, &ke)?;
//! let payload = BitBuf::from_bytes(b"hi");
//! let marked = pipeline::embed(&encrypted, &aux, &payload, &kd)?;
//!
//! assert_eq!(pipeline::extract(&marked, &aux, &kd)?, payload);
//! let recovered = pipeline::recover_integer(&marked, &aux, &ke)?;
//! assert_eq!(recovered, mesh_rdh::quantize::quantize(&mesh, 5)?);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod arith_coder;
pub mod bits;
pub mod cipher;
pub mod mesh_io;
pub mod metrics;
pub mod pipeline;
pub mod predictor;
pub mod quantize;
pub mod topology;

pub use bits::BitBuf;
pub use cipher::{Key, KeyRole};
pub use mesh_io::FloatMesh;
pub use pipeline::{AuxRecord, PipelineError};
pub use quantize::IntMesh;
pub use topology::Parity;
