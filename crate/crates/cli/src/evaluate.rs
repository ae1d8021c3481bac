//! Corpus sweep: full protect/embed/extract/recover loop per (mesh, u).

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use log::warn;
use mesh_rdh::metrics::{embedding_rate, QualityReport};
use mesh_rdh::pipeline::{self, OVERHEAD_BITS};
use mesh_rdh::quantize::{self, bit_length};
use mesh_rdh::{mesh_io, BitBuf, FloatMesh, Key, Parity, PipelineError};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_KE: [u8; 32] = *b"mesh-rdh evaluation content key!";
pub const DEFAULT_KD: [u8; 32] = *b"mesh-rdh evaluation hiding key!!";

struct Row {
    mesh: String,
    u: u32,
    csv: String,
    ok: bool,
}

pub struct Report {
    pub csv: String,
    /// `mesh@u=N` for every row whose payload or mesh did not round-trip.
    pub failed: Vec<String>,
}

pub fn run(
    corpus: &Path,
    us: RangeInclusive<u32>,
    parity: Parity,
    ke: &Key,
    kd: &Key,
) -> Result<Report> {
    for u in us.clone() {
        bit_length(u).map_err(PipelineError::from)?;
    }
    let paths = off_files(corpus)?;
    if paths.is_empty() {
        bail!("no .off files in {}", corpus.display());
    }

    let meshes: Vec<(String, FloatMesh)> = paths
        .iter()
        .filter_map(|path| {
            let name = path
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            let parsed = std::fs::read_to_string(path)
                .map_err(anyhow::Error::from)
                .and_then(|text| Ok(mesh_io::parse_off(&text)?));
            match parsed {
                Ok(mesh) => Some((name, mesh)),
                Err(e) => {
                    warn!("skipping {}: {e:#}", path.display());
                    None
                }
            }
        })
        .collect();

    let jobs: Vec<(usize, u32)> = (0..meshes.len())
        .flat_map(|m| us.clone().map(move |u| (m, u)))
        .collect();
    let mut rows: Vec<Row> = jobs
        .par_iter()
        .filter_map(|&(m, u)| {
            let (name, mesh) = &meshes[m];
            match evaluate_one(name, mesh, u, parity, ke, kd) {
                Ok(row) => Some(row),
                Err(e) => {
                    warn!("skipping {name} at u={u}: {e:#}");
                    None
                }
            }
        })
        .collect();
    if rows.is_empty() {
        bail!("every mesh in {} failed", corpus.display());
    }
    rows.sort_by(|a, b| (&a.mesh, a.u).cmp(&(&b.mesh, b.u)));

    let mut out = format!(
        "mesh,u,parity,vertices,embedded,capacity_bits,label_bits_compressed,label_bits_uncompressed,{},er_net_uncompressed_bpv,roundtrip_ok,wall_ms\n",
        QualityReport::CSV_HEADER
    );
    for row in &rows {
        out.push_str(&row.csv);
        out.push('\n');
    }
    let failed: Vec<_> = rows
        .iter()
        .filter(|r| !r.ok)
        .map(|r| format!("{}@u={}", r.mesh, r.u))
        .collect();
    Ok(Report { csv: out, failed })
}

fn off_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading corpus {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("off")))
        .collect();
    paths.sort();
    Ok(paths)
}

fn payload_bits(name: &str, u: u32, len: usize) -> BitBuf {
    let seed = name.bytes().fold(u64::from(u), |h, b| {
        h.wrapping_mul(31).wrapping_add(u64::from(b))
    });
    let mut bytes = vec![0u8; len.div_ceil(8)];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut bytes);
    BitBuf::from_bytes_with_len(&bytes, len).expect("buffer sized for len")
}

fn evaluate_one(
    name: &str,
    mesh: &FloatMesh,
    u: u32,
    parity: Parity,
    ke: &Key,
    kd: &Key,
) -> Result<Row> {
    let start = Instant::now();
    let (encrypted, aux) = pipeline::vacate_and_encrypt(mesh, u, parity, ke)?;
    let room = aux.capacity_bits.saturating_sub(OVERHEAD_BITS as u64) as usize;
    let payload = payload_bits(name, u, room);
    let marked = if aux.capacity_bits >= OVERHEAD_BITS as u64 {
        pipeline::embed(&encrypted, &aux, &payload, kd)?
    } else {
        encrypted
    };
    let payload_ok = aux.capacity_bits < OVERHEAD_BITS as u64
        || pipeline::extract(&marked, &aux, kd)? == payload;
    let restored = pipeline::recover_integer(&marked, &aux, ke)?;
    let mesh_ok = restored == quantize::quantize(mesh, u)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let label_bits = aux.labels.bit_len() as u64;
    let fixed_bits = aux.uncompressed_label_bits();
    let report = QualityReport::measure(
        mesh,
        &quantize::dequantize(&restored),
        aux.capacity_bits,
        label_bits,
    )?;
    let (_, er_net_fixed) = embedding_rate(aux.capacity_bits, fixed_bits, mesh.vertex_count());

    let mut csv = String::new();
    write!(
        csv,
        "{name},{u},{parity},{},{},{},{label_bits},{fixed_bits},{},{er_net_fixed:.4},{},{wall_ms:.1}",
        mesh.vertex_count(),
        aux.embedded_count(),
        aux.capacity_bits,
        report.csv_row(),
        payload_ok && mesh_ok,
    )
    .expect("writing to a String");
    Ok(Row {
        mesh: name.to_string(),
        u,
        csv,
        ok: payload_ok && mesh_ok,
    })
}
