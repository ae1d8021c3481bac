//! Distortion and rate measurements.

use thiserror::Error;

use crate::mesh_io::FloatMesh;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("point set is empty")]
    EmptySet,
    #[error("meshes have {0} and {1} vertices")]
    VertexCountMismatch(usize, usize),
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]) * (a[k] - b[k])).sum()
}

/// max over `from` of the distance to the nearest point of `to`.
pub fn directed_hausdorff(from: &[[f64; 3]], to: &[[f64; 3]]) -> Result<f64, MetricError> {
    if from.is_empty() || to.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let mut worst = 0.0f64;
    for m in from {
        let mut best = f64::INFINITY;
        for n in to {
            let d = dist2(m, n);
            if d < best {
                best = d;
                // Cannot raise the running maximum any more.
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    Ok(worst.sqrt())
}

/// Both directed distances and their maximum.
pub fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> Result<(f64, f64, f64), MetricError> {
    let ab = directed_hausdorff(a, b)?;
    let ba = directed_hausdorff(b, a)?;
    Ok((ab, ba, ab.max(ba)))
}

/// Signal-to-noise ratio in dB of `modified` against `original`: spread of
/// the original vertices about their centroid over the squared vertex
/// displacement. `f64::INFINITY` when the meshes coincide.
pub fn snr(original: &FloatMesh, modified: &FloatMesh) -> Result<f64, MetricError> {
    let (a, b) = (&original.vertices, &modified.vertices);
    if a.len() != b.len() {
        return Err(MetricError::VertexCountMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let n = a.len() as f64;
    let mut mean = [0.0; 3];
    for v in a {
        for k in 0..3 {
            mean[k] += v[k] / n;
        }
    }
    let signal: f64 = a.iter().map(|v| dist2(v, &mean)).sum();
    let noise: f64 = a.iter().zip(b).map(|(v, w)| dist2(v, w)).sum();
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / noise).log10())
}

/// `(gross, net)` bits per vertex. Net subtracts the label cost and is
/// floored at zero.
pub fn embedding_rate(capacity_bits: u64, label_bits: u64, n_vertices: usize) -> (f64, f64) {
    let n = n_vertices.max(1) as f64;
    (
        capacity_bits as f64 / n,
        capacity_bits.saturating_sub(label_bits) as f64 / n,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub directed_hausdorff_ab: f64,
    pub directed_hausdorff_ba: f64,
    pub hausdorff_sym: f64,
    pub snr: f64,
    pub er_gross: f64,
    pub er_net: f64,
}

impl QualityReport {
    pub const CSV_HEADER: &'static str =
        "hausdorff_ab,hausdorff_ba,hausdorff,snr_db,er_gross_bpv,er_net_bpv";

    pub fn measure(
        original: &FloatMesh,
        modified: &FloatMesh,
        capacity_bits: u64,
        label_bits: u64,
    ) -> Result<Self, MetricError> {
        let (ab, ba, sym) = hausdorff(&original.vertices, &modified.vertices)?;
        let (er_gross, er_net) = embedding_rate(capacity_bits, label_bits, original.vertex_count());
        Ok(Self {
            directed_hausdorff_ab: ab,
            directed_hausdorff_ba: ba,
            hausdorff_sym: sym,
            snr: snr(original, modified)?,
            er_gross,
            er_net,
        })
    }

    /// Row matching [`Self::CSV_HEADER`]; infinite SNR is written as `inf`.
    pub fn csv_row(&self) -> String {
        format!(
            "{:e},{:e},{:e},{},{:.4},{:.4}",
            self.directed_hausdorff_ab,
            self.directed_hausdorff_ba,
            self.hausdorff_sym,
            fmt_snr(self.snr),
            self.er_gross,
            self.er_net
        )
    }
}

pub fn fmt_snr(snr: f64) -> String {
    if snr.is_infinite() {
        "inf".to_string()
    } else {
        format!("{snr:.4}")
    }
}
