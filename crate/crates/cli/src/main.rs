use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use mesh_rdh::cipher::{Key, KeyError, KeyRole};
use mesh_rdh::pipeline::{self, AuxRecord, PipelineError, OVERHEAD_BITS};
use mesh_rdh::quantize::QuantError;
use mesh_rdh::{mesh_io, BitBuf, Parity};

mod evaluate;

const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_CHECKSUM: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "mesh-rdh",
    version,
    about = "Reversible data hiding in encrypted OFF meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a fresh 256-bit key (64 hex characters).
    Keygen {
        #[arg(long, value_enum, default_value_t = Role::Encryption)]
        role: Role,
        /// Key file to write; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Content owner: quantize, label and encrypt a mesh.
    Protect {
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        u: u32,
        #[arg(long, default_value = "odd")]
        parity: Parity,
        /// Encryption key, as hex or a key file path.
        #[arg(long)]
        ke: String,
        #[arg(long)]
        out: PathBuf,
        /// Sidecar path; defaults to `<out>.aux`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Data hider: embed a payload file into an encrypted mesh.
    Embed {
        input: PathBuf,
        #[arg(long)]
        payload: PathBuf,
        #[arg(long)]
        kd: String,
        #[arg(long)]
        out: PathBuf,
        /// Sidecar of the input; defaults to `<input>.aux`. Copied to `<out>.aux`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Receiver with the data-hiding key: recover the payload.
    Extract {
        input: PathBuf,
        #[arg(long)]
        kd: String,
        /// Where to write the payload.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Receiver with the encryption key: restore the mesh.
    Recover {
        input: PathBuf,
        #[arg(long)]
        ke: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Decimal digits for the restored coordinates.
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Receiver with both keys: extract, then restore.
    ExtractRecover {
        input: PathBuf,
        #[arg(long)]
        kd: String,
        #[arg(long)]
        ke: String,
        /// Where to write the payload.
        #[arg(long)]
        payload: PathBuf,
        /// Where to write the restored mesh.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Run the full protect/embed/extract/recover loop over a corpus and
    /// write one CSV row per (mesh, u).
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 2)]
        u_min: u32,
        #[arg(long, default_value_t = 9)]
        u_max: u32,
        #[arg(long, default_value = "odd")]
        parity: Parity,
        /// Encryption key; a fixed built-in key is used when omitted.
        #[arg(long)]
        ke: Option<String>,
        /// Data-hiding key; a fixed built-in key is used when omitted.
        #[arg(long)]
        kd: Option<String>,
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Role {
    #[value(name = "enc")]
    Encryption,
    #[value(name = "hide")]
    DataHiding,
}

#[derive(Debug)]
struct MissingSidecar(PathBuf);

impl std::fmt::Display for MissingSidecar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "missing sidecar {}", self.0.display())
    }
}

impl std::error::Error for MissingSidecar {}

/// Usage-class failure detected after argument parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(p) = cause.downcast_ref::<PipelineError>() {
            return match p {
                PipelineError::CapacityExceeded { .. } => EXIT_CAPACITY,
                PipelineError::ChecksumMismatch | PipelineError::LengthOverflow { .. } => {
                    EXIT_CHECKSUM
                }
                PipelineError::WrongKeyRole { .. }
                | PipelineError::Quant(QuantError::OutOfRange { .. }) => EXIT_USAGE,
                _ => EXIT_IO,
            };
        }
        if cause.is::<UsageError>() || cause.is::<KeyError>() {
            return EXIT_USAGE;
        }
    }
    EXIT_IO
}

/// Hex string if it looks like one, otherwise a key file path.
fn load_key(spec: &str, role: KeyRole) -> Result<Key> {
    let trimmed = spec.trim();
    if trimmed.len() == 64 && trimmed.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Ok(Key::from_hex(trimmed, role)?);
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("reading {role} key file {spec}"))
        .map_err(|e| anyhow!(UsageError(format!("{e:#}"))))?;
    Key::from_hex(&text, role).with_context(|| format!("key file {spec}"))
}

fn sidecar_for(mesh: &Path) -> PathBuf {
    let mut s = mesh.as_os_str().to_owned();
    s.push(".aux");
    PathBuf::from(s)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

fn load_sidecar(mesh: &Path, explicit: Option<PathBuf>) -> Result<(PathBuf, AuxRecord)> {
    let path = explicit.unwrap_or_else(|| sidecar_for(mesh));
    if !path.exists() {
        return Err(MissingSidecar(path).into());
    }
    let aux = AuxRecord::from_sidecar(&read_text(&path)?)
        .map_err(PipelineError::from)
        .with_context(|| format!("sidecar {}", path.display()))?;
    Ok((path, aux))
}

fn load_marked(path: &Path, aux: &AuxRecord) -> Result<mesh_rdh::IntMesh> {
    pipeline::parse_encrypted_off(&read_text(path)?, aux)
        .with_context(|| format!("mesh {}", path.display()))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Keygen { role, out } => {
            let mut bytes = [0u8; 32];
            rand::RngCore::fill_bytes(&mut rand::rngs::OsRng, &mut bytes);
            let role = match role {
                Role::Encryption => KeyRole::Encryption,
                Role::DataHiding => KeyRole::DataHiding,
            };
            let line = format!("{}\n", Key::new(bytes, role).to_hex());
            match out {
                Some(path) => write_file(&path, line)?,
                None => print!("{line}"),
            }
        }
        Command::Protect {
            input,
            u,
            parity,
            ke,
            out,
            sidecar,
        } => {
            let ke = load_key(&ke, KeyRole::Encryption)?;
            let mesh = mesh_io::parse_off(&read_text(&input)?)
                .map_err(PipelineError::from)
                .with_context(|| format!("mesh {}", input.display()))?;
            let (encrypted, aux) = pipeline::vacate_and_encrypt(&mesh, u, parity, &ke)?;
            write_file(&out, pipeline::encrypted_off_text(&encrypted))?;
            let sidecar = sidecar.unwrap_or_else(|| sidecar_for(&out));
            write_file(&sidecar, aux.to_sidecar())?;
            let label_bits = aux.labels.bit_len() as u64;
            println!(
                "vertices: {}\nembedding vertices: {}\ncapacity_bits: {}\nlabel_bits: {}\nmax_payload_bits: {}",
                encrypted.vertex_count(),
                aux.embedded_count(),
                aux.capacity_bits,
                label_bits,
                aux.capacity_bits.saturating_sub(OVERHEAD_BITS as u64),
            );
            info!("wrote {} and {}", out.display(), sidecar.display());
        }
        Command::Embed {
            input,
            payload,
            kd,
            out,
            sidecar,
        } => {
            let kd = load_key(&kd, KeyRole::DataHiding)?;
            let (_, aux) = load_sidecar(&input, sidecar)?;
            let encrypted = load_marked(&input, &aux)?;
            let data = std::fs::read(&payload)
                .with_context(|| format!("reading {}", payload.display()))?;
            let marked = pipeline::embed(&encrypted, &aux, &BitBuf::from_bytes(&data), &kd)?;
            write_file(&out, pipeline::encrypted_off_text(&marked))?;
            write_file(&sidecar_for(&out), aux.to_sidecar())?;
            println!(
                "embedded {} payload bits ({} of {} slots used)",
                data.len() * 8,
                data.len() * 8 + OVERHEAD_BITS,
                aux.capacity_bits
            );
        }
        Command::Extract {
            input,
            kd,
            out,
            sidecar,
        } => {
            let kd = load_key(&kd, KeyRole::DataHiding)?;
            let (_, aux) = load_sidecar(&input, sidecar)?;
            let marked = load_marked(&input, &aux)?;
            let payload = pipeline::extract(&marked, &aux, &kd)?;
            write_payload(&out, payload)?;
        }
        Command::Recover {
            input,
            ke,
            out,
            sidecar,
            precision,
        } => {
            let ke = load_key(&ke, KeyRole::Encryption)?;
            let (_, aux) = load_sidecar(&input, sidecar)?;
            let marked = load_marked(&input, &aux)?;
            let mesh = pipeline::recover(&marked, &aux, &ke)?;
            write_file(&out, mesh_io::write_off(&mesh, precision))?;
        }
        Command::ExtractRecover {
            input,
            kd,
            ke,
            payload,
            out,
            sidecar,
            precision,
        } => {
            let kd = load_key(&kd, KeyRole::DataHiding)?;
            let ke = load_key(&ke, KeyRole::Encryption)?;
            let (_, aux) = load_sidecar(&input, sidecar)?;
            let marked = load_marked(&input, &aux)?;
            let (data, mesh) = pipeline::extract_and_recover(&marked, &aux, &kd, &ke)?;
            write_payload(&payload, data)?;
            write_file(&out, mesh_io::write_off(&mesh, precision))?;
        }
        Command::Evaluate {
            corpus,
            u_min,
            u_max,
            parity,
            ke,
            kd,
            csv,
        } => {
            if u_min > u_max {
                return Err(UsageError(format!("--u-min {u_min} exceeds --u-max {u_max}")).into());
            }
            let ke = match ke {
                Some(s) => load_key(&s, KeyRole::Encryption)?,
                None => Key::new(evaluate::DEFAULT_KE, KeyRole::Encryption),
            };
            let kd = match kd {
                Some(s) => load_key(&s, KeyRole::DataHiding)?,
                None => Key::new(evaluate::DEFAULT_KD, KeyRole::DataHiding),
            };
            let report = evaluate::run(&corpus, u_min..=u_max, parity, &ke, &kd)?;
            write_file(&csv, &report.csv)?;
            if !report.failed.is_empty() {
                bail!("round trip failed for {}", report.failed.join(", "));
            }
        }
    }
    Ok(())
}

fn write_payload(path: &Path, payload: BitBuf) -> Result<()> {
    if !payload.len().is_multiple_of(8) {
        log::warn!(
            "payload is {} bits; padding the last byte with zeros",
            payload.len()
        );
    }
    write_file(path, payload.into_bytes())
}
