use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus");
const KE: &str = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
const KD: &str = "f0e0d0c0b0a090807060504030201000f0e0d0c0b0a090807060504030201000";

fn mesh_rdh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mesh-rdh"))
        .args(args)
        .output()
        .expect("spawn mesh-rdh")
}

fn ok(args: &[&str]) -> String {
    let out = mesh_rdh(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn corpus(name: &str) -> String {
    format!("{CORPUS}/{name}.off")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

/// Runs protect and embed on the bundled cow at u=5, returning the marked path.
fn protect_and_embed(dir: &TempDir, payload: &[u8]) -> String {
    fs::write(p(dir, "payload.bin"), payload).unwrap();
    ok(&[
        "protect",
        &corpus("cow"),
        "--u",
        "5",
        "--ke",
        KE,
        "--out",
        &p(dir, "enc.off"),
    ]);
    ok(&[
        "embed",
        &p(dir, "enc.off"),
        "--payload",
        &p(dir, "payload.bin"),
        "--kd",
        KD,
        "--out",
        &p(dir, "marked.off"),
    ]);
    p(dir, "marked.off")
}

#[test]
fn full_loop_reproduces_payload_and_mesh() {
    let dir = TempDir::new().unwrap();
    let payload: Vec<u8> = (0..=255u8).cycle().take(1500).collect();
    let marked = protect_and_embed(&dir, &payload);

    ok(&["extract", &marked, "--kd", KD, "--out", &p(&dir, "got.bin")]);
    assert_eq!(fs::read(p(&dir, "got.bin")).unwrap(), payload);

    ok(&[
        "extract-recover",
        &marked,
        "--kd",
        KD,
        "--ke",
        KE,
        "--payload",
        &p(&dir, "got2.bin"),
        "--out",
        &p(&dir, "both.off"),
    ]);
    assert_eq!(fs::read(p(&dir, "got2.bin")).unwrap(), payload);

    // A plain protect/recover cycle with no payload gives the same mesh.
    ok(&["recover", &marked, "--ke", KE, "--out", &p(&dir, "rec.off")]);
    ok(&[
        "recover",
        &p(&dir, "enc.off"),
        "--ke",
        KE,
        "--out",
        &p(&dir, "rec_plain.off"),
    ]);
    let rec = fs::read_to_string(p(&dir, "rec.off")).unwrap();
    assert_eq!(rec, fs::read_to_string(p(&dir, "rec_plain.off")).unwrap());
    assert_eq!(rec, fs::read_to_string(p(&dir, "both.off")).unwrap());

    let original =
        mesh_rdh::mesh_io::parse_off(&fs::read_to_string(corpus("cow")).unwrap()).unwrap();
    let restored = mesh_rdh::mesh_io::parse_off(&rec).unwrap();
    let (_, _, h) = mesh_rdh::metrics::hausdorff(&original.vertices, &restored.vertices).unwrap();
    assert!(h < 1e-4, "{h}");
}

#[test]
fn wrong_data_hiding_key_exits_with_checksum_code() {
    let dir = TempDir::new().unwrap();
    let marked = protect_and_embed(&dir, b"secret");
    let wrong = "11".repeat(32);
    let out = mesh_rdh(&[
        "extract",
        &marked,
        "--kd",
        &wrong,
        "--out",
        &p(&dir, "x.bin"),
    ]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn payload_larger_than_capacity_exits_with_capacity_code() {
    let dir = TempDir::new().unwrap();
    fs::write(p(&dir, "big.bin"), vec![0u8; 64 * 1024]).unwrap();
    ok(&[
        "protect",
        &corpus("mannequin"),
        "--ke",
        KE,
        "--out",
        &p(&dir, "enc.off"),
    ]);
    let out = mesh_rdh(&[
        "embed",
        &p(&dir, "enc.off"),
        "--payload",
        &p(&dir, "big.bin"),
        "--kd",
        KD,
        "--out",
        &p(&dir, "m.off"),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn recover_without_sidecar_reports_missing_sidecar() {
    let dir = TempDir::new().unwrap();
    let marked = protect_and_embed(&dir, b"x");
    fs::remove_file(format!("{marked}.aux")).unwrap();
    let out = mesh_rdh(&["recover", &marked, "--ke", KE, "--out", &p(&dir, "r.off")]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing sidecar"));
}

#[test]
fn explicit_sidecar_path_is_honoured() {
    let dir = TempDir::new().unwrap();
    ok(&[
        "protect",
        &corpus("mushroom"),
        "--ke",
        KE,
        "--out",
        &p(&dir, "enc.off"),
        "--sidecar",
        &p(&dir, "side.txt"),
    ]);
    assert!(!Path::new(&p(&dir, "enc.off.aux")).exists());
    ok(&[
        "recover",
        &p(&dir, "enc.off"),
        "--ke",
        KE,
        "--out",
        &p(&dir, "r.off"),
        "--sidecar",
        &p(&dir, "side.txt"),
    ]);
}

#[test]
fn u_out_of_range_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = mesh_rdh(&[
        "protect",
        &corpus("cow"),
        "--u",
        "10",
        "--ke",
        KE,
        "--out",
        &p(&dir, "e.off"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("u"));
}

#[test]
fn missing_key_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = mesh_rdh(&["protect", &corpus("cow"), "--out", &p(&dir, "e.off")]);
    assert_eq!(out.status.code(), Some(2));
    let out = mesh_rdh(&[
        "protect",
        &corpus("cow"),
        "--ke",
        &p(&dir, "nokey"),
        "--out",
        &p(&dir, "e.off"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreadable_mesh_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    fs::write(p(&dir, "bad.off"), "OFF\n3 1 0\n0 0 0\n").unwrap();
    let out = mesh_rdh(&[
        "protect",
        &p(&dir, "bad.off"),
        "--ke",
        KE,
        "--out",
        &p(&dir, "e.off"),
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn keygen_writes_distinct_hex_keys_usable_everywhere() {
    let dir = TempDir::new().unwrap();
    ok(&["keygen", "--role", "enc", "--out", &p(&dir, "ke")]);
    ok(&["keygen", "--role", "hide", "--out", &p(&dir, "kd")]);
    let a = fs::read_to_string(p(&dir, "ke")).unwrap();
    let b = fs::read_to_string(p(&dir, "kd")).unwrap();
    for k in [&a, &b] {
        assert_eq!(k.len(), 65);
        assert!(k.ends_with('\n'));
        assert!(k[..64].bytes().all(|c| c.is_ascii_hexdigit()));
    }
    assert_ne!(a, b);
    assert_ne!(ok(&["keygen"]), ok(&["keygen"]));

    fs::write(p(&dir, "payload"), b"key files work").unwrap();
    ok(&[
        "protect",
        &corpus("beetle"),
        "--ke",
        &p(&dir, "ke"),
        "--out",
        &p(&dir, "e.off"),
    ]);
    ok(&[
        "embed",
        &p(&dir, "e.off"),
        "--payload",
        &p(&dir, "payload"),
        "--kd",
        &p(&dir, "kd"),
        "--out",
        &p(&dir, "m.off"),
    ]);
    ok(&[
        "extract",
        &p(&dir, "m.off"),
        "--kd",
        &p(&dir, "kd"),
        "--out",
        &p(&dir, "got"),
    ]);
    ok(&[
        "recover",
        &p(&dir, "m.off"),
        "--ke",
        &p(&dir, "ke"),
        "--out",
        &p(&dir, "r.off"),
    ]);
    assert_eq!(fs::read(p(&dir, "got")).unwrap(), b"key files work");
}

#[test]
fn protect_reports_positive_capacity_for_cow() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(&[
        "protect",
        &corpus("cow"),
        "--u",
        "5",
        "--ke",
        KE,
        "--out",
        &p(&dir, "e.off"),
    ]);
    let capacity: u64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("capacity_bits: "))
        .expect("capacity line")
        .parse()
        .unwrap();
    assert!(capacity > 0);
}

#[test]
fn protect_and_embed_are_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let ma = protect_and_embed(&a, b"same input");
    let mb = protect_and_embed(&b, b"same input");
    assert_eq!(fs::read(&ma).unwrap(), fs::read(&mb).unwrap());
    assert_eq!(
        fs::read(format!("{ma}.aux")).unwrap(),
        fs::read(format!("{mb}.aux")).unwrap()
    );
}

fn read_csv(path: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let header = lines.next().unwrap();
    (header, lines.collect())
}

#[test]
fn evaluate_sweeps_corpus() {
    let dir = TempDir::new().unwrap();
    let corpus_dir = dir.path().join("corpus");
    fs::create_dir(&corpus_dir).unwrap();
    for name in ["beetle", "cow", "mannequin", "mushroom"] {
        fs::copy(corpus(name), corpus_dir.join(format!("{name}.off"))).unwrap();
    }
    let csv = p(&dir, "report.csv");
    ok(&[
        "evaluate",
        "--corpus",
        &corpus_dir.to_string_lossy(),
        "--u-min",
        "2",
        "--u-max",
        "9",
        "--csv",
        &csv,
    ]);

    let (header, rows) = read_csv(&csv);
    assert_eq!(rows.len(), 32);
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("{name}"))
    };
    let (mesh, u) = (col("mesh"), col("u"));
    let (net_c, net_u) = (col("er_net_bpv"), col("er_net_uncompressed_bpv"));
    let ok_col = col("roundtrip_ok");

    let mut keys: Vec<(String, u32)> = rows
        .iter()
        .map(|r| (r[mesh].clone(), r[u].parse().unwrap()))
        .collect();
    let sorted = {
        let mut s = keys.clone();
        s.sort();
        s
    };
    assert_eq!(keys, sorted, "rows sorted by (mesh, u)");
    keys.dedup();
    assert_eq!(keys.len(), 32);

    for r in &rows {
        assert_eq!(r.len(), header.len());
        assert_eq!(r[ok_col], "true");
        let c: f64 = r[net_c].parse().unwrap();
        let f: f64 = r[net_u].parse().unwrap();
        assert!(c >= f, "{r:?}");
    }
    for name in ["beetle", "cow", "mannequin", "mushroom"] {
        let best = rows
            .iter()
            .filter(|r| r[mesh] == name)
            .max_by(|a, b| {
                a[net_c]
                    .parse::<f64>()
                    .unwrap()
                    .total_cmp(&b[net_c].parse().unwrap())
            })
            .unwrap();
        assert_eq!(best[u], "5", "{name}");
    }
}

#[test]
fn evaluate_skips_unreadable_meshes() {
    let dir = TempDir::new().unwrap();
    let corpus_dir: PathBuf = dir.path().join("corpus");
    fs::create_dir(&corpus_dir).unwrap();
    fs::copy(corpus("mannequin"), corpus_dir.join("mannequin.off")).unwrap();
    fs::write(corpus_dir.join("broken.off"), "not a mesh").unwrap();
    let csv = p(&dir, "r.csv");
    let args = [
        "evaluate",
        "--corpus",
        corpus_dir.to_str().unwrap(),
        "--u-min",
        "4",
        "--u-max",
        "5",
        "--csv",
        &csv,
    ];
    ok(&args);
    assert_eq!(read_csv(&csv).1.len(), 2);

    fs::remove_file(corpus_dir.join("mannequin.off")).unwrap();
    assert_eq!(mesh_rdh(&args).status.code(), Some(5));
}
