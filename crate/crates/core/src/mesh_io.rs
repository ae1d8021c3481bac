//! ASCII OFF reading and writing.
//!
//! Vertex order is preserved exactly: ordinal `i` in the file is position `i`
//! in [`FloatMesh::vertices`]. Everything downstream (parity partition,
//! keystream order, slot order) keys on that index.

use std::fmt::Write as _;

use thiserror::Error;

pub type Face = [usize; 3];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OffError {
    #[error("line {line}: expected header \"OFF\", found {found:?}")]
    MalformedHeader { line: usize, found: String },
    #[error("line {line}: unsupported OFF variant ({variant}); only ASCII OFF is accepted")]
    Unsupported { line: usize, variant: String },
    #[error("declared {declared} {what} but found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("line {line}: face references vertex {index}, mesh has {n_vertices} vertices")]
    BadIndex {
        line: usize,
        index: usize,
        n_vertices: usize,
    },
    #[error("line {line}: face has {arity} vertices, only triangles are supported")]
    NonTriangle { line: usize, arity: usize },
    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("mesh has no vertices")]
    Empty,
}

/// Triangle mesh with real-valued coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Face>,
}

impl FloatMesh {
    /// Builds a mesh after checking the face indices, vertex count and
    /// coordinate finiteness.
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<Face>) -> Result<Self, OffError> {
        if vertices.is_empty() {
            return Err(OffError::Empty);
        }
        if let Some(i) = vertices
            .iter()
            .position(|v| v.iter().any(|c| !c.is_finite()))
        {
            return Err(OffError::MalformedLine {
                line: 0,
                msg: format!("vertex {i} has a non-finite coordinate"),
            });
        }
        let n = vertices.len();
        for f in &faces {
            if let Some(&index) = f.iter().find(|&&i| i >= n) {
                return Err(OffError::BadIndex {
                    line: 0,
                    index,
                    n_vertices: n,
                });
            }
        }
        Ok(Self { vertices, faces })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Parses ASCII OFF text. `#` starts a comment running to end of line.
pub fn parse_off(text: &str) -> Result<FloatMesh, OffError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(OffError::MalformedHeader {
        line: 1,
        found: String::new(),
    })?;
    let mut tokens = header.split_whitespace();
    let magic = tokens.next().unwrap_or("");
    if magic != "OFF" {
        return Err(match magic {
            "COFF" | "NOFF" | "CNOFF" | "STOFF" | "4OFF" | "nOFF" => OffError::Unsupported {
                line: hline,
                variant: magic.to_string(),
            },
            _ => OffError::MalformedHeader {
                line: hline,
                found: magic.to_string(),
            },
        });
    }
    // Counts may follow "OFF" on the same line.
    let rest: Vec<&str> = tokens.collect();
    if rest.first() == Some(&"BINARY") {
        return Err(OffError::Unsupported {
            line: hline,
            variant: "OFF BINARY".into(),
        });
    }
    let (cline, counts) = if rest.is_empty() {
        let (l, c) = lines.next().ok_or(OffError::MalformedLine {
            line: hline + 1,
            msg: "missing vertex/face counts".into(),
        })?;
        (l, c.split_whitespace().collect::<Vec<_>>())
    } else {
        (hline, rest)
    };
    if counts.len() < 2 {
        return Err(OffError::MalformedLine {
            line: cline,
            msg: "expected \"<vertices> <faces> <edges>\"".into(),
        });
    }
    let nv: usize = parse_token(counts[0], cline, "vertex count")?;
    let nf: usize = parse_token(counts[1], cline, "face count")?;
    if nv == 0 {
        return Err(OffError::Empty);
    }

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let Some((line, l)) = lines.next() else {
            return Err(OffError::CountMismatch {
                what: "vertices",
                declared: nv,
                found: vertices.len(),
            });
        };
        let mut it = l.split_whitespace();
        let mut v = [0.0; 3];
        for c in &mut v {
            let tok = it.next().ok_or_else(|| OffError::MalformedLine {
                line,
                msg: "vertex needs 3 coordinates".into(),
            })?;
            let x: f64 = parse_token(tok, line, "coordinate")?;
            if !x.is_finite() {
                return Err(OffError::MalformedLine {
                    line,
                    msg: format!("non-finite coordinate {tok:?}"),
                });
            }
            *c = x;
        }
        vertices.push(v);
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let Some((line, l)) = lines.next() else {
            return Err(OffError::CountMismatch {
                what: "faces",
                declared: nf,
                found: faces.len(),
            });
        };
        let mut it = l.split_whitespace();
        let arity: usize = parse_token(it.next().unwrap_or(""), line, "face arity")?;
        if arity != 3 {
            return Err(OffError::NonTriangle { line, arity });
        }
        let mut f = [0usize; 3];
        for slot in &mut f {
            let tok = it.next().ok_or_else(|| OffError::MalformedLine {
                line,
                msg: "face lists fewer indices than its arity".into(),
            })?;
            let index: usize = parse_token(tok, line, "vertex index")?;
            if index >= nv {
                return Err(OffError::BadIndex {
                    line,
                    index,
                    n_vertices: nv,
                });
            }
            *slot = index;
        }
        // Trailing tokens (per-face colors) are ignored.
        faces.push(f);
    }

    let extra = lines.count();
    if extra > 0 {
        return Err(OffError::CountMismatch {
            what: "elements",
            declared: nv + nf,
            found: nv + nf + extra,
        });
    }
    Ok(FloatMesh { vertices, faces })
}

fn parse_token<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, OffError> {
    tok.parse().map_err(|_| OffError::MalformedLine {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

/// Serializes to ASCII OFF with `precision` digits after the decimal point.
/// The edge count is always written as 0.
pub fn write_off(mesh: &FloatMesh, precision: usize) -> String {
    let mut out = String::with_capacity(32 * (mesh.vertices.len() + mesh.faces.len()) + 16);
    out.push_str("OFF\n");
    let _ = writeln!(out, "{} {} 0", mesh.vertices.len(), mesh.faces.len());
    for [x, y, z] in &mesh.vertices {
        let _ = writeln!(out, "{x:.precision$} {y:.precision$} {z:.precision$}");
    }
    for [a, b, c] in &mesh.faces {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TRI: &str = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";

    #[test]
    fn smallest_mesh() {
        let m = parse_off(TRI).unwrap();
        assert_eq!(m.vertices.len(), 3);
        assert_eq!(m.faces, vec![[0, 1, 2]]);
        assert_eq!(m.vertices[1], [1.0, 0.0, 0.0]);
    }

    #[test]
    fn bad_index() {
        let err = parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 9\n").unwrap_err();
        assert!(
            matches!(
                err,
                OffError::BadIndex {
                    index: 9,
                    line: 6,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            parse_off("PLY\n3 1 0\n").unwrap_err(),
            OffError::MalformedHeader { .. }
        ));
        assert!(matches!(
            parse_off("OFF BINARY\n").unwrap_err(),
            OffError::Unsupported { .. }
        ));
        assert!(matches!(
            parse_off("COFF\n3 1 0\n").unwrap_err(),
            OffError::Unsupported { .. }
        ));
    }

    #[test]
    fn count_mismatch() {
        let short = "OFF\n3 1 0\n0 0 0\n1 0 0\n3 0 1 2\n";
        assert!(matches!(
            parse_off(short).unwrap_err(),
            OffError::MalformedLine { .. } | OffError::CountMismatch { .. }
        ));
        let missing_face = "OFF\n3 2 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
        assert_eq!(
            parse_off(missing_face).unwrap_err(),
            OffError::CountMismatch {
                what: "faces",
                declared: 2,
                found: 1
            }
        );
        let extra = format!("{TRI}3 0 1 2\n");
        assert!(matches!(
            parse_off(&extra).unwrap_err(),
            OffError::CountMismatch { .. }
        ));
    }

    #[test]
    fn quad_rejected() {
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert_eq!(
            parse_off(quad).unwrap_err(),
            OffError::NonTriangle { line: 7, arity: 4 }
        );
    }

    #[test]
    fn comments_and_inline_counts() {
        let text = "# a comment\nOFF 3 1 0\n0 0 0 # origin\n1 0 0\n\n0 1 0\n3 0 1 2 255 0 0\n";
        let m = parse_off(text).unwrap();
        assert_eq!(m, parse_off(TRI).unwrap());
    }

    #[test]
    fn write_format() {
        let m = parse_off(TRI).unwrap();
        let s = write_off(&m, 6);
        assert!(s.starts_with("OFF\n3 1 0\n0.000000 0.000000 0.000000\n1.000000 "));
        assert!(s.ends_with("3 0 1 2\n"));
    }

    #[test]
    fn write_without_faces() {
        let m = FloatMesh::new(vec![[0.5, 1.5, 2.5]], vec![]).unwrap();
        let s = write_off(&m, 3);
        assert_eq!(s, "OFF\n1 0 0\n0.500 1.500 2.500\n");
        assert_eq!(parse_off(&s).unwrap(), m);
    }

    fn arb_mesh() -> impl Strategy<Value = FloatMesh> {
        (1usize..30).prop_flat_map(|n| {
            let verts = proptest::collection::vec(
                proptest::array::uniform3(-1000i32..1000).prop_map(|a| a.map(f64::from)),
                n,
            );
            let faces = proptest::collection::vec(proptest::array::uniform3(0..n), 0..40);
            (verts, faces).prop_map(|(v, f)| FloatMesh::new(v, f).unwrap())
        })
    }

    proptest! {
        #[test]
        fn integer_mesh_roundtrip(m in arb_mesh(), p in 0usize..8) {
            prop_assert_eq!(parse_off(&write_off(&m, p)).unwrap(), m);
        }

        #[test]
        fn parse_write_parse_idempotent(
            verts in proptest::collection::vec(proptest::array::uniform3(-1e3f64..1e3), 3..20),
            p in 0usize..10,
        ) {
            let m = FloatMesh::new(verts, vec![[0, 1, 2]]).unwrap();
            let once = parse_off(&write_off(&m, p)).unwrap();
            let twice = parse_off(&write_off(&once, p)).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
