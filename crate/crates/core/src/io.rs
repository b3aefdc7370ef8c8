//! Mesh input and output.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::layout::{ConstraintDeviation, LayoutResult};
use crate::mesh::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub struct ObjMesh {
    pub positions: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

/// Reads positions and triangles from an OBJ file; other attributes are ignored.
/// Vertices keep their order in the file.
pub fn read_obj(path: impl AsRef<Path>) -> Result<ObjMesh> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_obj_from(std::io::BufReader::new(file))
}

pub fn parse_obj(text: &str) -> Result<ObjMesh> {
    parse_obj_from(text.as_bytes())
}

fn parse_obj_from(input: impl std::io::BufRead) -> Result<ObjMesh> {
    use obj::raw::object::Polygon;
    let raw = obj::raw::parse_obj(input).map_err(|e| Error::Parse(format!("obj: {e}")))?;
    let positions: Vec<[f64; 3]> = raw
        .positions
        .iter()
        .map(|&(x, y, z, _)| [x as f64, y as f64, z as f64])
        .collect();
    let faces = raw
        .polygons
        .iter()
        .map(|p| {
            let idx: Vec<usize> = match p {
                Polygon::P(v) => v.clone(),
                Polygon::PT(v) => v.iter().map(|x| x.0).collect(),
                Polygon::PN(v) => v.iter().map(|x| x.0).collect(),
                Polygon::PTN(v) => v.iter().map(|x| x.0).collect(),
            };
            match idx[..] {
                [a, b, c] => Ok([a, b, c]),
                _ => Err(Error::Parse("only triangular faces are supported".into())),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if faces.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&v) = faces.iter().flatten().find(|&&v| v >= positions.len()) {
        return Err(Error::Parse(format!("face refers to missing vertex {}", v + 1)));
    }
    Ok(ObjMesh { positions, faces })
}

/// Writes the laid-out mesh: vertex positions (or zeros when unknown), one
/// texture coordinate per corner, and the faces of `mesh`.
pub fn write_obj_with_uv<W: Write>(
    mut out: W,
    mesh: &Mesh,
    positions: Option<&[[f64; 3]]>,
    layout: &LayoutResult,
) -> std::io::Result<()> {
    for v in 0..mesh.num_vertices() {
        let p = positions.map_or([0.0; 3], |p| p[v]);
        writeln!(out, "v {} {} {}", p[0], p[1], p[2])?;
    }
    for uv in &layout.uv {
        writeln!(out, "vt {} {}", uv[0], uv[1])?;
    }
    for f in 0..mesh.num_faces() {
        let vs = mesh.face_vertices(f);
        write!(out, "f")?;
        for s in 0..3 {
            write!(out, " {}/{}", vs[s] + 1, 3 * f + s + 1)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Per-edge CSV: `edge,lambda0,lambda,stretch`.
pub fn write_stretch_csv<W: Write>(mut out: W, lambda0: &[f64], lambda: &[f64], stretch: &[f64]) -> std::io::Result<()> {
    writeln!(out, "edge,lambda0,lambda,stretch")?;
    for e in 0..lambda.len() {
        writeln!(out, "{e},{},{},{}", lambda0[e], lambda[e], stretch[e])?;
    }
    Ok(())
}

/// Per-constraint CSV: `kind,index,target,achieved,deviation`.
pub fn write_deviation_csv<W: Write>(mut out: W, rows: &[ConstraintDeviation]) -> std::io::Result<()> {
    writeln!(out, "kind,index,target,achieved,deviation")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.kind, r.index, r.target, r.achieved, r.deviation())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::layout::lay_out;

    const TETRA: &str = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 4 3\nf 1 2 4\nf 2 3 4\n";

    #[test]
    fn parses_triangles() {
        let m = parse_obj(TETRA).unwrap();
        assert_eq!(m.positions.len(), 4);
        assert_eq!(m.faces[0], [0, 2, 1]);
        let mesh = Mesh::from_faces(&m.faces).unwrap();
        assert_eq!(mesh.genus(), 0);
    }

    #[test]
    fn rejects_quads_and_empty_input() {
        assert!(matches!(
            parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_obj("v 0 0 0\n"), Err(Error::Empty)));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(read_obj("/nonexistent/x.obj"), Err(Error::Io(_))));
    }

    #[test]
    fn obj_round_trip_with_uv() {
        let fx = fixtures::octahedron();
        let lay = lay_out(&fx.mesh, &fx.lambda).unwrap();
        let mut buf = Vec::new();
        write_obj_with_uv(&mut buf, &fx.mesh, Some(&fixtures::octahedron_positions()), &lay).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("vt ")).count(), 24);
        let back = parse_obj(&text).unwrap();
        assert_eq!(back.faces, fx.mesh.faces());
    }
}
