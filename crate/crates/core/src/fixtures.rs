//! Small closed meshes with initial Penner coordinates.
//!
//! These are used throughout the tests and examples. All fixtures start from
//! `λ = 0`, i.e. every triangle equilateral, unless noted otherwise.

use crate::mesh::Mesh;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub mesh: Mesh,
    pub lambda: Vec<f64>,
}

impl Fixture {
    fn equilateral(faces: &[[usize; 3]]) -> Self {
        let mesh = Mesh::from_faces(faces).expect("fixture faces are valid");
        let lambda = vec![0.0; mesh.num_edges()];
        Fixture { mesh, lambda }
    }
}

/// Regular tetrahedron with unit edges.
pub fn tetrahedron() -> Fixture {
    Fixture::equilateral(&[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]])
}

/// Regular octahedron with unit edges. Vertex 5 is the `-z` apex.
pub fn octahedron() -> Fixture {
    Fixture::equilateral(&octahedron_faces())
}

pub fn octahedron_faces() -> Vec<[usize; 3]> {
    // 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z
    vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ]
}

pub fn octahedron_positions() -> Vec<[f64; 3]> {
    vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ]
}

/// Periodic `nx × ny` grid with each cell split along the same diagonal.
///
/// With `λ = 0` every vertex has six equilateral triangles, so the metric is flat.
pub fn torus_grid(nx: usize, ny: usize) -> Fixture {
    Fixture::equilateral(&torus_grid_faces(nx, ny))
}

pub fn torus_grid_faces(nx: usize, ny: usize) -> Vec<[usize; 3]> {
    assert!(nx >= 2 && ny >= 2, "torus grid needs at least 2x2 cells");
    let id = |i: usize, j: usize| (i % nx) + nx * (j % ny);
    let mut faces = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    faces
}

/// Positions of the grid torus embedded in 3D as a torus of revolution.
pub fn torus_grid_positions(nx: usize, ny: usize, major: f64, minor: f64) -> Vec<[f64; 3]> {
    let mut pos = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let u = std::f64::consts::TAU * i as f64 / nx as f64;
            let v = std::f64::consts::TAU * j as f64 / ny as f64;
            let r = major + minor * v.cos();
            pos.push([r * u.cos(), r * u.sin(), minor * v.sin()]);
        }
    }
    pos
}

/// Seven-vertex (Möbius) torus.
pub fn seven_vertex_torus_faces() -> Vec<[usize; 3]> {
    let mut faces = Vec::with_capacity(14);
    for i in 0..7 {
        faces.push([i, (i + 1) % 7, (i + 3) % 7]);
        faces.push([i, (i + 3) % 7, (i + 2) % 7]);
    }
    faces
}

/// Genus-2 surface with 16 vertices: a 3×3 grid torus and the seven-vertex torus,
/// each with one triangle removed, joined by a triangulated tube.
pub fn genus_two() -> Fixture {
    Fixture::equilateral(&genus_two_faces())
}

pub fn genus_two_faces() -> Vec<[usize; 3]> {
    let mut first = torus_grid_faces(3, 3);
    let removed_a = first.remove(0);
    let mut second: Vec<[usize; 3]> = seven_vertex_torus_faces()
        .into_iter()
        .map(|f| f.map(|v| v + 9))
        .collect();
    let removed_b = second.remove(0);

    let mut faces = first;
    faces.extend(second);
    for i in 0..3 {
        let a0 = removed_a[i];
        let a1 = removed_a[(i + 1) % 3];
        let b0 = removed_b[(3 - i) % 3];
        let b1 = removed_b[(3 - (i + 1) % 3) % 3];
        faces.push([a0, a1, b1]);
        faces.push([a0, b1, b0]);
    }
    faces
}

/// Flat grid torus whose lattice is sheared: vertex `(i, j)` sits at
/// `(i + shear·j, height·j)`. Large shears give obtuse, non-Delaunay triangles.
pub fn sheared_torus(nx: usize, ny: usize, shear: f64, height: f64) -> Fixture {
    assert!(nx >= 3 && ny >= 3, "offsets are ambiguous below 3x3");
    let mesh = Mesh::from_faces(&torus_grid_faces(nx, ny)).expect("fixture faces are valid");
    let wrap = |d: usize, n: usize| match d {
        0 => 0.0,
        1 => 1.0,
        _ if d == n - 1 => -1.0,
        _ => unreachable!("grid edges join neighbouring cells"),
    };
    let lambda = (0..mesh.num_edges())
        .map(|e| {
            let (u, v) = mesh.edge_vertices(e);
            let di = wrap((v % nx + nx - u % nx) % nx, nx);
            let dj = wrap((v / nx + ny - u / nx) % ny, ny);
            let x = di + shear * dj;
            let y = height * dj;
            (x * x + y * y).ln()
        })
        .collect();
    Fixture { mesh, lambda }
}
