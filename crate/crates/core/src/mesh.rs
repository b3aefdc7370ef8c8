//! Halfedge connectivity for closed, oriented, manifold triangle meshes.
//!
//! Halfedges are numbered per edge: edge `e` owns halfedges `2e` and `2e + 1`,
//! so `twin(h) = h ^ 1`. Each face stores one "first" halfedge; corner `3f + s`
//! sits at the tail of the halfedge in slot `s` of face `f` and is opposite the
//! halfedge in slot `s + 1`.
//!
//! The connectivity is a Δ-complex rather than a simplicial complex: several
//! edges may join the same pair of vertices, and an edge may appear twice in
//! one face. Intrinsic flips create such configurations routinely.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

const MAX_GLUING_ATTEMPTS: usize = 1 << 16;

/// Rearranges `v` into the next lexicographic permutation, wrapping to the
/// first one and returning `false` after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A corner of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub face: usize,
    pub slot: usize,
    pub vertex: usize,
    pub opposite_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    num_vertices: usize,
    next: Vec<usize>,
    head: Vec<usize>,
    face_of: Vec<usize>,
    face_he: Vec<usize>,
}

/// Halfedges of the quad around a flipped edge, as seen before the flip.
///
/// `h` and `t` are the two halfedges of the flipped edge; `h1, h2` follow `h`
/// in its face and `t1, t2` follow `t`. Ids of the boundary halfedges do not
/// change under a flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipQuad {
    pub edge: usize,
    pub h: usize,
    pub h1: usize,
    pub h2: usize,
    pub t: usize,
    pub t1: usize,
    pub t2: usize,
}

impl FlipQuad {
    pub fn boundary(&self) -> [usize; 4] {
        [self.h1, self.h2, self.t1, self.t2]
    }
}

impl Mesh {
    /// Builds a mesh from a list of oriented triangles.
    ///
    /// Edges are numbered by `(min vertex, max vertex, first face)`. When several
    /// faces share the same vertex pair, halfedges running in opposite directions
    /// are paired so that the result is connected and manifold at every vertex.
    pub fn from_faces(faces: &[[usize; 3]]) -> Result<Self> {
        let num_vertices = faces.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
        Self::from_faces_with_vertex_count(faces, num_vertices)
    }

    pub fn from_faces_with_vertex_count(faces: &[[usize; 3]], num_vertices: usize) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::Empty);
        }
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                if v >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        face: f,
                        vertex: v,
                        num_vertices,
                    });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::RepeatedVertex { face: f });
            }
        }

        // (min, max) -> (forward halfedges, backward halfedges), each as (face, slot)
        let mut pairs: BTreeMap<(usize, usize), (Vec<(usize, usize)>, Vec<(usize, usize)>)> =
            BTreeMap::new();
        for (f, tri) in faces.iter().enumerate() {
            for s in 0..3 {
                let (a, b) = (tri[s], tri[(s + 1) % 3]);
                let entry = pairs.entry((a.min(b), a.max(b))).or_default();
                if a < b {
                    entry.0.push((f, s));
                } else {
                    entry.1.push((f, s));
                }
            }
        }

        struct Group {
            lo: usize,
            hi: usize,
            fwd: Vec<(usize, usize)>,
            bwd: Vec<(usize, usize)>,
        }
        let mut groups = Vec::new();
        for ((lo, hi), (fwd, bwd)) in pairs {
            if fwd.len() != bwd.len() {
                let total = fwd.len() + bwd.len();
                return Err(if total == 1 {
                    Error::BoundaryDetected(lo, hi)
                } else if total == 2 {
                    Error::InconsistentOrientation(lo, hi)
                } else {
                    Error::NonManifoldEdge(lo, hi)
                });
            }
            groups.push(Group { lo, hi, fwd, bwd });
        }

        // Vertex pairs joined by several edges admit several gluings; take the
        // first (in lexicographic permutation order) that is manifold everywhere.
        let ambiguous: Vec<usize> = (0..groups.len()).filter(|&g| groups[g].fwd.len() > 1).collect();
        let mut perms: Vec<Vec<usize>> = groups.iter().map(|g| (0..g.bwd.len()).collect()).collect();
        let mut attempts = 0usize;
        loop {
            let mut protos: Vec<((usize, usize, usize), (usize, usize), (usize, usize))> = Vec::new();
            for (g, grp) in groups.iter().enumerate() {
                for (i, &a) in grp.fwd.iter().enumerate() {
                    let b = grp.bwd[perms[g][i]];
                    let (first, second) = if a < b { (a, b) } else { (b, a) };
                    protos.push(((grp.lo, grp.hi, first.0), first, second));
                }
            }
            protos.sort();
            let mesh = Self::assemble(faces, num_vertices, &protos);
            match mesh.check_connected().and_then(|_| mesh.check_vertex_fans()) {
                Ok(()) => return Ok(mesh),
                Err(err) => {
                    attempts += 1;
                    if ambiguous.is_empty() || attempts >= MAX_GLUING_ATTEMPTS {
                        return Err(err);
                    }
                    // advance the mixed-radix counter of permutations
                    let mut advanced = false;
                    for &g in &ambiguous {
                        if next_permutation(&mut perms[g]) {
                            advanced = true;
                            break;
                        }
                    }
                    if !advanced {
                        return Err(err);
                    }
                }
            }
        }
    }

    fn assemble(
        faces: &[[usize; 3]],
        num_vertices: usize,
        protos: &[((usize, usize, usize), (usize, usize), (usize, usize))],
    ) -> Self {
        let num_faces = faces.len();
        let mut slot_he = vec![[usize::MAX; 3]; num_faces];
        for (e, &(_, first, second)) in protos.iter().enumerate() {
            slot_he[first.0][first.1] = 2 * e;
            slot_he[second.0][second.1] = 2 * e + 1;
        }

        let num_he = 2 * protos.len();
        let mut next = vec![0; num_he];
        let mut head = vec![0; num_he];
        let mut face_of = vec![0; num_he];
        let mut face_he = vec![0; num_faces];
        for (f, tri) in faces.iter().enumerate() {
            for s in 0..3 {
                let h = slot_he[f][s];
                next[h] = slot_he[f][(s + 1) % 3];
                head[h] = tri[(s + 1) % 3];
                face_of[h] = f;
            }
            face_he[f] = slot_he[f][0];
        }

        Mesh {
            num_vertices,
            next,
            head,
            face_of,
            face_he,
        }
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.num_faces()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(f) = queue.pop_front() {
            for h in self.face_halfedges(f) {
                let g = self.face(self.twin(h));
                if !seen[g] {
                    seen[g] = true;
                    count += 1;
                    queue.push_back(g);
                }
            }
        }
        if count != self.num_faces() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    fn check_vertex_fans(&self) -> Result<()> {
        let mut outgoing = vec![0usize; self.num_vertices];
        let mut any_out = vec![usize::MAX; self.num_vertices];
        for h in 0..self.num_halfedges() {
            let v = self.tail(h);
            outgoing[v] += 1;
            any_out[v] = any_out[v].min(h);
        }
        for v in 0..self.num_vertices {
            if outgoing[v] == 0 {
                return Err(Error::Disconnected);
            }
            let start = any_out[v];
            let mut h = start;
            let mut fan = 0;
            loop {
                fan += 1;
                h = self.next(self.twin(h));
                if h == start {
                    break;
                }
            }
            if fan != outgoing[v] {
                return Err(Error::NonManifoldVertex(v));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.next.len() / 2
    }

    pub fn num_halfedges(&self) -> usize {
        self.next.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_he.len()
    }

    pub fn num_corners(&self) -> usize {
        3 * self.num_faces()
    }

    #[inline]
    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    #[inline]
    pub fn prev(&self, h: usize) -> usize {
        self.next[self.next[h]]
    }

    #[inline]
    pub fn twin(&self, h: usize) -> usize {
        h ^ 1
    }

    #[inline]
    pub fn edge(&self, h: usize) -> usize {
        h >> 1
    }

    #[inline]
    pub fn head(&self, h: usize) -> usize {
        self.head[h]
    }

    #[inline]
    pub fn tail(&self, h: usize) -> usize {
        self.head[h ^ 1]
    }

    #[inline]
    pub fn face(&self, h: usize) -> usize {
        self.face_of[h]
    }

    pub fn face_halfedge(&self, f: usize) -> usize {
        self.face_he[f]
    }

    /// Halfedges of face `f` in slot order.
    pub fn face_halfedges(&self, f: usize) -> [usize; 3] {
        let h0 = self.face_he[f];
        let h1 = self.next[h0];
        [h0, h1, self.next[h1]]
    }

    pub fn face_vertices(&self, f: usize) -> [usize; 3] {
        self.face_halfedges(f).map(|h| self.tail(h))
    }

    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_halfedges(f).map(|h| self.edge(h))
    }

    /// Slot of `h` within its face.
    pub fn slot(&self, h: usize) -> usize {
        let h0 = self.face_he[self.face_of[h]];
        if h == h0 {
            0
        } else if h == self.next[h0] {
            1
        } else {
            2
        }
    }

    /// Corner at the tail of `h`.
    pub fn tail_corner(&self, h: usize) -> usize {
        3 * self.face_of[h] + self.slot(h)
    }

    /// Corner of `h`'s face that lies opposite `h`.
    pub fn opposite_corner(&self, h: usize) -> usize {
        self.tail_corner(self.prev(h))
    }

    pub fn corner(&self, c: usize) -> Corner {
        let (face, slot) = (c / 3, c % 3);
        let h = self.face_halfedges(face)[slot];
        Corner {
            face,
            slot,
            vertex: self.tail(h),
            opposite_edge: self.edge(self.next(h)),
        }
    }

    pub fn corner_vertex(&self, c: usize) -> usize {
        self.tail(self.face_halfedges(c / 3)[c % 3])
    }

    /// Endpoints of edge `e` as `(tail(2e), head(2e))`.
    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        (self.tail(2 * e), self.head(2 * e))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for h in 0..self.num_halfedges() {
            deg[self.tail(h)] += 1;
        }
        deg
    }

    /// Outgoing halfedges of every vertex, in increasing id order.
    pub fn outgoing_halfedges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vertices];
        for h in 0..self.num_halfedges() {
            out[self.tail(h)].push(h);
        }
        out
    }

    /// Oriented faces as vertex triples, in slot order.
    pub fn faces(&self) -> Vec<[usize; 3]> {
        (0..self.num_faces()).map(|f| self.face_vertices(f)).collect()
    }

    /// Whether edge `e` can be flipped, i.e. its two sides belong to different faces.
    pub fn is_flippable(&self, e: usize) -> bool {
        self.face_of[2 * e] != self.face_of[2 * e + 1]
    }

    /// Halfedges of the quad around `e` in the current connectivity.
    pub fn quad(&self, e: usize) -> FlipQuad {
        let h = 2 * e;
        let t = h + 1;
        FlipQuad {
            edge: e,
            h,
            h1: self.next[h],
            h2: self.next[self.next[h]],
            t,
            t1: self.next[t],
            t2: self.next[self.next[t]],
        }
    }

    /// Swaps the diagonal of the quad around `e`.
    ///
    /// Edge `e` keeps its id and its halfedges `2e`, `2e + 1`; the faces of the
    /// quad keep their ids, with the first halfedge of each set to the new diagonal.
    pub fn flip(&mut self, e: usize) -> Result<FlipQuad> {
        if e >= self.num_edges() {
            return Err(Error::UnflippableEdge(e));
        }
        if !self.is_flippable(e) {
            return Err(Error::UnflippableEdge(e));
        }
        let q = self.quad(e);
        let f0 = self.face_of[q.h];
        let f1 = self.face_of[q.t];
        let w = self.head[q.h1];
        let x = self.head[q.t1];

        // f0 becomes (w -> x, x -> v, v -> w), f1 becomes (x -> w, w -> u, u -> x)
        self.head[q.h] = x;
        self.head[q.t] = w;
        self.next[q.h] = q.t2;
        self.next[q.t2] = q.h1;
        self.next[q.h1] = q.h;
        self.next[q.t] = q.h2;
        self.next[q.h2] = q.t1;
        self.next[q.t1] = q.t;
        self.face_of[q.t2] = f0;
        self.face_of[q.h2] = f1;
        self.face_he[f0] = q.h;
        self.face_he[f1] = q.t;
        Ok(q)
    }

    /// Plain-text connectivity dump: a face section and an edge section.
    pub fn write_connectivity<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "# vertices {} edges {} faces {}",
            self.num_vertices,
            self.num_edges(),
            self.num_faces()
        )?;
        writeln!(out, "faces")?;
        for f in 0..self.num_faces() {
            let [a, b, c] = self.face_vertices(f);
            let [ea, eb, ec] = self.face_edges(f);
            writeln!(out, "{f} {a} {b} {c} {ea} {eb} {ec}")?;
        }
        writeln!(out, "edges")?;
        for e in 0..self.num_edges() {
            let (u, v) = self.edge_vertices(e);
            writeln!(out, "{e} {u} {v} {} {}", self.face_of[2 * e], self.face_of[2 * e + 1])?;
        }
        Ok(())
    }

    /// Checks the structural invariants; used by tests and debug assertions.
    pub fn validate(&self) -> Result<()> {
        for h in 0..self.num_halfedges() {
            if self.next[self.next[self.next[h]]] != h {
                return Err(Error::LoopInvalidated(format!("next^3 != id at halfedge {h}")));
            }
            if self.face_of[self.next[h]] != self.face_of[h] {
                return Err(Error::LoopInvalidated(format!("face mismatch at halfedge {h}")));
            }
            if self.head[h] != self.tail(self.next[h]) {
                return Err(Error::LoopInvalidated(format!("broken chain at halfedge {h}")));
            }
        }
        for f in 0..self.num_faces() {
            if self.face_of[self.face_he[f]] != f {
                return Err(Error::LoopInvalidated(format!("face {f} first halfedge")));
            }
        }
        self.check_vertex_fans()
    }
}
