//! Dual loops and their rerouting under intrinsic flips.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::mesh::{FlipQuad, Mesh};
use crate::metric::CornerAngles;

/// A closed chain of triangles, stored as the cyclic sequence of halfedges it
/// crosses. Crossing `h` moves the loop from `face(h)` into `face(twin(h))`.
///
/// Halfedge ids of an edge survive flips of other edges, so a loop only needs
/// local repair when one of the edges next to it is flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLoop {
    crossings: Vec<usize>,
}

/// One triangle visited by a loop: the corner between the entry and exit edges
/// and the turning sign (`+1` counterclockwise, `-1` clockwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Turn {
    pub corner: usize,
    pub sign: i32,
}

impl DualLoop {
    pub fn new(mesh: &Mesh, crossings: Vec<usize>) -> Result<Self> {
        let l = DualLoop { crossings };
        l.validate(mesh)?;
        Ok(l)
    }

    pub fn crossings(&self) -> &[usize] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The same loop traversed in the opposite direction.
    pub fn reversed(&self) -> DualLoop {
        DualLoop {
            crossings: self.crossings.iter().rev().map(|&h| h ^ 1).collect(),
        }
    }

    /// Edges crossed, with multiplicity.
    pub fn crossed_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.crossings.iter().map(|&h| h >> 1)
    }

    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Err(Error::LoopInvalidated("empty loop".into()));
        }
        for m in 0..n {
            let prev = self.crossings[(m + n - 1) % n];
            let cur = self.crossings[m];
            if cur >= mesh.num_halfedges() {
                return Err(Error::LoopInvalidated(format!("halfedge {cur} out of range")));
            }
            let entry = mesh.twin(prev);
            if mesh.face(entry) != mesh.face(cur) {
                return Err(Error::LoopInvalidated(format!(
                    "crossings {prev} and {cur} do not share a triangle"
                )));
            }
            if cur == entry {
                return Err(Error::LoopInvalidated(format!("loop backtracks across halfedge {cur}")));
            }
        }
        Ok(())
    }

    /// Per-triangle corners and turning signs, one per crossing. Entry `m`
    /// describes the triangle between crossings `m - 1` and `m`.
    pub fn turns(&self, mesh: &Mesh) -> Vec<Turn> {
        let n = self.crossings.len();
        (0..n)
            .map(|m| {
                let entry = mesh.twin(self.crossings[(m + n - 1) % n]);
                let exit = self.crossings[m];
                if exit == mesh.next(entry) {
                    // turning around the head of the entry edge, which lies to the right
                    Turn {
                        corner: mesh.tail_corner(exit),
                        sign: -1,
                    }
                } else {
                    debug_assert_eq!(exit, mesh.prev(entry));
                    Turn {
                        corner: mesh.tail_corner(entry),
                        sign: 1,
                    }
                }
            })
            .collect()
    }

    /// Signed sum of the corner angles between consecutive crossed edges.
    pub fn holonomy(&self, mesh: &Mesh, angles: &CornerAngles) -> f64 {
        self.turns(mesh)
            .iter()
            .map(|t| t.sign as f64 * angles.angles[t.corner])
            .sum()
    }

    /// Repairs the loop after `quad.edge` was flipped. `mesh` is the connectivity
    /// after the flip.
    ///
    /// Crossings outside the quad are kept. Every passage through the quad is
    /// replaced by the direct route between the same entry and exit edges, which
    /// crosses the new diagonal iff those edges now lie in different triangles.
    pub fn reroute_after_flip(&mut self, mesh: &Mesh, quad: &FlipQuad) -> Result<()> {
        let flipped = quad.edge;
        let (f0, f1) = (mesh.face(quad.h), mesh.face(quad.t));
        if !self
            .crossings
            .iter()
            .any(|&h| mesh.face(h) == f0 || mesh.face(h) == f1)
        {
            return Ok(());
        }
        let boundary = quad.boundary();
        let kept: Vec<usize> = self
            .crossings
            .iter()
            .copied()
            .filter(|&h| h >> 1 != flipped)
            .collect();
        if kept.is_empty() {
            return Err(Error::LoopInvalidated(
                "loop only crosses the flipped edge".into(),
            ));
        }

        let n = kept.len();
        let mut routed = Vec::with_capacity(n + 4);
        for i in 0..n {
            let p = kept[i];
            let q = kept[(i + 1) % n];
            routed.push(p);
            let entry = mesh.twin(p);
            if boundary.contains(&entry) {
                if !boundary.contains(&q) {
                    return Err(Error::LoopInvalidated(format!(
                        "loop enters the flipped quad across {entry} but leaves across {q}"
                    )));
                }
                let (fin, fout) = (mesh.face(entry), mesh.face(q));
                if fin != fout {
                    let diag = if mesh.face(quad.h) == fin { quad.h } else { quad.t };
                    routed.push(diag);
                }
            }
        }
        self.crossings = cancel_backtracks(routed);
        if self.crossings.is_empty() {
            return Err(Error::LoopInvalidated("loop collapsed to a point".into()));
        }
        self.validate(mesh)
    }
}

/// Removes cyclically adjacent pairs `(h, twin(h))`.
fn cancel_backtracks(seq: Vec<usize>) -> Vec<usize> {
    let mut stack: VecDeque<usize> = VecDeque::with_capacity(seq.len());
    for h in seq {
        if stack.back() == Some(&(h ^ 1)) {
            stack.pop_back();
        } else {
            stack.push_back(h);
        }
    }
    while stack.len() >= 2 && stack.front().map(|&f| f ^ 1) == stack.back().copied() {
        stack.pop_front();
        stack.pop_back();
    }
    stack.into()
}

/// Primal and dual spanning trees used to build homology generators.
#[derive(Debug, Clone)]
pub struct TreeCotree {
    /// For each vertex, the halfedge pointing to it from its parent (`None` at the root).
    pub vertex_parent: Vec<Option<usize>>,
    /// For each face, the halfedge in that face crossing towards its parent.
    pub face_parent: Vec<Option<usize>>,
    pub in_primal_tree: Vec<bool>,
    pub in_dual_tree: Vec<bool>,
    /// Edges in neither tree; there are exactly `2g` of them.
    pub generators: Vec<usize>,
}

impl TreeCotree {
    /// Breadth-first trees rooted at vertex `root_vertex` and face `root_face`.
    pub fn build(mesh: &Mesh, root_vertex: usize, root_face: usize) -> Self {
        let out = mesh.outgoing_halfedges();
        let mut vertex_parent = vec![None; mesh.num_vertices()];
        let mut seen = vec![false; mesh.num_vertices()];
        let mut in_primal_tree = vec![false; mesh.num_edges()];
        let mut queue = VecDeque::from([root_vertex]);
        seen[root_vertex] = true;
        while let Some(v) = queue.pop_front() {
            for &h in &out[v] {
                let w = mesh.head(h);
                if !seen[w] {
                    seen[w] = true;
                    vertex_parent[w] = Some(h);
                    in_primal_tree[mesh.edge(h)] = true;
                    queue.push_back(w);
                }
            }
        }

        let mut face_parent = vec![None; mesh.num_faces()];
        let mut seen = vec![false; mesh.num_faces()];
        let mut in_dual_tree = vec![false; mesh.num_edges()];
        let mut queue = VecDeque::from([root_face]);
        seen[root_face] = true;
        while let Some(f) = queue.pop_front() {
            for h in mesh.face_halfedges(f) {
                if in_primal_tree[mesh.edge(h)] {
                    continue;
                }
                let g = mesh.face(mesh.twin(h));
                if !seen[g] {
                    seen[g] = true;
                    face_parent[g] = Some(mesh.twin(h));
                    in_dual_tree[mesh.edge(h)] = true;
                    queue.push_back(g);
                }
            }
        }

        let generators = (0..mesh.num_edges())
            .filter(|&e| !in_primal_tree[e] && !in_dual_tree[e])
            .collect();
        TreeCotree {
            vertex_parent,
            face_parent,
            in_primal_tree,
            in_dual_tree,
            generators,
        }
    }

    fn face_path_to_root(&self, mesh: &Mesh, mut f: usize) -> Vec<usize> {
        let mut path = vec![f];
        while let Some(h) = self.face_parent[f] {
            f = mesh.face(mesh.twin(h));
            path.push(f);
        }
        path
    }

    /// Dual cycle closed by generator edge `e`: cross `2e`, then walk the dual
    /// tree back to where it started.
    pub fn dual_cycle(&self, mesh: &Mesh, e: usize) -> DualLoop {
        let from = mesh.face(2 * e);
        let to = mesh.face(2 * e + 1);
        let up = self.face_path_to_root(mesh, to);
        let down = self.face_path_to_root(mesh, from);
        // drop the common suffix, keeping the lowest common ancestor once
        let mut i = up.len();
        let mut j = down.len();
        while i > 1 && j > 1 && up[i - 2] == down[j - 2] {
            i -= 1;
            j -= 1;
        }
        let mut crossings = vec![2 * e];
        for &f in &up[..i - 1] {
            crossings.push(self.face_parent[f].expect("non-root face has a parent"));
        }
        for &f in down[..j - 1].iter().rev() {
            crossings.push(mesh.twin(self.face_parent[f].expect("non-root face has a parent")));
        }
        DualLoop { crossings }
    }

    /// Edges of the primal cycle closed by generator edge `e`, starting with `e`.
    pub fn primal_cycle(&self, mesh: &Mesh, e: usize) -> Vec<usize> {
        let path_to_root = |mut v: usize| {
            let mut edges = Vec::new();
            let mut verts = vec![v];
            while let Some(h) = self.vertex_parent[v] {
                edges.push(mesh.edge(h));
                v = mesh.tail(h);
                verts.push(v);
            }
            (edges, verts)
        };
        let (u, v) = mesh.edge_vertices(e);
        let (eu, vu) = path_to_root(u);
        let (ev, vv) = path_to_root(v);
        let mut i = vu.len();
        let mut j = vv.len();
        while i > 1 && j > 1 && vu[i - 2] == vv[j - 2] {
            i -= 1;
            j -= 1;
        }
        let mut cycle = vec![e];
        cycle.extend_from_slice(&eu[..i - 1]);
        cycle.extend_from_slice(&ev[..j - 1]);
        cycle
    }
}

/// `2g` dual loops generating the first homology, by tree–cotree decomposition
/// with both trees grown breadth-first from element 0.
pub fn homology_basis(mesh: &Mesh) -> Vec<DualLoop> {
    let tc = TreeCotree::build(mesh, 0, 0);
    tc.generators
        .iter()
        .map(|&e| tc.dual_cycle(mesh, e))
        .collect()
}
