//! Independent geometry used as an oracle: law-of-cosines angles, metric
//! preserving (Euclidean) flips, and loop holonomy summed by hand.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seamless_metric::holonomy::DualLoop;
use seamless_metric::mesh::{FlipQuad, Mesh};
use seamless_metric::metric::corner_angles;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn len(lambda: &[f64], mesh: &Mesh, h: usize) -> f64 {
    (lambda[mesh.edge(h)] / 2.0).exp()
}

fn angle_from_sides(a: f64, b: f64, opposite: f64) -> f64 {
    ((a * a + b * b - opposite * opposite) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
}

/// Angle at the tail of `h`, inside the face of `h`.
pub fn angle_at_tail(mesh: &Mesh, lambda: &[f64], h: usize) -> f64 {
    let p = mesh.prev(h);
    let n = mesh.next(h);
    angle_from_sides(len(lambda, mesh, h), len(lambda, mesh, p), len(lambda, mesh, n))
}

/// Angle opposite `h` in the face of `h`.
pub fn angle_opposite(mesh: &Mesh, lambda: &[f64], h: usize) -> f64 {
    angle_at_tail(mesh, lambda, mesh.prev(h))
}

pub fn vertex_angle_sums(mesh: &Mesh, lambda: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; mesh.num_vertices()];
    for h in 0..mesh.num_halfedges() {
        sums[mesh.tail(h)] += angle_at_tail(mesh, lambda, h);
    }
    sums
}

/// Whether the quad around `e` is strictly convex at both ends of `e`, so that
/// swapping the diagonal keeps the metric.
pub fn euclidean_flippable(mesh: &Mesh, lambda: &[f64], e: usize) -> bool {
    if !mesh.is_flippable(e) {
        return false;
    }
    let (h, t) = (2 * e, 2 * e + 1);
    let at_u = angle_at_tail(mesh, lambda, h) + angle_at_tail(mesh, lambda, mesh.next(t));
    let at_v = angle_at_tail(mesh, lambda, t) + angle_at_tail(mesh, lambda, mesh.next(h));
    at_u < std::f64::consts::PI - 1e-9 && at_v < std::f64::consts::PI - 1e-9
}

/// Flip `e` keeping the metric: the new diagonal is measured across the
/// unfolded quad.
pub fn euclidean_flip(mesh: &mut Mesh, lambda: &mut [f64], e: usize) -> FlipQuad {
    let q = mesh.quad(e);
    // h = u->v, h1 = v->w, h2 = w->u, t1 = u->x, t2 = x->v
    let a = angle_at_tail(mesh, lambda, q.h) + angle_at_tail(mesh, lambda, q.t1);
    let uw = len(lambda, mesh, q.h2);
    let ux = len(lambda, mesh, q.t1);
    let wx2 = uw * uw + ux * ux - 2.0 * uw * ux * a.cos();
    let q2 = mesh.flip(e).expect("flippable");
    lambda[e] = wx2.ln();
    q2
}

pub fn is_delaunay_edge(mesh: &Mesh, lambda: &[f64], e: usize) -> bool {
    !mesh.is_flippable(e)
        || angle_opposite(mesh, lambda, 2 * e) + angle_opposite(mesh, lambda, 2 * e + 1)
            <= std::f64::consts::PI + 1e-10
}

/// Holonomy of a loop: between consecutive crossings the loop turns around
/// the vertex shared by the entry and exit edge, by the corner angle there.
pub fn holonomy(mesh: &Mesh, lambda: &[f64], l: &DualLoop) -> f64 {
    let c = l.crossings();
    let n = c.len();
    let mut total = 0.0;
    for i in 0..n {
        let entry = mesh.twin(c[i]);
        let exit = c[(i + 1) % n];
        assert_eq!(mesh.face(entry), mesh.face(exit), "loop is not connected");
        if mesh.next(entry) == exit {
            total -= angle_at_tail(mesh, lambda, exit);
        } else {
            assert_eq!(mesh.next(exit), entry, "entry and exit coincide");
            total += angle_at_tail(mesh, lambda, entry);
        }
    }
    total
}

/// Uniform perturbation of `base` by up to `amp`, resampled until every
/// triangle is valid.
pub fn random_metric(mesh: &Mesh, base: &[f64], amp: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let l: Vec<f64> = base.iter().map(|b| b + rng.gen_range(-amp..=amp)).collect();
        if corner_angles(mesh, &l).is_ok() {
            return l;
        }
    }
}
