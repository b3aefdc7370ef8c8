//! Homology dual loops on the genus-two fixture, carried through two different
//! Delaunay flip sequences.
//!
//! Ptolemy flips of non-Delaunay edges change the Euclidean metric, so loop
//! holonomy is only comparable between triangulations of the same metric. Both
//! queue orders end on the same Delaunay metric with differently rerouted loops.

use seamless_metric::fixtures;
use seamless_metric::holonomy::{homology_basis, TreeCotree};
use seamless_metric::metric::{corner_angles, make_delaunay_with_loops, DelaunayOptions, QueueOrder};

fn main() -> seamless_metric::Result<()> {
    let fx = fixtures::genus_two();
    let tc = TreeCotree::build(&fx.mesh, 0, 0);
    println!("genus {}, {} generators", fx.mesh.genus(), tc.generators.len());

    let lambda: Vec<f64> = (0..fx.mesh.num_edges()).map(|e| 0.6 * (e as f64 * 0.7).sin()).collect();
    let loops = homology_basis(&fx.mesh);

    let fifo = make_delaunay_with_loops(&fx.mesh, &lambda, &loops, &DelaunayOptions::default())?;
    let lifo = make_delaunay_with_loops(
        &fx.mesh,
        &lambda,
        &loops,
        &DelaunayOptions {
            order: QueueOrder::Lifo,
            ..Default::default()
        },
    )?;
    println!("flips: {} (FIFO), {} (LIFO)", fifo.num_flips(), lifo.num_flips());
    let a = corner_angles(&fifo.mesh, &fifo.lambda)?;
    let b = corner_angles(&lifo.mesh, &lifo.lambda)?;
    for (i, (la, lb)) in fifo.loops.iter().zip(&lifo.loops).enumerate() {
        println!(
            "loop {i}: {} crossings before, {} / {} after, holonomy {:+.12} / {:+.12}",
            loops[i].len(),
            la.len(),
            lb.len(),
            la.holonomy(&fifo.mesh, &a),
            lb.holonomy(&lifo.mesh, &b)
        );
    }
    Ok(())
}
