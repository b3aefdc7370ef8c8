//! Intrinsic Delaunay flips on a sheared flat torus, and the chain-rule
//! Jacobian of the flip sequence checked against finite differences.

use seamless_metric::fixtures;
use seamless_metric::metric::{diff_make_delaunay, is_delaunay_mesh, make_delaunay, DelaunayOptions, QueueOrder};

fn main() -> seamless_metric::Result<()> {
    let fx = fixtures::sheared_torus(5, 4, 2.3, 0.4);
    let opts = DelaunayOptions::default();
    println!(
        "input: {} edges, Delaunay: {}",
        fx.mesh.num_edges(),
        is_delaunay_mesh(&fx.mesh, &fx.lambda, opts.epsilon)
    );

    let trace = diff_make_delaunay(&fx.mesh, &fx.lambda, &[], &opts)?;
    println!(
        "{} flips, output Delaunay: {}",
        trace.num_flips(),
        is_delaunay_mesh(&trace.mesh, &trace.lambda, opts.epsilon)
    );

    let lifo = make_delaunay(&fx.mesh, &fx.lambda, &DelaunayOptions { order: QueueOrder::Lifo, ..opts })?;
    let mut a = trace.lambda.clone();
    let mut b = lifo.lambda.clone();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let spread = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("FIFO vs LIFO: {} vs {} flips, length multiset difference {spread:.2e}", trace.num_flips(), lifo.num_flips());

    // column 0 of dλ̃/dλ by central differences
    let d = trace.jacobian();
    let h = 1e-6;
    let mut worst = 0.0f64;
    let (mut plus, mut minus) = (fx.lambda.clone(), fx.lambda.clone());
    plus[0] += h;
    minus[0] -= h;
    let p = make_delaunay(&fx.mesh, &plus, &opts)?;
    let m = make_delaunay(&fx.mesh, &minus, &opts)?;
    for e in 0..fx.mesh.num_edges() {
        let fd = (p.lambda[e] - m.lambda[e]) / (2.0 * h);
        let exact = d.get_entry(e, 0).map_or(0.0, |x| x.into_value());
        worst = worst.max((fd - exact).abs());
    }
    println!("Jacobian column 0 vs finite differences: max error {worst:.2e}");
    Ok(())
}
