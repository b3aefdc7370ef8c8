//! Torus with four cones and prescribed loop holonomy (1, -1).

use std::f64::consts::FRAC_PI_2;

use seamless_metric::fixtures;
use seamless_metric::holonomy::{homology_basis, validate_signature, HolonomySignature};
use seamless_metric::solver::{newton_solve, SolveOptions};

fn main() -> seamless_metric::Result<()> {
    let fx = fixtures::torus_grid(5, 5);
    let mut k = vec![4; fx.mesh.num_vertices()];
    k[0] = 3;
    k[7] = 5;
    k[12] = 3;
    k[24] = 5;
    let sig = HolonomySignature::new(k, vec![1, -1]);
    validate_signature(&fx.mesh, &sig).into_result()?;
    let loops = homology_basis(&fx.mesh);

    let r = newton_solve(&fx.mesh, &fx.lambda, &sig, &loops, &SolveOptions::default())?;
    println!(
        "{:?} after {} iterations, max|F| {:.2e}, {} flips",
        r.status,
        r.iterations,
        r.max_residual(),
        r.evaluation.trace.num_flips()
    );
    let ev = &r.evaluation;
    for (j, l) in ev.trace.loops.iter().enumerate() {
        let h = l.holonomy(&ev.trace.mesh, &ev.angles);
        println!("loop {j}: {} crossings, holonomy {:+.10} π/2", l.len(), h / FRAC_PI_2);
    }
    Ok(())
}
