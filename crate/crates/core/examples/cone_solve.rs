//! Octahedron with five quarter-turn cones: full Newton solve with the residual
//! history and a from-scratch check of the final angles.

use std::f64::consts::FRAC_PI_2;

use seamless_metric::fixtures;
use seamless_metric::holonomy::{validate_signature, HolonomySignature};
use seamless_metric::metric::{corner_angles, make_delaunay, DelaunayOptions};
use seamless_metric::solver::{newton_solve, SolveOptions};

fn main() -> seamless_metric::Result<()> {
    let fx = fixtures::octahedron();
    let sig = HolonomySignature::new(vec![1, 1, 1, 1, 1, 3], vec![]);
    // Σk is 8 where Gauss-Bonnet asks for 16; the dropped vertex 5 absorbs the rest.
    println!("validation: {}", validate_signature(&fx.mesh, &sig));

    let opts = SolveOptions {
        epsilon_c: 1e-12,
        allow_invalid_signature: true,
        ..Default::default()
    };
    let r = newton_solve(&fx.mesh, &fx.lambda, &sig, &[], &opts)?;
    for h in &r.history {
        println!(
            "{:>3}  max|F| {:.3e}  beta {}  flips {}",
            h.iteration,
            h.max_residual,
            h.beta.map_or("-".into(), |b| b.to_string()),
            h.flips
        );
    }
    println!("{:?} in {} iterations ({:.3} s)", r.status, r.iterations, r.seconds);

    let del = make_delaunay(&fx.mesh, &r.lambda, &DelaunayOptions::default())?;
    let sums = corner_angles(&del.mesh, &del.lambda)?.vertex_sums(&del.mesh);
    for (v, s) in sums.iter().enumerate() {
        println!("vertex {v}: angle sum {:.12} = {:.6} π/2", s, s / FRAC_PI_2);
    }
    Ok(())
}
