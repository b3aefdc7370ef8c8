//! The same vertex-only problem solved in the full Penner space and restricted
//! to conformal scale factors.

use seamless_metric::fixtures;
use seamless_metric::holonomy::HolonomySignature;
use seamless_metric::layout::rmsre_lambda;
use seamless_metric::solver::{conformal_solve, coordinate_change, newton_solve, SolveMode, SolveOptions};

fn main() -> seamless_metric::Result<()> {
    let fx = fixtures::octahedron();
    let sig = HolonomySignature::new(vec![1, 1, 1, 1, 1, 3], vec![]);
    let opts = SolveOptions {
        allow_invalid_signature: true,
        ..Default::default()
    };
    let full = newton_solve(&fx.mesh, &fx.lambda, &sig, &[], &opts)?;
    let conf = conformal_solve(
        &fx.mesh,
        &fx.lambda,
        &sig,
        &SolveOptions {
            mode: SolveMode::Conformal,
            ..opts
        },
    )?;
    for (name, r) in [("full", &full), ("conformal", &conf)] {
        println!(
            "{name:>9}: {:?}, {} iterations, max|F| {:.2e}, |λ-λ0| {:.6}, rmsre {:.6}",
            r.status,
            r.iterations,
            r.max_residual(),
            coordinate_change(&r.lambda, &fx.lambda),
            rmsre_lambda(&r.lambda, &fx.lambda)
        );
    }
    if let Some(u) = &conf.scale_factors {
        println!("scale factors: {u:.4?}");
    }
    Ok(())
}
