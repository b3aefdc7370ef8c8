//! Blending a badly shaped metric towards the equilateral one until the
//! Delaunay triangulation has no angle below a threshold.

use seamless_metric::fixtures;
use seamless_metric::metric::DelaunayOptions;
use seamless_metric::preprocess::{delaunay_min_angle, interpolate_metric, PreprocessOptions};

fn main() -> seamless_metric::Result<()> {
    let fx = fixtures::sheared_torus(5, 4, 2.3, 0.4);
    let before = delaunay_min_angle(&fx.mesh, &fx.lambda, &DelaunayOptions::default())?;
    println!("input min angle {:.2}°", before.to_degrees());
    for deg in [10.0f64, 30.0, 50.0] {
        let opts = PreprocessOptions {
            alpha_min: deg.to_radians(),
            ..Default::default()
        };
        let r = interpolate_metric(&fx.mesh, &fx.lambda, &opts)?;
        println!(
            "alpha_min {deg:>4}°: {:>2} steps, min angle {:.2}°",
            r.steps,
            r.min_angle.to_degrees()
        );
    }
    Ok(())
}
