//! Metric interpolation towards the equilateral metric.
//!
//! Shrinking `λ⁰` towards `0` blends the input metric with the one in which
//! every triangle is equilateral. The first blend whose Delaunay triangulation
//! has no angle below `alpha_min` is used as the starting point, shifted so that
//! its mean matches the mean of `λ⁰`.

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::metric::angles::check_len;
use crate::metric::{corner_angles, make_delaunay, DelaunayOptions};

pub const MAX_INTERPOLATION_STEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocessOptions {
    /// Smallest acceptable corner angle in radians. `0` disables the search.
    pub alpha_min: f64,
    /// Shrink factor per step.
    pub beta: f64,
    pub delaunay: DelaunayOptions,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            alpha_min: 0.0,
            beta: 0.9,
            delaunay: DelaunayOptions::default(),
        }
    }
}

impl PreprocessOptions {
    pub fn enabled(&self) -> bool {
        self.alpha_min > 0.0
    }

    pub fn check(&self) -> Result<()> {
        let ok = (0.0..=std::f64::consts::FRAC_PI_3).contains(&self.alpha_min)
            && self.beta > 0.0
            && self.beta < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "alpha_min must lie in [0, π/3] and beta in (0, 1), got {} and {}",
                self.alpha_min, self.beta
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interpolated {
    pub lambda: Vec<f64>,
    /// Number of shrink steps `n`; the blend is `βⁿ λ⁰` before recentering.
    pub steps: usize,
    /// Smallest angle of the accepted metric.
    pub min_angle: f64,
}

/// Smallest corner angle of the Delaunay triangulation of `λ`.
pub fn delaunay_min_angle(mesh: &Mesh, lambda: &[f64], opts: &DelaunayOptions) -> Result<f64> {
    let del = make_delaunay(mesh, lambda, opts)?;
    Ok(corner_angles(&del.mesh, &del.lambda)?.min_angle())
}

pub fn interpolate_metric(mesh: &Mesh, lambda0: &[f64], opts: &PreprocessOptions) -> Result<Interpolated> {
    opts.check()?;
    check_len(mesh, lambda0)?;
    let mean0 = mean(lambda0);
    let mut scale = 1.0;
    for steps in 0..=MAX_INTERPOLATION_STEPS {
        let scaled: Vec<f64> = lambda0.iter().map(|l| scale * l).collect();
        let min_angle = delaunay_min_angle(mesh, &scaled, &opts.delaunay)?;
        if min_angle >= opts.alpha_min {
            if steps == 0 {
                return Ok(Interpolated {
                    lambda: lambda0.to_vec(),
                    steps,
                    min_angle,
                });
            }
            let shift = mean0 - mean(&scaled);
            return Ok(Interpolated {
                lambda: scaled.iter().map(|l| l + shift).collect(),
                steps,
                min_angle,
            });
        }
        scale *= opts.beta;
    }
    Err(Error::InterpolationFailed(MAX_INTERPOLATION_STEPS))
}

fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().sum::<f64>() / x.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn equilateral_passes_immediately() {
        let fx = fixtures::torus_grid(3, 3);
        let opts = PreprocessOptions {
            alpha_min: FRAC_PI_3 - 1e-12,
            ..Default::default()
        };
        let r = interpolate_metric(&fx.mesh, &fx.lambda, &opts).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.lambda, fx.lambda);
    }

    #[test]
    fn sheared_torus_is_blended_and_recentered() {
        let fx = fixtures::sheared_torus(5, 4, 2.3, 0.4);
        let opts = PreprocessOptions {
            alpha_min: 1.0,
            ..Default::default()
        };
        let r = interpolate_metric(&fx.mesh, &fx.lambda, &opts).unwrap();
        assert!(r.steps > 0);
        assert!(r.min_angle >= 1.0);
        assert!((mean(&r.lambda) - mean(&fx.lambda)).abs() < 1e-12);

        // minimal n
        let prev: Vec<f64> = fx.lambda.iter().map(|l| opts.beta.powi(r.steps as i32 - 1) * l).collect();
        assert!(delaunay_min_angle(&fx.mesh, &prev, &opts.delaunay).unwrap() < 1.0);

        // recentering is a global scale
        let raw: Vec<f64> = fx.lambda.iter().map(|l| opts.beta.powi(r.steps as i32) * l).collect();
        let a = delaunay_min_angle(&fx.mesh, &raw, &opts.delaunay).unwrap();
        assert!((a - r.min_angle).abs() < 1e-12);
    }

    #[test]
    fn disabled_is_identity() {
        let fx = fixtures::sheared_torus(5, 4, 2.3, 0.4);
        let r = interpolate_metric(&fx.mesh, &fx.lambda, &PreprocessOptions::default()).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.lambda, fx.lambda);
    }

    #[test]
    fn options_are_checked() {
        let fx = fixtures::tetrahedron();
        let bad = PreprocessOptions {
            beta: 1.5,
            ..Default::default()
        };
        assert!(interpolate_metric(&fx.mesh, &fx.lambda, &bad).is_err());
    }
}
