mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use seamless_metric::fixtures::{self, Fixture};
use seamless_metric::holonomy::{
    homology_basis, ConstraintSystem, HolonomySignature, SignatureFile,
};
use seamless_metric::layout::{lay_out, rmsre};
use seamless_metric::metric::{
    corner_angles, delaunay_cosine_sum, diff_make_delaunay, make_delaunay, ptolemy_flip, DelaunayOptions,
    QueueOrder,
};
use seamless_metric::solver::constraint_residual;

fn fixture(which: u8) -> Fixture {
    match which % 4 {
        0 => fixtures::octahedron(),
        1 => fixtures::torus_grid(4, 3),
        2 => fixtures::genus_two(),
        _ => fixtures::sheared_torus(4, 4, 0.9, 0.6),
    }
}

fn metric(which: u8, seed: u64, amp: f64) -> (Fixture, Vec<f64>) {
    let fx = fixture(which);
    // the sheared torus has nearly flat triangles; keep its perturbation small
    let amp = if which % 4 == 3 { amp / 20.0 } else { amp };
    let l = common::random_metric(&fx.mesh, &fx.lambda, amp, &mut common::rng(seed));
    (fx, l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ptolemy_flip_twice_is_identity(which in 0u8..4, seed in any::<u64>(), pick in any::<usize>()) {
        let (fx, l0) = metric(which, seed, 0.4);
        let mut mesh = fx.mesh.clone();
        let mut l = l0.clone();
        let e = pick % mesh.num_edges();
        prop_assume!(mesh.is_flippable(e));
        let before = mesh.edge_vertices(e);
        ptolemy_flip(&mut mesh, &mut l, e).unwrap();
        ptolemy_flip(&mut mesh, &mut l, e).unwrap();
        let after = mesh.edge_vertices(e);
        prop_assert!(before == after || before == (after.1, after.0));
        for (a, b) in l.iter().zip(&l0) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        mesh.validate().unwrap();
    }

    #[test]
    fn make_delaunay_output_is_delaunay(which in 0u8..4, seed in any::<u64>()) {
        let (fx, l) = metric(which, seed, 0.6);
        let opts = DelaunayOptions::default();
        let t = diff_make_delaunay(&fx.mesh, &l, &[], &opts).unwrap();
        for e in 0..t.mesh.num_edges() {
            prop_assert!(delaunay_cosine_sum(&t.mesh, &t.lambda, e) >= -opts.epsilon);
            prop_assert!(common::is_delaunay_edge(&t.mesh, &t.lambda, e));
        }
        // adding a constant to λ adds it to λ̃, so every row of dλ̃/dλ sums to 1
        let d = t.jacobian();
        for row in d.row_iter() {
            let s: f64 = row.values().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn queue_order_does_not_change_the_result(which in 0u8..4, seed in any::<u64>()) {
        let (fx, l) = metric(which, seed, 0.6);
        let a = make_delaunay(&fx.mesh, &l, &DelaunayOptions::default()).unwrap();
        let b = make_delaunay(&fx.mesh, &l, &DelaunayOptions { order: QueueOrder::Lifo, ..Default::default() }).unwrap();
        let mut x = a.lambda.clone();
        let mut y = b.lambda.clone();
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn euclidean_flips_keep_loop_holonomy(which in 1u8..3, seed in any::<u64>(), picks in prop::collection::vec(any::<usize>(), 1..12)) {
        let (fx, l0) = metric(which, seed, 0.4);
        let mut mesh = fx.mesh.clone();
        let mut l = l0;
        let mut loops = homology_basis(&mesh);
        let reference: Vec<f64> = loops.iter().map(|lp| common::holonomy(&mesh, &l, lp)).collect();
        for p in picks {
            let e = p % mesh.num_edges();
            if !common::euclidean_flippable(&mesh, &l, e) {
                continue;
            }
            let q = common::euclidean_flip(&mut mesh, &mut l, e);
            for lp in loops.iter_mut() {
                lp.reroute_after_flip(&mesh, &q).unwrap();
            }
            let angles = corner_angles(&mesh, &l).unwrap();
            for (lp, h0) in loops.iter().zip(&reference) {
                prop_assert!((common::holonomy(&mesh, &l, lp) - h0).abs() < 1e-9);
                prop_assert!((lp.holonomy(&mesh, &angles) - h0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn total_curvature_is_euler_characteristic(which in 0u8..4, seed in any::<u64>()) {
        let (fx, l) = metric(which, seed, 0.6);
        let t = make_delaunay(&fx.mesh, &l, &DelaunayOptions::default()).unwrap();
        let sums = corner_angles(&t.mesh, &t.lambda).unwrap().vertex_sums(&t.mesh);
        let curvature: f64 = sums.iter().map(|s| TAU - s).sum();
        prop_assert!((curvature - TAU * t.mesh.euler_characteristic() as f64).abs() < 1e-9);
        prop_assert!((sums.iter().sum::<f64>() - PI * t.mesh.num_faces() as f64).abs() < 1e-9);
    }

    #[test]
    fn residual_is_scale_invariant(which in 0u8..4, seed in any::<u64>(), c in -3.0f64..3.0) {
        let (fx, l) = metric(which, seed, 0.4);
        let sig = HolonomySignature::flat(&fx.mesh);
        let loops = homology_basis(&fx.mesh);
        let cs = ConstraintSystem::assemble(&fx.mesh, &sig, &loops).unwrap();
        let shifted: Vec<f64> = l.iter().map(|x| x + c).collect();
        let opts = DelaunayOptions::default();
        let a = constraint_residual(&fx.mesh, &l, &cs, &opts).unwrap();
        let b = constraint_residual(&fx.mesh, &shifted, &cs, &opts).unwrap();
        for (x, y) in a.residual.iter().zip(&b.residual) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn rmsre_ignores_edge_order(v in prop::collection::vec((0.1f64..10.0, 0.1f64..10.0), 1..40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let (l, l0): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        let mut idx: Vec<usize> = (0..l.len()).collect();
        idx.shuffle(&mut common::rng(seed));
        let pl: Vec<f64> = idx.iter().map(|&i| l[i]).collect();
        let pl0: Vec<f64> = idx.iter().map(|&i| l0[i]).collect();
        prop_assert!((rmsre(&l, &l0) - rmsre(&pl, &pl0)).abs() < 1e-12);
    }

    #[test]
    fn layout_reproduces_edge_lengths(which in 0u8..4, seed in any::<u64>()) {
        let (fx, l) = metric(which, seed, 0.6);
        let t = make_delaunay(&fx.mesh, &l, &DelaunayOptions::default()).unwrap();
        let lay = lay_out(&t.mesh, &t.lambda).unwrap();
        prop_assert!(lay.signed_areas.iter().all(|&a| a > 0.0));
        for h in 0..t.mesh.num_halfedges() {
            let p = lay.uv[t.mesh.tail_corner(h)];
            let q = lay.uv[t.mesh.tail_corner(t.mesh.next(h))];
            let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
            prop_assert!((d - common::len(&t.lambda, &t.mesh, h)).abs() < 1e-9);
        }
        prop_assert_eq!(lay_out(&t.mesh, &t.lambda).unwrap(), lay);
    }

    #[test]
    fn signature_toml_round_trip(cones in prop::collection::btree_map(0usize..12, 1i64..9, 0..6), loops in prop::collection::vec(-4i64..5, 2)) {
        let fx = fixtures::torus_grid(4, 3);
        let mut k = vec![4; fx.mesh.num_vertices()];
        for (v, c) in cones {
            k[v] = c;
        }
        let sig = HolonomySignature::new(k, loops);
        let text = SignatureFile::from_signature(&sig).to_toml();
        let (back, basis) = SignatureFile::parse(&text).unwrap().resolve(&fx.mesh).unwrap();
        prop_assert_eq!(back, sig);
        prop_assert_eq!(basis.len(), 2);
    }
}
