//! Signature checks: Gauss-Bonnet, positivity, and the two known
//! impossible torus families. Also shows the TOML signature format.

use seamless_metric::fixtures;
use seamless_metric::holonomy::{validate_signature, HolonomySignature, SignatureFile};

fn main() -> seamless_metric::Result<()> {
    let torus = fixtures::torus_grid(4, 4);
    let n = torus.mesh.num_vertices();
    let with = |cones: &[(usize, i64)], loops: Vec<i64>| {
        let mut k = vec![4; n];
        for &(v, c) in cones {
            k[v] = c;
        }
        HolonomySignature::new(k, loops)
    };
    let cases = [
        ("flat, trivial loops", with(&[], vec![0, 0])),
        ("flat, loop k = 1", with(&[], vec![1, 0])),
        ("two cones 3 and 5", with(&[(0, 3), (5, 5)], vec![0, 0])),
        ("four cones", with(&[(0, 3), (5, 5), (10, 3), (15, 5)], vec![1, -1])),
        ("Gauss-Bonnet off by one", with(&[(0, 3)], vec![0, 0])),
        ("zero cone", with(&[(0, 0), (1, 8)], vec![0, 0])),
    ];
    for (name, sig) in &cases {
        println!("{name:>24}: {}", validate_signature(&torus.mesh, sig));
    }

    let file = SignatureFile::parse(
        "[vertices]\ndefault = 4\ncones = [[0, 3], [5, 5], [10, 3], [15, 5]]\n\n[loops]\nbasis = \"auto\"\nk = [1, -1]\n",
    )?;
    let (sig, loops) = file.resolve(&torus.mesh)?;
    println!("from TOML: cones {:?}, {} loops, {}", sig.cones().collect::<Vec<_>>(), loops.len(), validate_signature(&torus.mesh, &sig));
    print!("{}", SignatureFile::from_signature(&sig).to_toml());
    Ok(())
}
