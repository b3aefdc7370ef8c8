//! Holonomy signatures: quarter-turn targets for vertices and homology loops.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::loops::{homology_basis, DualLoop};
use crate::mesh::Mesh;
use crate::metric::{corner_angles, make_delaunay, DelaunayOptions};

/// Integer targets `k`: the angle sum at vertex `v` should be `k_v·π/2`, the
/// holonomy of loop `j` should be `k_j·π/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolonomySignature {
    pub vertex_k: Vec<i64>,
    pub loop_k: Vec<i64>,
}

/// Sum of `k_v` required by discrete Gauss–Bonnet: the angle sums add up to
/// `2π(N_v − χ)`, so `Σ k_v = 4(N_v − χ)`.
pub fn required_cone_sum(mesh: &Mesh) -> i64 {
    4 * (mesh.num_vertices() as i64 - mesh.euler_characteristic())
}

impl HolonomySignature {
    pub fn new(vertex_k: Vec<i64>, loop_k: Vec<i64>) -> Self {
        HolonomySignature { vertex_k, loop_k }
    }

    /// Every vertex flat (`k = 4`), every loop trivial.
    pub fn flat(mesh: &Mesh) -> Self {
        HolonomySignature {
            vertex_k: vec![4; mesh.num_vertices()],
            loop_k: vec![0; 2 * mesh.genus()],
        }
    }

    /// Targets rounded from the angle sums of `λ`: each vertex gets the nearest
    /// positive multiple of `π/2`, then single steps are applied where rounding
    /// moved furthest until Gauss–Bonnet holds. Loops get `0`.
    pub fn auto_trivial(mesh: &Mesh, lambda: &[f64]) -> Result<Self> {
        let del = make_delaunay(mesh, lambda, &DelaunayOptions::default())?;
        let sums = corner_angles(&del.mesh, &del.lambda)?.vertex_sums(&del.mesh);
        let quarters: Vec<f64> = sums.iter().map(|s| s / FRAC_PI_2).collect();
        let mut k: Vec<i64> = quarters.iter().map(|q| (q.round() as i64).max(1)).collect();
        let target = required_cone_sum(mesh);
        let mut diff = target - k.iter().sum::<i64>();
        while diff != 0 {
            let step = diff.signum();
            // slack = how far rounding moved against the direction of the repair
            let pick = (0..k.len())
                .filter(|&v| k[v] + step >= 1)
                .max_by(|&a, &b| {
                    let sa = step as f64 * (quarters[a] - k[a] as f64);
                    let sb = step as f64 * (quarters[b] - k[b] as f64);
                    sa.total_cmp(&sb).then(b.cmp(&a))
                })
                .ok_or_else(|| Error::InvalidSignature("no vertex can absorb the Gauss–Bonnet defect".into()))?;
            k[pick] += step;
            diff -= step;
        }
        Ok(HolonomySignature {
            vertex_k: k,
            loop_k: vec![0; 2 * mesh.genus()],
        })
    }

    pub fn vertex_target(&self, v: usize) -> f64 {
        self.vertex_k[v] as f64 * FRAC_PI_2
    }

    pub fn loop_target(&self, j: usize) -> f64 {
        self.loop_k[j] as f64 * FRAC_PI_2
    }

    pub fn cones(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.vertex_k
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k != 4)
            .map(|(v, &k)| (v, k))
    }
}

/// Why a signature was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    VertexCountMismatch { expected: usize, actual: usize },
    LoopCountMismatch { expected: usize, actual: usize },
    GaussBonnetViolated { expected: i64, actual: i64 },
    NonPositiveCone { vertex: usize, k: i64 },
    /// Exactly two cones, with angles `3π/2` and `5π/2`.
    KnownInvalidTwoCone35 { vertices: [usize; 2] },
    /// Flat torus (no cones) with a nontrivial loop rotation.
    KnownInvalidFlatTorusNontrivialLoop { loop_index: usize, k: i64 },
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::VertexCountMismatch { .. } => "VertexCountMismatch",
            Reason::LoopCountMismatch { .. } => "LoopCountMismatch",
            Reason::GaussBonnetViolated { .. } => "GaussBonnetViolated",
            Reason::NonPositiveCone { .. } => "NonPositiveCone",
            Reason::KnownInvalidTwoCone35 { .. } => "KnownInvalid_TwoCone35",
            Reason::KnownInvalidFlatTorusNontrivialLoop { .. } => "KnownInvalid_FlatTorusNontrivialLoop",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.code())?;
        match self {
            Reason::VertexCountMismatch { expected, actual } => {
                write!(f, "{actual} vertex targets for {expected} vertices")
            }
            Reason::LoopCountMismatch { expected, actual } => {
                write!(f, "{actual} loop targets for {expected} homology loops")
            }
            Reason::GaussBonnetViolated { expected, actual } => {
                write!(f, "vertex targets sum to {actual}, Gauss–Bonnet needs {expected}")
            }
            Reason::NonPositiveCone { vertex, k } => write!(f, "vertex {vertex} has k = {k}"),
            Reason::KnownInvalidTwoCone35 { vertices } => write!(
                f,
                "cones 3π/2 and 5π/2 at vertices {} and {} with no others",
                vertices[0], vertices[1]
            ),
            Reason::KnownInvalidFlatTorusNontrivialLoop { loop_index, k } => {
                write!(f, "torus without cones but loop {loop_index} has k = {k}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub reasons: Vec<Reason>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.reasons.is_empty()
    }

    pub fn codes(&self) -> Vec<&'static str> {
        self.reasons.iter().map(Reason::code).collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSignature(self.to_string()))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, r) in self.reasons.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Checks counts, Gauss–Bonnet and positivity, and flags the two known
/// infeasible families. Signatures outside those families may still be infeasible.
pub fn validate_signature(mesh: &Mesh, sig: &HolonomySignature) -> ValidationReport {
    let mut reasons = Vec::new();
    let nv = mesh.num_vertices();
    let nl = 2 * mesh.genus();
    if sig.vertex_k.len() != nv {
        reasons.push(Reason::VertexCountMismatch {
            expected: nv,
            actual: sig.vertex_k.len(),
        });
    }
    if sig.loop_k.len() != nl {
        reasons.push(Reason::LoopCountMismatch {
            expected: nl,
            actual: sig.loop_k.len(),
        });
    }
    if !reasons.is_empty() {
        return ValidationReport { reasons };
    }

    let expected = required_cone_sum(mesh);
    let actual: i64 = sig.vertex_k.iter().sum();
    if actual != expected {
        reasons.push(Reason::GaussBonnetViolated { expected, actual });
    }
    for (vertex, &k) in sig.vertex_k.iter().enumerate() {
        if k <= 0 {
            reasons.push(Reason::NonPositiveCone { vertex, k });
        }
    }
    let cones: Vec<(usize, i64)> = sig.cones().collect();
    if let [(v0, k0), (v1, k1)] = cones[..] {
        if (k0, k1) == (3, 5) || (k0, k1) == (5, 3) {
            reasons.push(Reason::KnownInvalidTwoCone35 { vertices: [v0, v1] });
        }
    }
    if mesh.genus() == 1 && cones.is_empty() {
        if let Some((loop_index, &k)) = sig.loop_k.iter().enumerate().find(|(_, &k)| k != 0) {
            reasons.push(Reason::KnownInvalidFlatTorusNontrivialLoop { loop_index, k });
        }
    }
    ValidationReport { reasons }
}

/// On-disk signature: sparse vertex targets and loop targets with either the
/// automatic homology basis or explicit crossing lists.
///
/// ```toml
/// [vertices]
/// default = 4
/// cones = [[0, 3], [5, 5]]
///
/// [loops]
/// basis = "auto"
/// k = [1, -1]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureFile {
    #[serde(default)]
    pub vertices: VertexSection,
    #[serde(default)]
    pub loops: LoopSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSection {
    #[serde(default = "four")]
    pub default: i64,
    #[serde(default)]
    pub cones: Vec<(usize, i64)>,
}

fn four() -> i64 {
    4
}

impl Default for VertexSection {
    fn default() -> Self {
        VertexSection {
            default: 4,
            cones: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopBasis {
    #[default]
    Auto,
    Explicit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSection {
    #[serde(default)]
    pub basis: LoopBasis,
    /// Loop targets; all zero when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<i64>>,
    /// Halfedge ids crossed by each loop, required for `basis = "explicit"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossings: Option<Vec<Vec<usize>>>,
}

impl SignatureFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("signature: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("signature serializes")
    }

    pub fn from_signature(sig: &HolonomySignature) -> Self {
        SignatureFile {
            vertices: VertexSection {
                default: 4,
                cones: sig.cones().collect(),
            },
            loops: LoopSection {
                basis: LoopBasis::Auto,
                k: Some(sig.loop_k.clone()),
                crossings: None,
            },
        }
    }

    /// Expands the file against `mesh`. With an automatic basis the loops are
    /// those of [`homology_basis`]; loop counts are checked by validation, not here.
    pub fn resolve(&self, mesh: &Mesh) -> Result<(HolonomySignature, Vec<DualLoop>)> {
        let mut vertex_k = vec![self.vertices.default; mesh.num_vertices()];
        for &(v, k) in &self.vertices.cones {
            if v >= mesh.num_vertices() {
                return Err(Error::Parse(format!(
                    "signature names vertex {v}, mesh has {}",
                    mesh.num_vertices()
                )));
            }
            vertex_k[v] = k;
        }
        let loops = match self.loops.basis {
            LoopBasis::Auto => {
                if self.loops.crossings.is_some() {
                    return Err(Error::Parse("crossings given with basis = \"auto\"".into()));
                }
                homology_basis(mesh)
            }
            LoopBasis::Explicit => {
                let lists = self
                    .loops
                    .crossings
                    .as_ref()
                    .ok_or_else(|| Error::Parse("basis = \"explicit\" needs crossings".into()))?;
                lists
                    .iter()
                    .map(|c| DualLoop::new(mesh, c.clone()))
                    .collect::<Result<_>>()?
            }
        };
        Ok((
            HolonomySignature {
                vertex_k,
                loop_k: self.loops.k.clone().unwrap_or_else(|| vec![0; loops.len()]),
            },
            loops,
        ))
    }
}
