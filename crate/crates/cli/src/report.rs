//! JSON report layout, version [`crate::SCHEMA_VERSION`].
//!
//! Every report is an object
//! `{ "schema_version", "version", "config", "status", "exit_code", "result" | "error" }`
//! where `status` is `"ok"` or `"error"`, `config` is the resolved
//! [`crate::RunConfig`] and `result` is one of the structs below, chosen by
//! `config.command.name`. Floats are written with the shortest decimal that
//! reads back to the same `f64`.

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub schema_version: u32,
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CommandResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum CommandResult {
    Pf(PfResult),
    Rot(RotResult),
    Entropy(EntropyResult),
    Spectrum(SpectrumResult),
    Boundary(BoundaryResult),
}

/// `pf`: certified Perron root `lambda_lo <= λ <= lambda_hi`, eigenvectors
/// scaled to first entry one.
#[derive(Debug, Serialize)]
pub struct PfResult {
    pub n: usize,
    pub lambda: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Locally constant approximation of an oracle with its audit.
#[derive(Debug, Serialize)]
pub struct ApproxInfo {
    pub level: usize,
    pub sup_error: f64,
    pub audit: Option<Audit>,
}

/// Randomized check of `|Φ − Φ_ε| + oracle error < bound` on admissible
/// words longer than the approximation level.
#[derive(Debug, Serialize)]
pub struct Audit {
    pub words: usize,
    pub word_len: usize,
    pub max_error: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct OrbitPoint {
    pub orbit: String,
    pub point: Vec<f64>,
}

/// `rot`: vertices of the rotation polytope, lexicographically sorted.
#[derive(Debug, Serialize)]
pub struct RotResult {
    pub m: usize,
    pub vertices: Vec<Vec<f64>>,
    pub hausdorff_error: f64,
    pub affine_dim: usize,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximation: Option<ApproxInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitPoint>>,
}

/// One level of the sandwich trace.
#[derive(Debug, Serialize)]
pub struct LevelResult {
    pub n: usize,
    pub eps: f64,
    pub radius: f64,
    pub approx_level: usize,
    pub approx_error: f64,
    pub grid_size: usize,
    pub l_raw: f64,
    pub u_raw: f64,
    pub lower_counted: bool,
    pub slack_rv: f64,
    pub slack_h: f64,
    pub slack_num: f64,
    pub l: f64,
    pub u: f64,
}

/// `entropy`: `l <= H(w) <= u`.
#[derive(Debug, Serialize)]
pub struct EntropyResult {
    pub w: Vec<f64>,
    pub l: f64,
    pub u: f64,
    pub mid: f64,
    pub half_width: f64,
    pub r_min: f64,
    pub alpha: f64,
    pub levels: Vec<LevelResult>,
}

#[derive(Debug, Serialize)]
pub struct SpectrumPoint {
    pub w: Vec<f64>,
    pub l: f64,
    pub u: f64,
    pub r_min: f64,
    pub levels: usize,
}

#[derive(Debug, Serialize)]
pub struct SpectrumFailure {
    pub w: Vec<f64>,
    pub kind: &'static str,
    pub message: String,
}

/// `spectrum`: enclosures at the grid points whose inscribed radius in the
/// rotation polytope is at least `margin`.
#[derive(Debug, Serialize)]
pub struct SpectrumResult {
    pub m: usize,
    pub rotation_vertices: Vec<Vec<f64>>,
    pub grid_points: usize,
    pub points: Vec<SpectrumPoint>,
    pub failures: Vec<SpectrumFailure>,
}

/// Per-level entry of `boundary-example`.
#[derive(Debug, Serialize)]
pub struct GapResult {
    pub n: u32,
    pub eps_n: f64,
    #[serde(rename = "K_n")]
    pub k_n: usize,
    pub h_l_certified: f64,
    pub h_u_witness: f64,
    pub gap: f64,
    pub exposed_margin: f64,
    pub witness_rv: [[f64; 2]; 2],
    pub value_classes: usize,
    pub audit: Option<Audit>,
}

#[derive(Debug, Serialize)]
pub struct VertexPoint {
    pub label: String,
    pub point: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub v: [f64; 2],
    pub rv: [f64; 2],
    pub entropy: f64,
    pub in_ball: bool,
}

/// Equilibrium states sampled near the corner. A plausibility check, not a
/// certificate.
#[derive(Debug, Serialize)]
pub struct Sweep {
    pub note: &'static str,
    pub n: u32,
    pub samples: Vec<SweepPoint>,
}

#[derive(Debug, Serialize)]
pub struct BoundaryResult {
    pub levels: Vec<GapResult>,
    pub vertices: Vec<VertexPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}
