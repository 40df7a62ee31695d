//! Run configuration. Everything a run depends on lives here, so the
//! serialized config in a report is enough to reproduce it.

use std::path::{Path, PathBuf};

use rotset_core::boundary::{BoundaryExampleConfig, Profile, Sequence};
use rotset_core::Limits;
use serde::Serialize;

use crate::CliError;

/// Where the potential comes from: a table file over a shift file, or a
/// named oracle (see [`crate::oracles`]).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PotentialInput {
    pub sft: Option<PathBuf>,
    pub potential: Option<PathBuf>,
    pub oracle: Option<String>,
}

/// How `rot` finds the vertices of a locally constant rotation set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum HullChoice {
    #[default]
    Auto,
    Enumerate,
    CycleMean,
}

/// Parameters of the four-symbol boundary example.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryParams {
    /// First coordinate of the plateau value.
    pub a: f64,
    pub lam_off: usize,
    /// `x_k = x1 · ratio^(k-1)`.
    pub x1: f64,
    pub ratio: f64,
    /// `ℓ₁(t) = coeff · t^exponent`.
    pub coeff: f64,
    pub exponent: f64,
}

impl Default for BoundaryParams {
    fn default() -> Self {
        BoundaryParams {
            a: 1.0,
            lam_off: 3,
            x1: 0.125,
            ratio: 0.5,
            coeff: 1.0,
            exponent: 0.5,
        }
    }
}

impl BoundaryParams {
    pub fn to_core(self) -> BoundaryExampleConfig {
        BoundaryExampleConfig {
            a: self.a,
            lam_off: self.lam_off,
            x_seq: Sequence::Geometric {
                first: self.x1,
                ratio: self.ratio,
            },
            ell1: Profile::Power {
                coeff: self.coeff,
                exponent: self.exponent,
            },
        }
    }
}

/// The subcommand and its knobs.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Perron root and eigenvectors of a nonnegative matrix.
    Pf { matrix: PathBuf, tol: f64 },
    /// Rotation polytope; `tol` is the Hausdorff tolerance for oracles.
    Rot {
        input: PotentialInput,
        tol: f64,
        method: HullChoice,
        orbits: bool,
        audit_words: usize,
    },
    /// Enclosure of the localized entropy at one point.
    Entropy {
        input: PotentialInput,
        w: Vec<f64>,
        tol: f64,
        max_levels: usize,
        r_min: Option<f64>,
    },
    /// Enclosures on a grid of interior points.
    Spectrum {
        input: PotentialInput,
        grid: usize,
        margin: f64,
        tol: f64,
        max_levels: usize,
    },
    /// Entropy gap certificates of the boundary example.
    BoundaryExample {
        n_min: u32,
        n_max: u32,
        params: BoundaryParams,
        j_max: usize,
        sweep: bool,
        audit_words: usize,
    },
}

/// Resource caps, mirrored from [`Limits`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LimitsConfig {
    pub max_words: usize,
    pub max_cycles: usize,
    pub max_grid: usize,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        let l = Limits::default();
        LimitsConfig {
            max_words: l.max_words,
            max_cycles: l.max_cycles,
            max_grid: l.max_grid,
        }
    }
}

impl LimitsConfig {
    pub fn to_core(self) -> Limits {
        Limits {
            max_words: self.max_words,
            max_cycles: self.max_cycles,
            max_grid: self.max_grid,
        }
    }
}

/// Output paths. Without `json` the report goes to standard output.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Outputs {
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    /// Adds a `generated-at` comment to the SVG header, which breaks
    /// byte-for-byte reproducibility of the SVG.
    pub svg_timestamp: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub limits: LimitsConfig,
    pub outputs: Outputs,
    /// Seed for the randomized audits.
    pub seed: u64,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive, got {x}")))
    }
}

fn writable(p: &Option<PathBuf>) -> Result<(), CliError> {
    let Some(p) = p else { return Ok(()) };
    let dir = match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(bad(format!("output directory {} does not exist", dir.display())));
    }
    if p.is_dir() {
        return Err(bad(format!("output path {} is a directory", p.display())));
    }
    Ok(())
}

impl PotentialInput {
    fn check(&self) -> Result<(), CliError> {
        match (&self.potential, &self.oracle) {
            (Some(_), Some(_)) => Err(bad("give either a potential file or an oracle, not both")),
            (None, None) => Err(bad("a potential file or an oracle is required")),
            (Some(_), None) if self.sft.is_none() => Err(bad("a potential file needs a shift file")),
            _ => Ok(()),
        }
    }
}

impl RunConfig {
    /// Checks the invariants of the config: positive tolerances and caps,
    /// consistent inputs, writable outputs, and views the command has.
    pub fn validate(&self) -> Result<(), CliError> {
        let l = &self.limits;
        if l.max_words == 0 || l.max_cycles == 0 || l.max_grid == 0 {
            return Err(bad("caps must be positive"));
        }
        writable(&self.outputs.json)?;
        writable(&self.outputs.svg)?;
        writable(&self.outputs.csv)?;
        match &self.command {
            Command::Pf { tol, .. } => {
                positive("tol", *tol)?;
                if self.outputs.svg.is_some() {
                    return Err(bad("pf has no SVG view"));
                }
            }
            Command::Rot { input, tol, .. } => {
                input.check()?;
                positive("tol", *tol)?;
            }
            Command::Entropy {
                input,
                w,
                tol,
                max_levels,
                r_min,
            } => {
                input.check()?;
                positive("tol", *tol)?;
                if w.is_empty() || w.iter().any(|x| !x.is_finite()) {
                    return Err(bad("w must be a nonempty list of finite numbers"));
                }
                if *max_levels == 0 {
                    return Err(bad("max-levels must be positive"));
                }
                if let Some(r) = r_min {
                    positive("r-min", *r)?;
                }
                if self.outputs.svg.is_some() {
                    return Err(bad("entropy has no SVG view; use spectrum"));
                }
            }
            Command::Spectrum {
                input,
                grid,
                margin,
                tol,
                max_levels,
            } => {
                input.check()?;
                positive("tol", *tol)?;
                positive("margin", *margin)?;
                if *grid < 2 || *max_levels == 0 {
                    return Err(bad("grid needs at least 2 points per axis and max-levels must be positive"));
                }
            }
            Command::BoundaryExample {
                n_min, n_max, params, ..
            } => {
                if *n_min == 0 || n_min > n_max {
                    return Err(bad(format!("need 1 <= n-min <= n-max, got {n_min}..{n_max}")));
                }
                params.to_core().validate().map_err(|e| bad(e.to_string()))?;
            }
        }
        Ok(())
    }
}
