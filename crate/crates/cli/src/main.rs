use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotset::{BoundaryParams, Command, HullChoice, LimitsConfig, Outputs, PotentialInput, RunConfig};

/// Rotation sets and localized entropy of potentials over shifts of finite
/// type.
///
/// Exit status: 0 success, 1 invalid input, 2 certification failure,
/// 3 resource cap exceeded.
#[derive(Parser, Debug)]
#[command(name = "rotset", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write a picture of the result (planar or one-dimensional results only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Write the main table of the result as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Put a generated-at comment in the SVG header.
    #[arg(long, global = true)]
    svg_timestamp: bool,
    /// Seed of the randomized audits.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on the number of admissible words in a table.
    #[arg(long, global = true)]
    max_words: Option<usize>,
    /// Cap on the number of enumerated cycles.
    #[arg(long, global = true)]
    max_cycles: Option<usize>,
    /// Cap on the number of grid points in a direction ball.
    #[arg(long, global = true)]
    max_grid: Option<usize>,
}

#[derive(Args, Debug)]
struct Input {
    /// Shift file.
    #[arg(long)]
    sft: Option<PathBuf>,
    /// Potential table file over the shift.
    #[arg(long, conflicts_with = "oracle")]
    potential: Option<PathBuf>,
    /// Named oracle, e.g. `first-hit:target=1` or `boundary`.
    #[arg(long)]
    oracle: Option<String>,
}

impl Input {
    fn into_config(self) -> PotentialInput {
        PotentialInput {
            sft: self.sft,
            potential: self.potential,
            oracle: self.oracle,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Perron root of a nonnegative matrix file.
    #[command(allow_negative_numbers = true)]
    Pf {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Rotation polytope of a potential.
    #[command(allow_negative_numbers = true)]
    Rot {
        #[command(flatten)]
        input: Input,
        /// Hausdorff tolerance for oracle potentials.
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = HullChoice::Auto)]
        method: HullChoice,
        /// Also report the elementary orbit averages.
        #[arg(long)]
        orbits: bool,
        /// Random words checked against the oracle.
        #[arg(long, default_value_t = 200)]
        audit_words: usize,
    },
    /// Enclosure of the localized entropy at a point.
    #[command(allow_negative_numbers = true)]
    Entropy {
        #[command(flatten)]
        input: Input,
        /// Comma separated coordinates.
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<f64>,
        /// Target accuracy of the enclosure.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 12)]
        max_levels: usize,
        /// Known interior radius around w; certified from periodic orbits
        /// when absent.
        #[arg(long)]
        r_min: Option<f64>,
    },
    /// Localized entropy over a grid of interior points.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        input: Input,
        /// Points per axis over the bounding box of the rotation set.
        #[arg(long, default_value_t = 9)]
        grid: usize,
        /// Smallest inscribed radius of a grid point.
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
        /// Target accuracy of each enclosure.
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[arg(long, default_value_t = 12)]
        max_levels: usize,
    },
    /// Entropy gap certificates at the exposed corner of the boundary
    /// example.
    #[command(allow_negative_numbers = true)]
    BoundaryExample {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        /// Plateau value `(a, 0)` [default: 1].
        #[arg(long)]
        a: Option<f64>,
        /// Length of the run that leaves the plateau, at least 3 [default: 3].
        #[arg(long)]
        lam_off: Option<usize>,
        /// First term of `x_k = x1 · ratio^(k-1)` [default: 0.125].
        #[arg(long)]
        x1: Option<f64>,
        /// Ratio of `x_k` [default: 0.5].
        #[arg(long)]
        ratio: Option<f64>,
        /// `ℓ₁(t) = coeff · t^exponent` [default: 1].
        #[arg(long)]
        ell_coeff: Option<f64>,
        /// Exponent of `ℓ₁` [default: 0.5].
        #[arg(long)]
        ell_exponent: Option<f64>,
        /// Last curve vertex drawn and reported.
        #[arg(long, default_value_t = 40)]
        j_max: usize,
        /// Add sampled equilibrium states near the corner.
        #[arg(long)]
        sweep: bool,
        /// Random words checked against the oracle.
        #[arg(long, default_value_t = 200)]
        audit_words: usize,
    },
}

fn config(cli: Cli) -> RunConfig {
    let command = match cli.command {
        Sub::Pf { matrix, tol } => Command::Pf { matrix, tol },
        Sub::Rot {
            input,
            tol,
            method,
            orbits,
            audit_words,
        } => Command::Rot {
            input: input.into_config(),
            tol,
            method,
            orbits,
            audit_words,
        },
        Sub::Entropy {
            input,
            w,
            tol,
            max_levels,
            r_min,
        } => Command::Entropy {
            input: input.into_config(),
            w,
            tol,
            max_levels,
            r_min,
        },
        Sub::Spectrum {
            input,
            grid,
            margin,
            tol,
            max_levels,
        } => Command::Spectrum {
            input: input.into_config(),
            grid,
            margin,
            tol,
            max_levels,
        },
        Sub::BoundaryExample {
            n_min,
            n_max,
            a,
            lam_off,
            x1,
            ratio,
            ell_coeff,
            ell_exponent,
            j_max,
            sweep,
            audit_words,
        } => {
            let d = BoundaryParams::default();
            Command::BoundaryExample {
                n_min,
                n_max,
                params: BoundaryParams {
                    a: a.unwrap_or(d.a),
                    lam_off: lam_off.unwrap_or(d.lam_off),
                    x1: x1.unwrap_or(d.x1),
                    ratio: ratio.unwrap_or(d.ratio),
                    coeff: ell_coeff.unwrap_or(d.coeff),
                    exponent: ell_exponent.unwrap_or(d.exponent),
                },
                j_max,
                sweep,
                audit_words,
            }
        }
    };
    let c = cli.common;
    let d = LimitsConfig::default();
    RunConfig {
        command,
        limits: LimitsConfig {
            max_words: c.max_words.unwrap_or(d.max_words),
            max_cycles: c.max_cycles.unwrap_or(d.max_cycles),
            max_grid: c.max_grid.unwrap_or(d.max_grid),
        },
        outputs: Outputs {
            json: c.json,
            svg: c.svg,
            csv: c.csv,
            svg_timestamp: c.svg_timestamp,
        },
        seed: c.seed,
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is taken by certification
    // failures here
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { rotset::EXIT_INVALID as u8 } else { 0 });
        }
    };
    let cfg = config(cli);
    let outcome = rotset::run(&cfg);
    if cfg.outputs.json.is_none() {
        print!("{}", outcome.report);
    }
    for e in &outcome.write_errors {
        eprintln!("rotset: cannot write {e}");
    }
    if outcome.exit_code != 0 {
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(&outcome.report) {
            if let Some(msg) = v.pointer("/error/message").and_then(|m| m.as_str()) {
                eprintln!("rotset: {msg}");
            }
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
