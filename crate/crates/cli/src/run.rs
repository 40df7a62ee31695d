use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotset_core::boundary::{
    certify_exposed, example_approximation, example_potential, example_vertices, gap_level, sanity_sweep,
    value_classes, VertexLabel, MAX_TABLE_LEVEL,
};
use rotset_core::entropy::{localized_entropy, localized_entropy_oracle, EntropyEnclosure, SandwichOptions};
use rotset_core::potential::lc_approximate;
use rotset_core::rotation::{convex_hull, elementary_points, rotation_polytope, HullMethod};
use rotset_core::{perron, LcPotential, Limits, PotentialOracle, RotationPolytope, Sft, SparseMatrix, Symbol};

use crate::config::{Command, HullChoice, PotentialInput, RunConfig};
use crate::formats::{parse_matrix, parse_potential, parse_sft, ParseError};
use crate::oracles::{build_oracle, BoxedOracle};
use crate::report::*;
use crate::views::{csv, curves_svg, heatmap_svg, pair, polygon_svg};
use crate::{CliError, EXIT_CERTIFICATION, EXIT_INVALID, EXIT_OK, SCHEMA_VERSION, VERSION};

/// Exit status and the serialized report of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// The JSON report, also written to `outputs.json` when set.
    pub report: String,
    /// Failures writing the artifacts themselves.
    pub write_errors: Vec<String>,
}

struct Executed {
    result: CommandResult,
    svg: Option<String>,
    csv: Option<String>,
    exit_code: i32,
}

impl Executed {
    fn ok(result: CommandResult) -> Executed {
        Executed {
            result,
            svg: None,
            csv: None,
            exit_code: EXIT_OK,
        }
    }
}

/// Executes a run and writes its artifacts. The JSON report is produced
/// even when the run fails; SVG and CSV only on success.
pub fn run(cfg: &RunConfig) -> Outcome {
    let executed = cfg.validate().and_then(|_| execute(cfg));
    let mut write_errors = Vec::new();
    let (exit_code, result, error) = match executed {
        Ok(ex) => {
            for (path, body) in [(&cfg.outputs.svg, &ex.svg), (&cfg.outputs.csv, &ex.csv)] {
                if let (Some(p), Some(b)) = (path, body) {
                    if let Err(e) = std::fs::write(p, b) {
                        write_errors.push(format!("{}: {e}", p.display()));
                    }
                }
            }
            (ex.exit_code, Some(ex.result), None)
        }
        Err(e) => (
            e.exit_code(),
            None,
            Some(ErrorReport {
                kind: e.kind(),
                message: e.to_string(),
            }),
        ),
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        version: VERSION,
        config: cfg,
        status: if error.is_none() { "ok" } else { "error" },
        exit_code,
        result,
        error,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    if let Some(p) = &cfg.outputs.json {
        if let Err(e) = std::fs::write(p, &text) {
            write_errors.push(format!("{}: {e}", p.display()));
        }
    }
    let exit_code = if write_errors.is_empty() || exit_code != EXIT_OK {
        exit_code
    } else {
        EXIT_INVALID
    };
    Outcome {
        exit_code,
        report: text,
        write_errors,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Caps hit while building a parsed object keep their own exit status.
fn parsed(path: &Path) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| match source.cause {
        Some(e @ (rotset_core::Error::CapExceeded { .. } | rotset_core::Error::CycleCapExceeded { .. })) => {
            CliError::Core(e)
        }
        _ => CliError::Parse {
            path: path.display().to_string(),
            source,
        },
    }
}

enum Loaded {
    Table(LcPotential),
    Oracle(BoxedOracle),
}

impl Loaded {
    fn dim(&self) -> usize {
        match self {
            Loaded::Table(p) => p.dim(),
            Loaded::Oracle(o) => o.dim(),
        }
    }
}

fn load(input: &PotentialInput, limits: &Limits) -> Result<Loaded, CliError> {
    let sft = match &input.sft {
        Some(p) => Some(parse_sft(&read(p)?).map_err(parsed(p))?),
        None => None,
    };
    match (&input.potential, &input.oracle) {
        (Some(p), _) => {
            let sft = sft.ok_or_else(|| CliError::Config("a potential file needs a shift file".into()))?;
            Ok(Loaded::Table(parse_potential(&read(p)?, &sft, limits).map_err(parsed(p))?))
        }
        (None, Some(spec)) => Ok(Loaded::Oracle(build_oracle(spec, sft.as_ref())?)),
        (None, None) => Err(CliError::Config("no potential given".into())),
    }
}

fn timestamp(cfg: &RunConfig) -> Option<u64> {
    cfg.outputs
        .svg_timestamp
        .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

/// Whether to draw the SVG view, which exists for the dimensions in `dims`.
fn want_svg(cfg: &RunConfig, m: usize, dims: &[usize], what: &str) -> Result<bool, CliError> {
    if cfg.outputs.svg.is_none() {
        return Ok(false);
    }
    if !dims.contains(&m) {
        return Err(CliError::Config(format!("the {what} SVG view needs a planar potential, got m = {m}")));
    }
    Ok(true)
}

fn random_word<R: Rng>(sft: &Sft, len: usize, rng: &mut R) -> Vec<Symbol> {
    let mut w = Vec::with_capacity(len);
    w.push(rng.gen_range(0..sft.alphabet_size() as Symbol));
    while w.len() < len {
        let succ = sft.successors(*w.last().expect("nonempty"));
        w.push(succ[rng.gen_range(0..succ.len())]);
    }
    w
}

/// Checks `|Φ(ξ) − Φ_ε(ξ)| < bound` on random admissible words, counting
/// the oracle's own error bound against the tolerance.
fn audit<O: PotentialOracle + ?Sized>(oracle: &O, table: &LcPotential, words: usize, bound: f64, seed: u64) -> Option<Audit> {
    if words == 0 {
        return None;
    }
    let k = table.level();
    let word_len = k + 10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error = 0.0f64;
    for _ in 0..words {
        let w = random_word(table.sft(), word_len, &mut rng);
        let exact = oracle.eval(&w);
        let v = table.value_of(&w[..k]).expect("admissible prefix");
        let d = exact
            .value
            .iter()
            .zip(v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        max_error = max_error.max(d + exact.error);
    }
    Some(Audit {
        words,
        word_len,
        max_error,
        bound,
        passed: max_error < bound,
    })
}

fn audit_code(a: &Option<Audit>) -> i32 {
    match a {
        Some(a) if !a.passed => EXIT_CERTIFICATION,
        _ => EXIT_OK,
    }
}

fn sorted_vertices(p: &RotationPolytope) -> Vec<Vec<f64>> {
    let mut v = p.vertices.clone();
    v.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    v
}

fn execute(cfg: &RunConfig) -> Result<Executed, CliError> {
    let limits = cfg.limits.to_core();
    match &cfg.command {
        Command::Pf { matrix, tol } => pf(cfg, matrix, *tol),
        Command::Rot {
            input,
            tol,
            method,
            orbits,
            audit_words,
        } => rot(cfg, &load(input, &limits)?, *tol, *method, *orbits, *audit_words, &limits),
        Command::Entropy {
            input,
            w,
            tol,
            max_levels,
            r_min,
        } => {
            let loaded = load(input, &limits)?;
            let opts = SandwichOptions {
                r_min: *r_min,
                max_levels: *max_levels,
                limits,
                ..SandwichOptions::default()
            };
            let enc = enclose(&loaded, w, *tol, &opts)?;
            let rows: Vec<Vec<f64>> = enc
                .trace
                .iter()
                .map(|t| vec![t.n as f64, t.eps, t.radius, t.l, t.u])
                .collect();
            let header = ["n", "eps", "radius", "l", "u"].map(String::from);
            let mut ex = Executed::ok(CommandResult::Entropy(entropy_result(&enc)));
            ex.csv = Some(csv(&header, &rows));
            Ok(ex)
        }
        Command::Spectrum {
            input,
            grid,
            margin,
            tol,
            max_levels,
        } => spectrum(cfg, &load(input, &limits)?, *grid, *margin, *tol, *max_levels, &limits),
        Command::BoundaryExample {
            n_min,
            n_max,
            params,
            j_max,
            sweep,
            audit_words,
        } => {
            let c = params.to_core();
            let mut levels = Vec::new();
            let mut code = EXIT_OK;
            for n in *n_min..=*n_max {
                let g = gap_level(&c, n)?;
                let e = certify_exposed(&c, n)?;
                let audit = if g.k <= MAX_TABLE_LEVEL && *audit_words > 0 {
                    let a = example_approximation(&c, n, &limits)?;
                    audit(&example_potential(c)?, &a.potential, *audit_words, a.eps, cfg.seed.wrapping_add(n as u64))
                } else {
                    None
                };
                code = code.max(audit_code(&audit));
                levels.push(GapResult {
                    n,
                    eps_n: g.eps,
                    k_n: g.k,
                    h_l_certified: g.h_l_certified,
                    h_u_witness: g.h_u_witness,
                    gap: g.gap,
                    exposed_margin: e.margin,
                    witness_rv: [g.upper[0].rv, g.upper[1].rv],
                    value_classes: value_classes(&c, g.k).len(),
                    audit,
                });
            }
            let vertices: Vec<VertexPoint> = example_vertices(&c, *j_max)?
                .into_iter()
                .map(|v| VertexPoint {
                    label: match v.label {
                        VertexLabel::Plateau => "w(0)".to_string(),
                        VertexLabel::Exposed => "w(inf)".to_string(),
                        VertexLabel::Curve { side, j } => format!("w_{side}({j})"),
                    },
                    point: v.point,
                })
                .collect();
            let sweep = if *sweep {
                let samples = sanity_sweep(&c, *n_min, &limits)?
                    .into_iter()
                    .map(|s| SweepPoint {
                        v: s.v,
                        rv: s.rv,
                        entropy: s.entropy,
                        in_ball: s.in_ball,
                    })
                    .collect();
                Some(Sweep {
                    note: "sanity check only: sampled equilibrium states, not a certificate",
                    n: *n_min,
                    samples,
                })
            } else {
                None
            };
            let header = ["n", "eps_n", "K_n", "h_l_certified", "h_u_witness", "gap"].map(String::from);
            let rows: Vec<Vec<f64>> = levels
                .iter()
                .map(|l| vec![l.n as f64, l.eps_n, l.k_n as f64, l.h_l_certified, l.h_u_witness, l.gap])
                .collect();
            let svg = if cfg.outputs.svg.is_some() {
                let pts: Vec<Vec<f64>> = vertices.iter().map(|v| v.point.to_vec()).collect();
                let hull = convex_hull(&pts)?;
                let ring: Vec<[f64; 2]> = hull.vertices.iter().map(|v| pair(v)).collect();
                let all: Vec<[f64; 2]> = vertices.iter().map(|v| v.point).collect();
                Some(polygon_svg(
                    &format!("boundary example, j <= {j_max}"),
                    &ring,
                    &all,
                    Some(([0.0, 0.0], "w(inf)")),
                    timestamp(cfg),
                ))
            } else {
                None
            };
            Ok(Executed {
                result: CommandResult::Boundary(BoundaryResult { levels, vertices, sweep }),
                svg,
                csv: Some(csv(&header, &rows)),
                exit_code: code,
            })
        }
    }
}

fn pf(_cfg: &RunConfig, matrix: &Path, tol: f64) -> Result<Executed, CliError> {
    let rows = parse_matrix(&read(matrix)?).map_err(parsed(matrix))?;
    let b = SparseMatrix::from_dense(&rows)?;
    let pd = perron(&b, tol)?;
    let header = ["i", "right", "left"].map(String::from);
    let table: Vec<Vec<f64>> = (0..rows.len()).map(|i| vec![i as f64, pd.r[i], pd.l[i]]).collect();
    let mut ex = Executed::ok(CommandResult::Pf(PfResult {
        n: rows.len(),
        lambda: pd.lambda(),
        lambda_lo: pd.lambda_lo,
        lambda_hi: pd.lambda_hi,
        right: pd.r.clone(),
        left: pd.l.clone(),
        residual: pd.residual,
        iterations: pd.iterations,
    }));
    ex.csv = Some(csv(&header, &table));
    Ok(ex)
}

fn hull_method(m: HullChoice) -> HullMethod {
    match m {
        HullChoice::Auto => HullMethod::Auto,
        HullChoice::Enumerate => HullMethod::Enumerate,
        HullChoice::CycleMean => HullMethod::CycleMean,
    }
}

fn vertex_header(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("w{i}")).collect()
}

fn rot(
    cfg: &RunConfig,
    loaded: &Loaded,
    tol: f64,
    method: HullChoice,
    orbits: bool,
    audit_words: usize,
    limits: &Limits,
) -> Result<Executed, CliError> {
    let m = loaded.dim();
    let svg_on = want_svg(cfg, m, &[2], "rot")?;
    let method = hull_method(method);
    let (poly, source, approximation, overlay) = match loaded {
        Loaded::Table(phi) => {
            let poly = rotation_polytope(phi, method, limits)?;
            let overlay = if orbits {
                let (os, pts) = elementary_points(phi, limits)?;
                Some(
                    os.iter()
                        .zip(pts)
                        .map(|(o, p)| OrbitPoint {
                            orbit: o.to_string(),
                            point: p,
                        })
                        .collect::<Vec<_>>(),
                )
            } else {
                None
            };
            (poly, "table", None, overlay)
        }
        Loaded::Oracle(o) => {
            let approx = lc_approximate(&**o, tol, limits)?;
            let poly = rotation_polytope(&approx.potential, method, limits)?.with_error(tol);
            let audit = audit(&**o, &approx.potential, audit_words, tol, cfg.seed);
            let info = ApproxInfo {
                level: approx.potential.level(),
                sup_error: approx.sup_error,
                audit,
            };
            (poly, "oracle", Some(info), None)
        }
    };
    let vertices = sorted_vertices(&poly);
    let code = approximation.as_ref().map_or(EXIT_OK, |a| audit_code(&a.audit));
    let svg = svg_on.then(|| {
        let ring: Vec<[f64; 2]> = vertices.iter().map(|v| pair(v)).collect();
        let dots: Vec<[f64; 2]> = overlay.iter().flatten().map(|o| pair(&o.point)).collect();
        polygon_svg("rotation set", &ring, &dots, None, timestamp(cfg))
    });
    let csv_text = csv(&vertex_header(m), &vertices);
    Ok(Executed {
        result: CommandResult::Rot(RotResult {
            m,
            vertices,
            hausdorff_error: poly.hausdorff_error,
            affine_dim: poly.affine_dim,
            source,
            approximation,
            orbits: overlay,
        }),
        svg,
        csv: Some(csv_text),
        exit_code: code,
    })
}

fn enclose(loaded: &Loaded, w: &[f64], tol: f64, opts: &SandwichOptions) -> Result<EntropyEnclosure, CliError> {
    Ok(match loaded {
        Loaded::Table(phi) => localized_entropy(phi, w, tol, opts)?,
        Loaded::Oracle(o) => localized_entropy_oracle(&**o, w, tol, opts)?,
    })
}

fn entropy_result(enc: &EntropyEnclosure) -> EntropyResult {
    EntropyResult {
        w: enc.w.clone(),
        l: enc.l,
        u: enc.u,
        mid: enc.mid(),
        half_width: enc.half_width(),
        r_min: enc.r_min,
        alpha: enc.schedule.alpha,
        levels: enc
            .trace
            .iter()
            .map(|t| LevelResult {
                n: t.n,
                eps: t.eps,
                radius: t.radius,
                approx_level: t.approx_level,
                approx_error: t.approx_error,
                grid_size: t.grid_size,
                l_raw: t.l_raw,
                u_raw: t.u_raw,
                lower_counted: t.lower_counted,
                slack_rv: t.slack_rv,
                slack_h: t.slack_h,
                slack_num: t.slack_num,
                l: t.l,
                u: t.u,
            })
            .collect(),
    }
}

fn spectrum(
    cfg: &RunConfig,
    loaded: &Loaded,
    grid: usize,
    margin: f64,
    tol: f64,
    max_levels: usize,
    limits: &Limits,
) -> Result<Executed, CliError> {
    let m = loaded.dim();
    let svg_on = want_svg(cfg, m, &[1, 2], "spectrum")?;
    let poly = match loaded {
        Loaded::Table(phi) => rotation_polytope(phi, HullMethod::Auto, limits)?,
        Loaded::Oracle(o) => {
            let a = lc_approximate(&**o, tol, limits)?;
            rotation_polytope(&a.potential, HullMethod::Auto, limits)?.with_error(a.sup_error)
        }
    };
    let total = (grid as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > limits.max_grid as u128 {
        return Err(rotset_core::Error::CapExceeded {
            what: "spectrum grid points",
            required: total,
            cap: limits.max_grid as u128,
        }
        .into());
    }
    let (lo, hi) = poly.bounding_box();
    let step: Vec<f64> = (0..m).map(|i| (hi[i] - lo[i]) / grid as f64).collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    let mut code = EXIT_OK;
    for idx in 0..total as usize {
        let mut rest = idx;
        let w: Vec<f64> = (0..m)
            .map(|i| {
                let j = rest % grid;
                rest /= grid;
                lo[i] + (j as f64 + 0.5) * step[i]
            })
            .collect();
        let r = poly.inscribed_radius(&w)?;
        if r < margin {
            continue;
        }
        let opts = SandwichOptions {
            r_min: Some(r),
            max_levels,
            limits: *limits,
            ..SandwichOptions::default()
        };
        match enclose(loaded, &w, tol, &opts) {
            Ok(e) => points.push(SpectrumPoint {
                w,
                l: e.l,
                u: e.u,
                r_min: r,
                levels: e.trace.len(),
            }),
            Err(e) => {
                if code == EXIT_OK {
                    code = e.exit_code();
                }
                failures.push(SpectrumFailure {
                    w,
                    kind: e.kind(),
                    message: e.to_string(),
                });
            }
        }
    }
    let mut header = vertex_header(m);
    header.push("l".into());
    header.push("u".into());
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.w.iter().copied().chain([p.l, p.u]).collect())
        .collect();
    let svg = svg_on.then(|| {
        let title = format!("localized entropy, {} points", points.len());
        if m == 2 {
            let outline: Vec<[f64; 2]> = poly.vertices.iter().map(|v| pair(v)).collect();
            let cells: Vec<([f64; 2], f64)> = points.iter().map(|p| (pair(&p.w), 0.5 * (p.l + p.u))).collect();
            heatmap_svg(&title, &outline, &cells, [step[0], step[1]], timestamp(cfg))
        } else {
            let lower: Vec<[f64; 2]> = points.iter().map(|p| [p.w[0], p.l]).collect();
            let upper: Vec<[f64; 2]> = points.iter().map(|p| [p.w[0], p.u]).collect();
            curves_svg(&title, &lower, &upper, timestamp(cfg))
        }
    });
    Ok(Executed {
        result: CommandResult::Spectrum(SpectrumResult {
            m,
            rotation_vertices: sorted_vertices(&poly),
            grid_points: total as usize,
            points,
            failures,
        }),
        svg,
        csv: Some(csv(&header, &rows)),
        exit_code: code,
    })
}
