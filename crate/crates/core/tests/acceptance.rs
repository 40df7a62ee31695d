//! One pass/fail line per acceptance criterion. Runs without the test
//! harness so the lines are always printed; exits non-zero on any failure.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotset_core::boundary::{self, BoundaryExampleConfig};
use rotset_core::entropy::{legendre_entropy_with, local_bounds_at, localized_entropy, SandwichOptions};
use rotset_core::oracles::{FirstHitOracle, GeometricSumOracle};
use rotset_core::potential::PotentialOracle;
use rotset_core::rotation::{elementary_hull, hausdorff_distance, interior_radius_via_periodic, rot_approx};
use rotset_core::thermo::Equilibria;
use rotset_core::{perron, LcPotential, Limits, SparseMatrix};

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn perron_enclosure() -> Outcome {
    let b = SparseMatrix::from_dense(&[vec![1.0, 1.0], vec![1.0, 0.0]]).map_err(|e| e.to_string())?;
    let pd = perron(&b, 1e-12).map_err(|e| e.to_string())?;
    // bisection on λ² − λ − 1 over [1, 2]
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid - mid - 1.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let err = (pd.lambda() - lo).abs();
    check(err <= 1e-10, format!("error {err:e}"))?;
    check(pd.lambda_lo <= hi && lo <= pd.lambda_hi, "enclosure misses the root".into())?;
    Ok(format!("|λ − φ| = {err:.1e}"))
}

fn thermo_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let limits = Limits::default();
    let mut worst_id = 0.0f64;
    let mut worst_fd = 0.0f64;
    for _ in 0..50 {
        let d = rng.gen_range(2..=5);
        let s = random_sft(&mut rng, d);
        let phi = random_lc1(&mut rng, &s, 1);
        let eq = Equilibria::new(&phi, &limits).map_err(|e| e.to_string())?;
        let r = eq.record(&[1.0]).map_err(|e| e.to_string())?;
        // entropy straight from (p, P), integral straight from p
        let mut h = 0.0;
        for i in 0..d {
            for (_, pij) in r.measure.transition.row(i) {
                if pij > 0.0 {
                    h -= r.measure.p[i] * pij * pij.ln();
                }
            }
        }
        let integral: f64 = (0..d).map(|i| r.measure.p[i] * phi.value(i)[0]).sum();
        worst_id = worst_id.max((h - (r.pressure - integral)).abs());
        let t = 1e-4;
        let pp = eq.pressure(&[1.0 + t]).map_err(|e| e.to_string())?.mid();
        let pm = eq.pressure(&[1.0 - t]).map_err(|e| e.to_string())?.mid();
        worst_fd = worst_fd.max(((pp - pm) / (2.0 * t) - integral).abs());
    }
    check(worst_id <= 1e-8, format!("entropy identity off by {worst_id:e}"))?;
    check(worst_fd <= 1e-5, format!("pressure derivative off by {worst_fd:e}"))?;
    Ok(format!("identity {worst_id:.1e}, derivative {worst_fd:.1e}"))
}

/// Largest gap between support functions over 3600 directions.
fn support_gap(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let m = a[0].len();
    let dirs: Vec<Vec<f64>> = if m == 1 {
        vec![vec![1.0], vec![-1.0]]
    } else {
        (0..3600)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 3600.0;
                vec![t.cos(), t.sin()]
            })
            .collect()
    };
    let h = |pts: &[Vec<f64>], u: &[f64]| pts.iter().map(|p| p[0] * u[0] + p.get(1).unwrap_or(&0.0) * u.get(1).unwrap_or(&0.0)).fold(f64::NEG_INFINITY, f64::max);
    dirs.iter().map(|u| (h(a, u) - h(b, u)).abs()).fold(0.0, f64::max)
}

fn rotation_sets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let limits = Limits::default();
    let mut worst = 0.0f64;
    for s in [full(2), golden()] {
        for k in 1..=2 {
            for m in 1..=2 {
                let phi = random_lc(&mut rng, &s, k, m);
                let hull = elementary_hull(&phi, &limits).map_err(|e| e.to_string())?;
                let brute: Vec<Vec<f64>> = periodic_words(&s, 10).iter().map(|w| periodic_average(&phi, w)).collect();
                worst = worst.max(support_gap(&hull.vertices, &brute));
            }
        }
    }
    check(worst <= 1e-9, format!("hull differs from brute force by {worst:e}"))?;
    let phi = LcPotential::from_table(&golden(), 1, 1, &[(vec![0], vec![0.0]), (vec![1], vec![1.0])], &limits).map_err(|e| e.to_string())?;
    let hull = elementary_hull(&phi, &limits).map_err(|e| e.to_string())?;
    let (lo, hi) = interval(&hull.vertices);
    check(lo == 0.0 && hi == 0.5, format!("golden-mean hull [{lo}, {hi}]"))?;
    Ok(format!("d_H ≤ {worst:.1e}, golden mean [0, 1/2]"))
}

fn entropy_spectrum() -> Outcome {
    let phi = bernoulli();
    let mut worst_hw = 0.0f64;
    let mut slowest = Duration::ZERO;
    for i in 1..=9 {
        let w = i as f64 / 10.0;
        let t = Instant::now();
        let e = localized_entropy(&phi, &[w], 1e-3, &SandwichOptions::default()).map_err(|e| format!("w = {w}: {e}"))?;
        slowest = slowest.max(t.elapsed());
        let h = binary_entropy(w);
        check(e.contains(h), format!("w = {w}: [{}, {}] misses {h}", e.l, e.u))?;
        worst_hw = worst_hw.max(e.half_width());
    }
    check(worst_hw <= 1e-3, format!("half-width {worst_hw:e}"))?;
    check(slowest < Duration::from_secs(60), format!("slowest point {slowest:?}"))?;
    Ok(format!("max half-width {worst_hw:.1e}, slowest point {slowest:.2?}"))
}

/// Five random two-dimensional systems, four interior queries each. Queries
/// are equilibrium rotation vectors with certified interior radius at least
/// 0.02; thinner regions need direction lattices beyond the grid cap.
struct Query {
    phi: LcPotential,
    w: Vec<f64>,
}

fn queries() -> Vec<Query> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let limits = Limits::default();
    let mut out = Vec::new();
    for _ in 0..5 {
        let d = rng.gen_range(3..=4);
        let s = random_sft(&mut rng, d);
        let phi = random_lc1(&mut rng, &s, 2);
        let eq = Equilibria::new(&phi, &limits).unwrap();
        let mut found = 0;
        while found < 4 {
            let v = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            let w = eq.record(&v).unwrap().rv;
            if interior_radius_via_periodic(&phi, &w, &limits).is_ok_and(|r| r >= 0.02) {
                out.push(Query { phi: phi.clone(), w });
                found += 1;
            }
        }
    }
    out
}

fn sandwich_and_dual() -> (Outcome, Outcome) {
    let limits = Limits::default();
    let mut violations = Vec::new();
    let mut worst_dual = 0.0f64;
    let mut levels = 0;
    for (i, q) in queries().iter().enumerate() {
        let e = match localized_entropy(&q.phi, &q.w, 1e-3, &SandwichOptions::default()) {
            Ok(e) => e,
            Err(err) => {
                let msg = format!("query {i}: {err}");
                return (Err(msg.clone()), Err(msg));
            }
        };
        levels += e.trace.len();
        for p in e.trace.windows(2) {
            let slack = p[0].slack_h + p[1].slack_h + p[0].slack_num + p[1].slack_num;
            if p[1].u_raw > p[0].u_raw + slack {
                violations.push(format!("query {i} u at level {}", p[1].n));
            }
            if p[0].lower_counted && p[1].l_raw < p[0].l_raw - slack {
                violations.push(format!("query {i} l at level {}", p[1].n));
            }
        }
        let eq = Equilibria::new(&q.phi, &limits).unwrap();
        let h = legendre_entropy_with(&eq, &q.w, 1e-10, 1e3).unwrap();
        worst_dual = worst_dual.max((h - e.mid()).abs());
    }
    let mono = if violations.is_empty() {
        Ok(format!("20 queries, {levels} levels, no violations"))
    } else {
        Err(violations.join(", "))
    };
    let dual = if worst_dual <= 2e-3 {
        Ok(format!("max |Legendre − midpoint| = {worst_dual:.1e}"))
    } else {
        Err(format!("dual gap {worst_dual:e}"))
    };
    (mono, dual)
}

fn boundary_gap() -> Outcome {
    let cfg = BoundaryExampleConfig::default();
    let ln2 = std::f64::consts::LN_2;
    let mut ks = Vec::new();
    for n in 1..=3 {
        let g = boundary::gap_level(&cfg, n).map_err(|e| format!("n = {n}: {e}"))?;
        check(g.h_l_certified == 0.0, format!("n = {n}: lower {}", g.h_l_certified))?;
        for u in &g.upper {
            check((u.entropy - ln2).abs() <= 1e-12, format!("n = {n}: witness entropy {}", u.entropy))?;
            let r = (u.rv[0] * u.rv[0] + u.rv[1] * u.rv[1]).sqrt();
            check(r <= 0.5f64.powi(n as i32), format!("n = {n}: witness rv at distance {r}"))?;
        }
        check((g.gap - ln2).abs() <= 1e-12, format!("n = {n}: gap {}", g.gap))?;
        ks.push(g.k);
    }
    Ok(format!("gap = {ln2:.6} at n = 1, 2, 3 (K = {ks:?})"))
}

fn approximation_contract() -> Outcome {
    let limits = Limits::default();
    let oracles: Vec<Box<dyn PotentialOracle>> = vec![
        Box::new(FirstHitOracle::with_theta(&full(2), 1).unwrap()),
        Box::new(FirstHitOracle::with_theta(&full(2), 0).unwrap()),
        Box::new(FirstHitOracle::with_theta(&golden(), 1).unwrap()),
        Box::new(FirstHitOracle::new(&full(3), 2, 0.3).unwrap()),
        Box::new(FirstHitOracle::new(&golden(), 0, 0.25).unwrap()),
        Box::new(GeometricSumOracle::new(&full(2), 0.5, vec![vec![0.0], vec![1.0]]).unwrap()),
        Box::new(GeometricSumOracle::new(&golden(), 0.4, vec![vec![1.0], vec![-1.0]]).unwrap()),
        Box::new(GeometricSumOracle::new(&full(2), 0.5, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()),
        Box::new(GeometricSumOracle::new(&full(3), 0.3, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]]).unwrap()),
        Box::new(GeometricSumOracle::new(&golden(), 0.5, vec![vec![0.5, -0.5], vec![-0.5, 1.0]]).unwrap()),
    ];
    let tol = 1.0 / 16.0;
    let mut worst = 0.0f64;
    for (i, o) in oracles.iter().enumerate() {
        let a = rot_approx(o.as_ref(), tol, &limits).map_err(|e| format!("oracle {i}: {e}"))?;
        let b = rot_approx(o.as_ref(), tol / 4.0, &limits).map_err(|e| format!("oracle {i}: {e}"))?;
        let d = hausdorff_distance(&a, &b).map_err(|e| format!("oracle {i}: {e}"))?;
        worst = worst.max(d / tol);
    }
    check(worst <= 1.25, format!("d_H / tol = {worst}"))?;
    Ok(format!("10 oracles, max d_H / tol = {worst:.3}"))
}

fn one_sided_stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let limits = Limits::default();
    let eta = 1e-2;
    let phi = bernoulli();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20 {
        let w = rng.gen_range(0.2..0.8);
        let e = localized_entropy(&phi, &[w], 1e-3, &SandwichOptions::default()).map_err(|e| e.to_string())?;
        let p = LcPotential::from_fn(&phi.sft().clone(), 2, 1, &limits, |u| vec![u[0] as f64 + rng.gen_range(-0.99 * eta..0.99 * eta)]).map_err(|e| e.to_string())?;
        let b = local_bounds_at(&p, &[w], eta, &SandwichOptions::default()).map_err(|e| format!("perturbation {i}: {e}"))?;
        let hu = b.u_inner.ok_or_else(|| format!("perturbation {i}: no sample in the ball"))?;
        let excess = e.mid() - (hu + e.half_width() + b.slack_h);
        worst = worst.max(excess);
    }
    check(worst <= 0.0, format!("midpoint exceeds h^u by {worst:e}"))?;
    Ok(format!("20 perturbations, max margin {:.1e}", -worst))
}

fn report(n: u32, name: &str, r: &Outcome, el: Duration) -> bool {
    match r {
        Ok(msg) => println!("criterion {n} PASS {name}: {msg} [{el:.2?}]"),
        Err(msg) => println!("criterion {n} FAIL {name}: {msg} [{el:.2?}]"),
    }
    r.is_ok()
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn main() {
    let start = Instant::now();
    let mut passed = 0;
    let singles: [(u32, &str, fn() -> Outcome); 4] = [
        (1, "Perron enclosure", perron_enclosure),
        (2, "thermodynamic identities", thermo_identities),
        (3, "rotation sets", rotation_sets),
        (4, "localized entropy spectrum", entropy_spectrum),
    ];
    for (n, name, f) in singles {
        let (r, el) = timed(f);
        passed += report(n, name, &r, el) as u32;
    }
    let t = Instant::now();
    let (mono, dual) = sandwich_and_dual();
    let el = t.elapsed();
    passed += report(5, "sandwich monotonicity", &mono, el) as u32;
    passed += report(6, "dual agreement", &dual, el) as u32;
    let rest: [(u32, &str, fn() -> Outcome); 3] = [
        (7, "boundary gap", boundary_gap),
        (8, "approximation contract", approximation_contract),
        (9, "one-sided stability", one_sided_stability),
    ];
    for (n, name, f) in rest {
        let (r, el) = timed(f);
        passed += report(n, name, &r, el) as u32;
    }
    println!("{passed} of 9 criteria passed in {:.2?}", start.elapsed());
    if passed < 9 {
        std::process::exit(1);
    }
}
