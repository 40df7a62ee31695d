mod common;

use common::{bernoulli, full, golden, random_lc1, random_sft};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotset_core::rotation::elementary_hull;
use rotset_core::thermo::{equilibrium, pressure, stochasticize, topological_entropy, transfer_matrix};
use rotset_core::{perron, LcPotential, Limits, MarkovMeasure, Sft, SparseMatrix};

const PHI: f64 = 1.618_033_988_749_895;

fn lim() -> Limits {
    Limits::default()
}

fn zero(s: &Sft) -> LcPotential {
    LcPotential::from_fn(s, 1, 1, &lim(), |_| vec![0.0]).unwrap()
}

fn table(s: &Sft, vals: &[f64]) -> LcPotential {
    LcPotential::from_fn(s, 1, 1, &lim(), |w| vec![vals[w[0] as usize]]).unwrap()
}

#[test]
fn transfer_matrix_examples() {
    assert_eq!(transfer_matrix(&full(2), &zero(&full(2))).unwrap().to_dense(), vec![vec![1.0; 2]; 2]);
    assert_eq!(
        transfer_matrix(&golden(), &zero(&golden())).unwrap().to_dense(),
        vec![vec![1.0, 1.0], vec![1.0, 0.0]]
    );
    let b = transfer_matrix(&full(2), &table(&full(2), &[2f64.ln(), 0.0])).unwrap().to_dense();
    for (row, want) in b.iter().zip([[2.0, 2.0], [1.0, 1.0]]) {
        for (x, y) in row.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}

fn measure_of(s: &Sft, vals: &[f64]) -> MarkovMeasure {
    let b = transfer_matrix(s, &table(s, vals)).unwrap();
    let pd = perron(&b, 1e-13).unwrap();
    stochasticize(&b, &pd, s).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b}");
}

#[test]
fn stochasticize_examples() {
    let u = measure_of(&full(2), &[0.0, 0.0]);
    for i in 0..2 {
        close(u.p[i], 0.5, 1e-12);
        for j in 0..2 {
            close(u.transition.get(i, j), 0.5, 1e-12);
        }
    }
    // r = (φ, 1), so P = [[1/φ, 1/φ²], [1, 0]] and p ∝ (φ², 1).
    let g = measure_of(&golden(), &[0.0, 0.0]);
    close(g.transition.get(0, 0), 1.0 / PHI, 1e-10);
    close(g.transition.get(0, 1), 1.0 / (PHI * PHI), 1e-10);
    close(g.transition.get(1, 0), 1.0, 1e-12);
    close(g.p[0], PHI * PHI / (PHI * PHI + 1.0), 1e-10);
    // λ = 3, r = (1, 1/2).
    let t = measure_of(&full(2), &[2f64.ln(), 0.0]);
    close(t.transition.get(0, 0), 2.0 / 3.0, 1e-10);
    close(t.transition.get(1, 1), 1.0 / 3.0, 1e-10);
    close(t.p[0], 2.0 / 3.0, 1e-10);
}

#[test]
fn cylinder_measures_and_entropy() {
    let u = measure_of(&full(2), &[0.0, 0.0]);
    close(u.measure_of_cylinder(&[0, 1, 0]).unwrap(), 0.125, 1e-12);
    close(u.entropy(), 2f64.ln(), 1e-12);
    let g = measure_of(&golden(), &[0.0, 0.0]);
    close(g.measure_of_cylinder(&[0, 1]).unwrap(), 1.0 / (PHI * PHI + 1.0), 1e-10);
    assert!(g.measure_of_cylinder(&[1, 1]).is_err());
    close(g.entropy(), PHI.ln(), 1e-10);
    let perm = Sft::new(2, &[vec![0, 1], vec![1, 0]], common::half()).unwrap();
    let p = SparseMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let det = MarkovMeasure::new(&perm, vec![0.5, 0.5], p).unwrap();
    assert_eq!(det.entropy(), 0.0);
}

#[test]
fn invalid_measures_rejected() {
    let s = golden();
    let bad_row = SparseMatrix::from_dense(&[vec![0.5, 0.4], vec![1.0, 0.0]]).unwrap();
    assert!(MarkovMeasure::new(&s, vec![0.6, 0.4], bad_row).is_err());
    let forbidden = SparseMatrix::from_dense(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    assert!(MarkovMeasure::new(&s, vec![0.5, 0.5], forbidden).is_err());
    let ok = SparseMatrix::from_dense(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
    assert!(MarkovMeasure::new(&s, vec![0.5, 0.5], ok).is_err());
}

#[test]
fn bernoulli_family_closed_form() {
    let b = bernoulli();
    for t in [-3.0, -1.0, 0.0, 0.5, 2.0] {
        let e: f64 = f64::exp(t);
        let rec = equilibrium(&b, &[t], 1e-12, &lim()).unwrap();
        close(rec.pressure, (1.0 + e).ln(), 1e-10);
        close(rec.rv[0], e / (1.0 + e), 1e-10);
        close(rec.entropy, (1.0 + e).ln() - t * e / (1.0 + e), 1e-10);
    }
}

#[test]
fn golden_zero_vector() {
    let phi = table(&golden(), &[0.0, 1.0]);
    let rec = equilibrium(&phi, &[0.0], 1e-12, &lim()).unwrap();
    close(rec.rv[0], 1.0 / (PHI * PHI + 1.0), 1e-10);
    close(rec.entropy, PHI.ln(), 1e-10);
}

#[test]
fn entropy_and_pressure_examples() {
    for d in 2..=4 {
        let h = topological_entropy(&full(d), 1e-12).unwrap();
        assert!(h.contains((d as f64).ln()) || (h.mid() - (d as f64).ln()).abs() < 1e-12);
    }
    let g = topological_entropy(&golden(), 1e-12).unwrap();
    close(g.mid(), PHI.ln(), 1e-11);
    let z = pressure(&zero(&golden()), 1e-12, &lim()).unwrap();
    close(z.mid(), g.mid(), 1e-11);
    close(pressure(&table(&full(2), &[2f64.ln(), 0.0]), 1e-12, &lim()).unwrap().mid(), 3f64.ln(), 1e-11);
    let c = pressure(&table(&golden(), &[0.7, 0.7]), 1e-12, &lim()).unwrap();
    close(c.mid(), PHI.ln() + 0.7, 1e-11);
    let diag = Sft::new(2, &[vec![1, 0], vec![0, 1]], common::half()).unwrap();
    assert!(topological_entropy(&diag, 1e-12).is_err());
}

/// Random stochastic matrix supported on the shift's transitions.
fn random_markov(s: &Sft, rng: &mut ChaCha8Rng) -> MarkovMeasure {
    let d = s.alphabet_size();
    let rows = (0..d as u32)
        .map(|i| {
            let w: Vec<f64> = s.successors(i).iter().map(|_| rng.gen_range(0.05..1.0)).collect();
            let t: f64 = w.iter().sum();
            s.successors(i).iter().zip(w).map(|(&j, x)| (j, x / t)).collect()
        })
        .collect();
    MarkovMeasure::from_transition(s, SparseMatrix::from_rows(d, rows).unwrap()).unwrap()
}

#[test]
fn variational_principle() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let d = rng.gen_range(2..=5);
        let s = random_sft(&mut rng, d);
        let phi = random_lc1(&mut rng, &s, 1);
        let p = pressure(&phi, 1e-12, &lim()).unwrap();
        for _ in 0..100 {
            let nu = random_markov(&s, &mut rng);
            let free = nu.entropy() + nu.integral(&phi).unwrap()[0];
            assert!(p.hi >= free - 1e-8, "{} < {free}", p.hi);
        }
        let rec = equilibrium(&phi, &[1.0], 1e-12, &lim()).unwrap();
        let at_eq = rec.entropy + rec.rv[0];
        assert!((p.mid() - at_eq).abs() <= 1e-8, "{} vs {at_eq}", p.mid());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn entropy_identity(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sft(&mut rng, d);
        let phi = random_lc1(&mut rng, &s, 1);
        let b = transfer_matrix(&s, &phi).unwrap();
        let pd = perron(&b, 1e-13).unwrap();
        let mm = stochasticize(&b, &pd, &s).unwrap();
        let lam = pd.lambda();
        let lr: f64 = pd.l.iter().zip(&pd.r).map(|(a, b)| a * b).sum();
        let mut acc = 0.0;
        for i in 0..d {
            for (j, v) in b.row(i) {
                acc += pd.l[i] / lr * pd.r[j] / lam * v * v.ln();
            }
        }
        prop_assert!((mm.entropy() - (lam.ln() - acc)).abs() <= 1e-8);
    }

    #[test]
    fn pressure_gradient(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sft(&mut rng, d);
        let phi = random_lc1(&mut rng, &s, 1);
        let psi = random_lc1(&mut rng, &s, 1);
        let h = 1e-4;
        let shifted = |t: f64| {
            let tp = phi.add(&psi.dot(&[t]).unwrap()).unwrap();
            pressure(&tp, 1e-13, &lim()).unwrap().mid()
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        let rec = equilibrium(&phi, &[1.0], 1e-13, &lim()).unwrap();
        let integral = rec.measure.integral(&psi).unwrap()[0];
        prop_assert!((fd - integral).abs() <= 1e-5, "{} vs {}", fd, integral);
    }

    #[test]
    fn equilibrium_rv_in_hull(seed in any::<u64>(), d in 2usize..=4, m in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sft(&mut rng, d);
        let phi = random_lc1(&mut rng, &s, m);
        let hull = elementary_hull(&phi, &lim()).unwrap();
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let rec = equilibrium(&phi, &v, 1e-12, &lim()).unwrap();
        prop_assert!(hull.contains(&rec.rv, 1e-9).unwrap());
    }
}
