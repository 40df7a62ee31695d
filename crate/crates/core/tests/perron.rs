mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotset_core::perron::{collatz_wielandt, perron_maximin_oracle};
use rotset_core::{perron, Error, SparseMatrix};

const PHI: f64 = 1.618_033_988_749_895;

fn dense(rows: &[&[f64]]) -> SparseMatrix {
    SparseMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Root of `λ² = λ + 1` in `[1, 2]` by bisection.
fn golden_by_bisection() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid - mid - 1.0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn all_ones() {
    let pd = perron(&dense(&[&[1.0, 1.0], &[1.0, 1.0]]), 1e-12).unwrap();
    assert!(pd.lambda_lo <= 2.0 && 2.0 <= pd.lambda_hi);
    for x in pd.r.iter().chain(&pd.l) {
        assert!((x - 1.0).abs() < 1e-12);
    }
}

#[test]
fn golden_matrix() {
    let g = golden_by_bisection();
    let pd = perron(&dense(&[&[1.0, 1.0], &[1.0, 0.0]]), 1e-10).unwrap();
    assert!(pd.lambda_lo - 1e-15 <= g && g <= pd.lambda_hi + 1e-15);
    assert!(pd.width() <= 1e-10 * g);
    assert_eq!(pd.r[0], 1.0);
    assert!((pd.r[1] - 1.0 / g).abs() < 1e-9);
}

#[test]
fn permutation_matrix() {
    let pd = perron(&dense(&[&[0.0, 1.0], &[1.0, 0.0]]), 1e-12).unwrap();
    assert!(pd.lambda_lo <= 1.0 && 1.0 <= pd.lambda_hi);
}

#[test]
fn reducible_rejected() {
    let r = perron(&dense(&[&[2.0, 0.0], &[0.0, 1.0]]), 1e-12);
    assert_eq!(r, Err(Error::NotIrreducible));
}

#[test]
fn maximin_oracle_examples() {
    let ones = dense(&[&[1.0, 1.0], &[1.0, 1.0]]);
    for density in [3, 10, 100] {
        assert!(perron_maximin_oracle(&ones, density).unwrap() <= 2.0 + 1e-12);
    }
    assert!((perron_maximin_oracle(&ones, 100).unwrap() - 2.0).abs() < 1e-9);
    let g = perron_maximin_oracle(&dense(&[&[1.0, 1.0], &[1.0, 0.0]]), 10_000).unwrap();
    assert!(g <= PHI + 1e-12);
    assert!((g - PHI).abs() < 1e-4);
    let four = SparseMatrix::from_dense(&vec![vec![1.0; 4]; 4]).unwrap();
    assert!(perron_maximin_oracle(&four, 10).is_err());
}

/// Random irreducible nonnegative matrix: a cycle plus random entries.
fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> SparseMatrix {
    let mut rows = vec![vec![0.0; d]; d];
    for i in 0..d {
        rows[i][(i + 1) % d] = rng.gen_range(0.1..3.0);
        for j in 0..d {
            if rng.gen_bool(0.3) {
                rows[i][j] = rng.gen_range(0.1..3.0);
            }
        }
    }
    rows[0][0] = rng.gen_range(0.1..3.0);
    SparseMatrix::from_dense(&rows).unwrap()
}

/// Independent estimate: plain power iteration on `B`, many steps.
fn power_estimate(b: &SparseMatrix, steps: usize) -> f64 {
    let d = b.dim();
    let mut x = vec![1.0; d];
    let mut y = vec![0.0; d];
    let mut est = 0.0;
    for _ in 0..steps {
        b.mul_vec(&x, &mut y);
        let s: f64 = y.iter().sum();
        est = s / x.iter().sum::<f64>();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / s;
        }
    }
    est
}

#[test]
fn maximin_agrees_on_small_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let d = rng.gen_range(2..=3);
        let b = random_matrix(&mut rng, d);
        let pd = perron(&b, 1e-12).unwrap();
        let o = perron_maximin_oracle(&b, if d == 2 { 2000 } else { 250_000 }).unwrap();
        assert!(o <= pd.lambda_hi + 1e-9);
        assert!((o - pd.lambda()).abs() < 1e-3 * pd.lambda().max(1.0), "{o} vs {}", pd.lambda());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn enclosure_and_residual(seed in any::<u64>(), d in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_matrix(&mut rng, d);
        let tol = 1e-10;
        let pd = perron(&b, tol).unwrap();
        prop_assert!(0.0 < pd.lambda_lo && pd.lambda_lo <= pd.lambda_hi);
        prop_assert!(pd.width() <= tol * pd.lambda_hi.max(1.0));
        prop_assert!(pd.r.iter().chain(&pd.l).all(|&x| x > 0.0));
        prop_assert_eq!(pd.r[0], 1.0);
        prop_assert_eq!(pd.l[0], 1.0);

        // Collatz–Wielandt quotients of the returned vector bracket ρ.
        let (lo, hi) = collatz_wielandt(&b, &pd.r);
        prop_assert!(lo <= pd.lambda_hi + 1e-9 && hi >= pd.lambda_lo - 1e-9);

        // Aperiodic (loop at 0): the long power iteration converges.
        let rho = power_estimate(&b, 20_000);
        let slack = 1e-8 * rho;
        prop_assert!(pd.lambda_lo - slack <= rho && rho <= pd.lambda_hi + slack, "{} [{}, {}]", rho, pd.lambda_lo, pd.lambda_hi);

        let mut br = vec![0.0; d];
        b.mul_vec(&pd.r, &mut br);
        let rmax = pd.r.iter().fold(0.0f64, |a, &x| a.max(x));
        let res = br.iter().zip(&pd.r).map(|(y, x)| (y - pd.lambda() * x).abs()).fold(0.0, f64::max);
        prop_assert!(res <= pd.residual + 1e-12 * rmax);
        prop_assert!(pd.residual <= 10.0 * tol * rmax * pd.lambda_hi.max(1.0));

        let lbr: f64 = pd.l.iter().zip(&br).map(|(a, b)| a * b).sum();
        let lr: f64 = pd.l.iter().zip(&pd.r).map(|(a, b)| a * b).sum();
        let lsum: f64 = pd.l.iter().sum();
        prop_assert!((lbr - pd.lambda() * lr).abs() <= pd.residual * lsum + 1e-12 * lbr.abs());
    }
}
