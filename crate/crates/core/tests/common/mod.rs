#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rotset_core::{Limits, LcPotential, Ratio, Sft, Symbol};

pub fn half() -> Ratio {
    Ratio::new(1, 2).unwrap()
}

pub fn full(d: usize) -> Sft {
    Sft::full_shift(d, half()).unwrap()
}

pub fn golden() -> Sft {
    Sft::new(2, &[vec![1, 1], vec![1, 0]], half()).unwrap()
}

/// Random irreducible aperiodic shift: a Hamiltonian cycle, a loop at 0 and
/// random extra edges.
pub fn random_sft(rng: &mut ChaCha8Rng, d: usize) -> Sft {
    let mut rows = vec![vec![0u8; d]; d];
    for i in 0..d {
        rows[i][(i + 1) % d] = 1;
        for j in 0..d {
            if rng.gen_bool(0.4) {
                rows[i][j] = 1;
            }
        }
    }
    rows[0][0] = 1;
    Sft::new(d, &rows, half()).unwrap()
}

pub fn random_lc1(rng: &mut ChaCha8Rng, s: &Sft, m: usize) -> LcPotential {
    LcPotential::from_fn(s, 1, m, &Limits::default(), |_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn random_lc(rng: &mut ChaCha8Rng, s: &Sft, k: usize, m: usize) -> LcPotential {
    LcPotential::from_fn(s, k, m, &Limits::default(), |_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

/// `Φ(0) = 0`, `Φ(1) = 1` on the full 2-shift.
pub fn bernoulli() -> LcPotential {
    LcPotential::from_table(&full(2), 1, 1, &[(vec![0], vec![0.0]), (vec![1], vec![1.0])], &Limits::default()).unwrap()
}

pub fn binary_entropy(w: f64) -> f64 {
    -w * w.ln() - (1.0 - w) * (1.0 - w).ln()
}

/// Every cyclically admissible word of length `1..=max_len`, by depth-first
/// search over the transition matrix (repetitions included).
pub fn periodic_words(s: &Sft, max_len: usize) -> Vec<Vec<Symbol>> {
    let d = s.alphabet_size() as Symbol;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Symbol>> = (0..d).map(|a| vec![a]).collect();
    while let Some(w) = stack.pop() {
        if s.allows(*w.last().unwrap(), w[0]) {
            out.push(w.clone());
        }
        if w.len() < max_len {
            for b in 0..d {
                if s.allows(*w.last().unwrap(), b) {
                    let mut x = w.clone();
                    x.push(b);
                    stack.push(x);
                }
            }
        }
    }
    out
}

/// Average of a level-`k` potential along the periodic orbit of `w`.
pub fn periodic_average(phi: &LcPotential, w: &[Symbol]) -> Vec<f64> {
    let k = phi.level();
    let n = w.len();
    let mut acc = vec![0.0; phi.dim()];
    for i in 0..n {
        let window: Vec<Symbol> = (0..k).map(|j| w[(i + j) % n]).collect();
        for (a, x) in acc.iter_mut().zip(phi.value_of(&window).unwrap()) {
            *a += x;
        }
    }
    acc.iter().map(|a| a / n as f64).collect()
}

/// Interval hull in one dimension.
pub fn interval(points: &[Vec<f64>]) -> (f64, f64) {
    let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
