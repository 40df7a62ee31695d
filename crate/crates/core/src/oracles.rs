//! Ready-made continuous potentials given as oracles.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::potential::{OracleValue, PotentialOracle};
use crate::sft::{Sft, Symbol};
use crate::{Error, Result};

/// `Φ(ξ) = q^j` where `j` is the first (1-based) position holding `target`,
/// and `Φ = 0` when `target` never occurs. Lipschitz for `d_θ` when
/// `q <= θ`.
#[derive(Clone, Debug)]
pub struct FirstHitOracle {
    sft: Sft,
    target: Symbol,
    q: f64,
}

impl FirstHitOracle {
    pub fn new(sft: &Sft, target: Symbol, q: f64) -> Result<FirstHitOracle> {
        if target as usize >= sft.alphabet_size() {
            return Err(Error::InvalidArgument("target symbol outside the alphabet"));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument("decay must lie in (0, 1)"));
        }
        Ok(FirstHitOracle {
            sft: sft.clone(),
            target,
            q,
        })
    }

    /// Uses `q = θ`.
    pub fn with_theta(sft: &Sft, target: Symbol) -> Result<FirstHitOracle> {
        FirstHitOracle::new(sft, target, sft.theta().value())
    }
}

impl PotentialOracle for FirstHitOracle {
    fn sft(&self) -> &Sft {
        &self.sft
    }

    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, word: &[Symbol]) -> OracleValue {
        match word.iter().position(|&s| s == self.target) {
            Some(p) => OracleValue {
                value: vec![math::powi(self.q, p as i32 + 1)],
                error: 0.0,
            },
            None => {
                let tail = math::powi(self.q, word.len() as i32 + 1);
                OracleValue {
                    value: vec![tail],
                    error: tail,
                }
            }
        }
    }

    fn modulus(&self, n: u32) -> usize {
        let target = math::powi(0.5, n as i32);
        let mut k = 1usize;
        while math::powi(self.q, k as i32 + 1) >= target {
            k += 1;
        }
        k
    }
}

/// `Φ(ξ) = Σ_{i>=1} q^(i-1) c[ξ_i]` with one coefficient vector per symbol.
#[derive(Clone, Debug)]
pub struct GeometricSumOracle {
    sft: Sft,
    q: f64,
    coeffs: Vec<Vec<f64>>,
    cmax: f64,
}

impl GeometricSumOracle {
    pub fn new(sft: &Sft, q: f64, coeffs: Vec<Vec<f64>>) -> Result<GeometricSumOracle> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument("decay must lie in (0, 1)"));
        }
        if coeffs.len() != sft.alphabet_size() {
            return Err(Error::DimensionMismatch {
                expected: sft.alphabet_size(),
                found: coeffs.len(),
            });
        }
        let m = coeffs.first().map_or(0, |c| c.len());
        if m == 0 || coeffs.iter().any(|c| c.len() != m) {
            return Err(Error::InvalidArgument("coefficient vectors must share a positive dimension"));
        }
        if coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("oracle coefficient"));
        }
        let cmax = coeffs.iter().map(|c| math::norm(c)).fold(0.0f64, f64::max);
        Ok(GeometricSumOracle {
            sft: sft.clone(),
            q,
            coeffs,
            cmax,
        })
    }

    fn tail(&self, len: usize) -> f64 {
        math::powi(self.q, len as i32) * self.cmax / (1.0 - self.q)
    }
}

impl PotentialOracle for GeometricSumOracle {
    fn sft(&self) -> &Sft {
        &self.sft
    }

    fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    fn eval(&self, word: &[Symbol]) -> OracleValue {
        let mut value = vec![0.0; self.dim()];
        let mut w = 1.0;
        for &s in word {
            for (v, c) in value.iter_mut().zip(&self.coeffs[s as usize]) {
                *v += w * c;
            }
            w *= self.q;
        }
        // the tail is bounded, and the rounding of the partial sum is tiny
        let rounding = 4.0 * (word.len() as f64 + 1.0) * f64::EPSILON * self.cmax / (1.0 - self.q);
        OracleValue {
            value,
            error: self.tail(word.len()) + rounding,
        }
    }

    fn modulus(&self, n: u32) -> usize {
        let target = math::powi(0.5, n as i32);
        let mut k = 1usize;
        while 2.0 * self.tail(k) >= target && k < 10_000 {
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::lc_approximate;
    use crate::sft::{Limits, Ratio};

    fn full2() -> Sft {
        Sft::full_shift(2, Ratio::new(1, 2).unwrap()).unwrap()
    }

    #[test]
    fn first_hit_values() {
        let o = FirstHitOracle::with_theta(&full2(), 1).unwrap();
        assert_eq!(o.eval(&[0, 0, 1]).value, vec![0.125]);
        let open = o.eval(&[0, 0, 0]);
        assert_eq!(open.value, vec![1.0 / 16.0]);
        assert_eq!(open.error, 1.0 / 16.0);
        let a = lc_approximate(&o, 0.125, &Limits::default()).unwrap();
        assert!(a.sup_error < 0.125);
        assert_eq!(a.potential.level(), 3);
    }

    #[test]
    fn geometric_sum_error_shrinks() {
        let o = GeometricSumOracle::new(&full2(), 0.5, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e3 = o.eval(&[0, 1, 1]).error;
        let e4 = o.eval(&[0, 1, 1, 0]).error;
        assert!(e4 < e3);
        assert_eq!(o.eval(&[1, 0]).value, vec![1.0, 0.5]);
        let a = lc_approximate(&o, 0.01, &Limits::default()).unwrap();
        assert!(a.sup_error < 0.01);
    }
}
