//! Locally constant potentials, oracle potentials with a modulus of
//! continuity, and locally constant approximations of oracles.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::sft::{Limits, PeriodicOrbit, Sft, Symbol, Word, WordSet};
use crate::{Error, Result};

/// A potential `X -> R^m` constant on cylinders of length `k`, stored as a
/// table over the admissible `k`-words.
#[derive(Clone, Debug, PartialEq)]
pub struct LcPotential {
    sft: Sft,
    m: usize,
    words: WordSet,
    values: Vec<f64>,
}

impl LcPotential {
    /// Validates a table keyed by words. Every admissible `k`-word must occur
    /// exactly once.
    pub fn from_table(
        sft: &Sft,
        k: usize,
        m: usize,
        table: &[(Vec<Symbol>, Vec<f64>)],
        limits: &Limits,
    ) -> Result<LcPotential> {
        if m == 0 {
            return Err(Error::InvalidArgument("potential dimension must be positive"));
        }
        let words = sft.enumerate_words(k, limits)?;
        let mut values = vec![0.0; words.len() * m];
        let mut seen = vec![false; words.len()];
        for (w, v) in table {
            let Some(i) = words.index_of(w) else {
                return Err(Error::ExtraWord(format!("{}", Word::new(w.clone()))));
            };
            if seen[i] {
                return Err(Error::ExtraWord(format!("{} (repeated)", Word::new(w.clone()))));
            }
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("potential value"));
            }
            seen[i] = true;
            values[i * m..(i + 1) * m].copy_from_slice(v);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::MissingWord(format!("{}", Word::new(words.get(i).to_vec()))));
        }
        Ok(LcPotential {
            sft: sft.clone(),
            m,
            words,
            values,
        })
    }

    /// Tabulates `f` over the admissible `k`-words.
    pub fn from_fn<F>(sft: &Sft, k: usize, m: usize, limits: &Limits, mut f: F) -> Result<LcPotential>
    where
        F: FnMut(&[Symbol]) -> Vec<f64>,
    {
        if m == 0 {
            return Err(Error::InvalidArgument("potential dimension must be positive"));
        }
        let words = sft.enumerate_words(k, limits)?;
        let mut values = Vec::with_capacity(words.len() * m);
        for w in words.iter() {
            let v = f(w);
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("potential value"));
            }
            values.extend_from_slice(&v);
        }
        Ok(LcPotential {
            sft: sft.clone(),
            m,
            words,
            values,
        })
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    /// Cylinder length on which the potential is constant.
    pub fn level(&self) -> usize {
        self.words.word_len()
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn words(&self) -> &WordSet {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Value on the `i`-th word of [`Self::words`].
    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    /// Value on the cylinder of the first `k` symbols of `w`.
    pub fn value_of(&self, w: &[Symbol]) -> Option<&[f64]> {
        let k = self.level();
        if w.len() < k {
            return None;
        }
        self.words.index_of(&w[..k]).map(|i| self.value(i))
    }

    /// Table entries in word order.
    pub fn entries(&self) -> impl Iterator<Item = (&[Symbol], &[f64])> + '_ {
        self.words.iter().zip(self.values.chunks_exact(self.m))
    }

    /// The scalar potential `v · Φ`.
    pub fn dot(&self, v: &[f64]) -> Result<LcPotential> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: v.len(),
            });
        }
        let values = self
            .values
            .chunks_exact(self.m)
            .map(|row| math::dot(row, v))
            .collect();
        Ok(LcPotential {
            sft: self.sft.clone(),
            m: 1,
            words: self.words.clone(),
            values,
        })
    }

    /// Pointwise sum with another potential on the same shift and level.
    pub fn add(&self, other: &LcPotential) -> Result<LcPotential> {
        if self.m != other.m || self.words != other.words || self.sft != other.sft {
            return Err(Error::InvalidArgument("potentials live on different tables"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(LcPotential {
            sft: self.sft.clone(),
            m: self.m,
            words: self.words.clone(),
            values,
        })
    }

    /// The same potential read on the longer cylinders of length `k2`.
    pub fn refine(&self, k2: usize, limits: &Limits) -> Result<LcPotential> {
        let k = self.level();
        if k2 < k {
            return Err(Error::InvalidArgument("refinement level below current level"));
        }
        if k2 == k {
            return Ok(self.clone());
        }
        LcPotential::from_fn(&self.sft, k2, self.m, limits, |w| {
            self.value_of(w).expect("prefix of an admissible word").to_vec()
        })
    }

    /// Largest pointwise distance to another potential on the same shift.
    pub fn sup_distance(&self, other: &LcPotential, limits: &Limits) -> Result<f64> {
        if self.m != other.m || self.sft != other.sft {
            return Err(Error::InvalidArgument("potentials live on different spaces"));
        }
        let k = self.level().max(other.level());
        let words = self.sft.enumerate_words(k, limits)?;
        let mut best = 0.0f64;
        for w in words.iter() {
            let a = self.value_of(w).expect("admissible prefix");
            let b = other.value_of(w).expect("admissible prefix");
            best = best.max(math::dist(a, b));
        }
        Ok(best)
    }

    /// Average of the potential along a periodic orbit, summed from the
    /// canonical rotation so every rotation gives identical bits.
    pub fn orbit_average(&self, orbit: &PeriodicOrbit) -> Result<Vec<f64>> {
        let canon = orbit.canonical();
        let n = canon.period();
        let k = self.level();
        let mut acc = vec![0.0; self.m];
        for i in 0..n {
            let w = canon.window(i, k);
            let Some(idx) = self.words.index_of(&w) else {
                return Err(Error::InadmissibleWord(format!("{}", Word::new(w))));
            };
            for (a, v) in acc.iter_mut().zip(self.value(idx)) {
                *a += v;
            }
        }
        for a in acc.iter_mut() {
            *a /= n as f64;
        }
        Ok(acc)
    }
}

/// Oracle answer on a cylinder: a value and a bound on the distance from it
/// to the potential at every point of the cylinder.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleValue {
    pub value: Vec<f64>,
    pub error: f64,
}

/// A continuous potential accessed through finite words.
///
/// `eval` must be deterministic and its error bound must not grow when the
/// word is extended. `modulus(n)` is a cylinder length `k`, nondecreasing in
/// `n`, with variation on `k`-cylinders below `2^-n`.
pub trait PotentialOracle {
    fn sft(&self) -> &Sft;
    fn dim(&self) -> usize;
    fn eval(&self, word: &[Symbol]) -> OracleValue;
    fn modulus(&self, n: u32) -> usize;
}

impl<T: PotentialOracle + ?Sized> PotentialOracle for &T {
    fn sft(&self) -> &Sft {
        (**self).sft()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, word: &[Symbol]) -> OracleValue {
        (**self).eval(word)
    }
    fn modulus(&self, n: u32) -> usize {
        (**self).modulus(n)
    }
}

/// A locally constant approximation together with its certified distance
/// to the oracle.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub potential: LcPotential,
    /// Largest oracle error bound over the table, so `‖Φ − Φ_ε‖_∞ <= sup_error`.
    pub sup_error: f64,
}

/// Locally constant potential within `eps` of the oracle in sup norm.
///
/// Starts at the level the oracle's modulus gives for `eps` and deepens
/// until every tabulated error bound is below `eps`; the tabulated bounds,
/// not the modulus, certify the result.
pub fn lc_approximate<O: PotentialOracle + ?Sized>(
    oracle: &O,
    eps: f64,
    limits: &Limits,
) -> Result<Approximation> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument("approximation accuracy must be positive"));
    }
    let n = math::ceil(-math::log2(eps)).max(0.0) as u32;
    let mut k = oracle.modulus(n).max(1);
    loop {
        let mut worst = 0.0f64;
        let pot = LcPotential::from_fn(oracle.sft(), k, oracle.dim(), limits, |w| {
            let ov = oracle.eval(w);
            worst = worst.max(ov.error);
            ov.value
        })?;
        if worst < eps {
            return Ok(Approximation {
                potential: pot,
                sup_error: worst,
            });
        }
        k += 1;
    }
}

/// The sequence `Φ_{ε_n}` with `ε_n = ε_1 q^(n-1)`.
#[derive(Clone, Copy, Debug)]
pub struct ApproxSequence<'a, O: PotentialOracle + ?Sized> {
    pub oracle: &'a O,
    pub eps1: f64,
    pub ratio: f64,
}

impl<'a, O: PotentialOracle + ?Sized> ApproxSequence<'a, O> {
    pub fn new(oracle: &'a O, eps1: f64, ratio: f64) -> Result<Self> {
        if !(eps1 > 0.0) || !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidSchedule("need eps1 > 0 and 0 < ratio < 1"));
        }
        Ok(ApproxSequence { oracle, eps1, ratio })
    }

    pub fn eps(&self, n: usize) -> f64 {
        self.eps1 * math::powi(self.ratio, n.saturating_sub(1) as i32)
    }

    pub fn approx(&self, n: usize, limits: &Limits) -> Result<Approximation> {
        lc_approximate(self.oracle, self.eps(n), limits)
    }
}

/// A locally constant potential seen as an oracle. Words shorter than the
/// level are answered with the value of their first admissible extension
/// and the spread over all extensions.
#[derive(Clone, Debug)]
pub struct LcOracle {
    pub potential: LcPotential,
}

impl LcOracle {
    pub fn new(potential: LcPotential) -> LcOracle {
        LcOracle { potential }
    }
}

impl PotentialOracle for LcOracle {
    fn sft(&self) -> &Sft {
        self.potential.sft()
    }

    fn dim(&self) -> usize {
        self.potential.dim()
    }

    fn eval(&self, word: &[Symbol]) -> OracleValue {
        let p = &self.potential;
        if let Some(v) = p.value_of(word) {
            return OracleValue {
                value: v.to_vec(),
                error: 0.0,
            };
        }
        let ext: Vec<usize> = (0..p.len())
            .filter(|&i| p.words().get(i).starts_with(word))
            .collect();
        let Some(&first) = ext.first() else {
            return OracleValue {
                value: vec![0.0; p.dim()],
                error: f64::INFINITY,
            };
        };
        let value = p.value(first).to_vec();
        let error = ext
            .iter()
            .map(|&i| math::dist(p.value(i), &value))
            .fold(0.0f64, f64::max);
        OracleValue { value, error }
    }

    fn modulus(&self, _n: u32) -> usize {
        self.potential.level()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::Ratio;

    fn half() -> Ratio {
        Ratio::new(1, 2).unwrap()
    }

    fn golden() -> Sft {
        Sft::new(2, &[vec![1, 1], vec![1, 0]], half()).unwrap()
    }

    #[test]
    fn table_validation() {
        let lim = Limits::default();
        let g = golden();
        let ok = LcPotential::from_table(
            &g,
            1,
            2,
            &[(vec![0], vec![0.0, 0.0]), (vec![1], vec![1.0, -1.0])],
            &lim,
        );
        assert!(ok.is_ok());
        let extra = LcPotential::from_table(
            &g,
            2,
            1,
            &[
                (vec![0, 0], vec![0.0]),
                (vec![0, 1], vec![0.0]),
                (vec![1, 0], vec![0.0]),
                (vec![1, 1], vec![0.0]),
            ],
            &lim,
        );
        assert!(matches!(extra, Err(Error::ExtraWord(_))));
        let missing = LcPotential::from_table(&g, 1, 1, &[(vec![0], vec![0.0])], &lim);
        assert!(matches!(missing, Err(Error::MissingWord(_))));
        let nan = LcPotential::from_table(&g, 1, 1, &[(vec![0], vec![f64::NAN]), (vec![1], vec![0.0])], &lim);
        assert!(matches!(nan, Err(Error::NonFinite(_))));
    }

    #[test]
    fn dot_and_average() {
        let lim = Limits::default();
        let s = Sft::full_shift(2, half()).unwrap();
        let phi = LcPotential::from_table(
            &s,
            1,
            2,
            &[(vec![0], vec![1.0, 1.0]), (vec![1], vec![0.0, 3.0])],
            &lim,
        )
        .unwrap();
        let d = phi.dot(&[2.0, -1.0]).unwrap();
        assert_eq!(d.value(0), &[1.0]);
        assert_eq!(d.value(1), &[-3.0]);

        let g = golden();
        let psi = LcPotential::from_table(
            &g,
            2,
            2,
            &[
                (vec![0, 0], vec![1.0, 0.0]),
                (vec![0, 1], vec![0.0, 1.0]),
                (vec![1, 0], vec![0.0, 0.0]),
            ],
            &lim,
        )
        .unwrap();
        let o = PeriodicOrbit::new(&g, vec![0, 1]).unwrap();
        assert_eq!(psi.orbit_average(&o).unwrap(), vec![0.0, 0.5]);
    }

    #[test]
    fn lc_oracle_roundtrip() {
        let lim = Limits::default();
        let g = golden();
        let psi = LcPotential::from_fn(&g, 2, 1, &lim, |w| vec![(w[0] * 2 + w[1]) as f64]).unwrap();
        let o = LcOracle::new(psi.clone());
        let approx = lc_approximate(&o, 1e-3, &lim).unwrap();
        assert_eq!(approx.potential, psi);
        assert_eq!(approx.sup_error, 0.0);
        let short = o.eval(&[0]);
        assert_eq!(short.value, vec![0.0]);
        assert_eq!(short.error, 1.0);
        assert!(lc_approximate(&o, 0.0, &lim).is_err());
    }

    #[test]
    fn refine_keeps_values() {
        let lim = Limits::default();
        let g = golden();
        let psi = LcPotential::from_fn(&g, 1, 1, &lim, |w| vec![w[0] as f64]).unwrap();
        let r = psi.refine(3, &lim).unwrap();
        assert_eq!(r.level(), 3);
        assert_eq!(psi.sup_distance(&r, &lim).unwrap(), 0.0);
    }
}
