//! Transfer matrices, Markov equilibrium states, entropy and pressure of
//! locally constant potentials.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, SparseMatrix};
use crate::math;
use crate::perron::{perron, PerronData};
use crate::potential::LcPotential;
use crate::sft::{Limits, RecodedSystem, Sft, Symbol, Word};
use crate::{Error, Result};

/// Default relative width requested from the Perron solver.
pub const DEFAULT_TOL: f64 = 1e-12;
const STATIONARITY_TOL: f64 = 1e-10;
const RETRIES: usize = 3;
/// Up to this many states the stationary vector comes from elimination.
const GTH_MAX_STATES: usize = 256;

/// A closed interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// `B_ij = exp(Φ(ij)) A_ij` for a scalar potential of level one or two
/// (level one is read as `Φ(ij) = Φ(i)`).
pub fn transfer_matrix(s: &Sft, phi1: &LcPotential) -> Result<SparseMatrix> {
    if phi1.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: phi1.dim(),
        });
    }
    if phi1.sft() != s {
        return Err(Error::InvalidArgument("potential lives on another shift"));
    }
    let k = phi1.level();
    if k > 2 {
        return Err(Error::LevelTooHigh(k));
    }
    let d = s.alphabet_size();
    let rows = (0..d as Symbol)
        .map(|i| {
            s.successors(i)
                .iter()
                .map(|&j| {
                    let w = [i, j];
                    let v = phi1.value_of(&w[..k]).expect("admissible pair")[0];
                    (j, math::exp(v))
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_rows(d, rows)
}

/// Shift-invariant Markov measure given by a stationary vector and a
/// row-stochastic matrix compatible with the shift.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovMeasure {
    pub sft: Sft,
    pub p: Vec<f64>,
    pub transition: SparseMatrix,
}

impl MarkovMeasure {
    /// Validates stochasticity, compatibility and stationarity.
    pub fn new(sft: &Sft, p: Vec<f64>, transition: SparseMatrix) -> Result<MarkovMeasure> {
        let d = sft.alphabet_size();
        if p.len() != d || transition.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len().min(transition.dim()),
            });
        }
        let mm = MarkovMeasure {
            sft: sft.clone(),
            p,
            transition,
        };
        mm.check()?;
        Ok(mm)
    }

    /// Markov measure of a compatible stochastic matrix with its stationary
    /// vector; the matrix must be irreducible.
    pub fn from_transition(sft: &Sft, transition: SparseMatrix) -> Result<MarkovMeasure> {
        let pd = perron(&transition, DEFAULT_TOL)?;
        let total: f64 = pd.l.iter().sum();
        let p = pd.l.iter().map(|x| x / total).collect();
        MarkovMeasure::new(sft, p, transition)
    }

    fn check(&self) -> Result<()> {
        let d = self.p.len();
        if self.p.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::EnclosureTooWide("negative stationary weight"));
        }
        if math::abs(self.p.iter().sum::<f64>() - 1.0) > 1e-12 {
            return Err(Error::EnclosureTooWide("stationary vector does not sum to one"));
        }
        let mut pp = vec![0.0; d];
        for i in 0..d {
            let mut row = 0.0;
            for (j, v) in self.transition.row(i) {
                if v < 0.0 {
                    return Err(Error::BadMatrix("negative transition".into()));
                }
                if !self.sft.allows(i as Symbol, j as Symbol) {
                    return Err(Error::BadMatrix("transition not allowed by the shift".into()));
                }
                row += v;
                pp[j] += self.p[i] * v;
            }
            if math::abs(row - 1.0) > 1e-12 {
                return Err(Error::EnclosureTooWide("row does not sum to one"));
            }
        }
        let l1: f64 = pp.iter().zip(&self.p).map(|(a, b)| math::abs(a - b)).sum();
        if l1 > STATIONARITY_TOL {
            return Err(Error::EnclosureTooWide("stationary vector is not invariant"));
        }
        Ok(())
    }

    /// `μ(C(w)) = p_{w0} P_{w0 w1} ⋯`.
    pub fn measure_of_cylinder(&self, w: &[Symbol]) -> Result<f64> {
        if w.is_empty() {
            return Ok(1.0);
        }
        if !self.sft.is_admissible(w) {
            return Err(Error::InadmissibleWord(alloc::format!("{}", Word::new(w.to_vec()))));
        }
        let mut m = self.p[w[0] as usize];
        for pair in w.windows(2) {
            m *= self.transition.get(pair[0] as usize, pair[1] as usize);
        }
        Ok(m)
    }

    /// `−Σ p_i P_ij log P_ij`.
    pub fn entropy(&self) -> f64 {
        let mut h = 0.0;
        for (i, &pi) in self.p.iter().enumerate() {
            let mut row = 0.0;
            for (_, v) in self.transition.row(i) {
                row += math::xlogx(v);
            }
            h -= pi * row;
        }
        h
    }

    /// `∫ Φ dμ` for a potential on the same shift.
    pub fn integral(&self, phi: &LcPotential) -> Result<Vec<f64>> {
        if phi.sft() != &self.sft {
            return Err(Error::InvalidArgument("potential lives on another shift"));
        }
        let mut acc = vec![0.0; phi.dim()];
        for (w, v) in phi.entries() {
            let mu = self.measure_of_cylinder(w)?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a += mu * x;
            }
        }
        Ok(acc)
    }
}

/// The equilibrium state of `v·Φ` and its thermodynamic data.
#[derive(Clone, Debug)]
pub struct EquilibriumRecord {
    pub v: Vec<f64>,
    /// Perron data of the shifted transfer matrix `exp(v·Φ − c)`.
    pub lambda: PerronData,
    /// The shift `c` removed before exponentiating.
    pub shift: f64,
    /// Markov measure on the block presentation at the potential's level.
    pub measure: MarkovMeasure,
    pub rv: Vec<f64>,
    pub entropy: f64,
    pub pressure: f64,
}

impl EquilibriumRecord {
    /// Enclosure of the pressure from the eigenvalue enclosure.
    pub fn pressure_enclosure(&self) -> Enclosure {
        Enclosure {
            lo: math::ln(self.lambda.lambda_lo) + self.shift,
            hi: math::ln(self.lambda.lambda_hi) + self.shift,
        }
    }
}

/// A potential prepared for repeated equilibrium computations: the shift is
/// recoded once to the potential's level so the potential becomes a
/// function of the current state.
#[derive(Clone, Debug)]
pub struct Equilibria {
    rec: RecodedSystem,
    m: usize,
    values: Vec<f64>,
    tol: f64,
}

impl Equilibria {
    pub fn new(phi: &LcPotential, limits: &Limits) -> Result<Equilibria> {
        if !phi.sft().is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let rec = phi.sft().recode(phi.level(), limits)?;
        let m = phi.dim();
        let mut values = Vec::with_capacity(rec.words.len() * m);
        for i in 0..rec.words.len() {
            values.extend_from_slice(phi.value(i));
        }
        Ok(Equilibria {
            rec,
            m,
            values,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Equilibria {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn states(&self) -> usize {
        self.rec.words.len()
    }

    pub fn recoded(&self) -> &RecodedSystem {
        &self.rec
    }

    /// Potential value on a state of the block presentation.
    pub fn state_value(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    fn scalar(&self, v: &[f64]) -> Vec<f64> {
        self.values.chunks_exact(self.m).map(|row| math::dot(row, v)).collect()
    }

    fn shifted_matrix(&self, u: &[f64]) -> Result<(SparseMatrix, f64)> {
        let shift = u.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if !shift.is_finite() {
            return Err(Error::NonFinite("potential direction"));
        }
        let t = &self.rec.target;
        let rows = (0..t.alphabet_size())
            .map(|i| {
                let e = math::exp(u[i] - shift);
                t.successors(i as Symbol).iter().map(|&j| (j, e)).collect()
            })
            .collect();
        Ok((SparseMatrix::from_rows(t.alphabet_size(), rows)?, shift))
    }

    /// Pressure enclosure of `v·Φ`.
    pub fn pressure(&self, v: &[f64]) -> Result<Enclosure> {
        self.check_dim(v)?;
        let (b, shift) = self.shifted_matrix(&self.scalar(v))?;
        let pd = perron(&b, self.tol)?;
        Ok(Enclosure {
            lo: math::ln(pd.lambda_lo) + shift,
            hi: math::ln(pd.lambda_hi) + shift,
        })
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("potential direction"));
        }
        Ok(())
    }

    /// Equilibrium state of `v·Φ`.
    pub fn record(&self, v: &[f64]) -> Result<EquilibriumRecord> {
        self.check_dim(v)?;
        let u = self.scalar(v);
        let (b, shift) = self.shifted_matrix(&u)?;
        let mut tol = self.tol;
        let mut last = Error::EnclosureTooWide("retry budget exhausted");
        for attempt in 0..=RETRIES {
            let pd = match perron(&b, tol) {
                Ok(pd) => pd,
                Err(_) if attempt > 0 => return Err(last),
                Err(e) => return Err(e),
            };
            match stochasticize_on(&self.rec.target, &b, &pd) {
                Ok(measure) => {
                    let entropy = measure.entropy();
                    let mut rv = vec![0.0; self.m];
                    for (i, &pi) in measure.p.iter().enumerate() {
                        for (a, x) in rv.iter_mut().zip(self.state_value(i)) {
                            *a += pi * x;
                        }
                    }
                    let pressure = math::ln(pd.lambda()) + shift;
                    return Ok(EquilibriumRecord {
                        v: v.to_vec(),
                        lambda: pd,
                        shift,
                        measure,
                        rv,
                        entropy,
                        pressure,
                    });
                }
                Err(e) => {
                    last = e;
                    tol /= 10.0;
                }
            }
        }
        Err(last)
    }

    /// Rotation vector and entropy only.
    pub fn rv_entropy(&self, v: &[f64]) -> Result<(Vec<f64>, f64)> {
        let r = self.record(v)?;
        Ok((r.rv, r.entropy))
    }
}

/// `P_ij = B_ij r_j / (λ r_i)` (rows renormalised) and `p` stationary for `P`:
/// by elimination on small systems, `p_i ∝ l_i r_i` otherwise.
pub fn stochasticize(b: &SparseMatrix, pd: &PerronData, sft: &Sft) -> Result<MarkovMeasure> {
    stochasticize_on(sft, b, pd)
}

fn stochasticize_on(sft: &Sft, b: &SparseMatrix, pd: &PerronData) -> Result<MarkovMeasure> {
    let n = b.dim();
    let r = &pd.r;
    let l = &pd.l;
    let rows = (0..n)
        .map(|i| {
            let total: f64 = b.row(i).map(|(j, v)| v * r[j]).sum();
            b.row(i)
                .map(|(j, v)| (j as u32, v * r[j] / total))
                .collect::<Vec<_>>()
        })
        .collect();
    let transition = SparseMatrix::from_rows(n, rows)?;
    let gth = if n <= GTH_MAX_STATES {
        linalg::stationary_gth(&transition.to_dense())
    } else {
        None
    };
    let p = gth.unwrap_or_else(|| {
        let lr: f64 = l.iter().zip(r).map(|(a, b)| a * b).sum();
        l.iter().zip(r).map(|(a, b)| a * b / lr).collect()
    });
    MarkovMeasure::new(sft, p, transition)
}

/// Equilibrium state of `v·Φ` for a potential of any level.
pub fn equilibrium(phi: &LcPotential, v: &[f64], tol: f64, limits: &Limits) -> Result<EquilibriumRecord> {
    Equilibria::new(phi, limits)?.with_tol(tol).record(v)
}

/// Enclosure of `log λ(A)`.
pub fn topological_entropy(s: &Sft, tol: f64) -> Result<Enclosure> {
    if !s.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let rows = (0..s.alphabet_size() as Symbol)
        .map(|i| s.successors(i).iter().map(|&j| (j, 1.0)).collect())
        .collect();
    let a = SparseMatrix::from_rows(s.alphabet_size(), rows)?;
    let pd = perron(&a, tol)?;
    Ok(Enclosure {
        lo: math::ln(pd.lambda_lo),
        hi: math::ln(pd.lambda_hi),
    })
}

/// Enclosure of the topological pressure of a scalar potential.
pub fn pressure(phi1: &LcPotential, tol: f64, limits: &Limits) -> Result<Enclosure> {
    if phi1.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: phi1.dim(),
        });
    }
    Equilibria::new(phi1, limits)?.with_tol(tol).pressure(&[1.0])
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

    fn bernoulli_phi(s: &Sft) -> LcPotential {
        LcPotential::from_fn(s, 1, 1, &Limits::default(), |w| vec![w[0] as f64]).unwrap()
    }

    #[test]
    fn transfer_matrix_examples() {
        let s = Sft::full_shift(2, half()).unwrap();
        let phi = LcPotential::from_fn(&s, 1, 1, &Limits::default(), |w| {
            vec![if w[0] == 0 { math::ln(2.0) } else { 0.0 }]
        })
        .unwrap();
        let b = transfer_matrix(&s, &phi).unwrap();
        assert!((b.get(0, 1) - 2.0).abs() < 1e-15 && b.get(1, 0) == 1.0);
        let p = pressure(&phi, 1e-12, &Limits::default()).unwrap();
        assert!(p.contains(math::ln(3.0)) || (p.mid() - math::ln(3.0)).abs() < 1e-12);
    }

    #[test]
    fn golden_zero_potential_measure() {
        let g = golden();
        let phi = bernoulli_phi(&g);
        let rec = equilibrium(&phi, &[0.0], 1e-12, &Limits::default()).unwrap();
        let gold = (1.0 + math::sqrt(5.0)) / 2.0;
        assert!((rec.entropy - math::ln(gold)).abs() < 1e-12);
        assert!((rec.rv[0] - 1.0 / (gold * gold + 1.0)).abs() < 1e-12);
        let mu01 = rec.measure.measure_of_cylinder(&[0, 1]).unwrap();
        assert!((mu01 - 0.2763932022500210).abs() < 1e-12);
        assert!(rec.measure.measure_of_cylinder(&[1, 1]).is_err());
    }

    #[test]
    fn bernoulli_closed_form() {
        let s = Sft::full_shift(2, half()).unwrap();
        let phi = bernoulli_phi(&s);
        let eq = Equilibria::new(&phi, &Limits::default()).unwrap();
        for &t in &[-2.0, 0.0, 0.7] {
            let r = eq.record(&[t]).unwrap();
            let et = math::exp(t);
            assert!((r.pressure - math::ln(1.0 + et)).abs() < 1e-12);
            assert!((r.rv[0] - et / (1.0 + et)).abs() < 1e-12);
            let h = math::ln(1.0 + et) - t * et / (1.0 + et);
            assert!((r.entropy - h).abs() < 1e-12);
        }
    }

    #[test]
    fn topological_entropy_of_full_four_shift() {
        let s = Sft::full_shift(4, half()).unwrap();
        let h = topological_entropy(&s, 1e-12).unwrap();
        assert!((h.mid() - math::ln(4.0)).abs() < 1e-12);
    }

    #[test]
    fn permutation_measure_has_zero_entropy() {
        let s = Sft::new(2, &[vec![0, 1], vec![1, 0]], half()).unwrap();
        let p = SparseMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let mm = MarkovMeasure::from_transition(&s, p).unwrap();
        assert_eq!(mm.entropy(), 0.0);
        assert!((mm.p[0] - 0.5).abs() < 1e-12);
    }
}
