//! A potential on the full shift over `{0, 1, 2, 3}` whose rotation set is an
//! infinite polygon with an exposed corner at the origin, and whose
//! localized entropy there cannot be reached from locally constant
//! approximations: the smallest local entropy near the corner is `0` while
//! the largest is `log 2`.
//!
//! Symbols split into the sides `S1 = {0, 1}` and `S2 = {2, 3}`; `1` and `3`
//! are the special symbols whose fixed points `x = 1^∞` and `y = 3^∞` sit on
//! the two curves `±ℓ₁`. A sequence is classified by the longest prefix
//! staying in the side of its first symbol:
//!
//! - run shorter than `λ`: value `(a, 0)`;
//! - run of length `k - 1 >= λ`: value `(x_{k-λ}, ±ℓ₁(x_{k-λ}))` when the
//!   run is all special, `(x_{k-λ}, 0)` otherwise;
//! - infinite run: value `(0, 0)`.
//!
//! The level-`K` approximation keeps this up to runs of length `K - 1` and
//! sends every run of length at least `K` to the value of length `K`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cycles;
use crate::linalg::SparseMatrix;
use crate::math;
use crate::potential::{LcPotential, OracleValue, PotentialOracle};
use crate::sft::{Limits, Ratio, Sft, Symbol, Word};
use crate::thermo::{Equilibria, MarkovMeasure};
use crate::{Error, Result};

/// Largest approximation level whose table is materialised.
pub const MAX_TABLE_LEVEL: usize = 8;
/// Levels up to this one are cross-checked against the generic machinery.
pub const CROSS_CHECK_LEVEL: usize = 6;
/// Largest level for the exact rotation vector enumeration of the witness.
const MAX_WITNESS_LEVEL: usize = 24;
const SAMPLED_TERMS: usize = 200;
const MAX_RATIO: f64 = 0.999;

/// The decreasing sequence `x_k`.
#[derive(Clone, Copy, Debug)]
pub enum Sequence {
    /// `x_k = first · ratio^(k-1)`.
    Geometric { first: f64, ratio: f64 },
    Custom(fn(usize) -> f64),
}

impl Sequence {
    pub fn at(&self, k: usize) -> f64 {
        match *self {
            Sequence::Geometric { first, ratio } => first * math::powi(ratio, k as i32 - 1),
            Sequence::Custom(f) => f(k),
        }
    }
}

/// The concave profile `ℓ₁`.
#[derive(Clone, Copy, Debug)]
pub enum Profile {
    /// `ℓ₁(t) = coeff · t^exponent`.
    Power { coeff: f64, exponent: f64 },
    Custom(fn(f64) -> f64),
}

impl Profile {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Profile::Power { coeff, exponent } => coeff * math::pow(t, exponent),
            Profile::Custom(f) => f(t),
        }
    }
}

/// Parameters of the construction.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryExampleConfig {
    pub a: f64,
    /// Length of the run that leaves the plateau value `(a, 0)`.
    pub lam_off: usize,
    pub x_seq: Sequence,
    pub ell1: Profile,
}

impl Default for BoundaryExampleConfig {
    fn default() -> Self {
        BoundaryExampleConfig {
            a: 1.0,
            lam_off: 3,
            x_seq: Sequence::Geometric {
                first: 0.125,
                ratio: 0.5,
            },
            ell1: Profile::Power {
                coeff: 1.0,
                exponent: 0.5,
            },
        }
    }
}

fn violated(step: u8, detail: alloc::string::String) -> Error {
    Error::ConstructionViolated { step, detail }
}

impl BoundaryExampleConfig {
    pub fn x(&self, k: usize) -> f64 {
        self.x_seq.at(k)
    }

    /// `ℓ₁` for side 1 and `ℓ₂ = −ℓ₁` for side 2.
    pub fn ell(&self, side: usize, t: f64) -> f64 {
        let v = self.ell1.at(t);
        if side == 1 {
            v
        } else {
            -v
        }
    }

    /// Point `(x_t, ℓ_side(x_t))` on a curve.
    pub fn curve(&self, side: usize, t: usize) -> [f64; 2] {
        let x = self.x(t);
        [x, self.ell(side, x)]
    }

    /// Checks the standing assumptions numerically.
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(violated(0, format!("a = {} must be positive", self.a)));
        }
        if self.lam_off < 3 {
            return Err(violated(0, format!("offset {} must be at least 3", self.lam_off)));
        }
        let mut sum = 0.0;
        let mut max_ratio = 0.0f64;
        for k in 1..=SAMPLED_TERMS {
            let xk = self.x(k);
            if !(xk > 0.0 && xk < self.a) {
                return Err(violated(0, format!("x_{k} = {xk} outside (0, a)")));
            }
            let next = self.x(k + 1);
            if !(next < xk) {
                return Err(violated(0, format!("x_{} is not below x_{k}", k + 1)));
            }
            max_ratio = max_ratio.max(next / xk);
            sum += xk;
        }
        if max_ratio > MAX_RATIO {
            return Err(violated(0, format!("ratio {max_ratio} is not exponential decay")));
        }
        let tail = self.x(SAMPLED_TERMS + 1) / (1.0 - max_ratio);
        if !(sum + tail < self.a) {
            return Err(violated(0, format!("sum of x_k ({}) is not below a", sum + tail)));
        }
        let l1 = self.ell1.at(self.x(1));
        let l2 = self.ell1.at(self.x(2));
        if !(l1 < (self.lam_off as f64 + 1.0) * l2) {
            return Err(violated(0, "l(x1) < (offset + 1) l(x2) fails".into()));
        }
        if math::abs(self.ell1.at(0.0)) > 0.0 {
            return Err(violated(0, "profile must vanish at 0".into()));
        }
        let grid: Vec<f64> = (0..=14).map(|i| self.a * i as f64 / 14.0).collect();
        let mut prev = -1.0;
        for &t in &grid {
            let v = self.ell1.at(t);
            if !(v >= 0.0 && v > prev) && t > 0.0 {
                return Err(violated(0, format!("profile not positive increasing at {t}")));
            }
            prev = v;
        }
        let mut checked = 0;
        'outer: for i in 0..grid.len() {
            for j in i + 1..grid.len() {
                if checked == 100 {
                    break 'outer;
                }
                let (s, t) = (grid[i], grid[j]);
                let mid = self.ell1.at(0.5 * (s + t));
                if !(mid > 0.5 * (self.ell1.at(s) + self.ell1.at(t))) {
                    return Err(violated(0, format!("profile not strictly concave on [{s}, {t}]")));
                }
                checked += 1;
            }
        }
        Ok(())
    }

    /// Smallest `k >= λ` with `‖(x_{k+1-λ}, ℓ₁(x_{k+1-λ}))‖ < 2^-n`.
    pub fn modulus(&self, n: u32) -> usize {
        let target = math::powi(0.5, n as i32);
        let lam = self.lam_off;
        let mut k = lam;
        while math::norm(&self.curve(1, k + 1 - lam)) >= target && k < 100_000 {
            k += 1;
        }
        k
    }

    /// Level `K(n) >= 2λ` of the `n`-th approximation: the first `k > λ`
    /// with `‖(x_{k-λ}, ℓ₁(x_{k-λ}))‖ < 2^-n`.
    pub fn approx_level(&self, n: u32) -> usize {
        let target = math::powi(0.5, n as i32);
        let lam = self.lam_off;
        let mut k = lam + 1;
        while math::norm(&self.curve(1, k - lam)) >= target && k < 100_000 {
            k += 1;
        }
        k.max(2 * lam)
    }
}

fn side_of(s: Symbol) -> usize {
    if s <= 1 {
        1
    } else {
        2
    }
}

fn special(side: usize) -> Symbol {
    if side == 1 {
        1
    } else {
        3
    }
}

/// Side of the first symbol, length of the run staying in that side, and
/// whether the run consists of the special symbol only.
fn scan(w: &[Symbol]) -> (usize, usize, bool) {
    let Some(&first) = w.first() else {
        return (1, 0, true);
    };
    let side = side_of(first);
    let run = w.iter().take_while(|&&s| side_of(s) == side).count();
    let all_special = w[..run].iter().all(|&s| s == special(side));
    (side, run, all_special)
}

/// Where a level-`K` cylinder lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassLabel {
    /// Run shorter than the offset.
    Plateau,
    /// Run of length `k - 1`, with `offset < k <= K`.
    Branch { side: usize, k: usize, on_curve: bool },
    /// Run covering all `K` symbols.
    Tail { side: usize, on_curve: bool },
}

/// A value class of the level-`K` approximation and its number of words.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValueClass {
    pub label: ClassLabel,
    pub value: [f64; 2],
    pub words: u128,
}

/// The potential as an oracle on finite words.
#[derive(Clone, Debug)]
pub struct BoundaryOracle {
    cfg: BoundaryExampleConfig,
    sft: Sft,
}

impl BoundaryOracle {
    pub fn new(cfg: BoundaryExampleConfig) -> Result<BoundaryOracle> {
        cfg.validate()?;
        let sft = Sft::full_shift(4, Ratio::new(1, 2)?)?;
        Ok(BoundaryOracle { cfg, sft })
    }

    pub fn config(&self) -> &BoundaryExampleConfig {
        &self.cfg
    }
}

/// The oracle of the exact potential.
pub fn example_potential(cfg: BoundaryExampleConfig) -> Result<BoundaryOracle> {
    BoundaryOracle::new(cfg)
}

impl PotentialOracle for BoundaryOracle {
    fn sft(&self) -> &Sft {
        &self.sft
    }

    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, word: &[Symbol]) -> OracleValue {
        let cfg = &self.cfg;
        let lam = cfg.lam_off;
        let len = word.len();
        let (side, run, all_special) = scan(word);
        if run < len {
            if run < lam {
                return OracleValue {
                    value: vec![cfg.a, 0.0],
                    error: 0.0,
                };
            }
            let t = run + 1 - lam;
            let y = if all_special { cfg.ell(side, cfg.x(t)) } else { 0.0 };
            return OracleValue {
                value: vec![cfg.x(t), y],
                error: 0.0,
            };
        }
        if len < lam {
            let spread = math::sqrt(cfg.a * cfg.a + math::powi(cfg.ell1.at(cfg.x(1)), 2));
            return OracleValue {
                value: vec![cfg.a, 0.0],
                error: spread,
            };
        }
        let t = len + 1 - lam;
        if all_special {
            let p = cfg.curve(side, t);
            OracleValue {
                value: p.to_vec(),
                error: math::norm(&p),
            }
        } else {
            OracleValue {
                value: vec![cfg.x(t), 0.0],
                error: cfg.x(t),
            }
        }
    }

    fn modulus(&self, n: u32) -> usize {
        self.cfg.modulus(n)
    }
}

/// Value of the level-`K` approximation on a word of length at least `K`.
pub fn approx_value(cfg: &BoundaryExampleConfig, k_level: usize, w: &[Symbol]) -> [f64; 2] {
    let lam = cfg.lam_off;
    let u = &w[..k_level.min(w.len())];
    let (side, run, all_special) = scan(u);
    if run < lam {
        return [cfg.a, 0.0];
    }
    let t = run + 1 - lam;
    let x = cfg.x(t);
    [x, if all_special { cfg.ell(side, x) } else { 0.0 }]
}

/// The value classes of the level-`K` approximation with word counts.
pub fn value_classes(cfg: &BoundaryExampleConfig, k_level: usize) -> Vec<ValueClass> {
    let lam = cfg.lam_off;
    let kk = k_level as u32;
    let pow4 = |e: u32| 4u128.pow(e);
    let pow2 = |e: u32| 2u128.pow(e);
    let mut out = vec![ValueClass {
        label: ClassLabel::Plateau,
        value: [cfg.a, 0.0],
        words: pow4(kk) - 2 * pow2(lam as u32) * pow4(kk - lam as u32),
    }];
    for side in 1..=2 {
        for k in lam + 1..=k_level {
            let rest = 2 * pow4(kk - k as u32);
            let x = cfg.x(k - lam);
            out.push(ValueClass {
                label: ClassLabel::Branch {
                    side,
                    k,
                    on_curve: true,
                },
                value: [x, cfg.ell(side, x)],
                words: rest,
            });
            out.push(ValueClass {
                label: ClassLabel::Branch {
                    side,
                    k,
                    on_curve: false,
                },
                value: [x, 0.0],
                words: (pow2(k as u32 - 1) - 1) * rest,
            });
        }
        let x = cfg.x(k_level + 1 - lam);
        out.push(ValueClass {
            label: ClassLabel::Tail { side, on_curve: true },
            value: [x, cfg.ell(side, x)],
            words: 1,
        });
        out.push(ValueClass {
            label: ClassLabel::Tail {
                side,
                on_curve: false,
            },
            value: [x, 0.0],
            words: pow2(kk) - 1,
        });
    }
    out
}

/// One level of the approximation sequence.
#[derive(Clone, Debug)]
pub struct LevelApprox {
    pub n: u32,
    pub eps: f64,
    pub k: usize,
    pub potential: LcPotential,
}

/// Tabulates the level-`K(n)` approximation on all `4^K` words.
pub fn example_approximation(cfg: &BoundaryExampleConfig, n: u32, limits: &Limits) -> Result<LevelApprox> {
    if n == 0 {
        return Err(Error::InvalidArgument("approximation index starts at 1"));
    }
    cfg.validate()?;
    let k = cfg.approx_level(n);
    if k > MAX_TABLE_LEVEL {
        return Err(Error::CapExceeded {
            what: "boundary table level",
            required: k as u128,
            cap: MAX_TABLE_LEVEL as u128,
        });
    }
    let sft = Sft::full_shift(4, Ratio::new(1, 2)?)?;
    let potential = LcPotential::from_fn(&sft, k, 2, limits, |w| approx_value(cfg, k, w).to_vec())?;
    Ok(LevelApprox {
        n,
        eps: math::powi(0.5, n as i32),
        k,
        potential,
    })
}

/// Named corner of the polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexLabel {
    /// `w(0) = (a, 0)`.
    Plateau,
    /// `w(∞) = (0, 0)`.
    Exposed,
    /// `w_side(j)`.
    Curve { side: usize, j: usize },
}

/// A named vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub label: VertexLabel,
    pub point: [f64; 2],
}

/// `w(0)`, `w(∞)` and `w_i(j)` for `λ <= j <= j_max`.
pub fn example_vertices(cfg: &BoundaryExampleConfig, j_max: usize) -> Result<Vec<Vertex>> {
    let lam = cfg.lam_off;
    if j_max < lam {
        return Err(Error::InvalidArgument("j_max must be at least the offset"));
    }
    let a = cfg.a;
    let mut out = vec![
        Vertex {
            label: VertexLabel::Plateau,
            point: [a, 0.0],
        },
        Vertex {
            label: VertexLabel::Exposed,
            point: [0.0, 0.0],
        },
    ];
    for side in 1..=2 {
        let other = 3 - side;
        let x1 = cfg.x(1);
        let l = lam as f64;
        let px = (3.0 * (l - 1.0) * a + 3.0 * x1) / (3.0 * l);
        let py = (2.0 * cfg.ell(side, x1) + cfg.ell(other, x1)) / (3.0 * l);
        out.push(Vertex {
            label: VertexLabel::Curve { side, j: lam },
            point: [px, py],
        });
        let mut sx = l * a;
        let mut sy = 0.0;
        for j in lam + 1..=j_max {
            let p = cfg.curve(side, j - lam);
            sx += p[0];
            sy += p[1];
            out.push(Vertex {
                label: VertexLabel::Curve { side, j },
                point: [sx / j as f64, sy / j as f64],
            });
        }
    }
    Ok(out)
}

/// Exposedness of the origin at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct ExposedCertificate {
    pub n: u32,
    pub k: usize,
    /// Smallest first coordinate over the approximation's values.
    pub margin: f64,
    /// Outward normal of the supporting line through the origin.
    pub normal: [f64; 2],
}

/// Every value of the level-`n` approximation has positive first
/// coordinate, so the second axis supports the hull only at the origin.
pub fn certify_exposed(cfg: &BoundaryExampleConfig, n: u32) -> Result<ExposedCertificate> {
    cfg.validate()?;
    let k = cfg.approx_level(n);
    let margin = value_classes(cfg, k)
        .iter()
        .map(|c| c.value[0])
        .fold(f64::INFINITY, f64::min);
    if !(margin > 0.0) {
        return Err(violated(2, format!("value with first coordinate {margin}")));
    }
    Ok(ExposedCertificate {
        n,
        k,
        margin,
        normal: [-1.0, 0.0],
    })
}

/// Proof record that the smallest local entropy near the corner is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerCertificate {
    pub n: u32,
    pub eps: f64,
    pub k: usize,
    pub side: usize,
    /// The extreme value `(x_{K+1-λ}, ℓ_side(x_{K+1-λ}))`.
    pub w_star: [f64; 2],
    /// Words whose cylinders map to `w_star`.
    pub preimage: Vec<Word>,
    /// States of the maximal invariant subgraph inside the preimage.
    pub invariant_states: Vec<Word>,
    /// Always exactly zero when the certificate exists.
    pub h_lower: f64,
}

fn beats(side: usize, w_star: [f64; 2], v: [f64; 2]) -> bool {
    v[0] > w_star[0] || (v[0] == w_star[0] && if side == 1 { v[1] < w_star[1] } else { v[1] > w_star[1] })
}

fn check_side(side: usize) -> Result<()> {
    if side == 1 || side == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("side must be 1 or 2"))
    }
}

/// Support argument on the block graph restricted to the preimage words:
/// returns the surviving words and checks that they form a single loop.
fn single_loop(preimage: &[Vec<Symbol>]) -> Result<Vec<Vec<Symbol>>> {
    let adj: Vec<Vec<u32>> = preimage
        .iter()
        .map(|u| {
            preimage
                .iter()
                .enumerate()
                .filter(|(_, v)| u[1..] == v[..v.len() - 1])
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect();
    let core = cycles::invariant_core(&adj);
    let ok = core.len() == 1 && adj[core[0] as usize].contains(&core[0]);
    if !ok {
        return Err(violated(4, format!("{} states survive pruning", core.len())));
    }
    Ok(core.iter().map(|&i| preimage[i as usize].clone()).collect())
}

fn w_star(cfg: &BoundaryExampleConfig, k: usize, side: usize) -> [f64; 2] {
    cfg.curve(side, k + 1 - cfg.lam_off)
}

/// Certifies `h^l = 0` at level `n` from the value classes, without
/// materialising the table.
pub fn certify_lower(cfg: &BoundaryExampleConfig, n: u32, side: usize) -> Result<LowerCertificate> {
    check_side(side)?;
    cfg.validate()?;
    let k = cfg.approx_level(n);
    let eps = math::powi(0.5, n as i32);
    let ws = w_star(cfg, k, side);
    if !(math::norm(&ws) <= eps) {
        return Err(violated(1, format!("|w*| = {} exceeds {eps}", math::norm(&ws))));
    }
    let classes = value_classes(cfg, k);
    let mut hits = Vec::new();
    for c in &classes {
        if c.value == ws {
            hits.push(*c);
        } else if !beats(side, ws, c.value) {
            return Err(violated(2, format!("{:?} does not lie beyond w*", c.label)));
        }
    }
    let expected = ClassLabel::Tail { side, on_curve: true };
    if hits.len() != 1 || hits[0].label != expected || hits[0].words != 1 {
        return Err(violated(3, format!("preimage classes {hits:?}")));
    }
    let word = vec![special(side); k];
    let states = single_loop(&[word.clone()])?;
    Ok(LowerCertificate {
        n,
        eps,
        k,
        side,
        w_star: ws,
        preimage: vec![Word::new(word)],
        invariant_states: states.into_iter().map(Word::new).collect(),
        h_lower: 0.0,
    })
}

/// The same certificate read off an explicit table, using the generic
/// block-graph pruning of the shift.
pub fn certify_lower_table(
    cfg: &BoundaryExampleConfig,
    n: u32,
    side: usize,
    table: &LcPotential,
    limits: &Limits,
) -> Result<LowerCertificate> {
    check_side(side)?;
    let k = table.level();
    let eps = math::powi(0.5, n as i32);
    let ws = w_star(cfg, k, side);
    if !(math::norm(&ws) <= eps) {
        return Err(violated(1, format!("|w*| = {} exceeds {eps}", math::norm(&ws))));
    }
    let mut preimage: Vec<Vec<Symbol>> = Vec::new();
    let mut states: Vec<Symbol> = Vec::new();
    for (i, (w, v)) in table.entries().enumerate() {
        let v = [v[0], v[1]];
        if v == ws {
            preimage.push(w.to_vec());
            states.push(i as Symbol);
        } else if !beats(side, ws, v) {
            return Err(violated(2, format!("value {v:?} on {}", Word::new(w.to_vec()))));
        }
    }
    if preimage != [vec![special(side); k]] {
        return Err(violated(3, format!("{} words map to w*", preimage.len())));
    }
    let rec = table.sft().recode(k, limits)?;
    let sub = rec
        .target
        .max_invariant_subgraph(&states)
        .ok_or_else(|| violated(4, "no invariant subsystem".into()))?;
    let single = sub.states.len() == 1 && sub.sft.allows(0, 0);
    if !single {
        return Err(violated(4, format!("{} states survive pruning", sub.states.len())));
    }
    Ok(LowerCertificate {
        n,
        eps,
        k,
        side,
        w_star: ws,
        preimage: preimage.into_iter().map(Word::new).collect(),
        invariant_states: sub
            .states
            .iter()
            .map(|&s| Word::new(rec.word_of_state(s as usize).to_vec()))
            .collect(),
        h_lower: 0.0,
    })
}

/// The uniform Bernoulli measure on one side, as a Markov measure on the
/// full shift over four symbols.
pub fn side_bernoulli(side: usize) -> Result<MarkovMeasure> {
    check_side(side)?;
    let sft = Sft::full_shift(4, Ratio::new(1, 2)?)?;
    let own: [u32; 2] = if side == 1 { [0, 1] } else { [2, 3] };
    let rows = (0..4u32)
        .map(|i| {
            if own.contains(&i) {
                own.iter().map(|&j| (j, 0.5)).collect()
            } else {
                (0..4u32).map(|j| (j, 0.25)).collect()
            }
        })
        .collect();
    let p = (0..4u32).map(|i| if own.contains(&i) { 0.5 } else { 0.0 }).collect();
    MarkovMeasure::new(&sft, p, SparseMatrix::from_rows(4, rows)?)
}

/// A measure near the corner with entropy `log 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperWitness {
    pub n: u32,
    pub eps: f64,
    pub k: usize,
    pub side: usize,
    /// Rotation vector by summing over all `2^K` cylinders of the side.
    pub rv: [f64; 2],
    /// `(x_{K+1-λ}, 2^-K ℓ_side(x_{K+1-λ}))`.
    pub rv_closed_form: [f64; 2],
    pub entropy: f64,
}

/// Witness for `h^u >= log 2`: the Bernoulli measure on one side.
pub fn certify_upper(cfg: &BoundaryExampleConfig, n: u32, side: usize) -> Result<UpperWitness> {
    check_side(side)?;
    cfg.validate()?;
    let k = cfg.approx_level(n);
    if k > MAX_WITNESS_LEVEL {
        return Err(Error::CapExceeded {
            what: "witness enumeration level",
            required: k as u128,
            cap: MAX_WITNESS_LEVEL as u128,
        });
    }
    let eps = math::powi(0.5, n as i32);
    let own: [Symbol; 2] = if side == 1 { [0, 1] } else { [2, 3] };
    let mut sum = [0.0f64; 2];
    let mut w = vec![0 as Symbol; k];
    for bits in 0..(1u64 << k) {
        for (i, s) in w.iter_mut().enumerate() {
            *s = own[((bits >> (k - 1 - i)) & 1) as usize];
        }
        let v = approx_value(cfg, k, &w);
        sum[0] += v[0];
        sum[1] += v[1];
    }
    let scale = math::powi(0.5, k as i32);
    let rv = [sum[0] * scale, sum[1] * scale];
    let p = cfg.curve(side, k + 1 - cfg.lam_off);
    let closed = [p[0], scale * p[1]];
    if math::dist(&rv, &closed) > 1e-12 {
        return Err(violated(5, format!("enumerated rv {rv:?} differs from {closed:?}")));
    }
    if !(math::norm(&rv) <= eps) {
        return Err(violated(5, format!("witness rv {rv:?} outside the ball")));
    }
    let entropy = side_bernoulli(side)?.entropy();
    Ok(UpperWitness {
        n,
        eps,
        k,
        side,
        rv,
        rv_closed_form: closed,
        entropy,
    })
}

/// Sampled equilibrium states near the corner; a plausibility check that
/// proves nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSample {
    pub v: [f64; 2],
    pub rv: [f64; 2],
    pub entropy: f64,
    pub in_ball: bool,
}

/// Equilibrium states of `v·Φ_n` for directions pushing towards the corner.
/// Beyond `|v| ≈ 100` the plateau weights underflow and the transfer matrix
/// stops being numerically irreducible, so the sweep stays below that.
pub fn sanity_sweep(cfg: &BoundaryExampleConfig, n: u32, limits: &Limits) -> Result<Vec<SweepSample>> {
    let level = example_approximation(cfg, n, limits)?;
    if level.k > CROSS_CHECK_LEVEL {
        return Err(Error::CapExceeded {
            what: "sweep level",
            required: level.k as u128,
            cap: CROSS_CHECK_LEVEL as u128,
        });
    }
    let eq = Equilibria::new(&level.potential, limits)?.with_tol(1e-10);
    let mut out = Vec::new();
    for &t in &[10.0, 20.0, 40.0, 80.0] {
        for &s in &[-40.0, 0.0, 40.0] {
            let r = eq.record(&[-t, s])?;
            let rv = [r.rv[0], r.rv[1]];
            out.push(SweepSample {
                v: [-t, s],
                rv,
                entropy: r.entropy,
                in_ball: math::norm(&rv) <= level.eps,
            });
        }
    }
    Ok(out)
}

/// Per-level summary of the entropy gap at the corner.
#[derive(Clone, Debug, PartialEq)]
pub struct GapLevel {
    pub n: u32,
    pub eps: f64,
    pub k: usize,
    pub h_l_certified: f64,
    pub h_u_witness: f64,
    pub gap: f64,
    pub lower: [LowerCertificate; 2],
    pub upper: [UpperWitness; 2],
}

/// Lower certificates and upper witnesses on both sides at level `n`.
pub fn gap_level(cfg: &BoundaryExampleConfig, n: u32) -> Result<GapLevel> {
    let l1 = certify_lower(cfg, n, 1)?;
    let l2 = certify_lower(cfg, n, 2)?;
    let u1 = certify_upper(cfg, n, 1)?;
    let u2 = certify_upper(cfg, n, 2)?;
    let h_l = l1.h_lower.max(l2.h_lower);
    let h_u = u1.entropy.min(u2.entropy);
    Ok(GapLevel {
        n,
        eps: l1.eps,
        k: l1.k,
        h_l_certified: h_l,
        h_u_witness: h_u,
        gap: h_u - h_l,
        lower: [l1, l2],
        upper: [u1, u2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_levels() {
        let cfg = BoundaryExampleConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.approx_level(1), 6);
        assert_eq!(cfg.approx_level(2), 6);
        assert_eq!(cfg.approx_level(3), 8);
    }

    #[test]
    fn class_counts_cover_all_words() {
        let cfg = BoundaryExampleConfig::default();
        for k in 6..=9 {
            let total: u128 = value_classes(&cfg, k).iter().map(|c| c.words).sum();
            assert_eq!(total, 4u128.pow(k as u32));
        }
    }

    #[test]
    fn oracle_cases() {
        let o = BoundaryOracle::new(BoundaryExampleConfig::default()).unwrap();
        let v = o.eval(&[2, 1, 0, 0]);
        assert_eq!((v.value, v.error), (vec![1.0, 0.0], 0.0));
        let v = o.eval(&[1, 1, 1, 1, 2]);
        let x = 0.125 * 0.5;
        assert_eq!(v.value, vec![x, math::sqrt(x)]);
        assert_eq!(v.error, 0.0);
        let v = o.eval(&[1; 20]);
        assert!(v.error < 2e-3 && math::norm(&v.value) <= v.error);
    }

    #[test]
    fn bad_configs_rejected() {
        let mut cfg = BoundaryExampleConfig::default();
        cfg.a = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = BoundaryExampleConfig::default();
        cfg.x_seq = Sequence::Geometric {
            first: 0.6,
            ratio: 0.5,
        };
        assert!(cfg.validate().is_err());
    }
}
