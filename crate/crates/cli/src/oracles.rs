//! Named oracle potentials and a memoizing wrapper.
//!
//! An oracle is selected by a spec string `name[:key=value;key=value...]`:
//!
//! - `first-hit:target=S[;q=Q]`: `q^j` at the first position `j` holding
//!   `S`, `0` when `S` never occurs. `q` defaults to the shift's θ. Needs a
//!   shift file.
//! - `geometric-sum:q=Q;c=V;c=V...`: `Σ q^(i-1) c[ξ_i]`, one `c` per symbol
//!   in symbol order, each a comma separated vector. Needs a shift file.
//! - `boundary[:a=..;lam=..;x1=..;ratio=..;coeff=..;exponent=..]`: the
//!   four-symbol boundary example on the full 4-shift, with the defaults of
//!   [`BoundaryParams`]. Ignores the shift file.

use std::collections::HashMap;
use std::sync::Mutex;

use rotset_core::boundary::example_potential;
use rotset_core::oracles::{FirstHitOracle, GeometricSumOracle};
use rotset_core::{OracleValue, PotentialOracle, Sft, Symbol};

use crate::config::BoundaryParams;
use crate::formats::parse_number;
use crate::CliError;

/// Caches oracle answers per word. Oracles are deterministic, so the cache
/// never changes a result.
pub struct Memo<O> {
    inner: O,
    cache: Mutex<HashMap<Vec<Symbol>, OracleValue>>,
}

impl<O: PotentialOracle> Memo<O> {
    pub fn new(inner: O) -> Self {
        Memo {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().map(|c| c.len()).unwrap_or(0)
    }
}

impl<O: PotentialOracle> PotentialOracle for Memo<O> {
    fn sft(&self) -> &Sft {
        self.inner.sft()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, word: &[Symbol]) -> OracleValue {
        if let Ok(cache) = self.cache.lock() {
            if let Some(v) = cache.get(word) {
                return v.clone();
            }
        }
        let v = self.inner.eval(word);
        if let Ok(mut cache) = self.cache.lock() {
            cache.insert(word.to_vec(), v.clone());
        }
        v
    }

    fn modulus(&self, n: u32) -> usize {
        self.inner.modulus(n)
    }
}

pub type BoxedOracle = Box<dyn PotentialOracle + Send + Sync>;

fn bad(spec: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("oracle {spec:?}: {msg}"))
}

fn scalar(spec: &str, key: &str, v: &str) -> Result<f64, CliError> {
    parse_number(v).ok_or_else(|| bad(spec, format!("{key} must be a number, got {v:?}")))
}

/// Builds the oracle named by `spec`, memoized.
pub fn build_oracle(spec: &str, sft: Option<&Sft>) -> Result<BoxedOracle, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params: Vec<(&str, &str)> = Vec::new();
    for p in rest.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((k, v)) = p.split_once('=') else {
            return Err(bad(spec, format!("parameter {p:?} is not key=value")));
        };
        params.push((k.trim(), v.trim()));
    }
    let need_sft = || sft.ok_or_else(|| bad(spec, "needs a shift file"));
    match name.trim() {
        "first-hit" => {
            let s = need_sft()?;
            let mut target = None;
            let mut q = s.theta().value();
            for (k, v) in params {
                match k {
                    "target" => {
                        target = Some(v.parse::<Symbol>().map_err(|_| bad(spec, "target must be a symbol"))?)
                    }
                    "q" => q = scalar(spec, k, v)?,
                    _ => return Err(bad(spec, format!("unknown parameter {k:?}"))),
                }
            }
            let target = target.ok_or_else(|| bad(spec, "missing target"))?;
            Ok(Box::new(Memo::new(FirstHitOracle::new(s, target, q)?)))
        }
        "geometric-sum" => {
            let s = need_sft()?;
            let mut q = None;
            let mut coeffs = Vec::new();
            for (k, v) in params {
                match k {
                    "q" => q = Some(scalar(spec, k, v)?),
                    "c" => coeffs.push(
                        v.split(',')
                            .map(|x| scalar(spec, k, x.trim()))
                            .collect::<Result<Vec<f64>, _>>()?,
                    ),
                    _ => return Err(bad(spec, format!("unknown parameter {k:?}"))),
                }
            }
            let q = q.ok_or_else(|| bad(spec, "missing q"))?;
            Ok(Box::new(Memo::new(GeometricSumOracle::new(s, q, coeffs)?)))
        }
        "boundary" => {
            let mut p = BoundaryParams::default();
            for (k, v) in params {
                match k {
                    "a" => p.a = scalar(spec, k, v)?,
                    "lam" => p.lam_off = v.parse().map_err(|_| bad(spec, "lam must be an integer"))?,
                    "x1" => p.x1 = scalar(spec, k, v)?,
                    "ratio" => p.ratio = scalar(spec, k, v)?,
                    "coeff" => p.coeff = scalar(spec, k, v)?,
                    "exponent" => p.exponent = scalar(spec, k, v)?,
                    _ => return Err(bad(spec, format!("unknown parameter {k:?}"))),
                }
            }
            Ok(Box::new(Memo::new(example_potential(p.to_core())?)))
        }
        other => Err(bad(spec, format!("unknown oracle {other:?}"))),
    }
}
