//! Localized entropy `H(w)`: the largest entropy of an invariant measure
//! with rotation vector `w`.
//!
//! The certified route brackets `H(w)` between the smallest and largest
//! local entropies of locally constant approximations over balls of radius
//! `α ε_n` around `w`. Local entropies are read off equilibrium states
//! `μ_{v·Φ}` sampled on a lattice of directions `v`; every additive slack is
//! kept in the trace. The Legendre transform and the Newton solve for the
//! rotation vector are fast cross-checks.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::math;
use crate::potential::{lc_approximate, LcPotential, PotentialOracle};
use crate::rotation::interior_radius_via_periodic;
use crate::sft::Limits;
use crate::thermo::{topological_entropy, Equilibria};
use crate::{Error, Result};

/// Additive slack for floating-point error in one entropy evaluation.
pub const NUMERIC_SLACK: f64 = 1e-9;
/// Inflation of divided-difference cell estimates for curvature.
const CELL_SAFETY: f64 = 1.25;
const NEWTON_STEPS: usize = 100;

/// Radii and the multiplier `α` of the sandwich.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub alpha: f64,
    pub eps: Vec<f64>,
    pub m: usize,
}

impl Schedule {
    /// Largest admissible ratio `ε_{n+1}/ε_n` for the monotonicity of both
    /// sides of the sandwich.
    pub fn contraction(alpha: f64, m: usize) -> f64 {
        let r = 2.0 * math::sqrt(m as f64);
        let a = (alpha - 1.0) / (alpha + 1.0);
        let b = (alpha - r) / (alpha * r);
        a.min(b)
    }

    pub fn new(alpha: f64, eps: Vec<f64>, m: usize) -> Result<Schedule> {
        if m == 0 {
            return Err(Error::InvalidSchedule("dimension must be positive"));
        }
        if !(alpha > 2.0 * math::sqrt(m as f64)) || !alpha.is_finite() {
            return Err(Error::InvalidSchedule("alpha must exceed 2 sqrt(m)"));
        }
        if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidSchedule("radii must be positive"));
        }
        let c = Schedule::contraction(alpha, m);
        if eps.windows(2).any(|p| !(p[1] < c * p[0])) {
            return Err(Error::InvalidSchedule("radii shrink too slowly"));
        }
        Ok(Schedule { alpha, eps, m })
    }

    /// `α = ⌈2√m⌉ + 1`, `ε_1 = r/(2α)` and ratio `0.9` times the contraction.
    pub fn default_for(m: usize, r_min: f64, levels: usize) -> Result<Schedule> {
        if !(r_min > 0.0) {
            return Err(Error::InvalidSchedule("interior radius must be positive"));
        }
        if levels == 0 {
            return Err(Error::InvalidSchedule("need at least one level"));
        }
        let alpha = math::ceil(2.0 * math::sqrt(m as f64)) + 1.0;
        let q = 0.9 * Schedule::contraction(alpha, m);
        let e1 = r_min / (2.0 * alpha);
        let eps = (0..levels).map(|n| e1 * math::powi(q, n as i32)).collect();
        let s = Schedule::new(alpha, eps, m)?;
        s.check_radius(r_min)?;
        Ok(s)
    }

    /// `ε_1 < r/α`.
    pub fn check_radius(&self, r_min: f64) -> Result<()> {
        if self.eps[0] < r_min / self.alpha {
            Ok(())
        } else {
            Err(Error::InvalidSchedule("first radius exceeds r/alpha"))
        }
    }

    pub fn levels(&self) -> usize {
        self.eps.len()
    }

    /// Ball radius `α ε_n` at level `n >= 1`.
    pub fn radius(&self, n: usize) -> f64 {
        self.alpha * self.eps[n - 1]
    }
}

/// `R = 2 h_top / r`: directions whose equilibrium rotation vector keeps
/// distance `r` from the boundary have norm at most `R`.
pub fn v_ball_radius(h_top_hi: f64, r_min: f64) -> Result<f64> {
    if !(r_min > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive"));
    }
    Ok(2.0 * h_top_hi / r_min)
}

/// A set of directions, optionally with lattice structure for slack
/// estimation.
#[derive(Clone, Debug)]
pub struct VGrid {
    m: usize,
    points: Vec<Vec<f64>>,
    index: Vec<Vec<i64>>,
    lookup: BTreeMap<Vec<i64>, usize>,
}

impl VGrid {
    /// Unstructured points; no slack can be estimated from them.
    pub fn from_points(m: usize, points: Vec<Vec<f64>>) -> Result<VGrid> {
        if points.iter().any(|p| p.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: points.iter().map(|p| p.len()).find(|&l| l != m).unwrap_or(0),
            });
        }
        Ok(VGrid {
            m,
            points,
            index: Vec::new(),
            lookup: BTreeMap::new(),
        })
    }

    /// `origin + Σ i_a steps[a]` for `|i_a| <= half[a]`.
    pub fn lattice(origin: &[f64], steps: &[Vec<f64>], half: &[usize], cap: usize) -> Result<VGrid> {
        let m = origin.len();
        if steps.len() != m || half.len() != m || steps.iter().any(|s| s.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: steps.len(),
            });
        }
        let count = half.iter().fold(1u128, |c, &h| c.saturating_mul(2 * h as u128 + 1));
        if count > cap as u128 {
            return Err(Error::CapExceeded {
                what: "direction grid points",
                required: count,
                cap: cap as u128,
            });
        }
        let mut grid = VGrid {
            m,
            points: Vec::with_capacity(count as usize),
            index: Vec::with_capacity(count as usize),
            lookup: BTreeMap::new(),
        };
        let mut idx: Vec<i64> = half.iter().map(|&h| -(h as i64)).collect();
        loop {
            let mut p = origin.to_vec();
            for (a, &i) in idx.iter().enumerate() {
                for (x, s) in p.iter_mut().zip(&steps[a]) {
                    *x += i as f64 * s;
                }
            }
            grid.push(idx.clone(), p);
            let mut a = 0;
            loop {
                if a == m {
                    return Ok(grid);
                }
                if idx[a] < half[a] as i64 {
                    idx[a] += 1;
                    break;
                }
                idx[a] = -(half[a] as i64);
                a += 1;
            }
        }
    }

    fn push(&mut self, idx: Vec<i64>, p: Vec<f64>) {
        self.lookup.insert(idx.clone(), self.points.len());
        self.index.push(idx);
        self.points.push(p);
    }

    fn retain(self, keep: impl Fn(&[f64]) -> bool) -> VGrid {
        let mut out = VGrid {
            m: self.m,
            points: Vec::new(),
            index: Vec::new(),
            lookup: BTreeMap::new(),
        };
        for (idx, p) in self.index.into_iter().zip(self.points) {
            if keep(&p) {
                out.push(idx, p);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn neighbor(&self, i: usize, axis: usize, dir: i64) -> Option<usize> {
        let mut idx = self.index.get(i)?.clone();
        idx[axis] += dir;
        self.lookup.get(&idx).copied()
    }

    /// Lattice points with a missing axis neighbour.
    pub fn is_boundary(&self, i: usize) -> bool {
        !self.index.is_empty()
            && (0..self.m).any(|a| self.neighbor(i, a, 1).is_none() || self.neighbor(i, a, -1).is_none())
    }
}

/// Axis-aligned lattice of spacing `2δ/√m`, clipped to `‖p‖ <= R + δ`; every
/// point of the closed ball of radius `R` lies within `δ` of a lattice point.
pub fn cover_ball(r: f64, delta: f64, m: usize, cap: usize) -> Result<VGrid> {
    if !(r > 0.0) || !(delta > 0.0) || m == 0 {
        return Err(Error::InvalidArgument("cover needs positive radius, spacing and dimension"));
    }
    let h = 2.0 * delta / math::sqrt(m as f64);
    let d = math::ceil(r / h);
    if d > 1e9 {
        return Err(Error::CapExceeded {
            what: "direction grid points",
            required: u128::MAX,
            cap: cap as u128,
        });
    }
    let d = d as usize;
    let origin = vec![0.0; m];
    let steps: Vec<Vec<f64>> = (0..m)
        .map(|a| (0..m).map(|b| if a == b { h } else { 0.0 }).collect())
        .collect();
    let grid = VGrid::lattice(&origin, &steps, &vec![d; m], cap)?;
    Ok(grid.retain(|p| math::norm(p) <= r + delta))
}

/// Bracket on the local entropies of one locally constant potential.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBounds {
    /// Lower bound for the smallest local entropy on the ball.
    pub l: f64,
    /// Upper bound for the largest local entropy on the ball.
    pub u: f64,
    /// Largest sampled entropy with rotation vector inside the ball; a
    /// lower bound for the largest local entropy.
    pub u_inner: Option<f64>,
    pub slack_rv: f64,
    pub slack_h: f64,
    pub slack_num: f64,
    pub selected: usize,
    pub grid_size: usize,
    /// A selected point sits on the edge of the lattice, so the lattice may
    /// not cover every direction whose rotation vector enters the ball.
    pub boundary_selected: bool,
}

struct Sample {
    rv: Vec<f64>,
    h: f64,
}

fn evaluate(eq: &Equilibria, grid: &VGrid) -> Result<Vec<Sample>> {
    grid.points()
        .iter()
        .map(|v| eq.rv_entropy(v).map(|(rv, h)| Sample { rv, h }))
        .collect()
}

/// Bounds, selected indices and the largest per-axis share of the cell
/// slack among selected points.
fn bounds_from(samples: &[Sample], grid: &VGrid, w: &[f64], s_rad: f64) -> Result<(LocalBounds, Vec<usize>, Vec<f64>)> {
    let n = samples.len();
    let mut cell_rv = vec![0.0; n];
    let mut cell_h = vec![0.0; n];
    let mut axis_rv = vec![vec![0.0; grid.dim()]; n];
    for i in 0..n {
        for a in 0..grid.dim() {
            let mut drv = 0.0f64;
            let mut dh = 0.0f64;
            for dir in [-1, 1] {
                if let Some(j) = grid.neighbor(i, a, dir) {
                    drv = drv.max(math::dist(&samples[i].rv, &samples[j].rv));
                    dh = dh.max(math::abs(samples[i].h - samples[j].h));
                }
            }
            cell_rv[i] += 0.5 * CELL_SAFETY * drv;
            axis_rv[i][a] = 0.5 * CELL_SAFETY * drv;
            cell_h[i] += 0.5 * CELL_SAFETY * dh;
        }
    }
    let dist: Vec<f64> = samples.iter().map(|s| math::dist(&s.rv, w)).collect();
    let sel: Vec<usize> = (0..n).filter(|&i| dist[i] <= s_rad + cell_rv[i]).collect();
    if sel.is_empty() {
        return Err(Error::EmptySelection);
    }
    let slack_rv = sel.iter().map(|&i| cell_rv[i]).fold(0.0, f64::max);
    let slack_h = sel.iter().map(|&i| cell_h[i]).fold(0.0, f64::max);
    let lo = sel.iter().map(|&i| samples[i].h).fold(f64::INFINITY, f64::min);
    let hi = sel.iter().map(|&i| samples[i].h).fold(f64::NEG_INFINITY, f64::max);
    let u_inner = (0..n)
        .filter(|&i| dist[i] <= s_rad)
        .map(|i| samples[i].h - NUMERIC_SLACK)
        .reduce(f64::max);
    let bounds = LocalBounds {
        l: lo - slack_h - NUMERIC_SLACK,
        u: hi + slack_h + NUMERIC_SLACK,
        u_inner,
        slack_rv,
        slack_h,
        slack_num: NUMERIC_SLACK,
        selected: sel.len(),
        grid_size: n,
        boundary_selected: sel.iter().any(|&i| grid.is_boundary(i)),
    };
    let per_axis = (0..grid.dim())
        .map(|a| sel.iter().map(|&i| axis_rv[i][a]).fold(0.0, f64::max))
        .collect();
    Ok((bounds, sel, per_axis))
}

/// Brackets the smallest and largest local entropies of `eq`'s potential on
/// the closed ball `B(w, s_rad)` from equilibrium states sampled on `grid`.
/// Cell slacks come from divided differences between lattice neighbours.
pub fn local_entropy_bounds(eq: &Equilibria, w: &[f64], s_rad: f64, grid: &VGrid) -> Result<LocalBounds> {
    check_point(eq.dim(), w)?;
    if !(s_rad > 0.0) {
        return Err(Error::InvalidArgument("ball radius must be positive"));
    }
    let samples = evaluate(eq, grid)?;
    Ok(bounds_from(&samples, grid, w, s_rad)?.0)
}

fn check_point(m: usize, w: &[f64]) -> Result<()> {
    if w.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: w.len(),
        });
    }
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("rotation vector"));
    }
    Ok(())
}

/// Symmetrised central-difference Jacobian of `v ↦ rv(μ_{v·Φ})`.
pub fn rv_jacobian(eq: &Equilibria, v: &[f64]) -> Result<Vec<Vec<f64>>> {
    let m = v.len();
    let h = 1e-4 * math::norm(v).max(1.0);
    let mut cols = Vec::with_capacity(m);
    for a in 0..m {
        let mut vp = v.to_vec();
        let mut vm = v.to_vec();
        vp[a] += h;
        vm[a] -= h;
        let (rp, _) = eq.rv_entropy(&vp)?;
        let (rm, _) = eq.rv_entropy(&vm)?;
        cols.push(rp.iter().zip(&rm).map(|(p, q)| (p - q) / (2.0 * h)).collect::<Vec<f64>>());
    }
    Ok((0..m)
        .map(|i| (0..m).map(|j| 0.5 * (cols[j][i] + cols[i][j])).collect())
        .collect())
}

/// Direction `v` with `‖rv(μ_{v·Φ}) − w‖ <= tol`, by damped Newton from
/// `start`. Fails with `Divergence` when the iterate leaves `‖v‖ <= v_max`.
pub fn solve_rotation_vector_with(
    eq: &Equilibria,
    w: &[f64],
    tol: f64,
    v_max: f64,
    start: Option<&[f64]>,
) -> Result<Vec<f64>> {
    check_point(eq.dim(), w)?;
    let m = w.len();
    let mut v = start.map(|s| s.to_vec()).unwrap_or_else(|| vec![0.0; m]);
    let residual = |v: &[f64]| -> Result<(Vec<f64>, f64)> {
        let (rv, _) = eq.rv_entropy(v)?;
        let g: Vec<f64> = rv.iter().zip(w).map(|(a, b)| a - b).collect();
        let n = math::norm(&g);
        Ok((g, n))
    };
    let (mut g, mut gn) = residual(&v)?;
    for _ in 0..NEWTON_STEPS {
        if gn <= tol {
            return Ok(v);
        }
        let j = rv_jacobian(eq, &v)?;
        let neg: Vec<f64> = g.iter().map(|x| -x).collect();
        let d = linalg::solve(&j, &neg).ok_or(Error::Divergence("singular rotation Jacobian"))?;
        let mut t = 1.0;
        loop {
            let vn: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            if math::norm(&vn) > v_max {
                t *= 0.5;
            } else {
                let (gn2, nn) = residual(&vn)?;
                if nn < gn {
                    v = vn;
                    g = gn2;
                    gn = nn;
                    break;
                }
                t *= 0.5;
            }
            if t < 1e-10 {
                return Err(Error::Divergence("no descent within the direction ball"));
            }
        }
    }
    if gn <= tol {
        Ok(v)
    } else {
        Err(Error::Divergence("Newton iteration budget exhausted"))
    }
}

/// [`solve_rotation_vector_with`] from `v = 0` with `‖v‖ <= 10^3`.
pub fn solve_rotation_vector(phi: &LcPotential, w: &[f64], tol: f64, limits: &Limits) -> Result<Vec<f64>> {
    let eq = Equilibria::new(phi, limits)?;
    solve_rotation_vector_with(&eq, w, tol, 1e3, None)
}

/// `inf_v [P(v·Φ) − v·w]` over `‖v‖ <= v_max`, by damped Newton with
/// Armijo backtracking. On the interior this equals `H(w)`.
pub fn legendre_entropy_with(eq: &Equilibria, w: &[f64], tol: f64, v_max: f64) -> Result<f64> {
    check_point(eq.dim(), w)?;
    let m = w.len();
    let objective = |v: &[f64]| -> Result<(f64, Vec<f64>)> {
        let r = eq.record(v)?;
        let f = r.pressure - math::dot(v, w);
        let g = r.rv.iter().zip(w).map(|(a, b)| a - b).collect();
        Ok((f, g))
    };
    let mut v = vec![0.0; m];
    let (mut f, mut g) = objective(&v)?;
    for _ in 0..NEWTON_STEPS {
        if math::norm(&g) == 0.0 {
            break;
        }
        let mut j = rv_jacobian(eq, &v)?;
        // Flat directions (a rotation set of lower dimension) make the
        // Hessian singular; a small ridge keeps the step finite.
        let ridge = 1e-10 * (1.0 + (0..m).map(|i| math::abs(j[i][i])).sum::<f64>());
        for (i, row) in j.iter_mut().enumerate() {
            row[i] += ridge;
        }
        let neg: Vec<f64> = g.iter().map(|x| -x).collect();
        let newton = linalg::solve(&j, &neg).filter(|d| math::dot(d, &g) < 0.0);
        let mut moved = false;
        for d in newton.into_iter().chain(core::iter::once(neg.clone())) {
            let decrement = -math::dot(&d, &g);
            if 0.5 * decrement <= 0.1 * tol {
                return Ok(f);
            }
            let mut t = 1.0;
            while t > 1e-12 {
                let mut vn: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + t * b).collect();
                let n = math::norm(&vn);
                if n > v_max {
                    vn.iter_mut().for_each(|x| *x *= v_max / n);
                }
                let (fn_, gn) = objective(&vn)?;
                if fn_ <= f - 1e-4 * t * decrement {
                    v = vn;
                    f = fn_;
                    g = gn;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if moved {
                break;
            }
        }
        if !moved {
            break;
        }
    }
    Ok(f)
}

/// [`legendre_entropy_with`] with `‖v‖ <= 10^3`.
pub fn legendre_entropy(phi: &LcPotential, w: &[f64], tol: f64, limits: &Limits) -> Result<f64> {
    let eq = Equilibria::new(phi, limits)?;
    legendre_entropy_with(&eq, w, tol, 1e3)
}

/// The `2^m` points `w0 ± 2ε` per coordinate. Perturbing each by less than
/// `ε` keeps `B(w0, ε)` inside their convex hull.
pub fn surrounding_points(w0: &[f64], eps: f64) -> Result<Vec<Vec<f64>>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive"));
    }
    let m = w0.len();
    if m == 0 || m > 20 {
        return Err(Error::InvalidArgument("dimension must be between 1 and 20"));
    }
    Ok((0..1usize << m)
        .map(|bits| {
            w0.iter()
                .enumerate()
                .map(|(a, &x)| if bits >> (m - 1 - a) & 1 == 1 { x + 2.0 * eps } else { x - 2.0 * eps })
                .collect()
        })
        .collect())
}

/// Knobs of the sandwich driver.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichOptions {
    /// Radius of a ball around `w` known to lie in the interior of the
    /// rotation set; certified from periodic orbits when absent.
    pub r_min: Option<f64>,
    pub max_levels: usize,
    /// Lattice points per ball radius along each axis; 0 picks by dimension.
    pub points_per_radius: usize,
    pub perron_tol: f64,
    pub limits: Limits,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        SandwichOptions {
            r_min: None,
            max_levels: 12,
            points_per_radius: 0,
            perron_tol: 1e-12,
            limits: Limits::default(),
        }
    }
}

/// One level of the sandwich.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecord {
    pub n: usize,
    pub eps: f64,
    pub radius: f64,
    /// Cylinder length of the approximation used at this level.
    pub approx_level: usize,
    pub approx_error: f64,
    pub grid_size: usize,
    pub l_raw: f64,
    pub u_raw: f64,
    pub u_inner: Option<f64>,
    pub slack_rv: f64,
    pub slack_h: f64,
    pub slack_num: f64,
    /// Whether `l_raw` entered the lower bound: always for exact potentials,
    /// otherwise once `B(w, 2√m α ε_n)` fits inside the interior ball.
    pub lower_counted: bool,
    pub l: f64,
    pub u: f64,
}

/// Interval containing `H(w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEnclosure {
    pub w: Vec<f64>,
    pub l: f64,
    pub u: f64,
    pub tol: f64,
    pub r_min: f64,
    pub schedule: Schedule,
    pub trace: Vec<LevelRecord>,
}

impl EntropyEnclosure {
    pub fn mid(&self) -> f64 {
        0.5 * (self.l + self.u)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.u - self.l)
    }

    pub fn contains(&self, h: f64) -> bool {
        self.l <= h && h <= self.u
    }
}

fn auto_points(m: usize, requested: usize) -> usize {
    if requested > 0 {
        requested
    } else if m <= 2 {
        8
    } else {
        4
    }
}

/// Local bounds on the ball `B(w, s_rad)` from a lattice adapted to the
/// rotation map near the direction solving `rv = w`, with a ball cover of
/// the direction ball as fallback. Returns the bounds and the solving
/// direction when Newton succeeded.
pub fn adaptive_local_bounds(
    eq: &Equilibria,
    w: &[f64],
    s_rad: f64,
    v_max: f64,
    start: Option<&[f64]>,
    opts: &SandwichOptions,
) -> Result<(LocalBounds, Option<Vec<f64>>)> {
    check_point(eq.dim(), w)?;
    let m = w.len();
    let cap = opts.limits.max_grid;
    let v0 = match solve_rotation_vector_with(eq, w, s_rad / 16.0, v_max, start) {
        Ok(v) => v,
        Err(Error::Divergence(_)) => return fallback_bounds(eq, w, s_rad, v_max, cap),
        Err(e) => return Err(e),
    };
    let (vals, vecs) = linalg::symmetric_eigen(&rv_jacobian(eq, &v0)?);
    let top = vals.iter().fold(0.0f64, |a, &b| a.max(b));
    if !(top > 0.0) {
        return Err(Error::DegenerateRotationSet { affine_dim: 0, m });
    }
    let per = auto_points(m, opts.points_per_radius);
    let steps: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            let lam = vals[a].max(1e-12 * top);
            let s = s_rad / (lam * per as f64);
            vecs[a].iter().map(|x| x * s).collect()
        })
        .collect();
    let mut steps = steps;
    let mut half = vec![(3 * per).div_ceil(2); m];
    for _ in 0..24 {
        let grid = VGrid::lattice(&v0, &steps, &half, cap)?;
        let samples = evaluate(eq, &grid)?;
        let (b, sel, per_axis) = bounds_from(&samples, &grid, w, s_rad)?;
        if b.slack_rv > 0.25 * s_rad {
            // refine only the axes carrying a large share of the slack
            for a in 0..m {
                if per_axis[a] > 0.25 * s_rad / m as f64 {
                    steps[a].iter_mut().for_each(|x| *x *= 0.5);
                    half[a] *= 2;
                }
            }
            continue;
        }
        if !b.boundary_selected {
            return Ok((b, Some(v0)));
        }
        // grow only the axes on which a selected point touches the edge
        for a in 0..m {
            if sel.iter().any(|&i| grid.index[i][a].unsigned_abs() as usize == half[a]) {
                half[a] *= 2;
            }
        }
    }
    Err(Error::EnclosureTooWide("direction lattice could not be validated"))
}

fn fallback_bounds(
    eq: &Equilibria,
    w: &[f64],
    s_rad: f64,
    v_max: f64,
    cap: usize,
) -> Result<(LocalBounds, Option<Vec<f64>>)> {
    let m = w.len();
    let per_axis = math::floor(math::pow(cap as f64, 1.0 / m as f64)) as usize;
    let d = per_axis.saturating_sub(1) / 2;
    if d == 0 || !v_max.is_finite() {
        return Err(Error::Divergence("no direction grid fits the cap"));
    }
    let delta = v_max * math::sqrt(m as f64) / (2.0 * d as f64);
    let grid = cover_ball(v_max, delta, m, cap)?;
    Ok((local_entropy_bounds(eq, w, s_rad, &grid)?, None))
}

fn sandwich<F>(
    m: usize,
    w: &[f64],
    tol: f64,
    r_min: f64,
    h_top_hi: f64,
    exact: bool,
    opts: &SandwichOptions,
    mut approx: F,
) -> Result<EntropyEnclosure>
where
    F: FnMut(f64) -> Result<(LcPotential, f64)>,
{
    let schedule = Schedule::default_for(m, r_min, opts.max_levels)?;
    let v_max = v_ball_radius(h_top_hi, r_min / 3.0)?;
    let two_root_m = 2.0 * math::sqrt(m as f64);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut trace = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    for n in 1..=schedule.levels() {
        let eps = schedule.eps[n - 1];
        let radius = schedule.radius(n);
        let (psi, err) = approx(eps)?;
        let eq = Equilibria::new(&psi, &opts.limits)?.with_tol(opts.perron_tol);
        let (b, v0) = adaptive_local_bounds(&eq, w, radius, v_max, warm.as_deref(), opts)?;
        if v0.is_some() {
            warm = v0;
        }
        let counted = exact || two_root_m * radius <= r_min;
        hi = hi.min(b.u);
        if counted {
            lo = lo.max(b.l);
        }
        trace.push(LevelRecord {
            n,
            eps,
            radius,
            approx_level: psi.level(),
            approx_error: err,
            grid_size: b.grid_size,
            l_raw: b.l,
            u_raw: b.u,
            u_inner: b.u_inner,
            slack_rv: b.slack_rv,
            slack_h: b.slack_h,
            slack_num: b.slack_num,
            lower_counted: counted,
            l: lo,
            u: hi,
        });
        if hi - lo <= 2.0 * tol {
            return Ok(EntropyEnclosure {
                w: w.to_vec(),
                l: lo,
                u: hi,
                tol,
                r_min,
                schedule,
                trace,
            });
        }
    }
    Err(Error::SandwichNotConverged {
        l: lo,
        u: hi,
        levels: schedule.levels(),
    })
}

/// Enclosure of `H(w)` of half-width at most `tol` for a locally constant
/// potential on an irreducible shift.
pub fn localized_entropy(phi: &LcPotential, w: &[f64], tol: f64, opts: &SandwichOptions) -> Result<EntropyEnclosure> {
    check_point(phi.dim(), w)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let r_min = match opts.r_min {
        Some(r) => r,
        None => interior_radius_via_periodic(phi, w, &opts.limits)?,
    };
    let h_top = topological_entropy(phi.sft(), 1e-12)?.hi;
    sandwich(phi.dim(), w, tol, r_min, h_top, true, opts, |_| Ok((phi.clone(), 0.0)))
}

/// Certified interior radius for an oracle potential: the periodic-orbit
/// radius of an approximation minus its sup error.
pub fn oracle_interior_radius<O: PotentialOracle + ?Sized>(oracle: &O, w: &[f64], limits: &Limits) -> Result<f64> {
    let mut last = Error::NotCertified { steps: 0 };
    for j in 3..=10 {
        let approx = lc_approximate(oracle, math::powi(0.5, j), limits)?;
        match interior_radius_via_periodic(&approx.potential, w, limits) {
            Ok(a) if a > approx.sup_error => return Ok(a - approx.sup_error),
            Ok(_) => {}
            Err(e @ Error::NotCertified { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Enclosure of `H(w)` for an oracle potential, through its locally
/// constant approximations `Φ_{ε_n}`.
pub fn localized_entropy_oracle<O: PotentialOracle + ?Sized>(
    oracle: &O,
    w: &[f64],
    tol: f64,
    opts: &SandwichOptions,
) -> Result<EntropyEnclosure> {
    check_point(oracle.dim(), w)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let r_min = match opts.r_min {
        Some(r) => r,
        None => oracle_interior_radius(oracle, w, &opts.limits)?,
    };
    let h_top = topological_entropy(oracle.sft(), 1e-12)?.hi;
    sandwich(oracle.dim(), w, tol, r_min, h_top, false, opts, |eps| {
        let a = lc_approximate(oracle, eps, &opts.limits)?;
        Ok((a.potential, a.sup_error))
    })
}

/// Local bounds of a locally constant potential on `B(w, radius)`, for
/// one-sided stability checks.
pub fn local_bounds_at(phi: &LcPotential, w: &[f64], radius: f64, opts: &SandwichOptions) -> Result<LocalBounds> {
    let eq = Equilibria::new(phi, &opts.limits)?.with_tol(opts.perron_tol);
    let h_top = topological_entropy(phi.sft(), 1e-12)?.hi;
    let r = opts.r_min.unwrap_or(radius);
    let v_max = v_ball_radius(h_top, r / 3.0)?;
    Ok(adaptive_local_bounds(&eq, w, radius, v_max, None, opts)?.0)
}
