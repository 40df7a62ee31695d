//! Rotation sets of locally constant and oracle potentials.
//!
//! For a locally constant potential of level `k` on an irreducible shift the
//! rotation set is the convex hull of the orbit averages over the
//! elementary circuits of the `k`-block graph. The same polytope can be
//! reached without listing circuits: its support function in a direction
//! `u` is the maximum cycle mean of `u·Φ`, which policy iteration finds in
//! polynomial time. In the plane, querying the outward normals of the
//! current hull until none of them moves recovers the polygon exactly.

use alloc::vec;
use alloc::vec::Vec;

pub use crate::hull::{convex_hull, hausdorff_distance, RotationPolytope};

use crate::cycles;
use crate::math;
use crate::potential::{lc_approximate, LcPotential, PotentialOracle};
use crate::sft::{Limits, PeriodicOrbit, Symbol};
use crate::{Error, Result};

/// How the vertex set of a locally constant rotation set is found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HullMethod {
    /// Orbit averages of all elementary circuits.
    Enumerate,
    /// Support-function queries answered by maximum cycle means (m <= 2).
    CycleMean,
    /// Enumeration on small block graphs, cycle means otherwise.
    #[default]
    Auto,
}

/// Block graphs up to this many states are enumerated under `Auto`.
const AUTO_ENUMERATE_STATES: usize = 256;
/// Interior certification stops after this many period bounds.
const MAX_PERIOD_STEPS: u32 = 64;

fn rounding_slack(phi: &LcPotential, max_period: usize) -> f64 {
    let mag = (0..phi.len())
        .flat_map(|i| phi.value(i).iter().copied())
        .fold(0.0f64, |a, b| a.max(math::abs(b)));
    4.0 * (max_period as f64 + 1.0) * f64::EPSILON * mag * math::sqrt(phi.dim() as f64)
}

/// Orbit averages of the elementary periodic orbits.
pub fn elementary_points(phi: &LcPotential, limits: &Limits) -> Result<(Vec<PeriodicOrbit>, Vec<Vec<f64>>)> {
    let orbits = phi.sft().elementary_orbits(phi.level(), limits)?;
    let pts = orbits
        .iter()
        .map(|o| phi.orbit_average(o))
        .collect::<Result<Vec<_>>>()?;
    Ok((orbits, pts))
}

/// Convex hull of the elementary orbit averages.
pub fn elementary_hull(phi: &LcPotential, limits: &Limits) -> Result<RotationPolytope> {
    if !phi.sft().is_irreducible() {
        return Err(Error::NotTransitive);
    }
    let (orbits, pts) = elementary_points(phi, limits)?;
    let max_period = orbits.iter().map(|o| o.period()).max().unwrap_or(1);
    Ok(convex_hull(&pts)?.with_error(rounding_slack(phi, max_period)))
}

/// Orbit average of the circuit `states` of the block graph.
fn circuit_average(phi: &LcPotential, states: &[u32]) -> Result<Vec<f64>> {
    let rec_words = phi.words();
    let seg: Vec<Symbol> = states.iter().map(|&s| rec_words.get(s as usize)[0]).collect();
    let orbit = PeriodicOrbit::new(phi.sft(), crate::sft::least_rotation(&seg))
        .or_else(|_| primitive_orbit(phi, &seg))?;
    phi.orbit_average(&orbit)
}

fn primitive_orbit(phi: &LcPotential, seg: &[Symbol]) -> Result<PeriodicOrbit> {
    let n = seg.len();
    let p = (1..=n)
        .find(|&p| n % p == 0 && (0..n).all(|i| seg[i] == seg[i % p]))
        .unwrap_or(n);
    PeriodicOrbit::new(phi.sft(), seg[..p].to_vec())
}

/// Rotation polytope of a planar or scalar locally constant potential from
/// maximum cycle mean queries.
pub fn cycle_mean_hull(phi: &LcPotential, limits: &Limits) -> Result<RotationPolytope> {
    if !phi.sft().is_irreducible() {
        return Err(Error::NotTransitive);
    }
    let m = phi.dim();
    if m > 2 {
        return Err(Error::InvalidArgument("cycle mean hulls need m <= 2"));
    }
    let rec = phi.sft().recode(phi.level(), limits)?;
    let succ = rec.target.successor_lists();
    let values: Vec<&[f64]> = (0..phi.len()).map(|i| phi.value(i)).collect();
    let mag = values
        .iter()
        .flat_map(|v| v.iter())
        .fold(0.0f64, |a, &b| a.max(math::abs(b)))
        .max(1e-300);
    let tol = 1e-12 * mag;

    let query = |u: &[f64]| -> Result<Vec<f64>> {
        let w: Vec<f64> = values.iter().map(|v| math::dot(v, u)).collect();
        let (_, cyc) = cycles::max_cycle_mean(succ, &w)?;
        circuit_average(phi, &cyc)
    };

    let mut points: Vec<Vec<f64>> = Vec::new();
    let axes: Vec<Vec<f64>> = (0..m)
        .flat_map(|i| {
            let mut a = vec![0.0; m];
            a[i] = 1.0;
            let b: Vec<f64> = a.iter().map(|x| -x).collect();
            [a, b]
        })
        .collect();
    for u in &axes {
        points.push(query(u)?);
    }
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > 100_000 {
            return Err(Error::Divergence("support queries did not settle"));
        }
        let hull = convex_hull(&points)?;
        let dirs = query_directions(&hull);
        let mut grew = false;
        let mut max_shift = 0.0f64;
        for u in &dirs {
            let p = query(u)?;
            let gain = math::dot(&p, u) - hull.support(u);
            if gain > tol {
                points.push(p);
                grew = true;
            } else {
                max_shift = max_shift.max(gain.max(0.0));
            }
        }
        if !grew {
            let err = outer_slack(&hull, tol.max(max_shift));
            let max_period = phi.len();
            return Ok(hull.with_error(err + rounding_slack(phi, max_period)));
        }
    }
}

/// Unit outward normals worth querying for the current hull.
fn query_directions(hull: &RotationPolytope) -> Vec<Vec<f64>> {
    let v = &hull.vertices;
    match (hull.m, hull.affine_dim) {
        (1, _) => vec![vec![1.0], vec![-1.0]],
        (2, 2) => {
            let n = v.len();
            (0..n)
                .map(|i| {
                    let a = &v[i];
                    let b = &v[(i + 1) % n];
                    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                    let l = math::sqrt(dx * dx + dy * dy);
                    vec![dy / l, -dx / l]
                })
                .collect()
        }
        (2, 1) => {
            let (dx, dy) = (v[1][0] - v[0][0], v[1][1] - v[0][1]);
            let l = math::sqrt(dx * dx + dy * dy);
            vec![
                vec![-dy / l, dx / l],
                vec![dy / l, -dx / l],
                vec![dx / l, dy / l],
                vec![-dx / l, -dy / l],
            ]
        }
        _ => vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ],
    }
}

/// How far the true set can stick out when every supporting line of the
/// computed polygon is off by at most `t`.
fn outer_slack(hull: &RotationPolytope, t: f64) -> f64 {
    if hull.m != 2 || hull.affine_dim < 2 {
        return 2.0 * t;
    }
    let v = &hull.vertices;
    let n = v.len();
    let mut worst = t;
    for i in 0..n {
        let prev = &v[(i + n - 1) % n];
        let cur = &v[i];
        let next = &v[(i + 1) % n];
        let e1 = [cur[0] - prev[0], cur[1] - prev[1]];
        let e2 = [next[0] - cur[0], next[1] - cur[1]];
        let c = (e1[0] * e2[0] + e1[1] * e2[1]) / (math::norm(&e1) * math::norm(&e2));
        // angle between the two outward normals equals the turning angle
        let half_cos = math::sqrt(((1.0 + c) / 2.0).max(1e-300));
        worst = worst.max(t / half_cos);
    }
    worst
}

/// Rotation polytope of a locally constant potential.
pub fn rotation_polytope(phi: &LcPotential, method: HullMethod, limits: &Limits) -> Result<RotationPolytope> {
    match method {
        HullMethod::Enumerate => elementary_hull(phi, limits),
        HullMethod::CycleMean => cycle_mean_hull(phi, limits),
        HullMethod::Auto => {
            if phi.dim() > 2 || phi.len() <= AUTO_ENUMERATE_STATES {
                match elementary_hull(phi, limits) {
                    Err(Error::CycleCapExceeded { .. }) if phi.dim() <= 2 => cycle_mean_hull(phi, limits),
                    r => r,
                }
            } else {
                cycle_mean_hull(phi, limits)
            }
        }
    }
}

/// Polytope within `tol` of the rotation set of an oracle potential.
pub fn rot_approx<O: PotentialOracle + ?Sized>(oracle: &O, tol: f64, limits: &Limits) -> Result<RotationPolytope> {
    let approx = lc_approximate(oracle, tol, limits)?;
    Ok(rotation_polytope(&approx.potential, HullMethod::Auto, limits)?.with_error(tol))
}

/// Certified lower bound on the distance from `w` to the boundary of the
/// rotation set, from hulls of periodic orbits of growing period. Fails
/// with `NotCertified` when no bound emerges, which is always the case on
/// the boundary.
pub fn interior_radius_via_periodic(phi: &LcPotential, w: &[f64], limits: &Limits) -> Result<f64> {
    if w.len() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: w.len(),
        });
    }
    if !phi.sft().is_irreducible() {
        return Err(Error::NotTransitive);
    }
    let margin = |poly: &RotationPolytope| -> f64 {
        if poly.affine_dim < poly.m {
            return 0.0;
        }
        poly.boundary_distance(w).unwrap_or(0.0) - poly.hausdorff_error
    };
    let accept = |a: f64, n: u32| {
        let slack = math::powi(2.0, 1 - n as i32);
        a > slack && slack <= a / 64.0
    };

    match elementary_points(phi, limits) {
        Ok((orbits, pts)) => {
            let max_period = orbits.iter().map(|o| o.period()).max().unwrap_or(1);
            let slack = rounding_slack(phi, max_period);
            for n in 1..=MAX_PERIOD_STEPS {
                let sel: Vec<Vec<f64>> = orbits
                    .iter()
                    .zip(&pts)
                    .filter(|(o, _)| o.period() <= n as usize)
                    .map(|(_, p)| p.clone())
                    .collect();
                if sel.is_empty() {
                    continue;
                }
                let poly = convex_hull(&sel)?.with_error(slack);
                let a = margin(&poly);
                if n as usize >= max_period && accept(a, n) {
                    return Ok(a - math::powi(2.0, 1 - n as i32));
                }
            }
            Err(Error::NotCertified {
                steps: MAX_PERIOD_STEPS as usize,
            })
        }
        Err(Error::CycleCapExceeded { .. }) | Err(Error::CapExceeded { .. }) if phi.dim() <= 2 => {
            let poly = cycle_mean_hull(phi, limits)?;
            let a = margin(&poly);
            for n in 1..=MAX_PERIOD_STEPS {
                if accept(a, n) {
                    return Ok(a - math::powi(2.0, 1 - n as i32));
                }
            }
            Err(Error::NotCertified {
                steps: MAX_PERIOD_STEPS as usize,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{Ratio, Sft};

    fn half() -> Ratio {
        Ratio::new(1, 2).unwrap()
    }

    fn golden() -> Sft {
        Sft::new(2, &[vec![1, 1], vec![1, 0]], half()).unwrap()
    }

    fn bern(s: &Sft) -> LcPotential {
        LcPotential::from_fn(s, 1, 1, &Limits::default(), |w| vec![w[0] as f64]).unwrap()
    }

    #[test]
    fn bernoulli_hulls() {
        let lim = Limits::default();
        let full = Sft::full_shift(2, half()).unwrap();
        let h = elementary_hull(&bern(&full), &lim).unwrap();
        assert_eq!(h.vertices, vec![vec![0.0], vec![1.0]]);
        let h = elementary_hull(&bern(&golden()), &lim).unwrap();
        assert_eq!(h.vertices, vec![vec![0.0], vec![0.5]]);
        let c = cycle_mean_hull(&bern(&golden()), &lim).unwrap();
        assert_eq!(c.vertices, vec![vec![0.0], vec![0.5]]);
    }

    #[test]
    fn constant_potential_is_a_point() {
        let lim = Limits::default();
        let phi = LcPotential::from_fn(&golden(), 2, 2, &lim, |_| vec![0.3, -1.0]).unwrap();
        let h = elementary_hull(&phi, &lim).unwrap();
        assert_eq!(h.vertices, vec![vec![0.3, -1.0]]);
        assert_eq!(h.affine_dim, 0);
    }

    #[test]
    fn routes_agree_in_the_plane() {
        let lim = Limits::default();
        let s = Sft::full_shift(3, half()).unwrap();
        let phi = LcPotential::from_fn(&s, 2, 2, &lim, |w| {
            let a = w[0] as f64;
            let b = w[1] as f64;
            vec![math::sin(1.3 * a + 0.7 * b), math::cos(2.1 * a - 0.4 * b * b)]
        })
        .unwrap();
        let e = elementary_hull(&phi, &lim).unwrap();
        let c = cycle_mean_hull(&phi, &lim).unwrap();
        assert!(hausdorff_distance(&e, &c).unwrap() < 1e-12);
        assert_eq!(e.vertices.len(), c.vertices.len());
    }

    #[test]
    fn interior_radius_examples() {
        let lim = Limits::default();
        let full = Sft::full_shift(2, half()).unwrap();
        let r = interior_radius_via_periodic(&bern(&full), &[0.5], &lim).unwrap();
        assert!(r >= 0.49 && r <= 0.5);
        assert!(matches!(
            interior_radius_via_periodic(&bern(&full), &[1.0], &lim),
            Err(Error::NotCertified { .. })
        ));
        let r = interior_radius_via_periodic(&bern(&golden()), &[0.25], &lim).unwrap();
        assert!(r >= 0.24 && r <= 0.25);
    }

    #[test]
    fn reducible_shift_rejected() {
        let lim = Limits::default();
        let s = Sft::new(2, &[vec![1, 0], vec![0, 1]], half()).unwrap();
        assert_eq!(elementary_hull(&bern(&s), &lim), Err(Error::NotTransitive));
    }
}
