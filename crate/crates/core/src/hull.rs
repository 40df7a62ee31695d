//! Convex hulls in dimensions one to three and the polytope type used for
//! rotation sets.
//!
//! Lower dimensional point sets are handled in an orthonormal frame of their
//! affine hull; the largest distance from an input point to that frame is
//! added to the reported Hausdorff error.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::math;
use crate::{Error, Result};

/// Vertices closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-10;
/// Relative area below which three planar points count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;
/// Relative residual below which a direction is not part of the affine hull.
const AFFINE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
struct Frame {
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    identity: bool,
}

impl Frame {
    fn local(&self, x: &[f64]) -> Vec<f64> {
        if self.identity {
            return x.to_vec();
        }
        let y: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.basis.iter().map(|b| math::dot(b, &y)).collect()
    }

    /// Squared distance from `x` to the affine span.
    fn perp2(&self, x: &[f64]) -> f64 {
        if self.identity {
            return 0.0;
        }
        let mut y: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let c = self.local(x);
        for (ci, b) in c.iter().zip(&self.basis) {
            for (yj, bj) in y.iter_mut().zip(b) {
                *yj -= ci * bj;
            }
        }
        math::dot(&y, &y)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    Point,
    Interval(f64, f64),
    /// Counterclockwise polygon.
    Polygon(Vec<[f64; 2]>),
    /// Triangulated boundary with outward unit normals and offsets.
    Solid {
        faces: Vec<[[f64; 3]; 3]>,
        planes: Vec<([f64; 3], f64)>,
    },
    /// More than three dimensions: vertex cloud without facets.
    Cloud,
}

/// A convex polytope given by its extreme points, with a bound on its
/// Hausdorff distance to the set it approximates.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationPolytope {
    pub m: usize,
    pub vertices: Vec<Vec<f64>>,
    pub hausdorff_error: f64,
    pub affine_dim: usize,
    /// False for dimensions above three, where only deduplication is done.
    pub exact: bool,
    frame: Frame,
    shape: Shape,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

fn dedup(points: &mut Vec<Vec<f64>>) {
    points.sort_by(|a, b| lex(a, b));
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points.drain(..) {
        if !kept.iter().any(|q| math::dist(q, &p) <= DEDUP_TOL) {
            kept.push(p);
        }
    }
    *points = kept;
}

fn affine_frame(points: &[Vec<f64>]) -> (Frame, f64) {
    let m = points[0].len();
    let origin = points[0].clone();
    let diffs: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
        .collect();
    let scale = diffs.iter().map(|d| math::norm(d)).fold(0.0f64, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let residual = |d: &[f64], basis: &[Vec<f64>]| -> Vec<f64> {
        let mut r = d.to_vec();
        for b in basis {
            let c = math::dot(&r, b);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        r
    };
    while basis.len() < m && scale > 0.0 {
        let mut best = 0.0;
        let mut best_r: Option<Vec<f64>> = None;
        for d in &diffs {
            let r = residual(d, &basis);
            let n = math::norm(&r);
            if n > best {
                best = n;
                best_r = Some(r);
            }
        }
        match best_r {
            Some(r) if best > AFFINE_TOL * scale => {
                basis.push(r.iter().map(|x| x / best).collect());
            }
            _ => break,
        }
    }
    let k = basis.len();
    if k == m {
        let frame = Frame {
            origin: vec![0.0; m],
            basis: (0..m)
                .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
            identity: true,
        };
        return (frame, 0.0);
    }
    let frame = Frame {
        origin,
        basis,
        identity: false,
    };
    let worst = points
        .iter()
        .map(|p| math::sqrt(frame.perp2(p)))
        .fold(0.0f64, f64::max);
    (frame, worst)
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; returns indices of a counterclockwise hull
/// without collinear points.
fn hull2(pts: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| lex(&pts[a], &pts[b]));
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let scale = idx
        .iter()
        .map(|&i| math::abs(pts[i][0]).max(math::abs(pts[i][1])))
        .fold(0.0f64, f64::max)
        .max(math::dist(&pts[idx[0]], &pts[*idx.last().unwrap_or(&0)]));
    let tol = COLLINEAR_TOL * scale * scale;
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= tol
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= tol
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    math::sqrt(dot3(a, a))
}

fn plane(p: &[[f64; 3]], f: [usize; 3]) -> ([f64; 3], f64) {
    let n = cross3(sub3(p[f[1]], p[f[0]]), sub3(p[f[2]], p[f[0]]));
    let l = norm3(n);
    let n = [n[0] / l, n[1] / l, n[2] / l];
    (n, dot3(n, p[f[0]]))
}

/// Incremental hull of a full dimensional point set; returns the triangles.
fn hull3_faces(p: &[[f64; 3]], scale: f64) -> Vec<[usize; 3]> {
    let eps = 1e-11 * scale;
    let n = p.len();
    let i0 = (0..n).min_by(|&a, &b| lex(&p[a], &p[b])).unwrap_or(0);
    let far = |f: &dyn Fn(usize) -> f64| {
        (0..n)
            .max_by(|&a, &b| f(a).partial_cmp(&f(b)).unwrap_or(Ordering::Equal))
            .unwrap_or(0)
    };
    let i1 = far(&|i| norm3(sub3(p[i], p[i0])));
    let dir = sub3(p[i1], p[i0]);
    let i2 = far(&|i| norm3(cross3(dir, sub3(p[i], p[i0]))));
    let nrm = cross3(dir, sub3(p[i2], p[i0]));
    let i3 = far(&|i| math::abs(dot3(nrm, sub3(p[i], p[i0]))));

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let tet = [i0, i1, i2, i3];
    for skip in 0..4 {
        let mut f = [0usize; 3];
        let mut c = 0;
        for (t, &v) in tet.iter().enumerate() {
            if t != skip {
                f[c] = v;
                c += 1;
            }
        }
        let (nn, b) = plane(p, f);
        if dot3(nn, p[tet[skip]]) - b > 0.0 {
            f.swap(1, 2);
        }
        faces.push(f);
    }
    let mut planes: Vec<([f64; 3], f64)> = faces.iter().map(|&f| plane(p, f)).collect();

    for q in 0..n {
        if tet.contains(&q) {
            continue;
        }
        let visible: Vec<bool> = planes.iter().map(|(nn, b)| dot3(*nn, p[q]) - b > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            edges.push((f[0], f[1]));
            edges.push((f[1], f[2]));
            edges.push((f[2], f[0]));
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .filter(|&&(a, b)| !edges.contains(&(b, a)))
            .copied()
            .collect();
        let mut nf = Vec::with_capacity(faces.len());
        let mut np = Vec::with_capacity(faces.len());
        for ((f, pl), v) in faces.iter().zip(&planes).zip(&visible) {
            if !v {
                nf.push(*f);
                np.push(*pl);
            }
        }
        for (a, b) in horizon {
            let f = [a, b, q];
            nf.push(f);
            np.push(plane(p, f));
        }
        faces = nf;
        planes = np;
    }
    faces
}

fn rank3(normals: &[[f64; 3]]) -> usize {
    let Some(&a) = normals.first() else { return 0 };
    let Some(&b) = normals.iter().find(|&&b| norm3(cross3(a, b)) > 1e-9) else {
        return 1;
    };
    let c = cross3(a, b);
    if normals.iter().any(|&x| math::abs(dot3(c, x)) > 1e-9 * norm3(c)) {
        3
    } else {
        2
    }
}

fn hull3(p: &[[f64; 3]]) -> (Vec<usize>, Vec<[usize; 3]>) {
    let scale = p.iter().map(|x| norm3(*x)).fold(0.0f64, f64::max).max(1e-300);
    let mut current: Vec<usize> = (0..p.len()).collect();
    loop {
        let sub: Vec<[f64; 3]> = current.iter().map(|&i| p[i]).collect();
        let faces = hull3_faces(&sub, scale);
        let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let extreme: Vec<usize> = used
            .iter()
            .copied()
            .filter(|&v| {
                let normals: Vec<[f64; 3]> = faces
                    .iter()
                    .filter(|f| f.contains(&v))
                    .map(|&f| plane(&sub, f).0)
                    .collect();
                rank3(&normals) == 3
            })
            .collect();
        if extreme.len() == used.len() {
            let faces = faces
                .iter()
                .map(|f| [current[f[0]], current[f[1]], current[f[2]]])
                .collect();
            let verts = used.iter().map(|&i| current[i]).collect();
            return (verts, faces);
        }
        current = extreme.iter().map(|&i| current[i]).collect();
    }
}

fn point_segment2(x: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ax = [x[0] - a[0], x[1] - a[1]];
    let l2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if l2 > 0.0 {
        ((ax[0] * ab[0] + ax[1] * ab[1]) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    math::dist(&x, &[a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// Closest-point distance from `p` to triangle `abc`.
fn point_triangle(p: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let ab = sub3(b, a);
    let ac = sub3(c, a);
    let ap = sub3(p, a);
    let d1 = dot3(ab, ap);
    let d2 = dot3(ac, ap);
    let at = |q: [f64; 3]| norm3(sub3(p, q));
    if d1 <= 0.0 && d2 <= 0.0 {
        return at(a);
    }
    let bp = sub3(p, b);
    let d3 = dot3(ab, bp);
    let d4 = dot3(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return at(b);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return at([a[0] + v * ab[0], a[1] + v * ab[1], a[2] + v * ab[2]]);
    }
    let cp = sub3(p, c);
    let d5 = dot3(ab, cp);
    let d6 = dot3(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return at(c);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return at([a[0] + w * ac[0], a[1] + w * ac[1], a[2] + w * ac[2]]);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        let bc = sub3(c, b);
        return at([b[0] + w * bc[0], b[1] + w * bc[1], b[2] + w * bc[2]]);
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    at([
        a[0] + ab[0] * v + ac[0] * w,
        a[1] + ab[1] * v + ac[1] * w,
        a[2] + ab[2] * v + ac[2] * w,
    ])
}

/// Convex hull of a nonempty point set in `R^m`.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<RotationPolytope> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput);
    };
    let m = first.len();
    if m == 0 {
        return Err(Error::InvalidArgument("points must have positive dimension"));
    }
    for p in points {
        if p.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("hull input"));
        }
    }
    let mut pts = points.to_vec();
    dedup(&mut pts);
    let (frame, perp) = affine_frame(&pts);
    let k = frame.basis.len();
    if m > 3 {
        return Ok(RotationPolytope {
            m,
            vertices: pts,
            hausdorff_error: perp,
            affine_dim: k,
            exact: false,
            frame,
            shape: Shape::Cloud,
        });
    }
    let local: Vec<Vec<f64>> = pts.iter().map(|p| frame.local(p)).collect();
    let (vertices, shape) = match k {
        0 => (vec![pts[0].clone()], Shape::Point),
        1 => {
            let lo = (0..pts.len())
                .min_by(|&a, &b| local[a][0].partial_cmp(&local[b][0]).unwrap_or(Ordering::Equal))
                .unwrap_or(0);
            let hi = (0..pts.len())
                .max_by(|&a, &b| local[a][0].partial_cmp(&local[b][0]).unwrap_or(Ordering::Equal))
                .unwrap_or(0);
            (
                vec![pts[lo].clone(), pts[hi].clone()],
                Shape::Interval(local[lo][0], local[hi][0]),
            )
        }
        2 => {
            let l2: Vec<[f64; 2]> = local.iter().map(|x| [x[0], x[1]]).collect();
            let idx = hull2(&l2);
            (
                idx.iter().map(|&i| pts[i].clone()).collect(),
                Shape::Polygon(idx.iter().map(|&i| l2[i]).collect()),
            )
        }
        _ => {
            let l3: Vec<[f64; 3]> = local.iter().map(|x| [x[0], x[1], x[2]]).collect();
            let (verts, faces) = hull3(&l3);
            let tri: Vec<[[f64; 3]; 3]> = faces.iter().map(|f| [l3[f[0]], l3[f[1]], l3[f[2]]]).collect();
            let planes = faces.iter().map(|&f| plane(&l3, f)).collect();
            let mut v: Vec<Vec<f64>> = verts.iter().map(|&i| pts[i].clone()).collect();
            v.sort_by(|a, b| lex(a, b));
            (v, Shape::Solid { faces: tri, planes })
        }
    };
    Ok(RotationPolytope {
        m,
        vertices,
        hausdorff_error: perp,
        affine_dim: k,
        exact: true,
        frame,
        shape,
    })
}

impl RotationPolytope {
    /// The same polytope with an additional approximation error.
    pub fn with_error(mut self, extra: f64) -> RotationPolytope {
        self.hausdorff_error += extra;
        self
    }

    /// Euclidean distance from `x` to the polytope (zero inside).
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.len(),
            });
        }
        let c = self.frame.local(x);
        let perp2 = self.frame.perp2(x);
        let dl = match &self.shape {
            Shape::Point => 0.0,
            Shape::Interval(a, b) => (a - c[0]).max(c[0] - b).max(0.0),
            Shape::Polygon(poly) => {
                let q = [c[0], c[1]];
                let n = poly.len();
                let inside = (0..n).all(|i| {
                    let a = poly[i];
                    let b = poly[(i + 1) % n];
                    cross2(a, b, q) >= 0.0
                });
                if inside {
                    0.0
                } else {
                    (0..n)
                        .map(|i| point_segment2(q, poly[i], poly[(i + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            Shape::Solid { faces, planes } => {
                let q = [c[0], c[1], c[2]];
                if planes.iter().all(|(n, b)| dot3(*n, q) - b <= 0.0) {
                    0.0
                } else {
                    faces
                        .iter()
                        .map(|f| point_triangle(q, f[0], f[1], f[2]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            Shape::Cloud => {
                return Err(Error::InvalidArgument("distances need dimension at most three"))
            }
        };
        Ok(math::sqrt(perp2 + dl * dl))
    }

    /// Signed distance to the boundary of a full dimensional polytope:
    /// positive inside, nonpositive outside.
    pub fn boundary_distance(&self, x: &[f64]) -> Result<f64> {
        if self.affine_dim < self.m || !self.exact {
            return Err(Error::DegenerateRotationSet {
                affine_dim: self.affine_dim,
                m: self.m,
            });
        }
        if x.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.len(),
            });
        }
        let d = match &self.shape {
            Shape::Interval(a, b) => (x[0] - a).min(b - x[0]),
            Shape::Polygon(poly) => {
                let n = poly.len();
                (0..n)
                    .map(|i| {
                        let a = poly[i];
                        let b = poly[(i + 1) % n];
                        let len = math::dist(&a, &b);
                        cross2(a, b, [x[0], x[1]]) / len
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            Shape::Solid { planes, .. } => planes
                .iter()
                .map(|(n, b)| b - dot3(*n, [x[0], x[1], x[2]]))
                .fold(f64::INFINITY, f64::min),
            _ => 0.0,
        };
        if d > 0.0 {
            Ok(d)
        } else {
            Ok(-self.distance(x)?)
        }
    }

    /// Lower bound on the radius of the largest ball around `w` inside the
    /// approximated set: boundary distance minus the Hausdorff error,
    /// floored at zero.
    pub fn inscribed_radius(&self, w: &[f64]) -> Result<f64> {
        Ok((self.boundary_distance(w)? - self.hausdorff_error).max(0.0))
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.distance(x)? <= tol)
    }

    /// `max_v u·v` over the vertices.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| math::dot(u, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Axis aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.m];
        let mut hi = vec![f64::NEG_INFINITY; self.m];
        for v in &self.vertices {
            for i in 0..self.m {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }
}

/// Hausdorff distance between two polytopes of dimension at most three,
/// attained at a vertex since the distance to a convex set is convex.
pub fn hausdorff_distance(a: &RotationPolytope, b: &RotationPolytope) -> Result<f64> {
    if a.m != b.m {
        return Err(Error::DimensionMismatch {
            expected: a.m,
            found: b.m,
        });
    }
    let mut d = 0.0f64;
    for v in &a.vertices {
        d = d.max(b.distance(v)?);
    }
    for v in &b.vertices {
        d = d.max(a.distance(v)?);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
            vec![0.5, 0.0],
        ]
    }

    #[test]
    fn interval_hull() {
        let h = convex_hull(&[vec![0.0], vec![1.0], vec![0.5]]).unwrap();
        assert_eq!(h.vertices, vec![vec![0.0], vec![1.0]]);
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.inscribed_radius(&[0.25]).unwrap(), 0.25);
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn square_hull_is_counterclockwise() {
        let h = convex_hull(&square()).unwrap();
        assert_eq!(
            h.vertices,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]
        );
        assert!((h.inscribed_radius(&[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-15);
        let loose = h.clone().with_error(0.1);
        assert!((loose.inscribed_radius(&[0.5, 0.5]).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(h.inscribed_radius(&[2.0, 0.5]).unwrap(), 0.0);
        assert!((h.distance(&[2.0, 2.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dilated_square_distance() {
        let a = convex_hull(&square()).unwrap();
        let b = convex_hull(&[
            vec![-0.1, -0.1],
            vec![1.1, -0.1],
            vec![1.1, 1.1],
            vec![-0.1, 1.1],
        ])
        .unwrap();
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - 0.1 * 2f64.sqrt()).abs() < 1e-12);
        let i1 = convex_hull(&[vec![0.0], vec![1.0]]).unwrap();
        let i2 = convex_hull(&[vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(hausdorff_distance(&i1, &i2).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_segment_in_plane() {
        let h = convex_hull(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertices.len(), 2);
        assert!((h.distance(&[1.0, 0.0]).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            h.inscribed_radius(&[0.5, 0.5]),
            Err(Error::DegenerateRotationSet { affine_dim: 1, m: 2 })
        ));
    }

    #[test]
    fn cube_hull_in_three_dimensions() {
        let mut pts = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    pts.push(vec![i as f64 * 0.5, j as f64 * 0.5, k as f64 * 0.5]);
                }
            }
        }
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.affine_dim, 3);
        assert!((h.inscribed_radius(&[0.5, 0.5, 0.5]).unwrap() - 0.5).abs() < 1e-12);
        assert!((h.distance(&[2.0, 0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert!((h.distance(&[2.0, 2.0, 2.0]).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn planar_square_in_space() {
        let pts = vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![0.5, 0.5, 1.0],
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 4);
        assert!((h.distance(&[0.5, 0.5, 3.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((h.distance(&[2.0, 0.5, 1.0]).unwrap() - 1.0).abs() < 1e-12);
    }
}
