//! Tolerance-aware planar geometry primitives.
//!
//! All operations are pure functions. Angles are normalized to `[0, 2π)` at
//! every operation boundary to avoid wrap-around drift.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("point coincides with center")]
    CoincidentWithCenter,
    #[error("ray origin outside circle")]
    OriginOutsideCircle,
    #[error("non-finite coordinate")]
    NonFinite,
}

/// A point on the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn add(&self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(&self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(&self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Unit vector in the same direction. Zero-length input yields zero.
    pub fn normalized(&self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            self.scale(1.0 / n)
        }
    }

    /// Linear interpolation `self + t * (other - self)`.
    pub fn lerp(&self, other: Point, t: f64) -> Point {
        Point::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }

    pub fn rotate(&self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// A circle given by center and radius. `radius = 0` only for the degenerate
/// single-point SEC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn contains(&self, p: Point, eps: f64) -> bool {
        self.center.dist(p) <= self.radius + eps
    }

    /// Whether `p` lies on the perimeter within `eps`.
    pub fn on_perimeter(&self, p: Point, eps: f64) -> bool {
        (self.center.dist(p) - self.radius).abs() <= eps
    }

    /// Point on the perimeter at the given angle.
    pub fn at_angle(&self, angle: f64) -> Point {
        Point::new(
            self.center.x + self.radius * angle.cos(),
            self.center.y + self.radius * angle.sin(),
        )
    }

    /// Angle of `p` as seen from the center, in `[0, 2π)`.
    pub fn angle_of(&self, p: Point) -> f64 {
        normalize_angle((p.y - self.center.y).atan2(p.x - self.center.x))
    }
}

/// Orientation of an arc walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
}

/// A circular arc. The angular extent is in `(0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub circle: Circle,
    pub start_angle: f64,
    pub end_angle: f64,
    pub orientation: Orientation,
}

impl Arc {
    pub fn new(circle: Circle, start_angle: f64, end_angle: f64, orientation: Orientation) -> Self {
        Arc {
            circle,
            start_angle: normalize_angle(start_angle),
            end_angle: normalize_angle(end_angle),
            orientation,
        }
    }

    /// Angular extent walked from start to end in the arc's orientation.
    pub fn extent(&self) -> f64 {
        let ccw = normalize_angle(self.end_angle - self.start_angle);
        let ext = match self.orientation {
            Orientation::Counterclockwise => ccw,
            Orientation::Clockwise => normalize_angle(-(self.end_angle - self.start_angle)),
        };
        if ext == 0.0 {
            TAU
        } else {
            ext
        }
    }
}

/// Comparison tolerances. `eps_len` is an absolute length scaled to the scene
/// (by convention 1e-9 times the SEC diameter of the initial configuration),
/// `eps_ang` an absolute angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_len: f64,
    pub eps_ang: f64,
}

impl Tolerance {
    pub fn new(eps_len: f64, eps_ang: f64) -> Self {
        assert!(eps_len > 0.0 && eps_ang > 0.0, "tolerances must be positive");
        Tolerance { eps_len, eps_ang }
    }

    /// Default tolerance for a scene of the given diameter.
    pub fn for_diameter(diameter: f64) -> Self {
        Tolerance::new(1e-9 * diameter.max(f64::MIN_POSITIVE), 1e-9)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-9, 1e-9)
    }
}

/// Normalizes an angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a % TAU;
    if r < 0.0 {
        r += TAU;
    }
    // The sum above can round to exactly 2π for tiny negative inputs.
    if r >= TAU {
        r -= TAU;
    }
    r
}

/// Directed central angle from `a` to `b` around `center`, in `[0, 2π)`.
pub fn angle_at_center(
    center: Point,
    a: Point,
    b: Point,
    orientation: Orientation,
) -> Result<f64, GeometryError> {
    if a == center || b == center {
        return Err(GeometryError::CoincidentWithCenter);
    }
    let ta = (a.y - center.y).atan2(a.x - center.x);
    let tb = (b.y - center.y).atan2(b.x - center.x);
    let ccw = normalize_angle(tb - ta);
    Ok(match orientation {
        Orientation::Counterclockwise => ccw,
        Orientation::Clockwise => {
            if ccw == 0.0 {
                0.0
            } else {
                TAU - ccw
            }
        }
    })
}

/// Foot of the perpendicular from `p` onto the closed segment, if it falls
/// within the segment extended by `tol.eps_len`.
pub fn mirror_projection(
    p: Point,
    seg: (Point, Point),
    tol: Tolerance,
) -> Result<Option<Point>, GeometryError> {
    let d = seg.1.sub(seg.0);
    let len2 = d.dot(d);
    if len2.sqrt() <= tol.eps_len {
        return Err(GeometryError::DegenerateSegment);
    }
    let t = p.sub(seg.0).dot(d) / len2;
    let foot = seg.0.add(d.scale(t));
    let slack = tol.eps_len / len2.sqrt();
    if t >= -slack && t <= 1.0 + slack {
        Ok(Some(foot))
    } else {
        Ok(None)
    }
}

/// Distance from `p` to the closed segment `seg`.
pub fn dist_point_segment(p: Point, seg: (Point, Point)) -> f64 {
    let d = seg.1.sub(seg.0);
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(seg.0);
    }
    let t = (p.sub(seg.0).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(seg.0.add(d.scale(t)))
}

/// Whether the closed segments share at least one point within `tol.eps_len`.
/// Handles collinear overlap.
pub fn segments_intersect(a: (Point, Point), b: (Point, Point), tol: Tolerance) -> bool {
    let eps = tol.eps_len;
    let r = a.1.sub(a.0);
    let s = b.1.sub(b.0);
    let denom = r.cross(s);
    let qp = b.0.sub(a.0);
    // Scale-aware degeneracy test for the parallel/collinear branch.
    let scale = r.norm().max(s.norm()).max(1.0);
    if denom.abs() > eps * scale {
        let t = qp.cross(s) / denom;
        let u = qp.cross(r) / denom;
        let slack_t = eps / r.norm().max(f64::MIN_POSITIVE);
        let slack_u = eps / s.norm().max(f64::MIN_POSITIVE);
        if t >= -slack_t && t <= 1.0 + slack_t && u >= -slack_u && u <= 1.0 + slack_u {
            return true;
        }
        // Fall through: near-parallel segments may still touch at endpoints.
    }
    // Parallel, collinear, degenerate, or near-miss cases: minimum distance
    // between the two closed segments.
    min_dist_segments(a, b) <= eps
}

/// Minimum distance between two closed segments.
pub fn min_dist_segments(a: (Point, Point), b: (Point, Point)) -> f64 {
    dist_point_segment(a.0, b)
        .min(dist_point_segment(a.1, b))
        .min(dist_point_segment(b.0, a))
        .min(dist_point_segment(b.1, a))
        .min(if proper_crossing(a, b) { 0.0 } else { f64::INFINITY })
}

fn proper_crossing(a: (Point, Point), b: (Point, Point)) -> bool {
    let d1 = b.1.sub(b.0).cross(a.0.sub(b.0));
    let d2 = b.1.sub(b.0).cross(a.1.sub(b.0));
    let d3 = a.1.sub(a.0).cross(b.0.sub(a.0));
    let d4 = a.1.sub(a.0).cross(b.1.sub(a.0));
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Unique intersection of the ray from `origin` through `through` with the
/// circle perimeter, in the ray direction. `origin` must be strictly inside.
pub fn ray_circle_exit(origin: Point, through: Point, circle: Circle) -> Result<Point, GeometryError> {
    let co = origin.sub(circle.center);
    if co.norm() >= circle.radius {
        return Err(GeometryError::OriginOutsideCircle);
    }
    let dir = through.sub(origin);
    if dir.norm() == 0.0 {
        return Err(GeometryError::DegenerateSegment);
    }
    let d = dir.normalized();
    // Solve |origin + t d - center|^2 = r^2 for t > 0.
    let b = co.dot(d);
    let c = co.dot(co) - circle.radius * circle.radius;
    let disc = b * b - c;
    let t = -b + disc.max(0.0).sqrt();
    Ok(origin.add(d.scale(t)))
}

/// True iff `inner` is enclosed in `outer`: every point of `inner` lies in the
/// closed disc of `outer`, up to `tol.eps_len`. Reflexive under tolerance.
pub fn enclosed_in(inner: Circle, outer: Circle, tol: Tolerance) -> bool {
    inner.center.dist(outer.center) + inner.radius <= outer.radius + tol.eps_len
}

/// Smallest enclosing circle of a non-empty point set.
///
/// Welzl's move-to-front algorithm over a deterministically shuffled copy of
/// the input: expected O(n), and deterministic for a fixed input order.
pub fn smallest_enclosing_circle(points: &[Point]) -> Result<Circle, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let mut pts = points.to_vec();
    // Fixed-seed xorshift shuffle keeps the algorithm deterministic for a
    // given input order while still defeating adversarial orderings.
    let mut state = 0x9e3779b97f4a7c15u64 ^ (pts.len() as u64);
    for i in (1..pts.len()).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let j = (state % (i as u64 + 1)) as usize;
        pts.swap(i, j);
    }

    let mut c = Circle::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if sec_contains(c, pts[i]) {
            continue;
        }
        c = Circle::new(pts[i], 0.0);
        for j in 0..i {
            if sec_contains(c, pts[j]) {
                continue;
            }
            c = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if sec_contains(c, pts[k]) {
                    continue;
                }
                c = circle_three(pts[i], pts[j], pts[k]);
            }
        }
    }
    Ok(c)
}

fn sec_contains(c: Circle, p: Point) -> bool {
    // Relative slack absorbs accumulated rounding in the incremental passes.
    c.center.dist(p) <= c.radius * (1.0 + 1e-12) + 1e-300
}

fn circle_two(a: Point, b: Point) -> Circle {
    let center = a.lerp(b, 0.5);
    Circle::new(center, center.dist(a).max(center.dist(b)))
}

/// Circumcircle of three points; falls back to the best two-point circle when
/// (nearly) collinear.
pub fn circle_three(a: Point, b: Point, c: Point) -> Circle {
    let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
    let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
    let (ax, ay) = (a.x - ox, a.y - oy);
    let (bx, by) = (b.x - ox, b.y - oy);
    let (cx, cy) = (c.x - ox, c.y - oy);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0.0 {
        let ab = circle_two(a, b);
        let bc = circle_two(b, c);
        let ac = circle_two(a, c);
        let mut best = ab;
        for cand in [bc, ac] {
            if cand.radius > best.radius {
                best = cand;
            }
        }
        return best;
    }
    let x = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let y = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let center = Point::new(ox + x, oy + y);
    let r = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Circle::new(center, r)
}

/// Shorthand used by classification code: arc distance between two angles on
/// the circle, always in `[0, π]`.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// Midpoint angle of the shorter arc from `a` to `b`.
pub fn arc_midpoint(a: f64, b: f64) -> f64 {
    let fwd = normalize_angle(b - a);
    if fwd <= PI {
        normalize_angle(a + fwd / 2.0)
    } else {
        normalize_angle(b + (TAU - fwd) / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerance = Tolerance { eps_len: 1e-9, eps_ang: 1e-9 };

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    /// Exhaustive O(n^3) smallest-circle oracle: try every pair diameter and
    /// every triple circumcircle, keep the smallest that contains all points.
    fn sec_oracle(points: &[Point]) -> Circle {
        let mut best: Option<Circle> = None;
        let contains_all = |c: Circle| points.iter().all(|&q| c.contains(q, 1e-9));
        if points.len() == 1 {
            return Circle::new(points[0], 0.0);
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let c = circle_two(points[i], points[j]);
                if contains_all(c) && best.map_or(true, |b| c.radius < b.radius) {
                    best = Some(c);
                }
                for k in (j + 1)..points.len() {
                    let c = circle_three(points[i], points[j], points[k]);
                    if contains_all(c) && best.map_or(true, |b| c.radius < b.radius) {
                        best = Some(c);
                    }
                }
            }
        }
        best.expect("oracle found no circle")
    }

    #[test]
    fn sec_single_point() {
        let c = smallest_enclosing_circle(&[p(0.0, 0.0)]).unwrap();
        assert_eq!(c.center, p(0.0, 0.0));
        assert_eq!(c.radius, 0.0);
    }

    #[test]
    fn sec_antipodal_pair() {
        let c = smallest_enclosing_circle(&[p(-1.0, 0.0), p(1.0, 0.0)]).unwrap();
        assert!(c.center.dist(p(0.0, 0.0)) < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sec_empty_errors() {
        assert_eq!(smallest_enclosing_circle(&[]).unwrap_err(), GeometryError::EmptyPointSet);
    }

    #[test]
    fn sec_unit_circle_with_interior_point() {
        // Seven points sampled on the unit circle plus one interior point.
        let mut pts: Vec<Point> = (0..7)
            .map(|i| {
                let t = i as f64 * TAU / 7.0;
                p(t.cos(), t.sin())
            })
            .collect();
        pts.push(p(0.1, 0.2));
        let c = smallest_enclosing_circle(&pts).unwrap();
        let oracle = sec_oracle(&pts);
        assert!(c.center.dist(oracle.center) < 1e-9);
        assert!((c.radius - oracle.radius).abs() < 1e-9);
        assert!(c.center.dist(p(0.0, 0.0)) < 1e-9);
        assert!((c.radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sec_matches_oracle_on_random_sets() {
        let mut state = 42u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for trial in 0..1000 {
            let n = 1 + (trial % 64);
            let pts: Vec<Point> = (0..n).map(|_| p(rnd() * 20.0 - 10.0, rnd() * 20.0 - 10.0)).collect();
            let c = smallest_enclosing_circle(&pts).unwrap();
            let oracle = sec_oracle(&pts);
            assert!(
                (c.radius - oracle.radius).abs() <= 1e-9 * (1.0 + oracle.radius),
                "trial {trial}: radius {} vs oracle {}",
                c.radius,
                oracle.radius
            );
            for q in &pts {
                assert!(c.contains(*q, 1e-9 * (1.0 + c.radius)));
            }
            // Permutation invariance of the result.
            let mut rev = pts.clone();
            rev.reverse();
            let c2 = smallest_enclosing_circle(&rev).unwrap();
            assert!(c.center.dist(c2.center) <= 1e-9 * (1.0 + c.radius));
            assert!((c.radius - c2.radius).abs() <= 1e-9 * (1.0 + c.radius));
        }
    }

    #[test]
    fn enclosed_in_cases() {
        let unit = Circle::new(p(0.0, 0.0), 1.0);
        let big = Circle::new(p(0.0, 0.0), 2.0);
        let off = Circle::new(p(1.5, 0.0), 1.0);
        assert!(enclosed_in(unit, unit, TOL));
        assert!(enclosed_in(unit, big, TOL));
        assert!(!enclosed_in(off, big, TOL));
    }

    #[test]
    fn enclosed_in_transitive_on_separated_triples() {
        let mut state = 7u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let a = Circle::new(p(rnd() - 0.5, rnd() - 0.5), 0.5 + rnd());
            let gap = 10.0 * TOL.eps_len + rnd();
            let b = Circle::new(
                a.center.add(p(rnd() * 0.1, rnd() * 0.1)),
                a.radius + a.center.dist(a.center) + gap + 0.2,
            );
            let c = Circle::new(b.center.add(p(rnd() * 0.1, rnd() * 0.1)), b.radius + gap + 0.3);
            if enclosed_in(a, b, TOL) && enclosed_in(b, c, TOL) {
                assert!(enclosed_in(a, c, TOL));
            }
        }
    }

    #[test]
    fn mirror_projection_cases() {
        let seg = (p(-1.0, 0.0), p(1.0, 0.0));
        assert_eq!(mirror_projection(p(0.0, 1.0), seg, TOL).unwrap(), Some(p(0.0, 0.0)));
        assert_eq!(mirror_projection(p(5.0, 1.0), seg, TOL).unwrap(), None);
        let seg2 = (p(0.0, 0.0), p(1.0, 0.0));
        let foot = mirror_projection(p(0.3, 0.4), seg2, TOL).unwrap().unwrap();
        assert!(foot.dist(p(0.3, 0.0)) < 1e-12);
        assert!(mirror_projection(p(0.0, 0.0), (p(1.0, 1.0), p(1.0, 1.0)), TOL).is_err());
    }

    #[test]
    fn segments_intersect_cases() {
        assert!(segments_intersect((p(0.0, 0.0), p(1.0, 1.0)), (p(0.0, 1.0), p(1.0, 0.0)), TOL));
        assert!(!segments_intersect((p(0.0, 0.0), p(1.0, 0.0)), (p(0.0, 1.0), p(1.0, 1.0)), TOL));
        // Collinear overlap.
        assert!(segments_intersect((p(0.0, 0.0), p(2.0, 0.0)), (p(1.0, 0.0), p(3.0, 0.0)), TOL));
        // Collinear disjoint.
        assert!(!segments_intersect((p(0.0, 0.0), p(1.0, 0.0)), (p(2.0, 0.0), p(3.0, 0.0)), TOL));
    }

    #[test]
    fn segments_intersect_symmetric() {
        let mut state = 99u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let a = (p(rnd(), rnd()), p(rnd(), rnd()));
            let b = (p(rnd(), rnd()), p(rnd(), rnd()));
            assert_eq!(segments_intersect(a, b, TOL), segments_intersect(b, a, TOL));
        }
    }

    #[test]
    fn ray_circle_exit_cases() {
        let unit = Circle::new(p(0.0, 0.0), 1.0);
        let e = ray_circle_exit(p(0.0, 0.0), p(1.0, 0.0), unit).unwrap();
        assert!(e.dist(p(1.0, 0.0)) < 1e-12);
        let e = ray_circle_exit(p(0.0, 0.0), p(1.0, 1.0), unit).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(e.dist(p(s, s)) < 1e-12);
        // Hand-derived: x = 0.5, upward ray exits at (0.5, sqrt(0.75)).
        let e = ray_circle_exit(p(0.5, 0.0), p(0.5, 1.0), unit).unwrap();
        assert!(e.dist(p(0.5, 0.75f64.sqrt())) < 1e-12);
        assert!(ray_circle_exit(p(2.0, 0.0), p(3.0, 0.0), unit).is_err());
    }

    #[test]
    fn angle_at_center_cases() {
        let c = p(0.0, 0.0);
        let a = p(1.0, 0.0);
        let b = p(0.0, 1.0);
        let ccw = angle_at_center(c, a, b, Orientation::Counterclockwise).unwrap();
        assert!((ccw - PI / 2.0).abs() < 1e-12);
        let cw = angle_at_center(c, a, b, Orientation::Clockwise).unwrap();
        assert!((cw - 3.0 * PI / 2.0).abs() < 1e-12);
        assert_eq!(angle_at_center(c, a, a, Orientation::Clockwise).unwrap(), 0.0);
        assert!(angle_at_center(c, c, b, Orientation::Clockwise).is_err());
    }

    #[test]
    fn angle_orientations_sum_to_full_turn() {
        let mut state = 5u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let c = p(rnd(), rnd());
            let a = c.add(p(rnd() + 0.1, rnd()));
            let b = c.add(p(rnd(), rnd() + 0.1));
            let ccw = angle_at_center(c, a, b, Orientation::Counterclockwise).unwrap();
            let cw = angle_at_center(c, a, b, Orientation::Clockwise).unwrap();
            let total = normalize_angle(ccw + cw);
            assert!(total < 1e-9 || (TAU - total) < 1e-9, "ccw + cw = {total}");
        }
    }

    #[test]
    fn arc_extent_in_range() {
        let unit = Circle::new(p(0.0, 0.0), 1.0);
        let a = Arc::new(unit, 0.0, PI / 2.0, Orientation::Counterclockwise);
        assert!((a.extent() - PI / 2.0).abs() < 1e-12);
        let b = Arc::new(unit, 0.0, PI / 2.0, Orientation::Clockwise);
        assert!((b.extent() - 3.0 * PI / 2.0).abs() < 1e-12);
        let full = Arc::new(unit, 1.0, 1.0, Orientation::Clockwise);
        assert!((full.extent() - TAU).abs() < 1e-12);
    }
}
