//! Snapshot parsing and shared reconstruction helpers.
//!
//! Everything here works purely in the observer's local frame. The observer
//! sits at the origin. Reconstruction never guesses: when the anchors a step
//! needs are occluded or inconsistent, helpers return `None` and the caller
//! waits for a later activation.

use std::f64::consts::{PI, TAU};

use crate::geometry::{self, normalize_angle, Circle, Point};
use crate::swarm::{BaseColor, Color, Snapshot};

/// One visible robot in the local frame.
#[derive(Debug, Clone, Copy)]
pub struct Obs {
    pub pos: Point,
    pub color: Color,
}

/// Parsed snapshot with scene-derived tolerances.
#[derive(Debug, Clone)]
pub struct View {
    pub own: Color,
    pub others: Vec<Obs>,
    pub eps_len: f64,
    pub eps_ang: f64,
}

impl View {
    pub fn parse(snapshot: &Snapshot) -> View {
        let others: Vec<Obs> = snapshot
            .others
            .iter()
            .map(|&(pos, color)| Obs { pos, color })
            .collect();
        // Scene span from the bounding box including the observer.
        let (mut lo, mut hi) = (Point::new(0.0, 0.0), Point::new(0.0, 0.0));
        for o in &others {
            lo.x = lo.x.min(o.pos.x);
            lo.y = lo.y.min(o.pos.y);
            hi.x = hi.x.max(o.pos.x);
            hi.y = hi.y.max(o.pos.y);
        }
        let span = hi.sub(lo).norm().max(f64::MIN_POSITIVE);
        View {
            own: snapshot.own_color,
            others,
            eps_len: 1e-9 * span,
            eps_ang: 1e-9,
        }
    }

    pub fn origin(&self) -> Point {
        Point::new(0.0, 0.0)
    }

    pub fn count_base(&self, b: BaseColor) -> usize {
        self.others.iter().filter(|o| o.color == Color::Base(b)).count()
    }

    pub fn count_pre(&self, b: BaseColor) -> usize {
        self.others.iter().filter(|o| o.color == Color::Pre(b)).count()
    }

    pub fn count_to(&self, b: BaseColor) -> usize {
        self.others.iter().filter(|o| o.color == Color::To(b)).count()
    }

    pub fn sees_base(&self, b: BaseColor) -> bool {
        self.count_base(b) > 0
    }

    pub fn robots_base(&self, b: BaseColor) -> impl Iterator<Item = &Obs> {
        self.others.iter().filter(move |o| o.color == Color::Base(b))
    }

    /// Any robot currently in transit (or any robot of the given bases).
    pub fn any_flier(&self) -> bool {
        self.others.iter().any(|o| o.color.is_to())
    }

    pub fn any_pre(&self) -> bool {
        self.others.iter().any(|o| o.color.is_pre())
    }

    /// Count over base + pre + to forms of a lineage, used by the
    /// cross-sector synchronization gates.
    pub fn lineage_count(&self, b: BaseColor) -> usize {
        self.others
            .iter()
            .filter(|o| o.color.base() == b)
            .count()
    }
}

/// Colors whose (stationary) bearers are guaranteed to sit on the main
/// circle. `to_` fliers are never anchors.
pub fn on_main_circle(c: Color) -> bool {
    use BaseColor as B;
    // Landed beacons sit on a chord or small-circle arc, never on the main
    // circle; a pre_beacon has not left its circle position yet.
    if c == Color::Pre(B::Beacon) {
        return true;
    }
    match c {
        Color::To(_) => false,
        Color::Base(b) | Color::Pre(b) => matches!(
            b,
            B::OnSec
                | B::Regular
                | B::Periodic
                | B::Leader
                | B::Left
                | B::Right
                | B::Split
                | B::Padding
                | B::BlockL
                | B::BlockR
                | B::Median
                | B::Mid
                | B::InChord
                | B::OutChord
                | B::ScL
                | B::ScR
                | B::ScMedian
                | B::SliceL
                | B::SliceR
                | B::SliceMedian
                | B::Unmatched
                | B::Matched
        ),
    }
}

/// One robot laid out on the reconstructed circle.
#[derive(Debug, Clone, Copy)]
pub struct CircleBot {
    pub angle: f64,
    pub pos: Point,
    pub color: Color,
    pub is_self: bool,
}

/// The main circle and every anchor robot on it, sorted by angle.
#[derive(Debug, Clone)]
pub struct CirclePicture {
    pub cir: Circle,
    pub bots: Vec<CircleBot>,
    pub self_idx: Option<usize>,
}

impl CirclePicture {
    pub fn self_angle(&self) -> Option<f64> {
        self.self_idx.map(|i| self.bots[i].angle)
    }

    /// Index of the bot nearest to the given angle.
    pub fn nearest(&self, angle: f64) -> Option<usize> {
        (0..self.bots.len()).min_by(|&a, &b| {
            geometry::arc_distance(self.bots[a].angle, angle)
                .total_cmp(&geometry::arc_distance(self.bots[b].angle, angle))
        })
    }
}

/// Fits the circle through ≥3 points, validating every point against it.
/// Returns `None` when fewer than 3 points, (near-)collinear, or any point
/// strays from the fitted perimeter.
pub fn fit_circle(points: &[Point], eps_len: f64) -> Option<Circle> {
    if points.len() < 3 {
        return None;
    }
    // Well-spread triple: farthest pair, then the point farthest from their
    // line. Any triple gives the same circle once validation passes.
    let (mut i0, mut i1, mut best) = (0, 1, 0.0);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = points[i].dist2(points[j]);
            if d > best {
                best = d;
                i0 = i;
                i1 = j;
            }
        }
    }
    let base = points[i1].sub(points[i0]);
    let blen = base.norm();
    if blen <= eps_len {
        return None;
    }
    let mut i2 = usize::MAX;
    let mut best_h = 0.0;
    for (i, p) in points.iter().enumerate() {
        if i == i0 || i == i1 {
            continue;
        }
        let h = base.cross(p.sub(points[i0])).abs() / blen;
        if h > best_h {
            best_h = h;
            i2 = i;
        }
    }
    if i2 == usize::MAX || best_h <= eps_len * 10.0 {
        return None;
    }
    let cir = geometry::circle_three(points[i0], points[i1], points[i2]);
    let tol = (eps_len * 50.0).max(cir.radius * 1e-10);
    for p in points {
        if !cir.on_perimeter(*p, tol) {
            return None;
        }
    }
    Some(cir)
}

impl View {
    /// Reconstructs the main circle from role-colored anchors (plus self when
    /// the own color is an on-circle role).
    pub fn circle_picture(&self) -> Option<CirclePicture> {
        let mut pts: Vec<(Point, Color, bool)> = Vec::new();
        if on_main_circle(self.own) {
            pts.push((self.origin(), self.own, true));
        }
        for o in &self.others {
            if on_main_circle(o.color) {
                pts.push((o.pos, o.color, false));
            }
        }
        let raw: Vec<Point> = pts.iter().map(|t| t.0).collect();
        let cir = fit_circle(&raw, self.eps_len)?;
        let mut bots: Vec<CircleBot> = pts
            .iter()
            .map(|&(pos, color, is_self)| CircleBot {
                angle: cir.angle_of(pos),
                pos,
                color,
                is_self,
            })
            .collect();
        bots.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        let self_idx = bots.iter().position(|b| b.is_self);
        Some(CirclePicture { cir, bots, self_idx })
    }
}

/// Angular sector boundaries reconstructed from guard structure: a grid of
/// `p` equally spaced boundary angles.
#[derive(Debug, Clone)]
pub struct SectorGrid {
    pub p: usize,
    pub boundaries: Vec<f64>,
}

impl SectorGrid {
    /// Index of the sector containing `angle` (boundaries belong to the
    /// sector they start).
    pub fn sector_of(&self, angle: f64) -> usize {
        let a = normalize_angle(angle);
        let mut idx = 0;
        for (i, &b) in self.boundaries.iter().enumerate() {
            if a >= b - 1e-12 {
                idx = i;
            }
        }
        idx
    }

    pub fn interval(&self, i: usize) -> (f64, f64) {
        let s = self.boundaries[i];
        let e = self.boundaries[(i + 1) % self.p.max(1)];
        (s, if self.p == 1 { s + TAU } else { e })
    }
}

pub const LEFT_LINEAGE: [BaseColor; 4] =
    [BaseColor::Left, BaseColor::BlockL, BaseColor::ScL, BaseColor::SliceL];
pub const RIGHT_LINEAGE: [BaseColor; 5] = [
    BaseColor::Right,
    BaseColor::Padding,
    BaseColor::BlockR,
    BaseColor::ScR,
    BaseColor::SliceR,
];

fn is_left_guard(c: Color) -> bool {
    matches!(c, Color::Base(b) if LEFT_LINEAGE.contains(&b))
}

fn is_right_guard(c: Color) -> bool {
    matches!(c, Color::Base(b) if RIGHT_LINEAGE.contains(&b))
}

impl CirclePicture {
    /// Reconstructs the uniform-sector boundary grid from landed guards and
    /// boundary regulars. Valid in the unisect era, where every `regular`
    /// robot still marks a sector boundary.
    pub fn sector_grid(&self, eps_ang: f64) -> Option<SectorGrid> {
        let p = self.bots.iter().filter(|b| is_left_guard(b.color)).count();
        if p == 0 {
            return None;
        }
        let mut anchors: Vec<f64> = self
            .bots
            .iter()
            .filter(|b| b.color == Color::Base(BaseColor::Regular))
            .map(|b| b.angle)
            .collect();
        // With exactly one boundary regular (odd-n halves) its antipode is
        // also a boundary.
        if anchors.len() == 1 && p == 2 {
            let a = anchors[0];
            anchors.push(normalize_angle(a + PI));
        }
        if anchors.is_empty() {
            // Boundaries flanked by same-lineage guards of adjacent mirrored
            // sectors: consecutive pairs in the guard-only subsequence. The
            // boundary is their arc midpoint regardless of any non-guard
            // robots sitting between them.
            let guards: Vec<&CircleBot> = self
                .bots
                .iter()
                .filter(|b| is_left_guard(b.color) || is_right_guard(b.color))
                .collect();
            let g = guards.len();
            for i in 0..g {
                let a = guards[i];
                let b = guards[(i + 1) % g];
                let same_lineage = (is_right_guard(a.color) && is_right_guard(b.color))
                    || (is_left_guard(a.color) && is_left_guard(b.color));
                if same_lineage {
                    anchors.push(geometry::arc_midpoint(a.angle, b.angle));
                }
            }
        }
        let first = *anchors.first()?;
        let step = TAU / p as f64;
        let mut boundaries: Vec<f64> = (0..p).map(|k| normalize_angle(first + k as f64 * step)).collect();
        boundaries.sort_by(|a, b| a.total_cmp(b));
        // Every anchor must land on the grid.
        for &a in &anchors {
            let ok = boundaries
                .iter()
                .any(|&b| geometry::arc_distance(a, b) <= eps_ang * 100.0);
            if !ok {
                return None;
            }
        }
        Some(SectorGrid { p, boundaries })
    }
}

/// One sector's contents as seen by a robot inside it.
#[derive(Debug, Clone)]
pub struct SectorCtx {
    pub cir: Circle,
    pub start: f64,
    pub end: f64,
    /// All robots strictly inside the sector (boundary regulars excluded),
    /// sorted counterclockwise from `start`. Includes self.
    pub members: Vec<CircleBot>,
    pub self_member: Option<usize>,
    /// Index into `members` of the landed left / right-end guard.
    pub left_guard: Option<usize>,
    pub right_guard: Option<usize>,
    /// True when the sector's left guard sits nearer `start` (so U_j grows
    /// counterclockwise from `start`).
    pub ccw: bool,
}

impl SectorCtx {
    /// Number of robots inside the sector (the paper's q).
    pub fn q(&self) -> usize {
        self.members.len()
    }

    /// Arc position of a member relative to `start`, in [0, 2π).
    pub fn rel(&self, angle: f64) -> f64 {
        normalize_angle(angle - self.start)
    }

    /// Uniform-position gap, available once both guards are present and
    /// distinct.
    pub fn u_gap(&self) -> Option<f64> {
        let l = self.left_guard?;
        let r = self.right_guard?;
        if l == r || self.q() < 2 {
            return None;
        }
        let span = geometry::arc_distance(self.members[l].angle, self.members[r].angle);
        Some(span / (self.q() as f64 - 1.0))
    }

    /// Angle of uniform position `U_j` (1-based), anchored at the left guard
    /// and growing toward the right guard.
    pub fn u_pos(&self, j: usize) -> Option<f64> {
        let l = self.left_guard?;
        let gap = self.u_gap()?;
        let la = self.members[l].angle;
        let dir = if self.ccw { 1.0 } else { -1.0 };
        Some(normalize_angle(la + dir * gap * (j as f64 - 1.0)))
    }
}

impl CirclePicture {
    /// Extracts the sector containing the observer. Requires the grid and a
    /// self position on the circle.
    pub fn my_sector(&self, grid: &SectorGrid, eps_ang: f64) -> Option<SectorCtx> {
        let self_angle = self.self_angle()?;
        self.sector_at(grid, self_angle, eps_ang)
    }

    pub fn sector_at(&self, grid: &SectorGrid, angle: f64, eps_ang: f64) -> Option<SectorCtx> {
        let idx = grid.sector_of(angle);
        let (start, end_raw) = grid.interval(idx);
        let span = normalize_angle(end_raw - start);
        let span = if span == 0.0 { TAU } else { span };
        let mut members: Vec<CircleBot> = self
            .bots
            .iter()
            .filter(|b| {
                let rel = normalize_angle(b.angle - start);
                // Strictly inside: boundary robots are regular-colored and
                // excluded; tolerate grid jitter at the edges.
                rel > eps_ang && rel < span - eps_ang
            })
            .cloned()
            .collect();
        members.sort_by(|a, b| {
            normalize_angle(a.angle - start).total_cmp(&normalize_angle(b.angle - start))
        });
        let self_member = members.iter().position(|b| b.is_self);
        let left_guard = members.iter().position(|b| is_left_guard(b.color));
        let right_guard = members.iter().position(|b| is_right_guard(b.color));
        let ccw = match (left_guard, right_guard) {
            (Some(l), Some(r)) => l < r,
            (Some(l), None) => {
                let rel = normalize_angle(members[l].angle - start);
                rel < span / 2.0
            }
            _ => true,
        };
        Some(SectorCtx {
            cir: self.cir,
            start,
            end: normalize_angle(start + span),
            members,
            self_member,
            left_guard,
            right_guard,
            ccw,
        })
    }
}

/// Chooses, among `candidates` (angles), the one closest to `target`,
/// breaking exact ties toward the left-guard side: the candidate whose
/// position in direction `left_dir` (±1, the sector's left orientation)
/// from `target` is preferred.
pub fn closest_with_tiebreak(candidates: &[(usize, f64)], target: f64, left_dir: f64, eps_ang: f64) -> Option<usize> {
    let mut best: Option<(usize, f64, f64)> = None;
    for &(id, a) in candidates {
        let d = geometry::arc_distance(a, target);
        // Signed offset in the left direction, for tie-breaking.
        let signed = normalize_angle((a - target) * left_dir);
        let toward_left = if signed <= PI { 0.0 } else { 1.0 };
        match best {
            None => best = Some((id, d, toward_left)),
            Some((_, bd, bt)) => {
                if d + eps_ang < bd || ((d - bd).abs() <= eps_ang && toward_left < bt) {
                    best = Some((id, d, toward_left));
                }
            }
        }
    }
    best.map(|(id, _, _)| id)
}

/// Local-frame angle of a point seen from the origin.
pub fn bearing(p: Point) -> f64 {
    normalize_angle(p.y.atan2(p.x))
}
