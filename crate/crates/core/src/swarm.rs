//! Robot state, lights, occlusion-based visibility, and local-frame snapshots.
//!
//! The `Snapshot` type is the sole input to the per-robot compute function:
//! it carries the observer's own color and the positions/colors of visible
//! robots in the observer's local frame — no identities, no global axes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{normalize_angle, Point, Tolerance};

#[derive(Debug, Error, PartialEq)]
pub enum SwarmError {
    #[error("unknown observer id {0}")]
    UnknownObserver(u32),
    #[error("non-finite move target")]
    NonFiniteTarget,
}

/// Base light colors. The palette is closed: these variants plus the
/// `pre_`/`to_` prefixed forms in [`Color`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(missing_docs)]
pub enum BaseColor {
    Off,
    Convex,
    OnSec,
    Regular,
    Biangular,
    Periodic,
    Leader,
    Left,
    Right,
    Split,
    Padding,
    BlockL,
    BlockR,
    Median,
    Mid,
    InChord,
    OutChord,
    Beacon,
    Chord,
    ScL,
    ScR,
    ScMedian,
    SmallCircle,
    SmallCircleComplete,
    ScLComplete,
    ScRComplete,
    SmallCircleEast,
    SmallCircleWest,
    East,
    West,
    SliceL,
    SliceR,
    SliceMedian,
    Angle,
    AngleM,
    EastDiameter,
    WestDiameter,
    Unmatched,
    Matched,
}

impl BaseColor {
    pub const ALL: [BaseColor; 39] = [
        BaseColor::Off,
        BaseColor::Convex,
        BaseColor::OnSec,
        BaseColor::Regular,
        BaseColor::Biangular,
        BaseColor::Periodic,
        BaseColor::Leader,
        BaseColor::Left,
        BaseColor::Right,
        BaseColor::Split,
        BaseColor::Padding,
        BaseColor::BlockL,
        BaseColor::BlockR,
        BaseColor::Median,
        BaseColor::Mid,
        BaseColor::InChord,
        BaseColor::OutChord,
        BaseColor::Beacon,
        BaseColor::Chord,
        BaseColor::ScL,
        BaseColor::ScR,
        BaseColor::ScMedian,
        BaseColor::SmallCircle,
        BaseColor::SmallCircleComplete,
        BaseColor::ScLComplete,
        BaseColor::ScRComplete,
        BaseColor::SmallCircleEast,
        BaseColor::SmallCircleWest,
        BaseColor::East,
        BaseColor::West,
        BaseColor::SliceL,
        BaseColor::SliceR,
        BaseColor::SliceMedian,
        BaseColor::Angle,
        BaseColor::AngleM,
        BaseColor::EastDiameter,
        BaseColor::WestDiameter,
        BaseColor::Unmatched,
        BaseColor::Matched,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseColor::Off => "off",
            BaseColor::Convex => "convex",
            BaseColor::OnSec => "onSEC",
            BaseColor::Regular => "regular",
            BaseColor::Biangular => "biangular",
            BaseColor::Periodic => "periodic",
            BaseColor::Leader => "leader",
            BaseColor::Left => "left",
            BaseColor::Right => "right",
            BaseColor::Split => "split",
            BaseColor::Padding => "padding",
            BaseColor::BlockL => "blockL",
            BaseColor::BlockR => "blockR",
            BaseColor::Median => "median",
            BaseColor::Mid => "mid",
            BaseColor::InChord => "in_chord",
            BaseColor::OutChord => "out_chord",
            BaseColor::Beacon => "beacon",
            BaseColor::Chord => "chord",
            BaseColor::ScL => "scL",
            BaseColor::ScR => "scR",
            BaseColor::ScMedian => "scMedian",
            BaseColor::SmallCircle => "smallcircle",
            BaseColor::SmallCircleComplete => "smallcircle_complete",
            BaseColor::ScLComplete => "scL_complete",
            BaseColor::ScRComplete => "scR_complete",
            BaseColor::SmallCircleEast => "smallcircle_east",
            BaseColor::SmallCircleWest => "smallcircle_west",
            BaseColor::East => "east",
            BaseColor::West => "west",
            BaseColor::SliceL => "sliceL",
            BaseColor::SliceR => "sliceR",
            BaseColor::SliceMedian => "sliceMedian",
            BaseColor::Angle => "angle",
            BaseColor::AngleM => "anglem",
            BaseColor::EastDiameter => "east_diameter",
            BaseColor::WestDiameter => "west_diameter",
            BaseColor::Unmatched => "unmatched",
            BaseColor::Matched => "matched",
        }
    }
}

/// A light color: a base color, or one of the `pre_`/`to_` synchronization
/// forms. `pre_<c>` marks an elected robot that has not started moving,
/// `to_<c>` marks a robot in transit that will settle as `<c>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Base(BaseColor),
    Pre(BaseColor),
    To(BaseColor),
}

impl Color {
    pub const OFF: Color = Color::Base(BaseColor::Off);

    /// Number of expressible colors. Compile-time constant palette bound.
    pub const PALETTE_SIZE: usize = BaseColor::ALL.len() * 3;

    pub fn base(self) -> BaseColor {
        match self {
            Color::Base(b) | Color::Pre(b) | Color::To(b) => b,
        }
    }

    pub fn is_pre(self) -> bool {
        matches!(self, Color::Pre(_))
    }

    pub fn is_to(self) -> bool {
        matches!(self, Color::To(_))
    }

    pub fn name(self) -> String {
        match self {
            Color::Base(b) => b.name().to_string(),
            Color::Pre(b) => format!("pre_{}", b.name()),
            Color::To(b) => format!("to_{}", b.name()),
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        if let Some(rest) = s.strip_prefix("pre_") {
            return BaseColor::ALL.iter().find(|b| b.name() == rest).map(|&b| Color::Pre(b));
        }
        if let Some(rest) = s.strip_prefix("to_") {
            return BaseColor::ALL.iter().find(|b| b.name() == rest).map(|&b| Color::To(b));
        }
        BaseColor::ALL.iter().find(|b| b.name() == s).map(|&b| Color::Base(b))
    }
}

/// A straight-line rigid motion in progress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Motion {
    pub origin: Point,
    pub target: Point,
    pub depart_time: f64,
    pub arrive_time: f64,
}

impl Motion {
    /// Position along the motion at simulation time `t` (clamped).
    pub fn position_at(&self, t: f64) -> Point {
        if self.arrive_time <= self.depart_time {
            return self.target;
        }
        let f = ((t - self.depart_time) / (self.arrive_time - self.depart_time)).clamp(0.0, 1.0);
        self.origin.lerp(self.target, f)
    }
}

/// Full per-robot simulator state. `sim_id` never crosses the snapshot
/// boundary; the algorithm cannot observe it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub sim_id: u32,
    pub position: Point,
    pub color: Color,
    pub motion: Option<Motion>,
}

impl RobotState {
    pub fn new(sim_id: u32, position: Point, color: Color) -> Self {
        RobotState { sim_id, position, color, motion: None }
    }
}

/// Local coordinate frame of a robot for one activation: positions map as
/// `local = scale · R(rotation) · M(reflect) · (p − origin)` where `M` flips
/// the y axis when `reflect` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFrame {
    pub rotation: f64,
    pub reflect: bool,
    pub scale: f64,
    pub origin: Point,
}

impl LocalFrame {
    pub fn identity(origin: Point) -> Self {
        LocalFrame { rotation: 0.0, reflect: false, scale: 1.0, origin }
    }

    pub fn to_local(&self, p: Point) -> Point {
        let mut v = p.sub(self.origin);
        if self.reflect {
            v = Point::new(v.x, -v.y);
        }
        v.rotate(self.rotation).scale(self.scale)
    }

    pub fn to_global(&self, local: Point) -> Point {
        let mut v = local.scale(1.0 / self.scale).rotate(-self.rotation);
        if self.reflect {
            v = Point::new(v.x, -v.y);
        }
        v.add(self.origin)
    }
}

/// What one robot sees in one Look: its own color and the visible robots in
/// its local frame. Deliberately carries no identities and no swarm size.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub own_color: Color,
    pub others: Vec<(Point, Color)>,
}

/// Output of one Compute: a target in the local frame (the local origin
/// means "stay put") and the color to adopt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveCommand {
    pub target: Point,
    pub next_color: Color,
}

impl MoveCommand {
    pub fn stay(color: Color) -> Self {
        MoveCommand { target: Point::new(0.0, 0.0), next_color: color }
    }
}

/// Instantaneous position of a robot (interpolating a motion in progress).
pub fn position_at(state: &RobotState, t: f64) -> Point {
    match &state.motion {
        Some(m) if t < m.arrive_time => m.position_at(t),
        _ => state.position,
    }
}

/// Ids of the robots visible to `observer`: robot `j` is visible iff no third
/// robot lies on the open segment observer→j within `tol.eps_len`.
///
/// Sorts candidates by bearing so only near-collinear robots are tested
/// against each other; O(n log n) in non-degenerate configurations.
pub fn visible_set(
    config: &[RobotState],
    observer: u32,
    tol: Tolerance,
) -> Result<Vec<u32>, SwarmError> {
    let obs = config
        .iter()
        .find(|r| r.sim_id == observer)
        .ok_or(SwarmError::UnknownObserver(observer))?;
    let o = obs.position;

    struct Cand {
        id: u32,
        pos: Point,
        angle: f64,
        dist: f64,
    }
    let mut cands: Vec<Cand> = config
        .iter()
        .filter(|r| r.sim_id != observer)
        .map(|r| {
            let d = r.position.sub(o);
            Cand {
                id: r.sim_id,
                pos: r.position,
                angle: normalize_angle(d.y.atan2(d.x)),
                dist: d.norm(),
            }
        })
        .collect();
    cands.sort_by(|a, b| a.angle.total_cmp(&b.angle).then(a.dist.total_cmp(&b.dist)));

    let mut visible = Vec::with_capacity(cands.len());
    let n = cands.len();
    for i in 0..n {
        let c = &cands[i];
        if c.dist <= tol.eps_len {
            // Co-located with the observer; count as visible (positions are
            // pairwise distinct by invariant, this only fires mid-collision).
            visible.push(c.id);
            continue;
        }
        // A blocker must be nearer and within eps_len of the segment o→c.
        // Its bearing then differs from c's by at most asin(eps/dist); scan
        // the angular neighborhood (wrapping) and test exactly.
        let max_dev = (tol.eps_len / c.dist).asin().max(tol.eps_ang) * 1.5 + 1e-15;
        let mut blocked = false;
        for dir in [-1i64, 1] {
            let mut step = 1i64;
            loop {
                let j = ((i as i64 + dir * step).rem_euclid(n as i64)) as usize;
                if j == i || step > n as i64 {
                    break;
                }
                let cj = &cands[j];
                let mut dd = (cj.angle - c.angle).abs();
                if dd > std::f64::consts::PI {
                    dd = std::f64::consts::TAU - dd;
                }
                if dd > max_dev {
                    break;
                }
                if cj.dist < c.dist
                    && cj.dist > tol.eps_len
                    && crate::geometry::dist_point_segment(cj.pos, (o, c.pos)) <= tol.eps_len
                {
                    blocked = true;
                    break;
                }
                step += 1;
            }
            if blocked {
                break;
            }
        }
        // Robots at (nearly) the same bearing sort adjacent; the loop above
        // only walked outward, also check exact-same-angle runs inline.
        if !blocked {
            for cj in &cands {
                if cj.id != c.id
                    && cj.dist < c.dist - tol.eps_len
                    && (cj.angle - c.angle).abs() <= 1e-12
                    && crate::geometry::dist_point_segment(cj.pos, (o, c.pos)) <= tol.eps_len
                {
                    blocked = true;
                    break;
                }
            }
        }
        if !blocked {
            visible.push(c.id);
        }
    }
    visible.sort_unstable();
    Ok(visible)
}

/// Builds the observer's snapshot: visible robots mapped through `frame`,
/// canonically ordered by (angle, distance) in the local frame.
pub fn take_snapshot(
    config: &[RobotState],
    observer: u32,
    frame: &LocalFrame,
    tol: Tolerance,
) -> Result<Snapshot, SwarmError> {
    let obs = config
        .iter()
        .find(|r| r.sim_id == observer)
        .ok_or(SwarmError::UnknownObserver(observer))?;
    let vis = visible_set(config, observer, tol)?;
    let mut others: Vec<(Point, Color)> = config
        .iter()
        .filter(|r| vis.binary_search(&r.sim_id).is_ok())
        .map(|r| (frame.to_local(r.position), r.color))
        .collect();
    others.sort_by(|a, b| {
        let aa = normalize_angle(a.0.y.atan2(a.0.x));
        let ab = normalize_angle(b.0.y.atan2(b.0.x));
        aa.total_cmp(&ab).then(a.0.norm().total_cmp(&b.0.norm()))
    });
    Ok(Snapshot { own_color: obs.color, others })
}

/// Applies a move command computed against a snapshot taken in `frame`:
/// maps the target back to the global frame and installs the motion record.
/// Timing (depart/arrive) is the scheduler's business and is patched there.
pub fn apply_move(
    state: &RobotState,
    cmd: &MoveCommand,
    frame: &LocalFrame,
) -> Result<RobotState, SwarmError> {
    if !cmd.target.is_finite() {
        return Err(SwarmError::NonFiniteTarget);
    }
    let global_target = frame.to_global(cmd.target);
    let mut next = state.clone();
    next.color = cmd.next_color;
    next.motion = Some(Motion {
        origin: state.position,
        target: global_target,
        depart_time: 0.0,
        arrive_time: 0.0,
    });
    Ok(next)
}
