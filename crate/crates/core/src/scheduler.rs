//! Drives Look-Compute-Move cycles under FSYNC, SSYNC and ASYNC with a
//! seeded adversary, records the trace, and meters epochs.
//!
//! The event loop is single-threaded and deterministic: identical
//! (initial configuration, adversary seed, scheduler kind) produce
//! byte-identical traces.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{smallest_enclosing_circle, Circle, Point, Tolerance};
use crate::protocol::ProtocolError;
use crate::swarm::{
    position_at, take_snapshot, Color, LocalFrame, Motion, MoveCommand, RobotState, Snapshot,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchedulerKind {
    Fsync,
    Ssync,
    Async,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetPolicy {
    All,
    RandomNonempty,
    WorstCaseHeuristic,
}

/// Adversary knobs: activation gaps, compute delays, move speeds, and the
/// synchronous-round subset policy. `max_gap` bounds the idle time between a
/// robot's move end and its next look (fairness).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Adversary {
    pub seed: u64,
    pub max_gap: f64,
    pub delay_range: (f64, f64),
    pub speed_range: (f64, f64),
    pub subset_policy: SubsetPolicy,
}

impl Default for Adversary {
    fn default() -> Self {
        Adversary {
            seed: 0,
            max_gap: 1.0,
            delay_range: (0.05, 0.2),
            speed_range: (0.2, 0.8),
            subset_policy: SubsetPolicy::RandomNonempty,
        }
    }
}

/// One complete activation as scheduled: Look is instantaneous at
/// `look_time`, the move spans `[move_start, move_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Activation {
    pub robot: u32,
    pub look_time: f64,
    pub move_start: f64,
    pub move_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Look,
    MoveStart,
    MoveEnd,
    ColorChange,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Look => "look",
            EventKind::MoveStart => "move_start",
            EventKind::MoveEnd => "move_end",
            EventKind::ColorChange => "color_change",
        }
    }
}

/// One trace event. `target` is set on move_start events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub id: u32,
    pub kind: EventKind,
    pub pos: Point,
    pub color: Color,
    pub target: Option<Point>,
}

/// Time-ordered event log plus the initial configuration it started from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub initial: Vec<RobotState>,
    pub events: Vec<Event>,
}

impl Trace {
    /// JSON Lines export: one event per line, fields exactly
    /// `{t, id, kind, x, y, color, tx, ty}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let (tx, ty) = match e.target {
                Some(p) => (
                    serde_json::Value::from(p.x),
                    serde_json::Value::from(p.y),
                ),
                None => (serde_json::Value::Null, serde_json::Value::Null),
            };
            let line = serde_json::json!({
                "t": e.t,
                "id": e.id,
                "kind": e.kind.name(),
                "x": e.pos.x,
                "y": e.pos.y,
                "color": e.color.name(),
                "tx": tx,
                "ty": ty,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(s: &str) -> Result<Trace, String> {
        let mut events = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| format!("line {}: {e}", lineno + 1))?;
            let kind = match v["kind"].as_str() {
                Some("look") => EventKind::Look,
                Some("move_start") => EventKind::MoveStart,
                Some("move_end") => EventKind::MoveEnd,
                Some("color_change") => EventKind::ColorChange,
                other => return Err(format!("line {}: bad kind {other:?}", lineno + 1)),
            };
            let color = Color::parse(
                v["color"].as_str().ok_or(format!("line {}: no color", lineno + 1))?,
            )
            .ok_or(format!("line {}: unknown color", lineno + 1))?;
            let target = match (v["tx"].as_f64(), v["ty"].as_f64()) {
                (Some(x), Some(y)) => Some(Point::new(x, y)),
                _ => None,
            };
            events.push(Event {
                t: v["t"].as_f64().ok_or(format!("line {}: no t", lineno + 1))?,
                id: v["id"].as_u64().ok_or(format!("line {}: no id", lineno + 1))? as u32,
                kind,
                pos: Point::new(
                    v["x"].as_f64().ok_or(format!("line {}: no x", lineno + 1))?,
                    v["y"].as_f64().ok_or(format!("line {}: no y", lineno + 1))?,
                ),
                color,
                target,
            });
        }
        Ok(Trace { initial: vec![], events })
    }

    /// All robot ids appearing in the trace or initial configuration.
    pub fn robot_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.initial.iter().map(|r| r.sim_id).collect();
        for e in &self.events {
            ids.push(e.id);
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Per-robot completed cycles as (look_time, move_end_time) pairs.
    pub fn cycles_of(&self, robot: u32) -> Vec<(f64, f64)> {
        let mut looks = Vec::new();
        let mut ends = Vec::new();
        for e in self.events.iter().filter(|e| e.id == robot) {
            match e.kind {
                EventKind::Look => looks.push(e.t),
                EventKind::MoveEnd => ends.push(e.t),
                _ => {}
            }
        }
        looks.into_iter().zip(ends).collect()
    }
}

/// Run metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub epochs: usize,
    pub rounds: usize,
    pub distinct_colors_used: usize,
    pub colors_used: Vec<String>,
    pub max_concurrent_moves: usize,
    pub computational_sec: Circle,
    pub terminated: bool,
    pub events: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_epochs: usize,
    pub max_events: usize,
    /// Abort on first coincidence collision instead of continuing.
    pub fail_fast_collisions: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_epochs: 500, max_events: 2_000_000, fail_fast_collisions: false }
    }
}

#[derive(Debug, Error)]
pub enum SchedulerError {
    #[error("limit exceeded after {epochs} epochs / {events} events")]
    LimitExceeded { epochs: usize, events: usize, partial: Box<Trace> },
    #[error("collision between robots {a} and {b} at t={time}")]
    Collision { a: u32, b: u32, time: f64, partial: Box<Trace> },
    #[error("protocol error for robot {robot} at t={time}: {source}")]
    Protocol { robot: u32, time: f64, source: ProtocolError, partial: Box<Trace> },
    #[error("bad input: {0}")]
    BadInput(String),
}

pub struct RunOutput {
    pub trace: Trace,
    pub metrics: Metrics,
    pub final_config: Vec<RobotState>,
}

/// The per-robot algorithm under test.
pub trait Protocol {
    fn compute(&self, snapshot: &Snapshot) -> Result<MoveCommand, ProtocolError>;
}

impl<F> Protocol for F
where
    F: Fn(&Snapshot) -> Result<MoveCommand, ProtocolError>,
{
    fn compute(&self, snapshot: &Snapshot) -> Result<MoveCommand, ProtocolError> {
        self(snapshot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pending {
    Look,
    MoveStart,
    MoveEnd,
}

#[derive(Debug, Clone, Copy)]
struct QueuedEvent {
    time: f64,
    seq: u64,
    robot: u32,
    what: Pending,
}

impl PartialEq for QueuedEvent {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for QueuedEvent {}
impl PartialOrd for QueuedEvent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueuedEvent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time.total_cmp(&other.time).then(self.seq.cmp(&other.seq))
    }
}

struct RobotRt {
    state: RobotState,
    /// Command and frame captured at the last look, consumed at move start.
    staged: Option<(MoveCommand, LocalFrame, f64)>,
    /// Time of the last look that confirmed quiescence.
    confirmed_at: f64,
    /// Whether this robot completed a cycle begun in the current epoch.
    epoch_done: bool,
    last_look: f64,
}

/// Runs the simulation until the protocol reaches its terminal fixpoint
/// (every robot regular-colored, stationary, and confirming stay-put) or a
/// limit trips.
pub fn run(
    initial: &[RobotState],
    kind: SchedulerKind,
    adversary: &Adversary,
    protocol: &dyn Protocol,
    limits: &Limits,
) -> Result<RunOutput, SchedulerError> {
    let tol = run_tolerance(initial)?;
    for (i, a) in initial.iter().enumerate() {
        for b in initial.iter().skip(i + 1) {
            if a.position.dist(b.position) <= 10.0 * tol.eps_len {
                return Err(SchedulerError::BadInput(format!(
                    "initial positions of {} and {} coincide",
                    a.sim_id, b.sim_id
                )));
            }
        }
    }
    match kind {
        SchedulerKind::Async => run_async(initial, adversary, protocol, limits, tol),
        SchedulerKind::Fsync | SchedulerKind::Ssync => {
            run_sync(initial, kind, adversary, protocol, limits, tol)
        }
    }
}

fn run_tolerance(initial: &[RobotState]) -> Result<Tolerance, SchedulerError> {
    let pts: Vec<Point> = initial.iter().map(|r| r.position).collect();
    let sec = smallest_enclosing_circle(&pts)
        .map_err(|e| SchedulerError::BadInput(format!("initial configuration: {e}")))?;
    Ok(Tolerance::for_diameter((2.0 * sec.radius).max(1e-12)))
}

struct Recorder {
    trace: Trace,
    colors: std::collections::BTreeSet<Color>,
    positions: Vec<Point>,
    max_concurrent: usize,
    last_change: f64,
}

impl Recorder {
    fn new(initial: &[RobotState]) -> Self {
        let mut colors = std::collections::BTreeSet::new();
        let mut positions = Vec::new();
        for r in initial {
            colors.insert(r.color);
            positions.push(r.position);
        }
        Recorder {
            trace: Trace { initial: initial.to_vec(), events: Vec::new() },
            colors,
            positions,
            max_concurrent: 0,
            last_change: -1.0,
        }
    }

    fn push(&mut self, e: Event) {
        self.colors.insert(e.color);
        self.positions.push(e.pos);
        if let Some(t) = e.target {
            self.positions.push(t);
        }
        self.trace.events.push(e);
    }
}

fn finish(
    rec: Recorder,
    robots: Vec<RobotRt>,
    epochs: usize,
    rounds: usize,
    terminated: bool,
) -> RunOutput {
    let computational_sec = smallest_enclosing_circle(&rec.positions)
        .unwrap_or(Circle::new(Point::new(0.0, 0.0), 0.0));
    let events = rec.trace.events.len();
    RunOutput {
        metrics: Metrics {
            epochs,
            rounds,
            distinct_colors_used: rec.colors.len(),
            colors_used: rec.colors.iter().map(|c| c.name()).collect(),
            max_concurrent_moves: rec.max_concurrent,
            computational_sec,
            terminated,
            events,
        },
        trace: rec.trace,
        final_config: robots.into_iter().map(|r| r.state).collect(),
    }
}

fn all_quiescent(robots: &[RobotRt], last_change: f64) -> bool {
    robots.iter().all(|r| {
        r.state.color == Color::Base(crate::swarm::BaseColor::Regular)
            && r.state.motion.is_none()
            && r.staged.is_none()
            && r.confirmed_at > last_change
    })
}

fn materialize(robots: &[RobotRt], t: f64) -> Vec<RobotState> {
    robots
        .iter()
        .map(|r| {
            let mut s = r.state.clone();
            s.position = position_at(&s, t);
            s
        })
        .collect()
}

fn draw_range(rng: &mut ChaCha8Rng, range: (f64, f64), extreme: bool) -> f64 {
    if range.1 <= range.0 {
        return range.0;
    }
    if extreme {
        // Bang-bang draws stress the pre_/to_ synchronization colors.
        if rng.gen::<bool>() {
            range.0
        } else {
            range.1
        }
    } else {
        rng.gen_range(range.0..range.1)
    }
}

fn draw_frame(rng: &mut ChaCha8Rng, origin: Point) -> LocalFrame {
    LocalFrame {
        rotation: rng.gen_range(0.0..std::f64::consts::TAU),
        reflect: rng.gen::<bool>(),
        scale: rng.gen_range(0.5..2.0),
        origin,
    }
}

fn run_async(
    initial: &[RobotState],
    adv: &Adversary,
    protocol: &dyn Protocol,
    limits: &Limits,
    tol: Tolerance,
) -> Result<RunOutput, SchedulerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(adv.seed);
    let extreme = adv.subset_policy == SubsetPolicy::WorstCaseHeuristic;
    let mut robots: Vec<RobotRt> = initial
        .iter()
        .map(|r| RobotRt {
            state: r.clone(),
            staged: None,
            confirmed_at: -1.0,
            epoch_done: false,
            last_look: -1.0,
        })
        .collect();
    let idx_of = |id: u32, robots: &[RobotRt]| robots.iter().position(|r| r.state.sim_id == id);

    let mut rec = Recorder::new(initial);
    let mut heap: BinaryHeap<Reverse<QueuedEvent>> = BinaryHeap::new();
    let mut seq = 0u64;
    for r in initial {
        let t = rng.gen_range(0.0..(0.3 * adv.max_gap).max(1e-6));
        heap.push(Reverse(QueuedEvent { time: t, seq, robot: r.sim_id, what: Pending::Look }));
        seq += 1;
    }

    let mut epochs = 0usize;
    let mut epoch_start = -1.0f64;
    let mut active_moves = 0usize;
    let mut terminated = false;

    while let Some(Reverse(ev)) = heap.pop() {
        if rec.trace.events.len() >= limits.max_events {
            return Err(SchedulerError::LimitExceeded {
                epochs,
                events: rec.trace.events.len(),
                partial: Box::new(rec.trace),
            });
        }
        let t = ev.time;
        let i = idx_of(ev.robot, &robots).expect("robot exists");
        match ev.what {
            Pending::Look => {
                let config = materialize(&robots, t);
                let frame = draw_frame(&mut rng, config[i].position);
                let snapshot =
                    take_snapshot(&config, ev.robot, &frame, tol).expect("observer present");
                let cmd = protocol.compute(&snapshot).map_err(|e| SchedulerError::Protocol {
                    robot: ev.robot,
                    time: t,
                    source: e,
                    partial: Box::new(Trace {
                        initial: initial.to_vec(),
                        events: rec.trace.events.clone(),
                    }),
                })?;
                rec.push(Event {
                    t,
                    id: ev.robot,
                    kind: EventKind::Look,
                    pos: config[i].position,
                    color: robots[i].state.color,
                    target: None,
                });
                robots[i].last_look = t;
                // Quiescence confirmation: regular, stationary, stay-put.
                let stays = cmd.target.norm() <= tol.eps_len * frame.scale.max(1.0);
                if robots[i].state.color == Color::Base(crate::swarm::BaseColor::Regular)
                    && stays
                    && cmd.next_color == robots[i].state.color
                {
                    robots[i].confirmed_at = t;
                } else {
                    robots[i].confirmed_at = -1.0;
                }
                let delay = draw_range(&mut rng, adv.delay_range, extreme);
                robots[i].staged = Some((cmd, frame, t));
                heap.push(Reverse(QueuedEvent {
                    time: t + delay,
                    seq,
                    robot: ev.robot,
                    what: Pending::MoveStart,
                }));
                seq += 1;
            }
            Pending::MoveStart => {
                let (cmd, frame, _look_t) = robots[i].staged.take().expect("staged command");
                let mut target = frame.to_global(cmd.target);
                let here = robots[i].state.position;
                if target.dist(here) <= tol.eps_len {
                    target = here;
                }
                if cmd.next_color != robots[i].state.color {
                    rec.push(Event {
                        t,
                        id: ev.robot,
                        kind: EventKind::ColorChange,
                        pos: here,
                        color: cmd.next_color,
                        target: None,
                    });
                    rec.last_change = t;
                }
                robots[i].state.color = cmd.next_color;
                let dist = target.dist(here);
                let speed = draw_range(&mut rng, adv.speed_range, extreme);
                let duration = if dist > 0.0 { dist * speed } else { 0.0 };
                rec.push(Event {
                    t,
                    id: ev.robot,
                    kind: EventKind::MoveStart,
                    pos: here,
                    color: robots[i].state.color,
                    target: Some(target),
                });
                if dist > 0.0 {
                    rec.last_change = t;
                    robots[i].state.motion = Some(Motion {
                        origin: here,
                        target,
                        depart_time: t,
                        arrive_time: t + duration,
                    });
                    active_moves += 1;
                    rec.max_concurrent = rec.max_concurrent.max(active_moves);
                    if limits.fail_fast_collisions {
                        if let Some((other, ct)) = quick_collision(&robots, i, t, tol) {
                            return Err(SchedulerError::Collision {
                                a: ev.robot,
                                b: other,
                                time: ct,
                                partial: Box::new(rec.trace),
                            });
                        }
                    }
                }
                heap.push(Reverse(QueuedEvent {
                    time: t + duration,
                    seq,
                    robot: ev.robot,
                    what: Pending::MoveEnd,
                }));
                seq += 1;
            }
            Pending::MoveEnd => {
                if let Some(m) = robots[i].state.motion.take() {
                    robots[i].state.position = m.target;
                    active_moves = active_moves.saturating_sub(1);
                }
                rec.push(Event {
                    t,
                    id: ev.robot,
                    kind: EventKind::MoveEnd,
                    pos: robots[i].state.position,
                    color: robots[i].state.color,
                    target: None,
                });
                // Epoch metering: a cycle begun after the epoch start has
                // completed for this robot.
                if !robots[i].epoch_done && robots[i].last_look > epoch_start {
                    robots[i].epoch_done = true;
                    if robots.iter().all(|r| r.epoch_done) {
                        epochs += 1;
                        epoch_start = t;
                        for r in robots.iter_mut() {
                            r.epoch_done = false;
                        }
                        if epochs >= limits.max_epochs {
                            return Err(SchedulerError::LimitExceeded {
                                epochs,
                                events: rec.trace.events.len(),
                                partial: Box::new(rec.trace),
                            });
                        }
                    }
                }
                if all_quiescent(&robots, rec.last_change) {
                    terminated = true;
                    break;
                }
                let gap = rng.gen_range((0.01 * adv.max_gap)..adv.max_gap);
                heap.push(Reverse(QueuedEvent {
                    time: t + gap,
                    seq,
                    robot: ev.robot,
                    what: Pending::Look,
                }));
                seq += 1;
            }
        }
    }
    // Count the trailing partial epoch if it saw any look.
    if robots.iter().any(|r| r.epoch_done || r.last_look > epoch_start) {
        epochs += 1;
    }
    Ok(finish(rec, robots, epochs, 0, terminated))
}

/// Cheap fail-fast check at move start: coincidence against stationary
/// robots on the path and closest approach against active motions.
fn quick_collision(robots: &[RobotRt], i: usize, t: f64, tol: Tolerance) -> Option<(u32, f64)> {
    let m = robots[i].state.motion.as_ref()?;
    for (j, other) in robots.iter().enumerate() {
        if j == i {
            continue;
        }
        match &other.state.motion {
            None => {
                let d =
                    crate::geometry::dist_point_segment(other.state.position, (m.origin, m.target));
                if d <= tol.eps_len {
                    return Some((other.state.sim_id, t));
                }
            }
            Some(om) => {
                if let Some(ct) = crate::verify::closest_approach_time(m, om, tol.eps_len) {
                    return Some((other.state.sim_id, ct));
                }
            }
        }
    }
    None
}

fn run_sync(
    initial: &[RobotState],
    kind: SchedulerKind,
    adv: &Adversary,
    protocol: &dyn Protocol,
    limits: &Limits,
    tol: Tolerance,
) -> Result<RunOutput, SchedulerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(adv.seed);
    let mut robots: Vec<RobotRt> = initial
        .iter()
        .map(|r| RobotRt {
            state: r.clone(),
            staged: None,
            confirmed_at: -1.0,
            epoch_done: false,
            last_look: -1.0,
        })
        .collect();
    let mut rec = Recorder::new(initial);
    let n = robots.len();
    let mut epochs = 0usize;
    let mut epoch_start = -1.0f64;
    let mut rounds = 0usize;
    let mut terminated = false;

    for round in 0..limits.max_events {
        let t = round as f64;
        // Choose the activated subset.
        let chosen: Vec<usize> = match kind {
            SchedulerKind::Fsync => (0..n).collect(),
            SchedulerKind::Ssync => match adv.subset_policy {
                SubsetPolicy::All => (0..n).collect(),
                SubsetPolicy::RandomNonempty => loop {
                    let s: Vec<usize> = (0..n).filter(|_| rng.gen::<bool>()).collect();
                    if !s.is_empty() {
                        break s;
                    }
                },
                SubsetPolicy::WorstCaseHeuristic => {
                    // Small staggered subsets maximize interleaving.
                    let k = 1 + rng.gen_range(0..2.max(n / 4));
                    let mut idx: Vec<usize> = (0..n).collect();
                    for i in (1..idx.len()).rev() {
                        let j = rng.gen_range(0..=i);
                        idx.swap(i, j);
                    }
                    idx.truncate(k.min(n));
                    idx.sort_unstable();
                    idx
                }
            },
            SchedulerKind::Async => unreachable!(),
        };
        let config = materialize(&robots, t);
        // All Looks precede all Moves within the round.
        let mut staged: Vec<(usize, MoveCommand, LocalFrame)> = Vec::new();
        for &i in &chosen {
            let frame = draw_frame(&mut rng, config[i].position);
            let snapshot =
                take_snapshot(&config, config[i].sim_id, &frame, tol).expect("observer");
            let cmd = protocol.compute(&snapshot).map_err(|e| SchedulerError::Protocol {
                robot: config[i].sim_id,
                time: t,
                source: e,
                partial: Box::new(Trace {
                    initial: initial.to_vec(),
                    events: rec.trace.events.clone(),
                }),
            })?;
            rec.push(Event {
                t,
                id: config[i].sim_id,
                kind: EventKind::Look,
                pos: config[i].position,
                color: config[i].color,
                target: None,
            });
            robots[i].last_look = t;
            let stays = cmd.target.norm() <= tol.eps_len * frame.scale.max(1.0);
            if robots[i].state.color == Color::Base(crate::swarm::BaseColor::Regular)
                && stays
                && cmd.next_color == robots[i].state.color
            {
                robots[i].confirmed_at = t;
            } else {
                robots[i].confirmed_at = -1.0;
            }
            staged.push((i, cmd, frame));
        }
        let mut movers = 0usize;
        for (i, cmd, frame) in staged {
            let here = robots[i].state.position;
            let mut target = frame.to_global(cmd.target);
            if target.dist(here) <= tol.eps_len {
                target = here;
            }
            if cmd.next_color != robots[i].state.color {
                rec.push(Event {
                    t,
                    id: robots[i].state.sim_id,
                    kind: EventKind::ColorChange,
                    pos: here,
                    color: cmd.next_color,
                    target: None,
                });
                rec.last_change = t;
            }
            robots[i].state.color = cmd.next_color;
            rec.push(Event {
                t,
                id: robots[i].state.sim_id,
                kind: EventKind::MoveStart,
                pos: here,
                color: robots[i].state.color,
                target: Some(target),
            });
            if target.dist(here) > 0.0 {
                movers += 1;
                rec.last_change = t;
            }
            robots[i].state.position = target;
            rec.push(Event {
                t,
                id: robots[i].state.sim_id,
                kind: EventKind::MoveEnd,
                pos: target,
                color: robots[i].state.color,
                target: None,
            });
            if !robots[i].epoch_done && robots[i].last_look > epoch_start {
                robots[i].epoch_done = true;
            }
        }
        rec.max_concurrent = rec.max_concurrent.max(movers);
        rounds += 1;
        if robots.iter().all(|r| r.epoch_done) {
            epochs += 1;
            epoch_start = t;
            for r in robots.iter_mut() {
                r.epoch_done = false;
            }
            if epochs >= limits.max_epochs {
                return Err(SchedulerError::LimitExceeded {
                    epochs,
                    events: rec.trace.events.len(),
                    partial: Box::new(rec.trace),
                });
            }
        }
        if all_quiescent(&robots, rec.last_change) {
            terminated = true;
            break;
        }
        if rec.trace.events.len() >= limits.max_events {
            return Err(SchedulerError::LimitExceeded {
                epochs,
                events: rec.trace.events.len(),
                partial: Box::new(rec.trace),
            });
        }
    }
    if robots.iter().any(|r| r.epoch_done) {
        epochs += 1;
    }
    Ok(finish(rec, robots, epochs, rounds, terminated))
}

/// Greedy epoch partition of a complete trace: each epoch ends at the
/// earliest time by which every robot has completed a full cycle begun
/// within the epoch; a trailing window counts if it contains a look.
pub fn epoch_count(trace: &Trace, robot_ids: &[u32]) -> usize {
    if robot_ids.is_empty() {
        return 0;
    }
    let cycles: Vec<Vec<(f64, f64)>> = robot_ids.iter().map(|&id| trace.cycles_of(id)).collect();
    if cycles.iter().all(|c| c.is_empty()) {
        return 0;
    }
    let mut epochs = 0usize;
    let mut start = -1.0f64;
    loop {
        let mut end = f64::NEG_INFINITY;
        let mut complete = true;
        for robot_cycles in &cycles {
            match robot_cycles.iter().find(|(look, _)| *look > start) {
                Some(&(_, e)) => end = end.max(e),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            let any_look = trace
                .events
                .iter()
                .any(|e| e.kind == EventKind::Look && e.t > start);
            if any_look {
                epochs += 1;
            }
            return epochs;
        }
        epochs += 1;
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swarm::BaseColor;

    fn ev(t: f64, id: u32, kind: EventKind) -> Event {
        Event { t, id, kind, pos: Point::new(0.0, 0.0), color: Color::OFF, target: None }
    }

    #[test]
    fn epoch_count_fsync_rounds() {
        // 2 robots, 3 atomic rounds: epochs = 3.
        let mut events = Vec::new();
        for round in 0..3 {
            let t = round as f64;
            for id in 0..2 {
                events.push(ev(t, id, EventKind::Look));
            }
            for id in 0..2 {
                events.push(ev(t, id, EventKind::MoveEnd));
            }
        }
        let trace = Trace { initial: vec![], events };
        assert_eq!(epoch_count(&trace, &[0, 1]), 3);
    }

    #[test]
    fn epoch_count_alternating() {
        // 2 robots, strictly alternating instantaneous activations:
        // epochs = ceil(total / 2).
        for total in [2usize, 3, 4, 5, 6] {
            let mut events = Vec::new();
            for k in 0..total {
                let id = (k % 2) as u32;
                let t = k as f64;
                events.push(ev(t, id, EventKind::Look));
                events.push(ev(t, id, EventKind::MoveEnd));
            }
            let trace = Trace { initial: vec![], events };
            assert_eq!(epoch_count(&trace, &[0, 1]), total.div_ceil(2), "total={total}");
        }
    }

    #[test]
    fn epoch_count_empty() {
        let trace = Trace { initial: vec![], events: vec![] };
        assert_eq!(epoch_count(&trace, &[0, 1]), 0);
    }

    #[test]
    fn trace_jsonl_roundtrip() {
        let trace = Trace {
            initial: vec![],
            events: vec![
                Event {
                    t: 0.5,
                    id: 3,
                    kind: EventKind::MoveStart,
                    pos: Point::new(1.0, 2.0),
                    color: Color::Base(BaseColor::Chord),
                    target: Some(Point::new(3.5, -1.0)),
                },
                ev(1.0, 3, EventKind::MoveEnd),
            ],
        };
        let s = trace.to_jsonl();
        let back = Trace::from_jsonl(&s).unwrap();
        assert_eq!(back.events.len(), 2);
        assert_eq!(back.events[0].kind, EventKind::MoveStart);
        assert_eq!(back.events[0].target, Some(Point::new(3.5, -1.0)));
        assert_eq!(back.events[0].color, Color::Base(BaseColor::Chord));
    }

    /// A protocol that recolors to regular and stays: must terminate in one
    /// sweep under every scheduler.
    struct RecolorOnly;
    impl Protocol for RecolorOnly {
        fn compute(&self, _s: &Snapshot) -> Result<MoveCommand, ProtocolError> {
            Ok(MoveCommand::stay(Color::Base(BaseColor::Regular)))
        }
    }

    #[test]
    fn trivial_protocol_terminates_every_kind() {
        let initial: Vec<RobotState> = (0..4)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 4.0;
                RobotState::new(i as u32, Point::new(t.cos(), t.sin()), Color::OFF)
            })
            .collect();
        for kind in [SchedulerKind::Fsync, SchedulerKind::Ssync, SchedulerKind::Async] {
            let out = run(&initial, kind, &Adversary::default(), &RecolorOnly, &Limits::default())
                .unwrap_or_else(|e| panic!("{kind:?}: {e}"));
            assert!(out.metrics.terminated, "{kind:?}");
            assert!(out.metrics.epochs >= 1);
            assert!(out
                .final_config
                .iter()
                .all(|r| r.color == Color::Base(BaseColor::Regular)));
        }
    }

    #[test]
    fn determinism_byte_identical() {
        let initial: Vec<RobotState> = (0..5)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 5.0 + 0.1;
                RobotState::new(i as u32, Point::new(t.cos(), t.sin()), Color::OFF)
            })
            .collect();
        let adv = Adversary { seed: 99, ..Default::default() };
        let a = run(&initial, SchedulerKind::Async, &adv, &RecolorOnly, &Limits::default()).unwrap();
        let b = run(&initial, SchedulerKind::Async, &adv, &RecolorOnly, &Limits::default()).unwrap();
        assert_eq!(a.trace.to_jsonl(), b.trace.to_jsonl());
    }

    #[test]
    fn fairness_every_robot_looks() {
        let initial: Vec<RobotState> = (0..6)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 6.0 + 0.05;
                RobotState::new(i as u32, Point::new(t.cos(), t.sin()), Color::OFF)
            })
            .collect();
        let adv = Adversary { seed: 3, max_gap: 0.5, ..Default::default() };
        let out = run(&initial, SchedulerKind::Async, &adv, &RecolorOnly, &Limits::default()).unwrap();
        for id in 0..6u32 {
            assert!(out.trace.events.iter().any(|e| e.id == id && e.kind == EventKind::Look));
        }
    }
}
