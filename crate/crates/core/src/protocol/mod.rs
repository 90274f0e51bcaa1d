//! The per-robot compute function: a pure map from an occlusion-filtered,
//! local-frame snapshot to a move command.
//!
//! Dispatch is centralized here, keyed on the robot's own color (with the
//! visible color profile validated per phase). Each phase module consumes a
//! parsed [`view::View`] and either produces a command, waits (stay put,
//! keep color), or reports a protocol invariant violation — the latter is a
//! test oracle, not a recoverable path.
//!
//! A robot whose light is `to_<c>` is, by the activation contract, no longer
//! moving when its compute runs, so it settles as `<c>` on the spot. A robot
//! whose light is `pre_<c>` never moves before switching to `to_<c>`.

pub mod bdcp;
pub mod biangular;
pub mod circle_formation;
pub mod odd_block;
pub mod rank;
pub mod seq_match;
pub mod slice;
pub mod small_circle;
pub mod split;
pub mod view;

use thiserror::Error;

use crate::swarm::{BaseColor, Color, MoveCommand, Snapshot};
use view::View;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("protocol invariant violated: {0}")]
    InvariantViolated(String),
}

/// Shorthand used by phase modules.
pub type Step = Result<MoveCommand, ProtocolError>;

pub(crate) fn violation(msg: impl Into<String>) -> ProtocolError {
    ProtocolError::InvariantViolated(msg.into())
}

/// Phases of the formation state machine, as reconstructed from a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    CircleFormation,
    Classify,
    Biangular,
    Split,
    OddBlock(u8),
    SmallCircle(u8),
    Slice(u8),
    SequentialMatch,
    Terminal,
}

/// The per-robot algorithm. Pure: the snapshot is the sole input.
pub fn compute(snapshot: &Snapshot) -> Step {
    let view = View::parse(snapshot);
    dispatch(&view)
}

fn dispatch(view: &View) -> Step {
    use BaseColor as B;
    let own = view.own;

    // In-transit lights settle first: a robot computing with a `to_<c>`
    // light has finished its move, so it adopts `<c>` in place.
    if let Color::To(base) = own {
        return Ok(MoveCommand::stay(Color::Base(base)));
    }

    check_companions(view)?;

    match own {
        Color::Pre(B::Left) | Color::Pre(B::Right) => split::pre_guard_step(view),
        Color::Pre(B::BlockR) | Color::Pre(B::Median) | Color::Pre(B::Mid) | Color::Pre(B::Beacon) => {
            odd_block::pre_step(view)
        }
        Color::Pre(B::Matched) => seq_match::pre_matched_step(view),
        Color::Pre(other) => Err(violation(format!("unexpected pre_ color {}", other.name()))),
        Color::Base(base) => match base {
            B::Off => circle_formation::off_step(view),
            B::Convex => circle_formation::convex_step(view),
            B::OnSec => circle_formation::on_sec_step(view),
            B::Regular => Ok(MoveCommand::stay(own)),
            B::Biangular => biangular::step(view),
            B::Periodic => split::periodic_step(view),
            B::Leader => split::leader_step(view),
            B::Left => split::left_guard_step(view),
            B::Right => split::right_guard_step(view),
            B::Split => odd_block::split_robot_step(view),
            B::Padding => odd_block::padding_step(view),
            B::BlockL => odd_block::block_l_step(view),
            B::BlockR => odd_block::block_r_step(view),
            B::Median => odd_block::median_step(view),
            B::Mid => odd_block::mid_step(view),
            B::OutChord => odd_block::out_chord_step(view),
            B::InChord => odd_block::in_chord_step(view),
            B::Beacon => odd_block::beacon_step(view),
            B::Chord => small_circle::chord_step(view),
            B::ScL => small_circle::guard_step(view, true),
            B::ScR => small_circle::guard_step(view, false),
            B::ScLComplete => small_circle::guard_complete_step(view, true),
            B::ScRComplete => small_circle::guard_complete_step(view, false),
            B::ScMedian => small_circle::median_step(view),
            B::SmallCircle => small_circle::landed_step(view),
            B::SmallCircleComplete => small_circle::complete_step(view),
            B::SmallCircleWest => small_circle::west_side_step(view),
            B::SmallCircleEast => small_circle::east_side_step(view),
            B::East => slice::east_step(view),
            B::West => slice::west_step(view),
            B::SliceL => slice::guard_step(view, true),
            B::SliceR => slice::guard_step(view, false),
            B::SliceMedian => slice::median_step(view),
            B::Angle => slice::angle_step(view),
            B::AngleM => slice::angle_m_step(view),
            B::EastDiameter => slice::east_diameter_step(view),
            B::WestDiameter => slice::west_diameter_step(view),
            B::Unmatched => seq_match::unmatched_step(view),
            B::Matched => seq_match::matched_step(view),
        },
        Color::To(_) => unreachable!("handled above"),
    }
}

/// Coarse companion-color validation: combinations that cannot arise under
/// the protocol are flagged as invariant violations. Kept permissive across
/// phase boundaries (sectors may drift a stage apart).
fn check_companions(view: &View) -> Result<(), ProtocolError> {
    use BaseColor as B;
    let own = view.own.base();
    // Pre-circle colors can never coexist with post-classification colors.
    let pre_circle = [B::Off, B::Convex];
    let post_classify = [
        B::Periodic,
        B::Leader,
        B::Left,
        B::Right,
        B::Split,
        B::Padding,
        B::BlockL,
        B::BlockR,
        B::Median,
        B::Mid,
        B::InChord,
        B::OutChord,
        B::Beacon,
        B::Chord,
        B::ScL,
        B::ScR,
        B::ScMedian,
        B::SmallCircle,
        B::SmallCircleComplete,
        B::ScLComplete,
        B::ScRComplete,
        B::SmallCircleEast,
        B::SmallCircleWest,
        B::East,
        B::West,
        B::SliceL,
        B::SliceR,
        B::SliceMedian,
        B::Angle,
        B::AngleM,
        B::EastDiameter,
        B::WestDiameter,
        B::Unmatched,
        B::Matched,
        B::Biangular,
    ];
    let sees = |set: &[B]| view.others.iter().any(|o| set.contains(&o.color.base()));
    if pre_circle.contains(&own) && sees(&post_classify) {
        return Err(violation(format!(
            "{} robot sees post-classification colors",
            view.own.name()
        )));
    }
    if post_classify.contains(&own) && sees(&pre_circle) {
        return Err(violation(format!(
            "{} robot sees pre-circle colors",
            view.own.name()
        )));
    }
    // The biangular branch and the periodic branch are mutually exclusive.
    let periodic_branch = [B::Periodic, B::Leader, B::Split, B::Chord, B::SmallCircle, B::West, B::East];
    if own == B::Biangular && sees(&periodic_branch) {
        return Err(violation("biangular robot sees periodic-branch colors"));
    }
    if periodic_branch.contains(&own) && view.others.iter().any(|o| o.color.base() == B::Biangular) {
        return Err(violation("periodic-branch robot sees biangular color"));
    }
    Ok(())
}
