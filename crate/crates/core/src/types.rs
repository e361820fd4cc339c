//! Shared domain types: events, badge awards, users, badge specs and
//! the time window used by every per-user computation.

use std::fmt;

use chrono::{DateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

/// Opaque non-negative user identifier.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct UserId(pub u64);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The kind of a single user action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionType {
    EditTitle,
    EditBody,
    EditTags,
    VoteUp,
    VoteDown,
    Post,
    Other,
}

impl ActionType {
    /// The coarse class an action counts toward.
    pub fn class(self) -> ActionClass {
        match self {
            ActionType::EditTitle | ActionType::EditBody | ActionType::EditTags => {
                ActionClass::Edit
            }
            ActionType::VoteUp | ActionType::VoteDown => ActionClass::Vote,
            ActionType::Post | ActionType::Other => ActionClass::Other,
        }
    }

    pub fn is_edit(self) -> bool {
        self.class() == ActionClass::Edit
    }
}

/// Badge rank, ascending in importance.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Tier {
    Bronze,
    Silver,
    Gold,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tier::Bronze => "bronze",
            Tier::Silver => "silver",
            Tier::Gold => "gold",
        };
        f.write_str(s)
    }
}

/// The action family a badge rewards (and that profiles count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionClass {
    Edit,
    Vote,
    Other,
}

impl fmt::Display for ActionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ActionClass::Edit => "edit",
            ActionClass::Vote => "vote",
            ActionClass::Other => "other",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ActionClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "edit" => Ok(ActionClass::Edit),
            "vote" => Ok(ActionClass::Vote),
            "other" => Ok(ActionClass::Other),
            other => Err(format!("unknown action class {other:?}")),
        }
    }
}

/// One timestamped user action; the atomic input of the whole pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionEvent {
    pub user_id: UserId,
    pub ts: DateTime<Utc>,
    pub action_type: ActionType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post_id: Option<u64>,
    /// Characters in the edit comment; present (0 for empty) on every edit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment_len: Option<u32>,
    /// Whether an edit targets the editor's own post.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub own_post: Option<bool>,
}

impl ActionEvent {
    pub fn new(user_id: UserId, ts: DateTime<Utc>, action_type: ActionType) -> Self {
        ActionEvent {
            user_id,
            ts,
            action_type,
            post_id: None,
            comment_len: None,
            own_post: None,
        }
    }
}

/// A badge award; defines day zero and lifecycle segment boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadgeAward {
    pub user_id: UserId,
    pub badge_name: String,
    pub tier: Tier,
    pub action_class: ActionClass,
    pub ts: DateTime<Utc>,
}

/// Per-user account metadata (feeds the user feature block).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserRecord {
    pub user_id: UserId,
    pub account_created: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reputation: Option<i64>,
}

/// A badge definition: how many qualifying actions earn which tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadgeSpec {
    pub action_class: ActionClass,
    pub tier: Tier,
    pub threshold: u64,
}

impl BadgeSpec {
    pub fn new(action_class: ActionClass, tier: Tier, threshold: u64) -> Self {
        assert!(threshold > 0, "badge threshold must be positive");
        BadgeSpec {
            action_class,
            tier,
            threshold,
        }
    }

    /// Stack Exchange edit-badge thresholds: 1 / 80 / 500.
    pub fn edit_defaults() -> [BadgeSpec; 3] {
        [
            BadgeSpec::new(ActionClass::Edit, Tier::Bronze, 1),
            BadgeSpec::new(ActionClass::Edit, Tier::Silver, 80),
            BadgeSpec::new(ActionClass::Edit, Tier::Gold, 500),
        ]
    }

    /// Stack Exchange vote-badge thresholds: 1 / 300 / 600.
    pub fn vote_defaults() -> [BadgeSpec; 3] {
        [
            BadgeSpec::new(ActionClass::Vote, Tier::Bronze, 1),
            BadgeSpec::new(ActionClass::Vote, Tier::Silver, 300),
            BadgeSpec::new(ActionClass::Vote, Tier::Gold, 600),
        ]
    }
}

/// Activity group label, ascending by weekly-rate centroid.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum GroupLabel {
    Low,
    Medium,
    High,
}

impl GroupLabel {
    pub const ALL: [GroupLabel; 3] = [GroupLabel::Low, GroupLabel::Medium, GroupLabel::High];

    pub fn index(self) -> usize {
        match self {
            GroupLabel::Low => 0,
            GroupLabel::Medium => 1,
            GroupLabel::High => 2,
        }
    }

    pub fn from_index(i: usize) -> GroupLabel {
        Self::ALL[i]
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupLabel::Low => "low",
            GroupLabel::Medium => "medium",
            GroupLabel::High => "high",
        };
        f.write_str(s)
    }
}

/// Half-open UTC interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Self {
        TimeWindow { start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, ts: DateTime<Utc>) -> bool {
        ts >= self.start && ts < self.end
    }

    /// Day index of `ts` relative to the window start (floor division).
    pub fn day_index(&self, ts: DateTime<Utc>) -> i64 {
        (ts.timestamp() - self.start.timestamp()).div_euclid(86_400)
    }
}

/// Calendar day as days since the Unix epoch (UTC).
pub fn utc_day(ts: DateTime<Utc>) -> i64 {
    ts.timestamp().div_euclid(86_400)
}

/// Midnight UTC of an epoch-day index.
pub fn day_start(day: i64) -> DateTime<Utc> {
    Utc.timestamp_opt(day * 86_400, 0).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_classes() {
        assert_eq!(ActionType::EditTitle.class(), ActionClass::Edit);
        assert_eq!(ActionType::EditBody.class(), ActionClass::Edit);
        assert_eq!(ActionType::EditTags.class(), ActionClass::Edit);
        assert_eq!(ActionType::VoteUp.class(), ActionClass::Vote);
        assert_eq!(ActionType::VoteDown.class(), ActionClass::Vote);
        assert_eq!(ActionType::Post.class(), ActionClass::Other);
        assert_eq!(ActionType::Other.class(), ActionClass::Other);
    }

    #[test]
    fn tier_ordering() {
        assert!(Tier::Bronze < Tier::Silver);
        assert!(Tier::Silver < Tier::Gold);
    }

    #[test]
    fn group_label_ordering() {
        assert!(GroupLabel::Low < GroupLabel::Medium);
        assert!(GroupLabel::Medium < GroupLabel::High);
    }

    #[test]
    fn day_index_floors_negative_offsets() {
        let start = Utc.with_ymd_and_hms(2012, 3, 1, 0, 0, 0).unwrap();
        let w = TimeWindow::new(start, start + chrono::Duration::days(10));
        assert_eq!(w.day_index(start), 0);
        assert_eq!(w.day_index(start + chrono::Duration::hours(30)), 1);
        assert_eq!(w.day_index(start - chrono::Duration::seconds(1)), -1);
    }

    #[test]
    fn event_json_round_trip_is_stable() {
        let ts = Utc.with_ymd_and_hms(2017, 5, 2, 0, 0, 0).unwrap();
        let ev = ActionEvent::new(UserId(3), ts, ActionType::VoteUp);
        let json = serde_json::to_string(&ev).unwrap();
        assert_eq!(
            json,
            r#"{"user_id":3,"ts":"2017-05-02T00:00:00Z","action_type":"VoteUp"}"#
        );
        let back: ActionEvent = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ev);
    }
}
