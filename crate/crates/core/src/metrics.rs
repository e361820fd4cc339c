//! Per-user activity profiles: work consistency (active days per week),
//! work intensity (actions per active day) and the weekly rate p = C * I.
//!
//! Week bins are 7-day spans anchored at the user's first action inside the
//! window, not calendar weeks. Zero-activity interior weeks count toward the
//! consistency median; trailing silence after the last action does not add
//! weeks. Medians use the lower-median convention for even counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::types::{ActionClass, ActionEvent, TimeWindow, UserId};

/// Per-user, per-window activity profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityProfile {
    pub user_id: UserId,
    pub window: TimeWindow,
    /// Median active days per week over the active span (0..=7).
    pub consistency: f64,
    /// Median actions per active day; >= 1 whenever any action exists.
    pub intensity: f64,
    /// Weekly rate p = C * I, actions per week.
    pub weekly_rate: f64,
    /// Active-day count per week bin (dense, one entry per week).
    pub weekly_consistency: Vec<u32>,
    /// Mean actions per active day, per week bin; 0.0 marks inactive weeks,
    /// which are excluded from any intensity statistic.
    pub weekly_intensity: Vec<f64>,
    pub n_weeks: u32,
}

impl ActivityProfile {
    /// Profile of a user with no qualifying events in the window.
    pub fn empty(user_id: UserId, window: TimeWindow) -> Self {
        ActivityProfile {
            user_id,
            window,
            consistency: 0.0,
            intensity: 0.0,
            weekly_rate: 0.0,
            weekly_consistency: Vec::new(),
            weekly_intensity: Vec::new(),
            n_weeks: 0,
        }
    }

    pub fn is_active(&self) -> bool {
        self.n_weeks > 0
    }
}

/// Lower median: the element at index (n-1)/2 of the sorted sequence.
/// For even counts this is the lower of the two middle elements.
pub fn lower_median(values: &mut [u64]) -> u64 {
    assert!(!values.is_empty());
    values.sort_unstable();
    values[(values.len() - 1) / 2]
}

/// Daily action counts for one user inside a window, keyed by day index
/// (floor((ts - window.start) / 86400 s)). Only events of `class` count;
/// absent days mean zero.
pub fn daily_series(
    events: &[ActionEvent],
    user: UserId,
    window: TimeWindow,
    class: ActionClass,
) -> BTreeMap<i64, u32> {
    let mut counts = BTreeMap::new();
    if window.is_empty() {
        return counts;
    }
    for ev in events {
        if ev.user_id == user && ev.action_type.class() == class && window.contains(ev.ts) {
            *counts.entry(window.day_index(ev.ts)).or_insert(0) += 1;
        }
    }
    counts
}

/// Compute a user's activity profile over a window.
///
/// A user with no qualifying events yields the empty profile
/// (C = 0, I = 0, p = 0, n_weeks = 0).
pub fn profile(
    events: &[ActionEvent],
    user: UserId,
    window: TimeWindow,
    class: ActionClass,
) -> ActivityProfile {
    let daily = daily_series(events, user, window, class);
    profile_from_daily(user, window, &daily)
}

/// Profile from an already-computed daily series (day index -> count).
pub fn profile_from_daily(
    user: UserId,
    window: TimeWindow,
    daily: &BTreeMap<i64, u32>,
) -> ActivityProfile {
    if daily.is_empty() {
        return ActivityProfile::empty(user, window);
    }

    let first_day = *daily.keys().next().unwrap();
    let last_day = *daily.keys().next_back().unwrap();
    // Weeks are anchored at the first active day; the active span runs
    // through the week containing the last action.
    let n_weeks = ((last_day - first_day) / 7 + 1) as usize;

    let mut weekly_active_days = vec![0u32; n_weeks];
    let mut weekly_actions = vec![0u64; n_weeks];
    let mut active_day_counts: Vec<u64> = Vec::with_capacity(daily.len());

    for (&day, &count) in daily {
        debug_assert!(count > 0);
        let week = ((day - first_day) / 7) as usize;
        weekly_active_days[week] += 1;
        weekly_actions[week] += u64::from(count);
        active_day_counts.push(u64::from(count));
    }

    let weekly_intensity: Vec<f64> = weekly_active_days
        .iter()
        .zip(&weekly_actions)
        .map(|(&days, &actions)| {
            if days == 0 {
                0.0
            } else {
                actions as f64 / f64::from(days)
            }
        })
        .collect();

    let mut weeks_u64: Vec<u64> = weekly_active_days.iter().map(|&d| u64::from(d)).collect();
    let consistency = lower_median(&mut weeks_u64) as f64;
    let intensity = lower_median(&mut active_day_counts) as f64;

    ActivityProfile {
        user_id: user,
        window,
        consistency,
        intensity,
        weekly_rate: consistency * intensity,
        weekly_consistency: weekly_active_days,
        weekly_intensity,
        n_weeks: n_weeks as u32,
    }
}

/// Profiles for a set of users in parallel; events must be sorted by
/// (user_id, ts) so each user's slice is contiguous.
pub fn profile_all(
    events: &[ActionEvent],
    window: TimeWindow,
    class: ActionClass,
) -> Vec<ActivityProfile> {
    use rayon::prelude::*;
    let slices = per_user_slices(events);
    slices
        .into_par_iter()
        .map(|(user, slice)| profile(slice, user, window, class))
        .collect()
}

/// Split an event stream sorted by (user_id, ts) into per-user slices.
pub fn per_user_slices(events: &[ActionEvent]) -> Vec<(UserId, &[ActionEvent])> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < events.len() {
        let user = events[start].user_id;
        let mut end = start + 1;
        while end < events.len() && events[end].user_id == user {
            end += 1;
        }
        out.push((user, &events[start..end]));
        start = end;
    }
    out
}

/// CSV header for profile exports.
pub const PROFILE_CSV_HEADER: &str =
    "user_id,window_start,window_end,consistency,intensity,weekly_rate,n_weeks";

pub fn profile_csv_row(p: &ActivityProfile) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        p.user_id,
        p.window.start.format("%Y-%m-%dT%H:%M:%SZ"),
        p.window.end.format("%Y-%m-%dT%H:%M:%SZ"),
        p.consistency,
        p.intensity,
        p.weekly_rate,
        p.n_weeks
    )
}
