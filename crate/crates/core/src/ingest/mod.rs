//! Ingestion: Stack Exchange dump XML and generic JSON-lines event files,
//! normalized into `ActionEvent` / `BadgeAward` / `UserRecord` streams.
//!
//! Every input row is accounted for: rows emitted plus rows rejected equals
//! rows read, per file. Rejected rows carry the record ordinal and a reason
//! and never abort the pass; only document-level XML errors are fatal.

mod class_map;
mod xml;

pub use class_map::ClassMap;
pub use xml::{RowAttrs, XmlRowReader};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{ActionEvent, ActionType, BadgeAward, Tier, UserId, UserRecord};

/// Why a row was not emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// Structurally or semantically unparseable row.
    MalformedRow,
    /// UserId <= 0: community or deleted users cannot earn badges.
    CommunityUser,
    /// Row carries no UserId attribute at all.
    MissingUser,
    /// Row type outside the configured include-list (e.g. non-edit history).
    FilteredType,
    /// Badge Class value outside {1, 2, 3}.
    UnknownClass,
    /// Later (user, badge-name) duplicate folded into the earliest award.
    Duplicate,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::MalformedRow => "malformed_row",
            RejectReason::CommunityUser => "community_user",
            RejectReason::MissingUser => "missing_user",
            RejectReason::FilteredType => "filtered_type",
            RejectReason::UnknownClass => "unknown_class",
            RejectReason::Duplicate => "duplicate",
        }
    }
}

/// One rejected input row. `line` is the record ordinal within the file
/// (the physical line for JSONL input; the `<row/>` ordinal for XML).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reject {
    pub line: u64,
    pub reason: RejectReason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Outcome of one input row.
#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome<T> {
    Emit(T),
    Rejected(Reject),
}

/// Per-file accounting; `emitted + rejects == rows` always holds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestStats {
    pub rows: u64,
    pub emitted: u64,
    pub rejects_by_reason: BTreeMap<String, u64>,
}

impl IngestStats {
    pub fn rejects_total(&self) -> u64 {
        self.rejects_by_reason.values().sum()
    }

    pub fn record_emit(&mut self) {
        self.rows += 1;
        self.emitted += 1;
    }

    pub fn record_reject(&mut self, reason: RejectReason) {
        self.rows += 1;
        *self
            .rejects_by_reason
            .entry(reason.as_str().to_string())
            .or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &IngestStats) {
        self.rows += other.rows;
        self.emitted += other.emitted;
        for (k, v) in &other.rejects_by_reason {
            *self.rejects_by_reason.entry(k.clone()).or_insert(0) += v;
        }
    }
}

/// Parse a dump timestamp: ISO-8601 with or without fractional seconds or a
/// zone suffix. Dump timestamps carry no zone and are treated as UTC;
/// sub-second precision is truncated.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return DateTime::from_timestamp(dt.timestamp(), 0);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
            return DateTime::from_timestamp(naive.and_utc().timestamp(), 0);
        }
    }
    None
}

fn validate_ts(ts: DateTime<Utc>, now: DateTime<Utc>) -> bool {
    ts.timestamp() >= 0 && ts <= now
}

/// Options for the post-history pass: which PostHistoryTypeId values count
/// as edits and what they map to. Default is the standard 4/5/6
/// (title/body/tags); rollbacks and initial revisions are filtered.
#[derive(Debug, Clone)]
pub struct PostHistoryOptions {
    pub type_map: Vec<(u32, ActionType)>,
    pub now: DateTime<Utc>,
}

impl Default for PostHistoryOptions {
    fn default() -> Self {
        PostHistoryOptions {
            type_map: vec![
                (4, ActionType::EditTitle),
                (5, ActionType::EditBody),
                (6, ActionType::EditTags),
            ],
            now: Utc::now(),
        }
    }
}

/// Streaming parser over PostHistory.xml; yields one outcome per `<row/>`.
pub struct PostHistoryParser<R: BufRead> {
    rows: XmlRowReader<R>,
    opts: PostHistoryOptions,
}

impl<R: BufRead> PostHistoryParser<R> {
    pub fn new(source: R, opts: PostHistoryOptions) -> Self {
        PostHistoryParser {
            rows: XmlRowReader::new(source),
            opts,
        }
    }

    fn row_to_event(&self, attrs: &RowAttrs) -> std::result::Result<ActionEvent, (RejectReason, String)> {
        let type_id: u32 = attrs
            .get("PostHistoryTypeId")
            .ok_or((RejectReason::MalformedRow, "missing PostHistoryTypeId".into()))?
            .parse()
            .map_err(|_| (RejectReason::MalformedRow, "bad PostHistoryTypeId".into()))?;
        let action_type = match self.opts.type_map.iter().find(|(id, _)| *id == type_id) {
            Some((_, t)) => *t,
            None => return Err((RejectReason::FilteredType, format!("PostHistoryTypeId={type_id}"))),
        };

        let user_raw = attrs
            .get("UserId")
            .ok_or((RejectReason::MissingUser, "no UserId".into()))?;
        let user_id: i64 = user_raw
            .parse()
            .map_err(|_| (RejectReason::MalformedRow, format!("bad UserId {user_raw:?}")))?;
        if user_id <= 0 {
            return Err((RejectReason::CommunityUser, format!("UserId={user_id}")));
        }

        let ts_raw = attrs
            .get("CreationDate")
            .ok_or((RejectReason::MalformedRow, "missing CreationDate".into()))?;
        let ts = parse_timestamp(ts_raw)
            .filter(|&t| validate_ts(t, self.opts.now))
            .ok_or((RejectReason::MalformedRow, format!("bad CreationDate {ts_raw:?}")))?;

        let post_id = attrs.get("PostId").and_then(|v| v.parse().ok());
        // Edits always carry a comment length; an absent attribute means an
        // empty comment.
        let comment_len = Some(attrs.get("Comment").map_or(0, |c| c.chars().count() as u32));

        Ok(ActionEvent {
            user_id: UserId(user_id as u64),
            ts,
            action_type,
            post_id,
            comment_len,
            own_post: None,
        })
    }
}

impl<R: BufRead> Iterator for PostHistoryParser<R> {
    type Item = Result<RowOutcome<ActionEvent>>;

    fn next(&mut self) -> Option<Self::Item> {
        let (line, row) = match self.rows.next()? {
            Ok(pair) => pair,
            Err(fatal) => return Some(Err(fatal)),
        };
        let outcome = match row {
            Err(msg) => RowOutcome::Rejected(Reject {
                line,
                reason: RejectReason::MalformedRow,
                detail: Some(msg),
            }),
            Ok(attrs) => match self.row_to_event(&attrs) {
                Ok(ev) => RowOutcome::Emit(ev),
                Err((reason, detail)) => RowOutcome::Rejected(Reject {
                    line,
                    reason,
                    detail: Some(detail),
                }),
            },
        };
        Some(Ok(outcome))
    }
}

/// Drain a post-history stream, tallying stats and collecting rejects.
pub fn run_post_history<R: BufRead>(
    source: R,
    opts: PostHistoryOptions,
) -> Result<(Vec<ActionEvent>, IngestStats, Vec<Reject>)> {
    let mut events = Vec::new();
    let mut stats = IngestStats::default();
    let mut rejects = Vec::new();
    for item in PostHistoryParser::new(source, opts) {
        match item? {
            RowOutcome::Emit(ev) => {
                stats.record_emit();
                events.push(ev);
            }
            RowOutcome::Rejected(r) => {
                stats.record_reject(r.reason);
                rejects.push(r);
            }
        }
    }
    Ok((events, stats, rejects))
}

/// Parse Badges.xml. Tier codes follow the public dump convention
/// (Class 1 = Gold, 2 = Silver, 3 = Bronze); the action class comes from the
/// name -> class table (Other when unmapped). Duplicate (user, name) pairs
/// keep the earliest award; later copies count as `duplicate` rejects.
pub fn parse_badges<R: BufRead>(
    source: R,
    class_map: &ClassMap,
) -> Result<(Vec<BadgeAward>, IngestStats, Vec<Reject>)> {
    let now = Utc::now();
    let mut stats = IngestStats::default();
    let mut rejects = Vec::new();
    // (user, name) -> (first-seen order, earliest award)
    let mut dedup: BTreeMap<(UserId, String), (usize, BadgeAward)> = BTreeMap::new();
    let mut folded: u64 = 0;
    let mut order = 0usize;

    for item in XmlRowReader::new(source) {
        let (line, row) = item?;
        let attrs = match row {
            Ok(a) => a,
            Err(msg) => {
                stats.record_reject(RejectReason::MalformedRow);
                rejects.push(Reject {
                    line,
                    reason: RejectReason::MalformedRow,
                    detail: Some(msg),
                });
                continue;
            }
        };

        match badge_from_attrs(&attrs, class_map, now) {
            Ok(award) => {
                stats.record_emit();
                match dedup.entry((award.user_id, award.badge_name.clone())) {
                    Entry::Vacant(v) => {
                        v.insert((order, award));
                        order += 1;
                    }
                    Entry::Occupied(mut o) => {
                        folded += 1;
                        if award.ts < o.get().1.ts {
                            o.get_mut().1 = award;
                        }
                    }
                }
            }
            Err((reason, detail)) => {
                stats.record_reject(reason);
                rejects.push(Reject {
                    line,
                    reason,
                    detail: Some(detail),
                });
            }
        }
    }

    // Folded duplicates move from "emitted" to "rejected" so the per-file
    // accounting stays exact.
    stats.emitted -= folded;
    if folded > 0 {
        *stats
            .rejects_by_reason
            .entry(RejectReason::Duplicate.as_str().to_string())
            .or_insert(0) += folded;
    }

    let mut awards: Vec<(usize, BadgeAward)> = dedup.into_values().collect();
    awards.sort_by_key(|(ord, _)| *ord);
    Ok((
        awards.into_iter().map(|(_, a)| a).collect(),
        stats,
        rejects,
    ))
}

fn badge_from_attrs(
    attrs: &RowAttrs,
    class_map: &ClassMap,
    now: DateTime<Utc>,
) -> std::result::Result<BadgeAward, (RejectReason, String)> {
    let user_raw = attrs
        .get("UserId")
        .ok_or((RejectReason::MissingUser, "no UserId".into()))?;
    let user_id: i64 = user_raw
        .parse()
        .map_err(|_| (RejectReason::MalformedRow, format!("bad UserId {user_raw:?}")))?;
    if user_id <= 0 {
        return Err((RejectReason::CommunityUser, format!("UserId={user_id}")));
    }
    let name = attrs
        .get("Name")
        .ok_or((RejectReason::MalformedRow, "missing Name".into()))?
        .to_string();
    let class_raw = attrs
        .get("Class")
        .ok_or((RejectReason::MalformedRow, "missing Class".into()))?;
    let tier = match class_raw {
        "1" => Tier::Gold,
        "2" => Tier::Silver,
        "3" => Tier::Bronze,
        other => return Err((RejectReason::UnknownClass, format!("Class={other}"))),
    };
    let ts_raw = attrs
        .get("Date")
        .ok_or((RejectReason::MalformedRow, "missing Date".into()))?;
    let ts = parse_timestamp(ts_raw)
        .filter(|&t| validate_ts(t, now))
        .ok_or((RejectReason::MalformedRow, format!("bad Date {ts_raw:?}")))?;

    Ok(BadgeAward {
        user_id: UserId(user_id as u64),
        action_class: class_map.lookup(&name),
        badge_name: name,
        tier,
        ts,
    })
}

/// Parse Users.xml into `UserRecord`s (account metadata for user features).
pub fn parse_users<R: BufRead>(source: R) -> Result<(Vec<UserRecord>, IngestStats, Vec<Reject>)> {
    let now = Utc::now();
    let mut users = Vec::new();
    let mut stats = IngestStats::default();
    let mut rejects = Vec::new();
    for item in XmlRowReader::new(source) {
        let (line, row) = item?;
        let outcome: std::result::Result<UserRecord, (RejectReason, String)> = match row {
            Err(msg) => Err((RejectReason::MalformedRow, msg)),
            Ok(attrs) => (|| {
                let id_raw = attrs
                    .get("Id")
                    .ok_or((RejectReason::MissingUser, "no Id".to_string()))?;
                let id: i64 = id_raw
                    .parse()
                    .map_err(|_| (RejectReason::MalformedRow, format!("bad Id {id_raw:?}")))?;
                if id <= 0 {
                    return Err((RejectReason::CommunityUser, format!("Id={id}")));
                }
                let ts_raw = attrs
                    .get("CreationDate")
                    .ok_or((RejectReason::MalformedRow, "missing CreationDate".to_string()))?;
                let account_created = parse_timestamp(ts_raw)
                    .filter(|&t| validate_ts(t, now))
                    .ok_or((RejectReason::MalformedRow, format!("bad CreationDate {ts_raw:?}")))?;
                Ok(UserRecord {
                    user_id: UserId(id as u64),
                    account_created,
                    reputation: attrs.get("Reputation").and_then(|v| v.parse().ok()),
                })
            })(),
        };
        match outcome {
            Ok(u) => {
                stats.record_emit();
                users.push(u);
            }
            Err((reason, detail)) => {
                stats.record_reject(reason);
                rejects.push(Reject {
                    line,
                    reason,
                    detail: Some(detail),
                });
            }
        }
    }
    Ok((users, stats, rejects))
}

#[derive(Debug, Deserialize)]
struct GenericEventRecord {
    user_id: u64,
    ts: String,
    action_type: String,
    #[serde(default)]
    post_id: Option<u64>,
    #[serde(default)]
    comment_len: Option<u32>,
    #[serde(default)]
    own_post: Option<bool>,
}

fn action_type_from_str(s: &str) -> ActionType {
    match s {
        "EditTitle" => ActionType::EditTitle,
        "EditBody" => ActionType::EditBody,
        "EditTags" => ActionType::EditTags,
        "VoteUp" => ActionType::VoteUp,
        "VoteDown" => ActionType::VoteDown,
        "Post" => ActionType::Post,
        _ => ActionType::Other,
    }
}

/// Streaming parser over a generic JSON-lines event file. Unknown action
/// types map to `Other`; unparseable lines reject with their line number.
/// Blank lines are skipped without affecting accounting.
pub struct GenericEventParser<R: BufRead> {
    lines: std::io::Lines<R>,
    line_no: u64,
    now: DateTime<Utc>,
}

impl<R: BufRead> GenericEventParser<R> {
    pub fn new(source: R) -> Self {
        GenericEventParser {
            lines: source.lines(),
            line_no: 0,
            now: Utc::now(),
        }
    }
}

impl<R: BufRead> Iterator for GenericEventParser<R> {
    type Item = Result<RowOutcome<ActionEvent>>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::Io(e))),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let reject = |detail: String| {
                RowOutcome::Rejected(Reject {
                    line: self.line_no,
                    reason: RejectReason::MalformedRow,
                    detail: Some(detail),
                })
            };
            let rec: GenericEventRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => return Some(Ok(reject(e.to_string()))),
            };
            let Some(ts) = parse_timestamp(&rec.ts).filter(|&t| validate_ts(t, self.now)) else {
                return Some(Ok(reject(format!("bad ts {:?}", rec.ts))));
            };
            let action_type = action_type_from_str(&rec.action_type);
            let comment_len = if action_type.is_edit() {
                Some(rec.comment_len.unwrap_or(0))
            } else {
                rec.comment_len
            };
            return Some(Ok(RowOutcome::Emit(ActionEvent {
                user_id: UserId(rec.user_id),
                ts,
                action_type,
                post_id: rec.post_id,
                comment_len,
                own_post: rec.own_post,
            })));
        }
    }
}

/// Drain a generic-event stream, tallying stats and collecting rejects.
pub fn run_generic_events<R: BufRead>(
    source: R,
) -> Result<(Vec<ActionEvent>, IngestStats, Vec<Reject>)> {
    let mut events = Vec::new();
    let mut stats = IngestStats::default();
    let mut rejects = Vec::new();
    for item in GenericEventParser::new(source) {
        match item? {
            RowOutcome::Emit(ev) => {
                stats.record_emit();
                events.push(ev);
            }
            RowOutcome::Rejected(r) => {
                stats.record_reject(r.reason);
                rejects.push(r);
            }
        }
    }
    Ok((events, stats, rejects))
}

/// Canonical event order for normalized output: (user_id, ts), input order
/// on ties (stable).
pub fn sort_events(events: &mut [ActionEvent]) {
    events.sort_by(|a, b| (a.user_id, a.ts).cmp(&(b.user_id, b.ts)));
}

pub fn sort_awards(awards: &mut [BadgeAward]) {
    awards.sort_by(|a, b| {
        (a.user_id, a.ts, &a.badge_name).cmp(&(b.user_id, b.ts, &b.badge_name))
    });
}

pub fn write_jsonl<T: Serialize, W: Write>(items: &[T], mut w: W) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>, R: BufRead>(r: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ActionClass;

    const POST_HISTORY: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<posthistory>
  <row Id="1" PostHistoryTypeId="5" PostId="11" UserId="7" CreationDate="2012-03-01T10:00:00.000" Comment="fix typo" />
  <row Id="2" PostHistoryTypeId="2" PostId="11" UserId="7" CreationDate="2012-03-01T10:01:00.000" />
  <row Id="3" PostHistoryTypeId="4" PostId="12" UserId="-1" CreationDate="2012-03-02T10:00:00.000" />
  <row Id="4" PostHistoryTypeId="6" PostId="12" UserId="8" CreationDate="2012-03-02T11:00:00.000" Comment="" />
  <row Id="5" PostHistoryTypeId="5" PostId="13" UserId="9" CreationDate="not-a-date" />
</posthistory>"#;

    #[test]
    fn post_history_maps_types_and_accounts_exactly() {
        let (events, stats, rejects) =
            run_post_history(POST_HISTORY.as_bytes(), PostHistoryOptions::default()).unwrap();
        assert_eq!(stats.rows, 5);
        assert_eq!(stats.emitted, 2);
        assert_eq!(stats.emitted + stats.rejects_total(), stats.rows);
        assert_eq!(stats.rejects_by_reason["filtered_type"], 1);
        assert_eq!(stats.rejects_by_reason["community_user"], 1);
        assert_eq!(stats.rejects_by_reason["malformed_row"], 1);

        let ev = &events[0];
        assert_eq!(ev.user_id, UserId(7));
        assert_eq!(ev.action_type, ActionType::EditBody);
        assert_eq!(ev.comment_len, Some(8)); // "fix typo"
        assert_eq!(ev.ts, parse_timestamp("2012-03-01T10:00:00").unwrap());
        assert_eq!(events[1].action_type, ActionType::EditTags);
        assert_eq!(events[1].comment_len, Some(0));

        assert_eq!(rejects.len(), 3);
        assert_eq!(rejects[0].line, 2);
        assert_eq!(rejects[1].reason, RejectReason::CommunityUser);
    }

    #[test]
    fn post_history_include_list_is_configurable() {
        let opts = PostHistoryOptions {
            type_map: vec![(5, ActionType::EditBody)],
            now: Utc::now(),
        };
        let (events, stats, _) = run_post_history(POST_HISTORY.as_bytes(), opts).unwrap();
        assert_eq!(events.len(), 1);
        // Rows with type 2, 4 and 6 all fall outside the include-list.
        assert_eq!(stats.rejects_by_reason["filtered_type"], 3);
    }

    #[test]
    fn badges_tier_codes_and_class_map() {
        let xml = r#"<badges>
  <row Id="1" UserId="9" Name="Strunk &amp; White" Date="2013-04-02T09:00:00.000" Class="2" TagBased="False" />
  <row Id="2" UserId="9" Name="Electorate" Date="2014-01-01T00:00:00.000" Class="1" />
  <row Id="3" UserId="9" Name="Nice Answer" Date="2014-02-01T00:00:00.000" Class="3" />
  <row Id="4" UserId="9" Name="Nice Answer" Date="2014-03-01T00:00:00.000" Class="3" />
  <row Id="5" UserId="10" Name="Editor" Date="2014-02-01T00:00:00.000" Class="9" />
</badges>"#;
        let (awards, stats, rejects) =
            parse_badges(xml.as_bytes(), &ClassMap::stack_exchange_defaults()).unwrap();
        assert_eq!(stats.rows, 5);
        assert_eq!(awards.len(), 3);
        assert_eq!(stats.emitted, 3);
        assert_eq!(stats.rejects_by_reason["duplicate"], 1);
        assert_eq!(stats.rejects_by_reason["unknown_class"], 1);
        assert_eq!(stats.emitted + stats.rejects_total(), stats.rows);
        assert_eq!(rejects.len(), 1);

        let sw = &awards[0];
        assert_eq!((sw.tier, sw.action_class), (Tier::Silver, ActionClass::Edit));
        let el = &awards[1];
        assert_eq!((el.tier, el.action_class), (Tier::Gold, ActionClass::Vote));
        let na = &awards[2];
        assert_eq!((na.tier, na.action_class), (Tier::Bronze, ActionClass::Other));
        assert_eq!(na.ts, parse_timestamp("2014-02-01T00:00:00").unwrap());
    }

    #[test]
    fn badge_duplicates_keep_earliest_even_out_of_order() {
        let xml = r#"<badges>
  <row Id="1" UserId="9" Name="Editor" Date="2014-03-01T00:00:00" Class="3" />
  <row Id="2" UserId="9" Name="Editor" Date="2014-01-01T00:00:00" Class="3" />
</badges>"#;
        let (awards, stats, _) =
            parse_badges(xml.as_bytes(), &ClassMap::stack_exchange_defaults()).unwrap();
        assert_eq!(awards.len(), 1);
        assert_eq!(awards[0].ts, parse_timestamp("2014-01-01T00:00:00").unwrap());
        assert_eq!(stats.rejects_by_reason["duplicate"], 1);
    }

    #[test]
    fn generic_events_jsonl() {
        let input = concat!(
            r#"{"user_id":3,"ts":"2017-05-02T00:00:00Z","action_type":"VoteUp"}"#,
            "\n",
            "not json\n",
            r#"{"user_id":4,"ts":"2017-05-03T00:00:00Z","action_type":"Frobnicate"}"#,
            "\n",
        );
        let (events, stats, rejects) = run_generic_events(input.as_bytes()).unwrap();
        assert_eq!(stats.rows, 3);
        assert_eq!(events.len(), 2);
        assert_eq!(stats.rejects_total(), 1);
        assert_eq!(rejects[0].line, 2);
        assert_eq!(events[0].action_type, ActionType::VoteUp);
        assert_eq!(events[1].action_type, ActionType::Other);
    }

    #[test]
    fn generic_edit_gets_zero_comment_len() {
        let input = r#"{"user_id":5,"ts":"2017-05-02T01:02:03Z","action_type":"EditBody"}"#;
        let (events, _, _) = run_generic_events(input.as_bytes()).unwrap();
        assert_eq!(events[0].comment_len, Some(0));
    }

    #[test]
    fn users_xml_parses_account_metadata() {
        let xml = r#"<users>
  <row Id="7" Reputation="101" CreationDate="2011-01-01T00:00:00.000" DisplayName="x" />
  <row Id="-1" Reputation="1" CreationDate="2010-01-01T00:00:00.000" />
</users>"#;
        let (users, stats, _) = parse_users(xml.as_bytes()).unwrap();
        assert_eq!(users.len(), 1);
        assert_eq!(users[0].reputation, Some(101));
        assert_eq!(stats.rejects_by_reason["community_user"], 1);
    }

    #[test]
    fn reparse_is_byte_identical() {
        let parse_once = || {
            let (mut events, _, _) =
                run_post_history(POST_HISTORY.as_bytes(), PostHistoryOptions::default()).unwrap();
            sort_events(&mut events);
            let mut buf = Vec::new();
            write_jsonl(&events, &mut buf).unwrap();
            buf
        };
        assert_eq!(parse_once(), parse_once());
    }

    #[test]
    fn jsonl_round_trip() {
        let (mut events, _, _) =
            run_post_history(POST_HISTORY.as_bytes(), PostHistoryOptions::default()).unwrap();
        sort_events(&mut events);
        let mut buf = Vec::new();
        write_jsonl(&events, &mut buf).unwrap();
        let back: Vec<ActionEvent> = read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, events);
    }

    #[test]
    fn timestamp_formats() {
        let a = parse_timestamp("2012-03-01T10:00:00").unwrap();
        let b = parse_timestamp("2012-03-01T10:00:00.000").unwrap();
        let c = parse_timestamp("2012-03-01T10:00:00Z").unwrap();
        let d = parse_timestamp("2012-03-01T12:00:00+02:00").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, d);
        assert!(parse_timestamp("garbage").is_none());
    }

    proptest::proptest! {
        /// Exact accounting holds for arbitrary row mixes.
        #[test]
        fn accounting_is_exact(rows in proptest::collection::vec(0u8..6, 0..60)) {
            let mut xml = String::from("<posthistory>");
            for (i, kind) in rows.iter().enumerate() {
                let row = match kind {
                    0 => format!(r#"<row PostHistoryTypeId="5" UserId="{}" CreationDate="2012-03-01T10:00:00" Comment="c"/>"#, i + 1),
                    1 => r#"<row PostHistoryTypeId="2" UserId="3" CreationDate="2012-03-01T10:00:00"/>"#.to_string(),
                    2 => r#"<row PostHistoryTypeId="4" UserId="-1" CreationDate="2012-03-01T10:00:00"/>"#.to_string(),
                    3 => r#"<row PostHistoryTypeId="4" CreationDate="2012-03-01T10:00:00"/>"#.to_string(),
                    4 => r#"<row PostHistoryTypeId="6" UserId="4" CreationDate="bogus"/>"#.to_string(),
                    _ => r#"<row PostHistoryTypeId="oops" UserId="4" CreationDate="2012-03-01T10:00:00"/>"#.to_string(),
                };
                xml.push_str(&row);
            }
            xml.push_str("</posthistory>");
            let (events, stats, rejects) =
                run_post_history(xml.as_bytes(), PostHistoryOptions::default()).unwrap();
            proptest::prop_assert_eq!(stats.rows, rows.len() as u64);
            proptest::prop_assert_eq!(stats.emitted, events.len() as u64);
            proptest::prop_assert_eq!(stats.rejects_total(), rejects.len() as u64);
            proptest::prop_assert_eq!(stats.emitted + stats.rejects_total(), stats.rows);
        }
    }
}
