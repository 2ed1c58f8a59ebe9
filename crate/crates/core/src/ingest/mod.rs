//! Streaming ingestion of StackExchange and GitHub dumps.
//!
//! Parsers are pull iterators over any [`std::io::BufRead`] source. Per-record
//! problems are skipped and counted; only container-level corruption (broken
//! XML structure, truncated gzip) is fatal.

mod events;
mod posts;
mod store;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

pub use events::{open_events_file, parse_events_stream, EventStats, EventsParser};
pub use posts::{parse_posts_stream, PostStats, PostsParser};
pub use store::{Manifest, RecordStore, SourceEntry, StoreKind};

/// One StackExchange question or answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub id: u64,
    /// 1 = question, 2 = answer.
    pub post_type: u8,
    pub creation_date: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub tags: Vec<String>,
    pub body: String,
}

impl Post {
    pub fn is_question(&self) -> bool {
        self.post_type == 1
    }
}

/// One GitHub timeline event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub id: String,
    pub event_type: String,
    pub created_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repository_language: Option<String>,
}

/// Anything with a UTC creation timestamp.
pub trait Timestamped {
    fn timestamp(&self) -> DateTime<Utc>;
}

impl Timestamped for Post {
    fn timestamp(&self) -> DateTime<Utc> {
        self.creation_date
    }
}

impl Timestamped for Event {
    fn timestamp(&self) -> DateTime<Utc> {
        self.created_at
    }
}

/// Parses a timestamp, treating zone-less values as UTC.
///
/// Accepts RFC 3339 (`2014-01-03T10:00:00Z`, `...-08:00`), the zone-less
/// StackExchange form (`2009-01-25T15:25:00.000`), and the slash form found in
/// early GH Archive files (`2012/03/10 22:00:00 -0800`).
pub fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let raw = raw.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt.with_timezone(&Utc));
    }
    if let Ok(dt) = DateTime::parse_from_str(raw, "%Y/%m/%d %H:%M:%S %z") {
        return Some(dt.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(naive.and_utc());
        }
    }
    None
}
