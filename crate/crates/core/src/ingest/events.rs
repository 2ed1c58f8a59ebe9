use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use serde_json::Value;

use super::{parse_timestamp, Event};
use crate::error::{Error, Result};

/// Probed in order; the first non-null string wins.
const LANGUAGE_PATHS: [&[&str]; 3] = [
    &["repository", "language"],
    &["repo", "language"],
    &["payload", "repository", "language"],
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventStats {
    /// Non-blank lines read.
    pub lines_seen: u64,
    pub lines_emitted: u64,
    pub lines_skipped: u64,
}

/// Pull parser over newline-delimited GitHub event JSON.
pub struct EventsParser<R: BufRead> {
    input: R,
    name: String,
    compressed: bool,
    line: Vec<u8>,
    stats: EventStats,
    done: bool,
}

/// Parses NDJSON events from `input`. With `decompress`, the bytes are treated
/// as (possibly multi-member) gzip. `name` is used in fatal error messages.
pub fn parse_events_stream<'a, R: Read + 'a>(
    input: R,
    decompress: bool,
    name: impl Into<String>,
) -> EventsParser<Box<dyn BufRead + 'a>> {
    let reader: Box<dyn BufRead + 'a> = if decompress {
        Box::new(BufReader::new(MultiGzDecoder::new(input)))
    } else {
        Box::new(BufReader::new(input))
    };
    EventsParser {
        input: reader,
        name: name.into(),
        compressed: decompress,
        line: Vec::with_capacity(2048),
        stats: EventStats::default(),
        done: false,
    }
}

/// Opens an events file, decompressing when the name ends in `.gz`.
pub fn open_events_file(path: &Path) -> Result<EventsParser<Box<dyn BufRead>>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let gz = path.extension().is_some_and(|ext| ext == "gz");
    Ok(parse_events_stream(file, gz, path.display().to_string()))
}

impl<R: BufRead> EventsParser<R> {
    pub fn stats(&self) -> EventStats {
        self.stats
    }
}

impl<R: BufRead> Iterator for EventsParser<R> {
    type Item = Result<Event>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.line.clear();
            match self.input.read_until(b'\n', &mut self.line) {
                Ok(0) => self.done = true,
                Ok(_) => {
                    if self.line.iter().all(u8::is_ascii_whitespace) {
                        continue;
                    }
                    self.stats.lines_seen += 1;
                    match decode_event(&self.line) {
                        Some(event) => {
                            self.stats.lines_emitted += 1;
                            return Some(Ok(event));
                        }
                        None => {
                            self.stats.lines_skipped += 1;
                            log::debug!("{}: skipping line {}", self.name, self.stats.lines_seen);
                        }
                    }
                }
                Err(e) => {
                    self.done = true;
                    let err = if self.compressed {
                        Error::Gzip {
                            name: self.name.clone(),
                            source: e,
                        }
                    } else {
                        Error::io(&self.name, e)
                    };
                    return Some(Err(err));
                }
            }
        }
        None
    }
}

fn decode_event(line: &[u8]) -> Option<Event> {
    let value: Value = serde_json::from_slice(line).ok()?;
    let event_type = value.get("type")?.as_str()?.trim();
    if event_type.is_empty() {
        return None;
    }
    let created_at = parse_timestamp(value.get("created_at")?.as_str()?)?;
    let id = match value.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => String::new(),
    };
    Some(Event {
        id,
        event_type: event_type.to_owned(),
        created_at,
        repository_language: repository_language(&value),
    })
}

fn repository_language(value: &Value) -> Option<String> {
    LANGUAGE_PATHS.iter().find_map(|path| {
        let found = path.iter().try_fold(value, |v, key| v.get(key))?;
        found
            .as_str()
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use flate2::write::GzEncoder;
    use flate2::Compression;
    use std::io::Write;

    fn parse(text: &str) -> (Vec<Result<Event>>, EventStats) {
        let mut parser = parse_events_stream(text.as_bytes(), false, "test");
        let events: Vec<_> = parser.by_ref().collect();
        (events, parser.stats())
    }

    #[test]
    fn extracts_repository_language() {
        let (events, _) = parse(
            r#"{"type":"PushEvent","created_at":"2014-01-03T10:00:00Z","repository":{"language":"Ruby"}}"#,
        );
        let event = events[0].as_ref().unwrap();
        assert_eq!(event.event_type, "PushEvent");
        assert_eq!(event.repository_language.as_deref(), Some("Ruby"));
    }

    #[test]
    fn absent_language_is_none() {
        let (events, _) = parse(r#"{"type":"FollowEvent","created_at":"2013-02-01T00:00:00Z"}"#);
        assert_eq!(events[0].as_ref().unwrap().repository_language, None);
    }

    #[test]
    fn probes_paths_in_order() {
        let line = r#"{"type":"X","created_at":"2013-02-01T00:00:00Z","repository":{"language":null},"repo":{"language":""},"payload":{"repository":{"language":"Go"}}}"#;
        let (events, _) = parse(line);
        assert_eq!(events[0].as_ref().unwrap().repository_language.as_deref(), Some("Go"));
    }

    #[test]
    fn malformed_lines_are_counted() {
        let text = "{\"type\":\"PushEvent\",\"created_at\":\"2014-01-03T10:00:00Z\"}\nnot json\n\n{\"created_at\":\"2014-01-03T10:00:00Z\"}\n{\"type\":\"PushEvent\",\"created_at\":\"2014-01-03T10:00:00Z\",\"id\":12}\n";
        let (events, stats) = parse(text);
        assert_eq!(events.len(), 2);
        assert_eq!(events[1].as_ref().unwrap().id, "12");
        assert_eq!(stats, EventStats { lines_seen: 4, lines_emitted: 2, lines_skipped: 2 });
    }

    #[test]
    fn truncated_gzip_is_fatal_and_named() {
        let mut enc = GzEncoder::new(Vec::new(), Compression::default());
        for _ in 0..200 {
            enc.write_all(b"{\"type\":\"PushEvent\",\"created_at\":\"2014-01-03T10:00:00Z\"}\n")
                .unwrap();
        }
        let bytes = enc.finish().unwrap();
        let truncated = &bytes[..bytes.len() / 2];
        let results: Vec<_> = parse_events_stream(truncated, true, "2014-01-03-10.json.gz").collect();
        match results.last().unwrap() {
            Err(err @ Error::Gzip { .. }) => assert!(err.to_string().contains("2014-01-03-10.json.gz")),
            other => panic!("expected gzip error, got {other:?}"),
        }
    }
}
