use std::io::BufRead;

use quick_xml::events::{BytesStart, Event as XmlEvent};
use quick_xml::Reader;

use super::{parse_timestamp, Post};
use crate::error::{Error, Result};

/// Counters kept while parsing a `Posts.xml` stream.
///
/// `rows_emitted + rows_skipped == rows_seen` holds at every point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PostStats {
    pub rows_seen: u64,
    pub rows_emitted: u64,
    pub rows_skipped: u64,
    /// Rows dropped because their `PostTypeId` is neither 1 nor 2. Included in
    /// `rows_skipped`.
    pub rows_filtered_type: u64,
}

/// Pull parser over a StackExchange `Posts.xml` dump.
pub struct PostsParser<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    stats: PostStats,
    done: bool,
}

/// Wraps `input` in a [`PostsParser`].
pub fn parse_posts_stream<R: BufRead>(input: R) -> PostsParser<R> {
    PostsParser::new(input)
}

impl<R: BufRead> PostsParser<R> {
    pub fn new(input: R) -> Self {
        let mut reader = Reader::from_reader(input);
        reader.config_mut().trim_text(true);
        Self {
            reader,
            buf: Vec::with_capacity(4096),
            stats: PostStats::default(),
            done: false,
        }
    }

    pub fn stats(&self) -> PostStats {
        self.stats
    }

    fn skip(&mut self, why: &str) {
        self.stats.rows_skipped += 1;
        log::debug!("skipping post row {}: {why}", self.stats.rows_seen);
    }
}

impl<R: BufRead> Iterator for PostsParser<R> {
    type Item = Result<Post>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(ev) => ev,
                Err(e) => {
                    self.done = true;
                    return Some(Err(Error::Xml {
                        offset: self.reader.error_position() as u64,
                        message: e.to_string(),
                    }));
                }
            };
            match event {
                XmlEvent::Eof => self.done = true,
                XmlEvent::Empty(ref e) | XmlEvent::Start(ref e) if e.name().as_ref() == b"row" => {
                    self.stats.rows_seen += 1;
                    match decode_row(e) {
                        Ok(post) if post.post_type == 1 || post.post_type == 2 => {
                            self.stats.rows_emitted += 1;
                            return Some(Ok(post));
                        }
                        Ok(post) => {
                            self.stats.rows_filtered_type += 1;
                            self.skip(&format!("post type {}", post.post_type));
                        }
                        Err(why) => self.skip(&why),
                    }
                }
                _ => {}
            }
        }
        None
    }
}

fn decode_row(e: &BytesStart<'_>) -> std::result::Result<Post, String> {
    let mut id = None;
    let mut post_type = None;
    let mut creation = None;
    let mut title = None;
    let mut tags = Vec::new();
    let mut body = String::new();

    for attr in e.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        let value = attr.unescape_value().map_err(|e| e.to_string())?;
        match attr.key.as_ref() {
            b"Id" => id = Some(value.parse::<u64>().map_err(|_| format!("bad Id {value:?}"))?),
            b"PostTypeId" => {
                post_type = Some(
                    value
                        .parse::<u8>()
                        .map_err(|_| format!("bad PostTypeId {value:?}"))?,
                )
            }
            b"CreationDate" => {
                creation = Some(
                    parse_timestamp(&value).ok_or_else(|| format!("bad CreationDate {value:?}"))?,
                )
            }
            b"Title" => title = Some(value.into_owned()),
            b"Tags" => tags = split_tags(&value)?,
            b"Body" => body = value.into_owned(),
            _ => {}
        }
    }

    let id = id.filter(|&id| id > 0).ok_or("missing Id")?;
    let creation_date = creation.ok_or("missing CreationDate")?;
    Ok(Post {
        id,
        post_type: post_type.ok_or("missing PostTypeId")?,
        creation_date,
        title,
        tags,
        body,
    })
}

/// Splits a decoded `Tags` value such as `<json><content-type>` into
/// lowercase tag names.
fn split_tags(raw: &str) -> std::result::Result<Vec<String>, String> {
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let inner = raw
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| format!("malformed Tags {raw:?}"))?;
    inner
        .split("><")
        .map(|tag| {
            if tag.is_empty() || tag.contains(['<', '>']) {
                Err(format!("malformed Tags {raw:?}"))
            } else {
                Ok(tag.to_lowercase())
            }
        })
        .collect()
}
