use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const DATA_FILE: &str = "records.ndjson";
const MANIFEST_FILE: &str = "manifest.json";
const LOCK_FILE: &str = ".lock";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StoreKind {
    Posts,
    Events,
}

/// Provenance of one ingested source file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceEntry {
    pub name: String,
    pub sha256: String,
    pub records: u64,
    pub skipped: u64,
}

impl SourceEntry {
    /// Hashes `path` and returns an entry with zero counts.
    pub fn for_file(path: &Path) -> Result<Self> {
        let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut hasher = Sha256::new();
        let mut buf = vec![0u8; 1 << 16];
        loop {
            let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
            if n == 0 {
                break;
            }
            hasher.update(&buf[..n]);
        }
        Ok(Self {
            name: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
            records: 0,
            skipped: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: StoreKind,
    pub record_count: u64,
    pub sources: Vec<SourceEntry>,
}

/// Append-only NDJSON record store: `records.ndjson` plus `manifest.json`.
///
/// One writer at a time is enforced through a lock file created with
/// `create_new`; readers never take the lock.
#[derive(Debug)]
pub struct RecordStore {
    root: PathBuf,
    manifest: Manifest,
}

struct WriteLock(PathBuf);

impl WriteLock {
    fn acquire(root: &Path) -> Result<Self> {
        let path = root.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(WriteLock(path)),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                Err(Error::StoreLocked(root.to_path_buf()))
            }
            Err(e) => Err(Error::io(path, e)),
        }
    }
}

impl Drop for WriteLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl RecordStore {
    /// Opens (creating if needed) the store at `root`.
    ///
    /// A data file that does not end in a newline is truncated back to its last
    /// complete record.
    pub fn open(root: impl Into<PathBuf>, kind: StoreKind) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        let manifest_path = root.join(MANIFEST_FILE);
        let manifest = if manifest_path.exists() {
            let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
            let manifest: Manifest = serde_json::from_str(&text)?;
            if manifest.kind != kind {
                return Err(Error::Store {
                    path: root,
                    message: format!("holds {:?}, not {kind:?}", manifest.kind),
                });
            }
            manifest
        } else {
            Manifest {
                kind,
                record_count: 0,
                sources: Vec::new(),
            }
        };
        let store = Self { root, manifest };
        store.repair_tail()?;
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn kind(&self) -> StoreKind {
        self.manifest.kind
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn data_path(&self) -> PathBuf {
        self.root.join(DATA_FILE)
    }

    fn repair_tail(&self) -> Result<()> {
        let path = self.data_path();
        let mut file = match OpenOptions::new().read(true).write(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(()),
            Err(e) => return Err(Error::io(path, e)),
        };
        let len = file.metadata().map_err(|e| Error::io(&path, e))?.len();
        if len == 0 {
            return Ok(());
        }
        // Walk backwards in blocks looking for the final newline.
        let mut end = len;
        let mut block = vec![0u8; 8192];
        let keep = loop {
            let start = end.saturating_sub(block.len() as u64);
            let chunk = &mut block[..(end - start) as usize];
            file.seek(SeekFrom::Start(start)).map_err(|e| Error::io(&path, e))?;
            file.read_exact(chunk).map_err(|e| Error::io(&path, e))?;
            if let Some(pos) = chunk.iter().rposition(|&b| b == b'\n') {
                break start + pos as u64 + 1;
            }
            if start == 0 {
                break 0;
            }
            end = start;
        };
        if keep != len {
            log::warn!(
                "{}: truncating {} bytes of incomplete trailing record",
                path.display(),
                len - keep
            );
            file.set_len(keep).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    /// Appends `records`, returning how many were written. `source`, when
    /// given, is recorded in the manifest with its record count filled in.
    /// An empty batch leaves the manifest untouched.
    pub fn append<T, I>(&mut self, records: I, source: Option<SourceEntry>) -> Result<u64>
    where
        T: Serialize,
        I: IntoIterator<Item = T>,
    {
        let _lock = WriteLock::acquire(&self.root)?;
        let path = self.data_path();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        let mut out = BufWriter::new(file);
        let mut count = 0u64;
        for record in records {
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n").map_err(|e| Error::io(&path, e))?;
            count += 1;
        }
        out.flush().map_err(|e| Error::io(&path, e))?;
        drop(out);

        if count > 0 {
            self.manifest.record_count += count;
            if let Some(mut entry) = source {
                entry.records = count;
                self.manifest.sources.push(entry);
            }
            self.write_manifest()?;
        }
        Ok(count)
    }

    /// Appends every record of `other` after this store's records.
    pub fn merge_from(&mut self, other: &RecordStore) -> Result<u64> {
        if other.kind() != self.kind() {
            return Err(Error::InvalidArgument("cannot merge stores of different kinds".into()));
        }
        let _lock = WriteLock::acquire(&self.root)?;
        let src = other.data_path();
        let dst = self.data_path();
        if src.exists() {
            let mut input = File::open(&src).map_err(|e| Error::io(&src, e))?;
            let mut output = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&dst)
                .map_err(|e| Error::io(&dst, e))?;
            io::copy(&mut input, &mut output).map_err(|e| Error::io(&dst, e))?;
        }
        self.manifest.record_count += other.manifest.record_count;
        self.manifest.sources.extend(other.manifest.sources.iter().cloned());
        self.write_manifest()?;
        Ok(other.manifest.record_count)
    }

    fn write_manifest(&self) -> Result<()> {
        let path = self.root.join(MANIFEST_FILE);
        let tmp = self.root.join(format!("{MANIFEST_FILE}.tmp"));
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }

    /// Streams the stored records in ingestion order.
    pub fn read<T: DeserializeOwned>(&self) -> Result<RecordIter<T>> {
        let path = self.data_path();
        let lines = match File::open(&path) {
            Ok(f) => Some(BufReader::new(f)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => None,
            Err(e) => return Err(Error::io(path, e)),
        };
        Ok(RecordIter {
            lines,
            path,
            buf: String::new(),
            _marker: PhantomData,
        })
    }
}

pub struct RecordIter<T> {
    lines: Option<BufReader<File>>,
    path: PathBuf,
    buf: String,
    _marker: PhantomData<T>,
}

impl<T: DeserializeOwned> Iterator for RecordIter<T> {
    type Item = Result<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let reader = self.lines.as_mut()?;
        self.buf.clear();
        match reader.read_line(&mut self.buf) {
            Ok(0) => None,
            Ok(_) => Some(serde_json::from_str(self.buf.trim_end()).map_err(Error::from)),
            Err(e) => Some(Err(Error::io(&self.path, e))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Event;
    use chrono::{TimeZone, Utc};

    fn event(n: u32) -> Event {
        Event {
            id: n.to_string(),
            event_type: "PushEvent".into(),
            created_at: Utc.with_ymd_and_hms(2014, 1, 1, 0, 0, n % 60).unwrap(),
            repository_language: Some("Ruby".into()),
        }
    }

    #[test]
    fn appends_are_additive() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        assert_eq!(store.append((0..12).map(event), None).unwrap(), 12);
        assert_eq!(store.manifest().record_count, 12);
        assert_eq!(store.append((0..5).map(event), None).unwrap(), 5);
        assert_eq!(store.manifest().record_count, 17);

        let reopened = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        assert_eq!(reopened.manifest().record_count, 17);
        let back: Vec<Event> = reopened.read().unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(back.len(), 17);
        assert_eq!(back[11], event(11));
        assert_eq!(back[12], event(0));
    }

    #[test]
    fn empty_append_leaves_manifest_alone() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        store.append((0..3).map(event), None).unwrap();
        let before = fs::read(dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(store.append(std::iter::empty::<Event>(), None).unwrap(), 0);
        assert_eq!(fs::read(dir.path().join(MANIFEST_FILE)).unwrap(), before);
    }

    #[test]
    fn second_writer_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        let _held = WriteLock::acquire(dir.path()).unwrap();
        match store.append((0..1).map(event), None) {
            Err(Error::StoreLocked(_)) => {}
            other => panic!("expected lock error, got {other:?}"),
        }
    }

    #[test]
    fn partial_tail_is_truncated_on_open() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        store.append((0..2).map(event), None).unwrap();
        let path = store.data_path();
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"id\":\"half").unwrap();
        drop(f);
        let store = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        let back: Vec<Event> = store.read().unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(back.len(), 2);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RecordStore::open(dir.path(), StoreKind::Events).unwrap();
        store.append((0..1).map(event), None).unwrap();
        assert!(RecordStore::open(dir.path(), StoreKind::Posts).is_err());
    }

    #[test]
    fn merge_concatenates_in_order() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut left = RecordStore::open(a.path(), StoreKind::Events).unwrap();
        let mut right = RecordStore::open(b.path(), StoreKind::Events).unwrap();
        left.append((0..2).map(event), None).unwrap();
        right.append((2..5).map(event), None).unwrap();
        left.merge_from(&right).unwrap();
        let ids: Vec<String> = left
            .read::<Event>()
            .unwrap()
            .map(|e| e.unwrap().id)
            .collect();
        assert_eq!(ids, ["0", "1", "2", "3", "4"]);
        assert_eq!(left.manifest().record_count, 5);
    }
}
