//! Technology trend mining over StackExchange post dumps and GitHub event
//! archives.
//!
//! The crate is organised as a pipeline of small, independently usable
//! stages:
//!
//! - [`ingest`] stream-parses `Posts.xml` dumps and GH Archive NDJSON into an
//!   append-only record store.
//! - [`textprep`] tokenizes, removes stop words, applies the Porter2 (English
//!   Snowball) stemmer and prunes vocabularies by frequency.
//! - [`taxonomy`] loads the keyword taxonomy and classifies posts and events
//!   into technology sets.
//! - [`series`] buckets classified records into monthly, quarterly or yearly
//!   count series.
//! - [`forecast`] fits additive-error exponential smoothing models, selects
//!   among them by AICc and produces fixed-origin or rolling forecasts.
//! - [`evaluate`] computes relative errors, MRE and MdRE and renders reports.
//! - [`graph`] builds yearly co-occurrence graphs and writes GDF.
//! - [`pipeline`] ties the stages together behind a single [`pipeline::Config`].
//!
//! Runnable walk-throughs for each stage live in the crate's `examples/`
//! directory.

pub mod error;
pub mod evaluate;
pub mod forecast;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod series;
pub mod taxonomy;
pub mod textprep;

pub use error::{Error, Result};
