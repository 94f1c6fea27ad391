//! File formats: source instances and witnesses, and the JSON documents the
//! command line reads and writes.

pub mod doc;
pub mod results;
pub mod source;

pub use serde_json::Value as JsonValue;

pub use doc::{load_instance, store_instance, to_canonical, InstanceDocument, ReductionInfo};
pub use source::{parse_source, parse_witness, Source, SourceKind};
