//! File IO, module resolution, and pipeline orchestration for the
//! register-map tool. The pure algorithmic pieces live in `regmap-core`.

pub mod jsonmap;
pub mod pipeline;
pub mod resolve;

pub use jsonmap::address_map_from_json;
pub use pipeline::{artifact_names, generate, run, RunConfig, RunError};
pub use resolve::{resolve_modules, ResolveStats};
