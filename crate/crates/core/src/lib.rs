//! Subsystem-level architecture recovery for C/C++ code bases.
//!
//! The crate extracts the file-level `#include` graph of a source tree,
//! assigns files to engine subsystems through a folder mapping table, lifts
//! the include graph to a subsystem dependency graph and derives coupling
//! metrics, DOT/SVG maps and cross-engine heatmaps from it.
//!
//! The modules follow the data flow:
//!
//! * [`scanner`] enumerates files and extracts `#include` directives.
//! * [`resolver`] maps written include paths to corpus files.
//! * [`mapping`] holds the subsystem taxonomy and the folder mapping table.
//! * [`model`] builds the file graph and lifts it to an [`ArchModel`].
//! * [`metrics`] computes degrees, coupling matrices, heatmaps and rankings.
//! * [`export`] renders DOT and SVG.
//! * [`pipeline`] runs the whole chain for one engine and aggregates engines.

pub mod error;
pub mod export;
pub mod formats;
pub mod mapping;
pub mod metrics;
pub mod model;
pub mod paths;
pub mod pipeline;
pub mod resolver;
pub mod scanner;

pub use error::{Error, Result};
pub use mapping::{MappingTable, SubsystemCode};
pub use model::{ArchModel, FileGraph};
pub use pipeline::{run_pipeline, AnalysisBundle, PipelineConfig};
