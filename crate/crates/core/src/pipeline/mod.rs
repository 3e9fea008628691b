//! Plan sampling, the batch runner and manifest replay.

mod batch;
mod manifest;
mod plan;
mod scheme;

pub use batch::{
    assign_tracks, output_name, read_listing, render_plan, replay, resolve_source, run_batch, BatchConfig,
    BatchOutcome, BatchSummary, ListingEntry, IMAGE_DIR, MANIFEST_FILE,
};
pub use manifest::{sha256_hex, Label, Manifest, ManifestHeader, ManifestRecord, RunInfo, MANIFEST_VERSION};
pub use plan::{image_rng, sample_level, sample_plan, step_rng, DistortionPlan};
pub use scheme::{challenge_pool, CountRule, LevelScheme, SeverityRule};

use thiserror::Error;

use crate::distortions::DistortionError;
use crate::image::ImageError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("listing: {0}")]
    Listing(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

impl PipelineError {
    pub(crate) fn io(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| PipelineError::Io { path, source }
    }
}
