pub mod distortions;
pub mod fusion;
pub mod image;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod synth;
