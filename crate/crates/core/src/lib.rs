//! Tracking-by-detection for temporally sparse image sequences.
//!
//! Persistent identities are kept in a memory bank of prototype embeddings,
//! matched frame to frame with the Hungarian algorithm on cosine similarity.
//! The crate also carries the evaluation side (HOTA, DetA, AssA, MOTA, IDF1
//! and per-leaf accuracy matrices), triplet sampling and the triplet margin
//! loss used to train embedders, and a seeded plant-growth simulator that
//! produces ground truth for end-to-end checks.

pub mod assignment;
pub mod embedding;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod sequence;
pub mod simulator;
pub mod tracker;

pub use assignment::{cost_from_similarity, gate_assignment, hungarian, Assignment, CostMatrix, SimilarityMatrix};
pub use embedding::{
    cosine_similarity, sample_triplets, triplet_margin_loss, Embedding, SamplingStrategy, TripletLoss, TripletSpec,
};
pub use error::{Error, Result};
pub use geometry::{crop_and_resize, iou, BBox, Raster};
pub use metrics::{evaluate, evaluate_many, match_frames, MatchTable, MetricReport};
pub use sequence::{GtAnnotation, LabeledBox, SequenceRecord};
pub use simulator::{baseline_iou_tracker, generate, ScenarioConfig, SimulatedSequence};
pub use tracker::{
    init_bank, run_sequence, step, Detection, FrameResult, MemoryBank, PrototypeMode, Track, TrackerParams,
};
