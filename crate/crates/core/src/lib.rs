//! Streaming butterfly counting over bipartite edge streams that contain
//! duplicate edges.
//!
//! Every estimator keeps at most `M` distinct edges and derives all of its
//! randomness from per-edge hashes, so repeated occurrences of an edge leave
//! its state untouched.

pub mod distinct;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod harness;
pub mod hashing;
pub mod oracle;
pub mod stream;

pub use distinct::{kmv_estimate, FmState};
pub use error::{ConfigError, EdgeError, HarnessError, OracleError, StreamError};
pub use estimators::{BucketSampler, ExactCounter, OpCounters, PqRule, PqSampler, StreamEstimator};
pub use graph::{exact_butterfly_count, Edge, SampledSubgraph, Side, VertexId};
pub use harness::{
    build_estimator, run_experiment, run_trial, Algorithm, EstimateSnapshot, ExperimentConfig,
    ExperimentOutcome, TrialResult,
};
pub use hashing::{HashConfig, Priority, MIN_SAMPLE_SIZE};
pub use oracle::{butterfly_pair_stats, ButterflyPairStats};
pub use stream::{inject_duplicates, parse_stream, StreamSource, StreamSpec};
