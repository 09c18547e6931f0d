//! Snapshot ingestion, POD truncation, K-fold partitioning and seeded
//! random-system generation.

mod gen;
mod kfold;
mod pod;
mod snapshot;

pub use gen::{gen_latent, gen_random_system, NormalStream};
pub use kfold::{kfold, FoldPlan};
pub use pod::{pod_truncate, PodModel, PodOptions};
pub use snapshot::{
    load_snapshots, read_snapshots_csv, read_snapshots_raw, write_snapshots, SnapshotData,
    SnapshotFormat, RAW_HEADER_LEN, RAW_MAGIC, RAW_VERSION,
};
