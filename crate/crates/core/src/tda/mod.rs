//! Phase-space reconstruction and persistent homology of the observable.

mod diagram;
mod distance;
mod embed;
mod rips;

pub use diagram::{PersistenceDiagram, PersistencePair};
pub use distance::{bottleneck, quality_index, wasserstein1, DiagramDistanceReport};
pub use embed::{
    delay_embed, euclidean, subsample, subsample_indices, PointCloud, SubsampleMethod,
};
pub use rips::{default_max_scale, rips_persistence_h1};
