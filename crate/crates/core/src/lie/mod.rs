//! Root data, Weyl groups, invariant metrics and the transfer maps built on
//! them.

pub mod group;
pub mod metric;
pub mod weight;

pub use group::{build_group, CompactGroup, GroupKind, WeylElement};
pub use metric::InvariantMetric;
pub use weight::HalfWeight;

use std::sync::Arc;

/// Group plus its default metric (trace form, identity form on tori).
pub fn default_metric(kind: GroupKind) -> crate::error::Result<InvariantMetric> {
    Ok(InvariantMetric::trace(Arc::new(build_group(kind)?)))
}
