//! Most-reliable community search over dynamic weighted graphs.
//!
//! A dynamic network is a sequence of weighted snapshots over one vertex
//! universe. A `(θ,k)`-core reliable community is a fixed edge set that
//! induces a connected k-core with every edge weight `≥ θ` in each snapshot
//! of a continuous time interval. Communities are ranked by a weighted
//! harmonic mean of their normalized size and duration.
//!
//! Two exact search strategies are provided:
//!
//! * [`eef::eef_query`] scans the snapshots online, tracking how long each
//!   eligible edge has lasted, and prunes with edge-count bounds.
//! * [`wcf_search::wcf_query`] answers from a [`wcf::WcfIndex`] (a per-`(k,t)`
//!   forest of θ-thresholds) with a two-layer dynamic program over durations.
//!
//! The index can be maintained under edge updates ([`maint`]) and
//! deduplicated with virtual nodes ([`compress`]). [`oracle`] holds a
//! brute-force reference used by tests and the `oracle-check` command.

mod codec;
pub mod community;
pub mod compress;
pub mod coredec;
pub mod dyngraph;
pub mod eef;
pub mod error;
pub mod maint;
pub mod metrics;
pub mod oracle;
pub mod reliability;
pub mod wcf;
pub mod wcf_search;

pub mod fixtures;

pub use community::{Community, Subgraph};
pub use dyngraph::{DynamicNetwork, Edge, GraphInstance, QueryParams, Timestamp, VertexId};
pub use error::{Error, Result};
pub use reliability::ReliabilityContext;
pub use wcf::{ThetaGrid, WcfIndex};
