//! Exact and Monte Carlo machinery for degree-weighted random forests.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: labelled simple graphs on `{1..n}`, components, bridges, the
//!   bridge core `b(G)` and the contraction of core components to a forest.
//! * [`weights`] and [`forest`]: the weight vector, labelled forests and the
//!   mass measure `prod w_i^{d_F(i)}`, with exact enumeration of all forests.
//! * [`prufer`]: the Prüfer bijection, the weighted tree sampler and
//!   pendant-subtree statistics.
//! * [`identities`]: the flow between forest layers, ratio identities and
//!   bounds, the generating-function bound and the analytic constants.
//! * [`class_lab`]: explicit graph classes on small vertex sets, closure
//!   generation and exact connectivity checks.
//!
//! All probabilities are exact [`Rational`]s; floating point is used only for
//! the analytic constants and large-`n` trend values.

pub mod class_lab;
pub mod error;
pub mod exact;
pub mod forest;
pub mod graph;
pub mod identities;
pub mod limits;
pub mod prufer;
pub mod weights;

pub use error::{Error, Result};
pub use exact::Rational;
pub use forest::{enumerate_forests, mass, mass_distribution, Forest, MassDistribution};
pub use graph::{ComponentPartition, Edge, LabelledGraph};
pub use prufer::{PendantCensus, PrueferCode, TreeSampler};
pub use weights::WeightVector;
