//! Nash-equilibrium social-distancing strategies on networks of social sites.
//!
//! Individuals choose sites to visit so as to minimize expected contacts
//! `π(x, y) = xᵀÃy`. The crate finds supports (maximal independent sets and
//! maximal r-regular induced subnetworks), builds the closed-form
//! equilibria on them, verifies Nash conditions, classifies equilibria as
//! strongly rigid, weakly rigid or fragile, and cross-checks everything
//! against exhaustive enumeration and replicator dynamics.

pub mod analysis;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod par;
pub mod search;
pub mod stability;

pub use error::{Error, Result};
pub use graph::{ContactMatrix, Network, Scheme};
pub use equilibrium::{EquilibriumCertificate, Strategy};
pub use search::RegularSupport;
pub use stability::{Classification, Method, StabilityReport};
