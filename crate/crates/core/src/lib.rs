//! Pretty good fractional revival (PGFR) in continuous-time quantum walks.
//!
//! The crate decides, for a vertex pair of a path, a cycle, or a small
//! weighted graph, whether the walk `U(t) = e^{itA}` comes arbitrarily close
//! to a non-trivial fractional revival on that pair:
//!
//! * [`walks`] and [`cospectrality`] detect fractional cospectrality, by
//!   exact walk counts and by restricted eigenprojections;
//! * [`decide`] settles the number-theoretic condition exactly for spectra of
//!   the form `2cos(2πa/N)` through [`cyclo`] and [`lattice`];
//! * [`classify`] holds the closed-form answers for paths and cycles and the
//!   harness that compares them with the exact decision;
//! * [`dynamics`] simulates the walk and searches for near-revival times.

pub mod classify;
pub mod cospectrality;
pub mod cyclo;
pub mod decide;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod jacobi;
pub mod lattice;
pub mod spectra;
pub mod walks;

pub use cospectrality::{
    revival_target, strong_fractional_cospectrality, CospectralityCertificate,
    CospectralityOutcome, Group, RevivalTarget,
};
pub use decide::{decide_pair, pgfr_decide, PgfrStatus, PgfrVerdict, RelationLattice};
pub use error::{Error, Result};
pub use graph::{Family, Graph, GraphSpec};
pub use spectra::{
    cycle_spectrum, numeric_spectrum, path_spectrum, spectrum, Eigenvalue, ExactCosine,
    SpectralDecomposition,
};
pub use walks::{path_walk_closed_form, walk_counts, walk_cospectrality, WalkTable};
