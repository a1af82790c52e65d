//! Projector commutation graphs ("powers"), Born-rule intensive
//! valuations (PSAs), and the intensive/effective relation classifier
//! for bipartite states.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, partial traces, eigensolvers.
//! * [`powers`]: power graphs and their contexts (maximal cliques).
//! * [`psa`]: potentia assignments, reconstruction, binary valuations.
//! * [`relations`]: intensive and effective relations, classification.
//! * [`sampler`]: seeded Monte Carlo realisation of effective valuations.
//! * [`scenario`], [`report`], [`cli`]: file formats and the command-line
//!   pipelines.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod linalg;
pub mod powers;
pub mod psa;
pub mod relations;
pub mod report;
pub mod sampler;
pub mod scenario;

pub use config::Tolerances;
pub use error::{Error, Result};
