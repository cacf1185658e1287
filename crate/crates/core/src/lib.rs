//! Critical site percolation on the triangular lattice: sampling, arm events,
//! interface exploration, pivotal and importance measures, coupling and
//! exhaustive small-domain checks.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod arms;
pub mod cli;
pub mod config;
pub mod connectivity;
pub mod coupling;
pub mod error;
pub mod explore;
pub mod io;
pub mod lattice;
pub mod measures;
pub mod oracle;
pub mod stats;

pub use config::{Coloring, Configuration, RandomField};
pub use error::{Error, Result};
pub use lattice::{Annulus, Arc, Hex, Point, Quad, Region, SiteSet, Square};
