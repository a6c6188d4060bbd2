pub mod cli;
pub mod complex;
pub mod corpus;
pub mod demo;
pub mod error;
pub mod groupring;
pub mod homology;
pub mod lattice;
pub mod morse;
pub mod novseries;
pub mod rank;
pub mod twist;

pub use error::{NovikovError, Result};
