pub mod abgroup;
pub mod category;
pub mod cli;
pub mod colocal;
pub mod derived;
pub mod error;
pub mod format;
pub mod fractions;
pub mod functor;
pub mod les;
pub mod models;
pub mod oracle;
pub mod report;
pub mod setting;
pub mod suites;
pub mod thick;

pub use error::{Error, Result};
