//! Flag complexes, the groups built from them, exact and budgeted word
//! problems, taut loop spectra and the interval arithmetic that separates
//! their quasi-isometry classes.

pub mod cayley;
pub mod complexes;
pub mod davis;
pub mod error;
pub mod graph;
pub mod normal_forms;
pub mod oracle;
pub mod presentation;
pub mod schedule;
pub mod snf;
pub mod spectrum;
pub mod word;
pub mod word_engine;

pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use presentation::GroupPresentation;
pub use word::{Letter, Word};
