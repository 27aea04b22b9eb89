//! Nonvanishing of products of Schubert classes in the cohomology of
//! Grassmannians, decided three ways: Littlewood–Richardson expansion, the
//! recursive Horn inequalities, and a finite-field rank probe. Also produces
//! kernel filtrations, Harder–Narasimhan certificates for failing tuples,
//! saturation checks and point counts over tiny fields.

pub mod error;
pub mod golden;
pub mod horn;
pub mod lr;
pub mod parabolic;
pub mod pointcount;
pub mod probe;
pub mod schubert;

pub use error::{Error, Result};
pub use horn::{HornEngine, HornVerdict, Mode, NonvanishingTable};
pub use lr::{CohomClass, LrOracle};
pub use schubert::{horn_lhs, InequalityLhs, Partition, ProblemTuple, SchubertIndex};
