//! Sperner labelings on subdivisions of the standard simplex, the exact
//! mod-2 machinery behind them (census, cochain identities, degrees and
//! cohomology ranks), and a Brouwer fixed-point solver driven by
//! Sperner-labeled path following.
//!
//! All proof-verification paths run over exact rational coordinates and
//! F2 coefficients; only the solver's map evaluations use `f64`.

pub mod cochain;
pub mod complex;
pub mod f2;
pub mod labeling;
pub mod pathfollow;
pub mod simplex;
pub mod solver;
pub mod subdivision;
pub mod verify;

pub use complex::EmbeddedComplex;
pub use labeling::{Labeling, SpernerCensus};
pub use simplex::{RatPoint, StandardSimplex};
pub use solver::{ApproxFixedPoint, MapOnSimplex};
