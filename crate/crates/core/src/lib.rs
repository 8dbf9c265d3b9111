//! Exact formal-series engine for circle-action period computations.

pub mod bivariate;
pub mod congruence;
pub mod modp;
pub mod polyb;
pub mod polylog;
pub mod punctured;
pub mod quad;
pub mod rational;
pub mod report;
pub mod series;
pub mod special;
pub mod tate;

pub use modp::ModPSeries;
pub use num_bigint::BigInt;
pub use punctured::{Mobius, Puncture, PuncturedRationalFunction};
pub use rational::{rat, rat_int, PadicVal, Rational};
pub use series::{SeriesError, TruncatedSeries, Var};
