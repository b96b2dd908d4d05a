//! Analysis and construction of complete complexes for flexible-tile DNA
//! self-assembly pots.
//!
//! A *pot* is a set of tile types, each tile a vertex carrying cohesive ends
//! (`a`, or its complement `a*`). A graph is realized by a pot when its
//! vertices can be labelled with tiles so that every edge joins an `a` end to
//! an `a*` end and no end is left unmatched. This crate answers, for a pot:
//!
//! * which tile proportions are admissible ([`spectrum`]),
//! * which graph orders are realizable and with which tile counts
//!   ([`feasibility`]),
//! * whether a given labelled multigraph is a realization, and when a tile
//!   distribution forces or permits a disconnected complex ([`complex`]),
//! * explicit connected witnesses for the single-bond pot
//!   `{a^e1},{a*^e2},{a*}` ([`builders`]).
//!
//! ```
//! use flextile::{feasibility, pot};
//!
//! let pot = pot::parse_pot("{a^6};{a*^4};{a*}").unwrap();
//! let single = pot::as_single_bond(&pot).unwrap();
//! assert_eq!(feasibility::min_order(&single), 4);
//! assert_eq!(feasibility::zeta(&single), Some(7));
//! ```

use num_bigint::BigInt;
use num_rational::Ratio;

pub mod builders;
pub mod cli;
pub mod complex;
pub mod feasibility;
pub mod pot;
pub mod scalar;
pub mod spectrum;

pub use pot::{parse_pot, Pot, SingleBondPot};
pub use scalar::Scalar;
pub use spectrum::TileDistribution;

/// Exact rational used throughout the analysis.
pub type Rational = Ratio<i64>;
/// Arbitrary-precision rational for matrices whose entries may grow.
pub type BigRational = Ratio<BigInt>;

pub type RationalMatrix = spectrum::ConstructionMatrix<Rational>;
pub type BigRationalMatrix = spectrum::ConstructionMatrix<BigRational>;
pub type FloatMatrix = spectrum::ConstructionMatrix<f64>;

pub type RationalPoint = spectrum::SpectrumPoint<Rational>;
pub type RationalParameters = spectrum::SpectrumParameters<Rational>;
