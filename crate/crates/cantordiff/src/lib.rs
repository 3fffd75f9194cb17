//! Symbolic computation in the diffeomorphism groups of the Cantor sets
//! K_n embedded in the line.
//!
//! Elements are tree-pair diagrams with flips: pairs of complete prefix
//! codes of equal size with a bijection and an orientation bit per rule.
//! Points are eventually periodic digit words with exact rational
//! coordinates; all arithmetic is arbitrary precision and no floating
//! point is used in the core.
//!
//! Modules:
//! - [`address`]: points of K_n and their coordinates
//! - [`clopen`]: boolean algebra of clopen subsets as cell antichains
//! - [`element`]: the group of tree-pair diagrams with flips
//! - [`dynamics`]: derivatives, fixed/periodic points, element order
//! - [`subgroup`]: closure enumeration, orbits, crossed pairs, ping-pong
//!   freeness certificates
//! - [`sampler`]: seeded random element generation
//! - [`text`]: the textual grammars for elements, addresses and sets

pub mod address;
pub mod clopen;
pub mod dynamics;
pub mod element;
pub mod error;
pub mod sampler;
pub mod subgroup;
pub mod text;

pub use address::{Address, Arity, Cell, Coordinate};
pub use clopen::ClopenSet;
pub use dynamics::{FixedSet, OrderResult, PeriodicSet};
pub use element::{Element, Rule, DEFAULT_MAX_DEPTH};
pub use error::{Error, Result};
pub use sampler::SamplerConfig;
pub use subgroup::{ClosureResult, CrossedWitness, GeneratingSet, OrbitResult};
