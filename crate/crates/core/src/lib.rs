//! A laboratory for the sensitivity and block sensitivity of Boolean
//! functions with symmetry: cyclically invariant functions, minterm-transitive
//! closures `p^G`, exact measures at desk scale, and checked certificates for
//! witness-based lower bounds.

pub mod analyzers;
pub mod assignment;
pub mod certificates;
pub mod constructions;
pub mod doc;
pub mod error;
pub mod function;
pub mod perm;
pub mod word;

pub use assignment::PartialAssignment;
pub use error::{Error, Result};
pub use function::{BooleanFunction, Elementary, FnFunction, TruthTable, DEFAULT_DENSE_LIMIT};
pub use perm::{cyclic_group, GeneratedGroup, Permutation};
pub use word::Word;
