//! Clone items in formal contexts derived from graphs.
//!
//! A bipartite network `H = (U ∪ W, E)` is read as the formal context
//! `(U, W, I)`. Two attributes are *clones* when exchanging them maps every
//! intent of the context to an intent. This crate detects clones with a
//! row-level test on object-reduced contexts, cross-checks it against a
//! brute-force closure-system oracle, and searches for general
//! closure-preserving permutations of the attributes.
//!
//! ```
//! use clonex::{clones::{clone_partition, Side}, fixtures};
//!
//! let ctx = fixtures::hobbies();
//! let part = clone_partition(&ctx, Side::Attributes);
//! assert_eq!(part.classes, vec![vec![0, 1], vec![2, 3, 4]]);
//! ```

pub mod bitset;
pub mod closure;
pub mod clones;
pub mod context;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod perms;

pub use bitset::BitSet;
pub use closure::{ClosureFamily, FormalConcept};
pub use clones::{CloneReport, ClonePartition, Side};
pub use context::{AttributeSet, FormalContext, ObjectSet, ReductionTrace};
pub use error::{Error, Result};
pub use perms::{Permutation, PermutationSearchResult};
