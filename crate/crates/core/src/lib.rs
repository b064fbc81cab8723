//! Exact invariant calculus for exotic smooth structures built from elliptic
//! surfaces by knot surgery, blowups and rational blowdowns.
//!
//! - [`laurent`] and [`factored`]: Laurent polynomials over `Z` that carry
//!   Seiberg-Witten functions and Alexander polynomials.
//! - [`mcg`]: Dehn-twist words in the torus mapping class group, their
//!   `SL(2, Z)` images and the elliptic-fibration factorization of `E(n)`.
//! - [`plumbing`]: linear plumbings `C_{p,q}` and their intersection forms.
//! - [`ledger`]: the invariant record of a manifold and the surgeries on it.
//! - [`pipeline`]: recipes, optimal constructions, geography and
//!   distinctness certificates.

pub mod error;
pub mod exec;
pub mod factored;
pub mod laurent;
pub mod ledger;
pub mod mcg;
pub mod pipeline;
pub mod plumbing;

pub use error::{Error, Result};
pub use exec::Execution;
pub use factored::FactoredLaurent;
pub use laurent::{Generator, LaurentPoly};
pub use ledger::{HomologyClass, ManifoldState, Verdict};
pub use mcg::{McgWord, Sl2Matrix};
pub use pipeline::{ConstructionRecipe, ConstructionResult};
pub use plumbing::Chain;
