//! Invariants of open virtual strings computed from Gauss diagrams.
//!
//! An open string is modelled by a [`gauss::GaussDiagram`]: an oriented line
//! with `2m` marked points paired into `m` directed arrows. Resolving every
//! double point descendingly (first visit goes over) and reading the crossing
//! relations of the resulting diagram expresses the right end generator as a
//! reduced word in a free group on generators indexed by `Z^2`. That word,
//! [`invariant::phi`], is invariant under the homotopy moves of
//! [`moves`] and multiplicative under concatenation. Its abelianization is a
//! Laurent polynomial in `u, v` ([`invariant::phi_poly`]) whose symmetry under
//! `u <-> v` is a necessary condition for the string to be ribbon.
//!
//! The [`multistring`] module generalizes the construction to colored open
//! `n`-strings with indices in `Z^{n+1}`.

pub mod census;
pub mod gauss;
pub mod invariant;
pub mod laurent;
pub mod moves;
pub mod multistring;
pub mod verify;
pub mod words;

pub use gauss::GaussDiagram;
pub use invariant::{phi, phi_poly, StringInvariant};
pub use laurent::LaurentPolynomial;
pub use words::Word;
