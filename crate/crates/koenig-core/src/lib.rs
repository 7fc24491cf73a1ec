//! Exact combinatorial commutative algebra for graded ideals whose selected
//! initial terms form a regular sequence, together with the parameter systems,
//! Cohen-Macaulay tests and canonical-module descriptions attached to them.
//!
//! Everything here is field independent: polynomial arithmetic is restricted to
//! pure-difference binomials, so all computations are integer exact.

pub mod binomial_edge;
pub mod edge_ideals;
pub mod error;
pub mod fourier_motzkin;
pub mod graphs;
pub mod groebner;
pub mod hibi;
pub mod ideal;
pub mod koenig;
pub mod monomial;
pub mod simplicial;

pub use binomial_edge::BinomialEdgeIdeal;
pub use error::Error;
pub use graphs::SimpleGraph;
pub use groebner::{Budget, GroebnerBasis};
pub use hibi::{DistributiveLattice, Poset};
pub use ideal::{Binomial, IdealPresentation, LinearForm};
pub use koenig::{KoenigCertificate, KoenigSearch};
pub use monomial::{Monomial, MonomialOrder, OrderKind, OrderSpec, WeightOrder};
