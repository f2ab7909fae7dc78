//! Exact symbolic engine for realizations of universal enveloping algebras
//! inside (semi)completed Weyl algebras in symmetric ordering.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point and no tolerance anywhere. The main objects are
//!
//! * [`algebra::LieAlgebra`] — a Lie algebra given by exact structure constants,
//! * [`series::TruncatedSeries`] — multivariate formal power series in the dual
//!   generators `d1..dn`, cut at a total degree,
//! * [`weyl::WeylOperator`] — normal-ordered elements of the semicompleted Weyl
//!   algebra (polynomials in `x` times series in `d`),
//! * [`pbw::PbwElement`] — elements of the enveloping algebra in PBW normal form,
//! * [`trees::PlanarTree`] / [`trees::OrderedTree`] — planar bicolored trees with
//!   descending numerations,
//! * [`feynman::BigradedCoproduct`] — deformed coproducts of the derivatives,
//!   expanded over trees or over nested commutators,
//! * [`hausdorff::VectorPolynomial`] — graded pieces of the Hausdorff series for
//!   a concrete algebra, by recursion and by a free-algebra oracle,
//! * [`star`] — star products by several independent routes.
//!
//! The same quantities are always computable along at least two independent
//! routes, and the test suites check the routes agree exactly.

pub mod algebra;
pub mod feynman;
pub mod hausdorff;
pub mod pbw;
pub mod rat;
pub mod series;
pub mod star;
pub mod suite;
pub mod trees;
pub mod weyl;

pub use algebra::LieAlgebra;
pub use rat::Rat;
pub use series::{Multidegree, SeriesMatrix, TruncatedSeries};
