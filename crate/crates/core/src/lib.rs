//! Exact limit calculus relating elliptic stable envelopes to K-theoretic
//! stable envelopes of fixed subvarieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`charalg`]: equivariant characters (Laurent polynomials with
//!   half-integer exponents) and the Euler-class functionals built on them.
//! * [`qtheta`]: truncated q-series with rational exponents, the odd theta
//!   function and exact `q -> 0` leading-term extraction.
//! * [`balanced`]: balanced theta-ratio expressions, their quasiperiod data
//!   and the two-stage limit `q -> 0`, then `z -> 0` or `z -> infinity`.
//! * [`hilbcomb`]: Young-diagram data of the Hilbert scheme of points.
//! * [`framing`]: the hyperplane arrangement on the framing torus of a
//!   quiver variety.
//! * [`stabflow`]: ingestion of restriction matrices and the shifted double
//!   limit that produces K-theoretic stable-envelope candidates.

pub mod balanced;
pub mod charalg;
pub mod error;
pub mod framing;
pub mod hilbcomb;
pub mod qtheta;
pub mod rat;
pub mod stabflow;

pub use error::{Error, Result};
pub use rat::Q;
