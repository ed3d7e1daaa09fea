//! Majorization of nonnegative summable sequences, decided three ways: sorted
//! partial sums, hockey-stick sums `Σ(x_j - t)⁺`, and complete monotonicity
//! of `ζ(s) / (s(s-1))` where `ζ(s) = Σ b_n^s - Σ a_n^s`.
//!
//! The sequence and order-check code is generic over [`Scalar`] and normally
//! runs on [`Exact`] rationals. The Dirichlet-series code is generic over
//! [`Real`] and runs on `f64` or on one of the MPFR-backed [`Mp`] aliases.

pub mod error;
pub mod mp;
pub mod order;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod sequence;
pub mod trumping;
pub mod verdict;
pub mod zeta;

pub use error::{Error, Result};
pub use mp::Mp;
pub use scalar::{Precision, Real, Scalar};
pub use sequence::{Ell1Seq, ExactSeq, TailModel};
pub use verdict::{Outcome, Verdict, Witness};

/// Exact rational scalars.
pub type Exact = num_rational::BigRational;
pub type Mp128 = Mp<128>;
pub type Mp256 = Mp<256>;
pub type Mp512 = Mp<512>;
pub type Mp1024 = Mp<1024>;
pub type Mp2048 = Mp<2048>;
pub type Mp4096 = Mp<4096>;
