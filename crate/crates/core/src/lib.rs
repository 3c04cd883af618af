//! Exact arithmetic for the Toeplitz quantum projective spaces `C(P^N(T))`.
//!
//! The Toeplitz algebra is modelled by its dense *-subalgebra of banded
//! Toeplitz operators plus finite-rank matrices, with Gaussian rational
//! coefficients. On top of it sit the tensor gluing maps, the multipullback
//! and a verifier for the freeness of the lattice generated by the kernels of
//! the canonical projections. The classical covering of `CP^N` is modelled
//! numerically in [`classical`].

pub mod circle_hopf;
pub mod classical;
pub mod error;
pub mod gluing;
pub mod multipullback;
pub mod order_lattice;
pub mod sampling;
pub mod scalar;
pub mod tensor;
pub mod toeplitz;

pub use circle_hopf::{CirclePoly, CircleTensor};
pub use error::{Error, Result};
pub use gluing::{CheckReport, QuotientClass, SlotPosition};
pub use multipullback::{FreenessReport, PullbackElement};
pub use order_lattice::{AntichainForm, FiniteLattice, Poset, UpperSet, Verdict};
pub use scalar::Scalar;
pub use tensor::{Atom, Factor, SlotKind, TensorElement};
pub use toeplitz::{CompactPart, GaugeExpansion, ToeplitzAtom, ToeplitzElement};
