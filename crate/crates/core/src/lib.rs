//! The periodic box-ball system and its exact solution.
//!
//! A state of the system is a cyclic word of `L` boxes, each empty or
//! holding one ball. The commuting time evolutions `T_1, T_2, ...`
//! transport a carrier of the corresponding capacity around the ring. This
//! crate implements the full solution pipeline for soliton contents with
//! distinct amplitudes:
//!
//! * [`crystal`] — states, the combinatorial R, and the carrier evolutions;
//! * [`kkr`] — rigged configurations and the KKR bijection for highest
//!   states, with vacancy numbers and the concatenation rule;
//! * [`scattering`] — action-angle variables: `T_l` becomes the straight
//!   motion `I -> I + h_l` on `Z^g / A Z^g`;
//! * [`theta`] — the Bethe matrix `A` and the ultradiscrete Riemann theta
//!   function, evaluated exactly by centered integer enumeration;
//! * [`tau`] — the ultradiscrete tau function, the theta-function state
//!   formula, the initial-value-problem solver whose cost is independent of
//!   the evolution time, and the softened field `u(k, t)`;
//! * [`bethe`] — the q = 0 Bethe layer: string centers, eigenvalues, and
//!   joint eigenvectors of all `T_l` in `(C^2)^{(x) L}`;
//! * [`verify`] — exhaustive and randomized verification suites.
//!
//! Everything ultradiscrete is computed in exact integer or rational
//! arithmetic; floating point appears only in the softened (classical
//! theta) layer and in 2^L-dimensional linear algebra.

pub mod bethe;
pub mod crystal;
pub mod error;
pub mod kkr;
pub mod scattering;
pub mod tau;
pub mod theta;
pub mod verify;

pub use crate::bethe::{BetheRoot, BetheVector, Phase};
pub use crate::crystal::{apply_r, Carrier, Letter, State};
pub use crate::error::{Error, Result};
pub use crate::kkr::RiggedConfiguration;
pub use crate::scattering::ActionAngle;
pub use crate::theta::{BetheMatrix, Evolution, HalfInt, HalfIntVector};
