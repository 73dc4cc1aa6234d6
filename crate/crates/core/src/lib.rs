//! Numerical toolkit for integral means spectra of conformal maps that admit
//! quasiconformal extensions to the plane, together with the boundary
//! twisting phenomena that accompany them.
//!
//! The crate is organized around a handful of cooperating pieces:
//!
//! * [`branch`]: continuous branch tracking for logarithms along paths,
//!   the foundation every analytic quantity here is built on;
//! * [`maps`]: concrete conformal map families on the disk and half-plane
//!   (power maps, normalized variants) with their distortion data;
//! * [`spectrum`]: circle integrals of `|f'|^t`, dyadic radius schedules,
//!   spectrum estimates, and reference bounds to compare against;
//! * [`pick`]: the convex value region for derivative pairs of maps with
//!   small quasiconformal distortion, its boundary, and interpolant families
//!   that realize interior points;
//! * [`motion`]: welded radial stretch maps, holomorphic motions of the
//!   plane glued along the real axis, with explicit Beltrami data;
//! * [`twist`]: spiral rate estimation near the boundary, dimension bounds
//!   for rotational tangencies, and related parameter conversions;
//! * [`verify`]: a named self-check battery used by the CLI.

pub mod branch;
pub mod maps;
pub mod motion;
pub mod pick;
pub mod spectrum;
pub mod twist;
pub mod verify;

pub use num_complex::Complex64;
