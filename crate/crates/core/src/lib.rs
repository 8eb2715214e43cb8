//! Fast evaluation of quasiperiodic one-dimensional lattice sums
//!
//! S(alpha) = sum_{n >= 1} f(k n d) exp(i alpha n d)
//!
//! for Hankel-type kernels `f`. The sum is rewritten as a short head, a
//! smoothly filtered window of terms, a filtered integral of the same window
//! and a contour integral along a ray into the complex plane. Only the
//! window length `c` is adapted; everything else is fixed by the parameters.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gratingsum;
pub mod oracle;
pub mod quadrature;
pub mod reduction;
pub mod smoothing;
pub mod specfun;

pub use error::{Error, Result};
pub use gratingsum::{
    lattice_sum_batch, lattice_sum_sl, one_sided_sum, wood_distance, GratingParams, SolverConfig, SumResult,
};
pub use specfun::{Kernel, KernelFamily};

pub use num_complex::Complex64;
