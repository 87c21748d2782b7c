//! Computational kernels for scalar-curvature rigidity of asymptotically
//! locally hyperbolic spin manifolds.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. It covers:
//!
//! * [`clifford`]: complex Clifford representations and the four-dimensional
//!   chiral splitting of spinor space.
//! * [`groups`]: the finite subgroups of the unit quaternions with exact
//!   coordinates, their `Z/2` characters, spin lifts and fixed spinors.
//! * [`eta`]: exact defect sums for the signature and Dirac eta invariants
//!   of `S^3/Γ` and the mod-16 Rochlin combination.
//! * [`hypgeo`]: spin geometry on conformally flat charts (Killing spinors,
//!   the Killing connection, curvature, Lichnerowicz identity, gauge maps).
//! * [`fgexpand`]: exact formal power series for conformally compact
//!   Einstein metrics written in geodesic gauge.
//! * [`massint`]: sphere quadrature and the boundary mass integrand.
//!
//! Float math goes through `num_traits::Float` (backed by `libm`); modules
//! import it with `allow(unused_imports)` because the inherent `f64`
//! methods shadow it whenever `std` is linked.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose to reject NaN along with the bound
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod clifford;
pub mod cyclotomic;
pub mod error;
pub mod eta;
pub mod fgexpand;
pub mod groups;
pub mod hypgeo;
pub mod linalg;
pub mod massint;
pub mod sampling;

pub use error::{Error, Result};
