//! The boundary mass integrand on the slices of the hyperbolic model in
//! cylinder coordinates, its sphere quadrature and the decay rate of the
//! slice integrals.
//!
//! The hyperbolic metric is `sinh^{-2}(x)(dx^2 + h_0)` with `h_0` the round
//! sphere; in the ball model this is the point `y = e^{-x} p`. Everything is
//! evaluated in the ball frame `ρ ∂_{y_m}`, where the Killing spinors are
//! known in closed form, and the adapted frame `{e'_i}` (normal first) is
//! expressed in it.

mod decay;
mod gauge;
mod integrand;
mod quadrature;

pub use decay::*;
pub use gauge::*;
pub use integrand::*;
pub use quadrature::*;
