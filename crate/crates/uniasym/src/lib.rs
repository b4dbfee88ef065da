//! Numerically stable computation of the coefficients in uniform asymptotic
//! expansions of integrals with coalescing critical points.
//!
//! The coefficients `a_{s,n}` of such expansions have Cauchy-type contour
//! integral representations
//!
//! ```text
//! a_{s,n} = 1/(2 pi i) * Int_{|tau|=r} A_{s,n}(tau) G_0(tau) dtau
//! ```
//!
//! where the `A_{s,n}` are simple rational functions generated by a
//! first-order recurrence, and `G_0` carries the conformal map between the
//! original integrand and its canonical form. Sampling the circle at `2M`
//! equally spaced points (the trapezoidal rule) converges exponentially in
//! `M`, and stays stable arbitrarily close to the coalescence point because
//! the integration nodes never approach the merging critical points.
//!
//! Four coalescence geometries are implemented:
//!
//! * two coalescing saddle points (Airy-type expansions; Bessel `J` of large
//!   order near the turning point),
//! * two saddles meeting two branch points, argument near +1 (Kummer-`M`
//!   expansions of the Gauss hypergeometric function; Jacobi polynomials in
//!   terms of Laguerre polynomials),
//! * the mirror case near -1 (Kummer-`U` expansions),
//! * a saddle point near an endpoint of the integration interval
//!   (parabolic-cylinder expansions).
//!
//! The crate is organized around the pipeline
//! [`cases::Case`] -> [`map::MapParams`] -> [`map::NodeRing`] ->
//! [`kernels::KernelSet`] -> [`coeff::CoefficientTable`] ->
//! [`expansions`]. The `specfun` module holds the reference evaluators
//! (Airy, Kummer, Laguerre, parabolic cylinder) used by the expansions and
//! the independent series oracles used to validate them.

pub mod cases;
pub mod coeff;
pub mod error;
pub mod expansions;
pub mod kernels;
pub mod map;
pub mod num;
pub mod specfun;
pub mod tables;

pub use cases::{Case, CaseTag};
pub use coeff::{CoefficientTable, KernelSet};
pub use error::{Error, Result};
pub use map::{MapParams, NodeRing};
pub use num::{C64, Precision};
