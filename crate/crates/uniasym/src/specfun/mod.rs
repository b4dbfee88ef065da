//! Reference evaluators for the special functions the expansions and their
//! oracles require. All entry points take and return `f64`; the series that
//! suffer cancellation at the acceptance scales run in double-double
//! internally.

pub mod airy;
pub mod bessel;
pub mod gamma;
pub mod hyp2f1;
pub mod kummer;
pub mod laguerre;
pub mod pcf;
pub mod quad;

pub use airy::{airy_ai, airy_ai_prime};
pub use bessel::bessel_j_oracle;
pub use gamma::{gamma_fn, log_gamma, recip_gamma};
pub use hyp2f1::gauss_2f1_oracle;
pub use kummer::{kummer_m, kummer_u};
pub use laguerre::{jacobi_p, laguerre_l};
pub use pcf::pcf_u;
