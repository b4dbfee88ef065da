//! Working-precision scalars and complex helpers.

pub mod cops;
pub mod dd;
pub mod scalar;

pub use cops::{C64, CSum};
pub use dd::Dd;
pub use scalar::Scalar;

/// Working precision for the contour pipeline.
///
/// `Double` is the default. `DoubleDouble` pays roughly a 15x slowdown for
/// twice the mantissa; it is needed when high-order coefficients are
/// extracted close to a coalescence point, where the kernel values on the
/// ring grow factorially and the node sum cancels them back down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Precision {
    Double,
    DoubleDouble,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Double
    }
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" | "f64" => Ok(Precision::Double),
            "dd" | "double-double" => Ok(Precision::DoubleDouble),
            other => Err(format!("unknown precision `{other}` (use `double` or `dd`)")),
        }
    }
}
