use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the admissible range of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The expansion parameter sits exactly at the coalescence point; the
    /// kernel poles merge and the contour machinery is undefined there.
    #[error("coalescence point: {0}")]
    CoalescencePoint(String),

    /// A rational kernel was evaluated too close to a denominator root.
    #[error("evaluation within {distance:.3e} of a kernel pole")]
    NearPole { distance: f64 },

    /// Newton continuation failed to track the inverse map at a ring node.
    #[error("continuation failed at node {node}: {detail}")]
    Continuation { node: usize, detail: String },

    /// The continued integrand did not return to its starting value after a
    /// full loop, indicating a branch-tracking failure or a contour through
    /// a cut.
    #[error("monodromy defect {defect:.3e} after closing the contour")]
    Monodromy { defect: f64 },

    /// M-doubling did not reach the requested tolerance.
    #[error("no convergence to {target:.1e} by M={last_m}; deltas {deltas:?}")]
    Convergence { target: f64, last_m: usize, deltas: Vec<f64> },

    /// Caller misuse (mismatched lengths, out-of-range indices).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
