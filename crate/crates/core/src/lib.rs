//! Multiparameter quantum estimation bounds for a uniformly accelerated
//! two-level (Unruh–DeWitt) detector.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: small dense complex/real matrices, Jacobi eigensolvers.
//! * [`detector`]: the evolved detector state and its parameter derivatives.
//! * [`fisher`]: SLD/RLD operators, information matrices, scalar CRBs and the
//!   closed-form two-parameter expressions.
//! * [`sdp`]: a dense primal–dual interior-point solver for small LMIs.
//! * [`variational`]: Holevo and Nagaoka(–Hayashi) bounds assembled as SDPs.
//! * [`sweep`]: configuration, parameter sweeps, CSV and SVG output.

pub mod detector;
pub mod error;
pub mod fisher;
pub mod linalg;
pub mod sdp;
pub mod sweep;
pub mod variational;

pub use detector::{DetectorParams, Param, Scenario, StatModel};
pub use error::{Error, Result};
