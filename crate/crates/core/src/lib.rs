//! Intrinsic volumes of the orthoscheme `{1 >= x_1 >= ... >= x_n >= 0}` and of
//! its infinite-dimensional limit, the Brownian motion body.

pub mod bm;
pub mod cones;
pub mod error;
pub mod exact;
pub mod orthoscheme;
pub mod poly;
pub mod rng;
pub mod sum;
pub mod sy;

pub use error::{Error, Result};
pub use exact::{IntrinsicVolumes, Method, Provenance};
pub use orthoscheme::{FaceIndex, Halfspace, Orthoscheme};
