pub mod curve;
pub mod error;
pub mod generate;
pub mod highdim;
pub mod horizon;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod optimize;
pub mod par;
pub mod quadrature;
pub mod rng;
pub mod sphere;
pub mod unfold;
pub mod verify;

pub use error::{Error, Result};
