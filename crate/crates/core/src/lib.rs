pub mod arith;
pub mod codec;
pub mod error;
pub mod gf;
pub mod harness;
pub mod nlr;
pub mod vmss;
pub mod xtr;

pub use error::{Error, Result};
