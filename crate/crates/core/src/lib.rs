//! Bit-accurate model of a unified-CORDIC activation-function core and the
//! MAC processing element built around it.
//!
//! * [`fixedpoint`]: saturating Q-format values and primitive operations.
//! * [`cordic`]: the linear/circular/hyperbolic shift-add engine.
//! * [`activation`]: Sigmoid, Tanh, ReLU, Swish, GELU, SELU and SoftMax on
//!   top of the engine, selected at runtime.
//! * [`neuric`]: the MAC + activation processing element and its cycle model.
//! * [`analysis`]: double-precision oracle, ME/MAE metrics and Monte Carlo.

pub mod activation;
pub mod analysis;
pub mod cordic;
pub mod error;
pub mod fixedpoint;
pub mod neuric;

pub use error::{Error, Result};
pub use fixedpoint::{Fx, FxFormat, Sticky};
