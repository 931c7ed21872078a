//! Maximal curves over F_{q^2}: construction, point counting, Weierstrass
//! order sequences, divisor audits and one-point algebraic-geometry codes.

pub mod agcode;
pub mod curve;
pub mod error;
pub mod field;
pub mod function_field;
pub mod linalg;
pub mod theorems;
pub mod weierstrass;

pub use curve::{CurveModel, Family, Point};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldTower, Level};
pub use function_field::{FuncElement, FunctionField};
