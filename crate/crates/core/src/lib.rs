pub mod bilinear;
pub mod constraint;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod pde;
