//! Exact factorization of invertible matrices over the rationals and finite
//! fields into products of involutions and unipotent matrices of index 2.
//!
//! ```
//! use matfact::certificate::{verify, Verdict};
//! use matfact::pipelines::{parse_pattern, stable3};
//! use matfact::{Field, Mat};
//!
//! # fn main() -> matfact::Result<()> {
//! let f = Field::prime(7)?;
//! let a = Mat::scalar(&f, 3, &f.from_i64(2));
//! let cert = stable3(&a, &parse_pattern("IIU")?, 0)?;
//! assert_eq!(verify(&cert), Verdict::Pass);
//! # Ok(())
//! # }
//! ```

pub mod acceptance;
pub mod adjacency;
pub mod arith;
pub mod canonical;
pub mod certificate;
pub mod error;
pub mod field;
pub mod matrix;
pub mod oracle;
pub mod pipelines;
pub mod poly;
pub mod selftest;
pub mod two_factor;

pub use error::{Error, Result};
pub use field::{Field, FieldDescriptor, Order, Scalar};
pub use matrix::Mat;
pub use poly::Poly;
