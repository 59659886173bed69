pub mod error;
pub mod format;
pub mod gf;
pub mod linalg;
pub mod analysis;
pub mod code;
pub mod crt;
pub mod decoder;
pub mod linpoly;
pub mod rankmetric;
pub mod sim;

pub use error::{Error, Result};
pub use gf::{FieldContext, FieldElement, FqBasis};
pub use analysis::{CodeParams, Radii};
pub use code::{CodeSpec, Codeword};
pub use crt::ModulusFamily;
pub use decoder::{decode, decode_extended, DecodeResult, FailureReason, Outcome};
pub use linpoly::LinPoly;
pub use rankmetric::{BlockPartition, Subspace};
