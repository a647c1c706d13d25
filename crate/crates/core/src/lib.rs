//! Reed-Solomon soft-decision decoding by adapting the binary parity-check
//! matrix to the bit reliabilities, plus the algebraic decoders and channel
//! simulation around it.

pub mod adapt;
pub mod algebraic;
pub mod bitmatrix;
pub mod channel;
pub mod decoder;
pub mod error;
pub mod galois;
pub mod rscode;
pub mod sim;
pub mod siso;

pub use bitmatrix::BitMatrix;
pub use error::{Error, Result};
pub use galois::{GaloisField, GfElem};
pub use rscode::{RsCode, SymbolMatrix};
