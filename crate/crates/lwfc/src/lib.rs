//! File formats for the lwfc feature-tensor codec: LWFT tensor files,
//! `key=value` parameter files and CSV error curves. The `lwfc` binary in
//! this crate drives the whole pipeline from the command line.

pub mod curve;
pub mod error;
pub mod params;
pub mod tensor_file;

pub use error::{Error, ParamError};
pub use tensor_file::{load_tensor, read_tensor, save_tensor, write_tensor};
