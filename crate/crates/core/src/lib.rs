#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod moore;
pub mod numerics;
pub mod photons;
pub mod spectra;
pub mod specfun;
pub mod string;

pub use error::{DceError, Result};
