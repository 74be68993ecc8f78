#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod acceptance;
pub mod bounds;
pub mod cli;
pub mod comparison;
pub mod domain;
pub mod error;
pub mod linalg;
pub mod quasilinear;
pub mod radial;
pub mod report;
pub mod spaceform;
pub mod warp;

pub use error::{Error, Result};
