//! Exact and p-adic arithmetic for Asai L-functions of quadratic Hilbert
//! modular forms, p-adic Eisenstein families, and the local Rankin–Selberg
//! zeta integrals behind the improved p-adic Asai L-function.

pub mod asai;
pub mod catalog;
pub mod characters;
pub mod eigendata;
pub mod eisfamily;
pub mod error;
pub mod exactnum;
pub mod iwasawa;
pub mod localzeta;
pub mod padic_euler;

pub use error::{Error, Result};
