//! m-Cayley digraphs of finite groups, the normalizer of the semiregular
//! right-regular action, digraph automorphism search, and decision procedures
//! for the m-CI and m-PCI properties.

pub mod aut;
pub mod ci;
pub mod digraph;
pub mod error;
pub mod groups;
pub mod limits;
pub mod normalizer;
pub mod perms;
pub mod repro;
pub mod util;

pub use error::{Error, Result};
pub use limits::Limits;
