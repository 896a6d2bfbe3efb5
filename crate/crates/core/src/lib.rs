//! Exact translation surfaces over real quadratic fields: hyperelliptic
//! block construction, vertical flow decomposition and diagram assembly.

pub mod assembler;
pub mod blocks;
pub mod diagram;
pub mod dissect;
pub mod field;
pub mod flow;
pub mod geometry;
pub mod involution;
pub mod surface;
pub mod svg;
pub mod unionfind;
pub mod verifier;
