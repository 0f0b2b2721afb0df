//! Construction and verification of axial algebras from a permutation group,
//! a fusion law and a shape.

pub mod linalg;
pub mod permgroup;
pub mod fusion;
pub mod analysis;
pub mod catalog;
pub mod shape;
pub mod engine;
pub mod job;
pub mod pipeline;
pub mod algfile;
