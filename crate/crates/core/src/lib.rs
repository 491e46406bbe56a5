//! Exact computations in completed free graded differential Lie algebras
//! over ℚ: truncated homology, cell attachments and inertness, Sullivan
//! duality and Baker–Campbell–Hausdorff.

pub mod attach;
pub mod dgl;
pub mod freelie;
pub mod limits;
pub mod qlinalg;
pub mod sullivan;
