//! Exact graded symmetric algebra and the bracket calculus it supports:
//! canonical words with Koszul signs, sparse multilinear operator tables
//! with a graded Lie bracket, homotopy Jacobi verification, multiderivation
//! extensions of the brackets, and the transfer of deformation-series
//! solutions into bialgebra structures.

pub mod elem;
pub mod error;
pub mod graded;
pub mod polymap;
pub mod report;
