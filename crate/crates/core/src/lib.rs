//! Exact K-stability checking for ample classes on the blowup of
//! P^2 x P^2 along the diagonal.

pub mod amplecone;
pub mod certify;
pub mod cli;
pub mod criterion;
pub mod ratpoly;
pub mod rootdata;
