pub mod amplitude;
pub mod bell;
pub mod cli;
pub mod error;
pub mod ket;
pub mod protocol;
pub mod report;
pub mod sampling;
pub mod scalar;
