pub mod bl;
pub mod discretized;
pub mod generic_dim;
pub mod harness;
pub mod linalg;
pub mod oppenheim;
pub mod rep;
pub mod seed;
