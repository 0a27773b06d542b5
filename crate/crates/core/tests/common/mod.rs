//! Support code shared by the integration tests.
#![allow(dead_code)]

pub mod criteria;
pub mod oracle;
pub mod random;
pub mod smt_eval;
