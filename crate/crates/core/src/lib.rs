pub mod cli;
pub mod compliance;
pub mod kernel;
pub mod noninterference;
pub mod operations;
pub mod policy_lang;
pub mod smt_emit;
pub mod snstate;
pub mod vcgen;
