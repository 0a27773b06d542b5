//! The policy language: scenario files declaring people, contents and lists,
//! assumptions about list memberships, policies as instruction sequences,
//! and the checks to run on them.
//!
//! ```text
//! person ow1, ow2;
//! assume not subset-of(work, close-friends);
//!
//! policy OriginalPolicy {
//!   create-account(ow1, c1);
//!   create-list(close-friends, ow1);
//!   transmit-to-list(c1, close-friends);
//! }
//! ```

pub mod ast;
mod parse;
mod pretty;
mod resolve;

pub use ast::{Scenario, Sort};
pub use parse::{parse, ParseError};
pub use resolve::{
    resolve, BoundAssumption, BoundInstr, BoundPolicy, BoundScenario, Names, ResolveError,
    Template, Term,
};
