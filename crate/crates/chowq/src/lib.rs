//! Command-line front end for `chowq-core`: an expression parser over ring
//! generators, JSON output, and the `chowq` binary's subcommands.

pub mod cli;
pub mod expr;
pub mod json;
pub mod tables;

pub use cli::{run, CliError, Suite};
pub use expr::{parse_expr, parse_polynomial, ExprTree, ParseError};
