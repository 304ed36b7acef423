//! Rule language front end and classical back end: parsing, type checking,
//! modifier elimination, inversion formulas, finite model search and
//! SMT-LIB emission.

pub mod check;
pub mod correspond;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod inversion;
pub mod lexer;
pub mod lift;
pub mod logic;
pub mod model;
pub mod parser;
pub mod printer;
pub mod simplify;
pub mod smtlib;
pub mod syntax;
pub mod transform;
pub mod typecheck;
pub mod wellformed;

pub use error::{LogicError, ParseError, TransformError, TypeError};
pub use parser::parse_module;
pub use printer::print_module;
pub use syntax::*;
