//! Model-definition files: a small operator expression language and the
//! JSON container that names the fast and slow generators.
//!
//! Grammar:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary ("*" unary)*
//! unary   := "-" unary | postfix
//! postfix := atom ("'")*
//! atom    := number | name "(" args ")" | name | "(" expr ")"
//! ```
//!
//! Numbers are decimal with an optional `i` suffix for imaginary literals.
//! A scalar added to an operator stands for that multiple of the identity.
//! `kron(A, B)` puts `A` on the leading index block.

mod ast;
mod builtins;
mod eval;
mod file;
mod parser;

pub use ast::{BinOp, Expr};
pub use builtins::{Builtin, BUILTINS};
pub use eval::{evaluate, Env, Value};
pub use file::{load_model, Factor, GeneratorSpec, LoadedModel, ModelFile};
pub use parser::{parse_expression, ParseError};

#[cfg(test)]
mod tests;
