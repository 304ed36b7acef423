use thiserror::Error;

use crate::syntax::{Name, Span};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("{span}: {msg}")]
    Lexical { span: Span, msg: String },
    #[error("{span}: expected {}, found {found}", expected.join(" or "))]
    Unexpected { span: Span, expected: Vec<String>, found: String },
    #[error("{span}: unterminated annotation braces")]
    UnterminatedAnnotation { span: Span },
    #[error("{span}: {msg}")]
    Invalid { span: Span, msg: String },
}

impl ParseError {
    pub fn lexical(span: Span, msg: &str) -> Self {
        ParseError::Lexical { span, msg: msg.to_string() }
    }

    pub fn span(&self) -> Span {
        match self {
            ParseError::Lexical { span, .. }
            | ParseError::Unexpected { span, .. }
            | ParseError::UnterminatedAnnotation { span }
            | ParseError::Invalid { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TypeError {
    #[error("{span}: type mismatch in {context}: expected {expected}, found {actual}")]
    Mismatch { span: Span, context: String, expected: String, actual: String },
    #[error("{span}: unknown identifier `{name}`")]
    UnknownIdentifier { span: Span, name: Name },
    #[error("{span}: class `{class}` has no field `{field}`")]
    FieldNotFound { span: Span, class: String, field: Name },
    #[error("unknown class `{0}`")]
    UnknownClass(Name),
    #[error("{span}: `{ty}` is not a function type")]
    NotAFunction { span: Span, ty: String },
    #[error("generated `{name}` collides with an existing {existing}")]
    Collision { name: Name, existing: String },
    #[error("{span}: {msg}")]
    Unsupported { span: Span, msg: String },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("rule `{referenced_by}` refers to unknown rule `{name}`")]
    UnresolvedRule { name: Name, referenced_by: Name },
    #[error("cannot introduce rule `{0}`: a rule with that name already exists")]
    NameCollision(Name),
    #[error("rule dependency cycle: {}", fmt_cycle(.0))]
    Cycle(Vec<Name>),
    #[error(
        "parameter interface of `{rule}` is ({}) but `{target}` expects ({}); adapt it with remap",
        .actual.join(", "), .expected.join(", ")
    )]
    InterfaceMismatch { rule: Name, target: Name, expected: Vec<String>, actual: Vec<String> },
    #[error("rule `{rule}`: {msg}")]
    InvalidAnnotation { rule: Name, msg: String },
    #[error("rule `{0}` does not conclude an atomic predicate application")]
    NonAtomicConclusion(Name),
    #[error("remap of `{rule}`: {msg}")]
    Remap { rule: Name, msg: String },
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn fmt_cycle(c: &[Name]) -> String {
    let mut parts: Vec<&str> = c.iter().map(|n| n.as_str()).collect();
    if let Some(first) = c.first() {
        parts.push(first);
    }
    parts.join(" -> ")
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LogicError {
    #[error("search budget of {0} nodes exhausted")]
    ResourceCap(u64),
    #[error("integer {0} is outside the enumeration bounds")]
    IntOutOfBounds(i64),
    #[error("no carrier size given for sort `{0}`")]
    MissingSize(Name),
    #[error("{0}")]
    Unsupported(String),
    #[error("unknown assertion `{0}`")]
    UnknownAssertion(Name),
    #[error("unknown rule `{0}` in rule-set adjustment")]
    UnknownRule(Name),
    #[error(transparent)]
    Transform(#[from] TransformError),
}
