//! Abstract syntax of the rule language: types, expressions, rules,
//! annotations, assertions and whole modules.
//!
//! Every node carries a [`Span`] for diagnostics. Spans never take part in
//! equality, ordering or hashing, so two trees that differ only in source
//! positions compare equal.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;

use serde::Serialize;

/// Source position (1-based line and column). `0:0` marks synthesized nodes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }

    /// Position as a comparable pair; the trait impls deliberately ignore it.
    pub fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl PartialOrd for Span {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Span {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// An identifier: class, symbol, variable or rule name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Name {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Name of the implicit root of the class hierarchy.
pub const TOP_CLASS: &str = "Class";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LType {
    Class(Name),
    Boolean,
    Integer,
    Float,
    String,
    Function(Box<LType>, Box<LType>),
    Tuple(Vec<LType>),
}

impl LType {
    pub fn class(name: &str) -> Self {
        LType::Class(Name::from(name))
    }

    pub fn func(dom: LType, cod: LType) -> Self {
        LType::Function(Box::new(dom), Box::new(cod))
    }

    /// Builds the curried type `args[0] -> ... -> result`.
    pub fn curried(args: impl IntoIterator<Item = LType>, result: LType) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, a| LType::func(a, acc))
    }

    /// Splits a curried function type into its argument list and final result.
    pub fn uncurry(&self) -> (Vec<&LType>, &LType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let LType::Function(d, c) = cur {
            args.push(d.as_ref());
            cur = c;
        }
        (args, cur)
    }

    /// Maps a builtin type name to its type.
    pub fn builtin(name: &str) -> Option<LType> {
        match name {
            "Boolean" => Some(LType::Boolean),
            "Integer" => Some(LType::Integer),
            "Float" => Some(LType::Float),
            "String" => Some(LType::String),
            _ => None,
        }
    }

    pub fn is_function(&self) -> bool {
        matches!(self, LType::Function(..))
    }
}

/// A float literal with bitwise equality so expressions can be hashed.
#[derive(Clone, Copy, Debug)]
pub struct FloatLit(pub f64);

impl PartialEq for FloatLit {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for FloatLit {}

impl PartialOrd for FloatLit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FloatLit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for FloatLit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExprKind {
    Var(Name),
    Bool(bool),
    Int(i64),
    Float(FloatLit),
    Str(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Lambda(Name, LType, Box<Expr>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
    Forall(Name, LType, Box<Expr>),
    Exists(Name, LType, Box<Expr>),
    Field(Box<Expr>, Name),
}

impl From<ExprKind> for Expr {
    fn from(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn var(name: impl Into<Name>) -> Self {
        ExprKind::Var(name.into()).into()
    }

    pub fn bool(b: bool) -> Self {
        ExprKind::Bool(b).into()
    }

    pub fn int(i: i64) -> Self {
        ExprKind::Int(i).into()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        ExprKind::Not(Box::new(e)).into()
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        ExprKind::And(Box::new(a), Box::new(b)).into()
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        ExprKind::Or(Box::new(a), Box::new(b)).into()
    }

    pub fn implies(a: Expr, b: Expr) -> Self {
        ExprKind::Implies(Box::new(a), Box::new(b)).into()
    }

    pub fn eq(a: Expr, b: Expr) -> Self {
        ExprKind::Eq(Box::new(a), Box::new(b)).into()
    }

    pub fn forall(v: impl Into<Name>, ty: LType, body: Expr) -> Self {
        ExprKind::Forall(v.into(), ty, Box::new(body)).into()
    }

    pub fn exists(v: impl Into<Name>, ty: LType, body: Expr) -> Self {
        ExprKind::Exists(v.into(), ty, Box::new(body)).into()
    }

    /// Curried application `f a1 ... an`.
    pub fn app(f: Expr, args: impl IntoIterator<Item = Expr>) -> Self {
        args.into_iter().fold(f, |acc, a| ExprKind::App(Box::new(acc), Box::new(a)).into())
    }

    /// Applies the named symbol to the arguments; a bare name when there are none.
    pub fn call(f: &str, args: impl IntoIterator<Item = Expr>) -> Self {
        Expr::app(Expr::var(f), args)
    }

    /// Left-nested conjunction; `true` for an empty list.
    pub fn conj(parts: impl IntoIterator<Item = Expr>) -> Self {
        parts.into_iter().reduce(Expr::and).unwrap_or_else(|| Expr::bool(true))
    }

    /// Left-nested disjunction; `false` for an empty list.
    pub fn disj(parts: impl IntoIterator<Item = Expr>) -> Self {
        parts.into_iter().reduce(Expr::or).unwrap_or_else(|| Expr::bool(false))
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = span;
        self
    }

    pub fn is_true(&self) -> bool {
        matches!(self.kind, ExprKind::Bool(true))
    }

    pub fn is_false(&self) -> bool {
        matches!(self.kind, ExprKind::Bool(false))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match &self.kind {
            ExprKind::Var(n) => Some(n),
            _ => None,
        }
    }

    /// Views `f a1 ... an` as `(f, [a1, ..., an])` when the head is a name.
    /// A bare name is a zero-argument application.
    pub fn as_application(&self) -> Option<(&Name, Vec<&Expr>)> {
        let mut args = Vec::new();
        let mut cur = self;
        while let ExprKind::App(f, a) = &cur.kind {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        cur.as_var().map(|n| (n, args))
    }

    /// Flattens nested conjunctions into their operands, left to right.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
            if let ExprKind::And(a, b) = &e.kind {
                go(a, out);
                go(b, out);
            } else {
                out.push(e);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn disjuncts(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
            if let ExprKind::Or(a, b) = &e.kind {
                go(a, out);
                go(b, out);
            } else {
                out.push(e);
            }
        }
        go(self, &mut out);
        out
    }
}

/// A typed variable binding, as in a rule's `for` clause or a class attribute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param {
    pub name: Name,
    pub ty: LType,
}

impl Param {
    pub fn new(name: impl Into<Name>, ty: LType) -> Self {
        Param { name: name.into(), ty }
    }
}

/// Rule-transformer expressions found under `{derived: {apply: ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TransformExpr {
    RestrictSubjectTo { target: Name, overriders: Vec<Name> },
    Remap { target: Name, params: Vec<Param>, subst: Vec<(Name, Expr)> },
}

impl TransformExpr {
    /// Every rule name the expression refers to, target first.
    pub fn referenced_rules(&self) -> Vec<&Name> {
        match self {
            TransformExpr::RestrictSubjectTo { target, overriders } => {
                std::iter::once(target).chain(overriders.iter()).collect()
            }
            TransformExpr::Remap { target, .. } => vec![target],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleAnnotation {
    Restrict {
        subject_to: Vec<Name>,
        despite: Vec<Name>,
    },
    /// The original body of a rule split by subject-to elimination.
    Source,
    Derived(TransformExpr),
    /// Generated by elaboration (class inclusion rules).
    System,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub name: Name,
    pub annotation: Option<RuleAnnotation>,
    pub params: Vec<Param>,
    pub precond: Expr,
    pub postcond: Expr,
    pub span: Span,
}

impl Rule {
    pub fn new(name: impl Into<Name>, params: Vec<Param>, precond: Expr, postcond: Expr) -> Self {
        Rule { name: name.into(), annotation: None, params, precond, postcond, span: Span::default() }
    }

    pub fn with_annotation(mut self, annotation: RuleAnnotation) -> Self {
        self.annotation = Some(annotation);
        self
    }

    /// A rule with only a header, defined by a transformer expression.
    pub fn derived(name: impl Into<Name>, def: TransformExpr) -> Self {
        Rule::new(name, Vec::new(), Expr::bool(true), Expr::bool(true)).with_annotation(RuleAnnotation::Derived(def))
    }

    pub fn is_system(&self) -> bool {
        matches!(self.annotation, Some(RuleAnnotation::System))
    }

    pub fn is_source(&self) -> bool {
        matches!(self.annotation, Some(RuleAnnotation::Source))
    }

    pub fn derivation(&self) -> Option<&TransformExpr> {
        match &self.annotation {
            Some(RuleAnnotation::Derived(t)) => Some(t),
            _ => None,
        }
    }

    /// True for the placeholder body carried by header-only derived rules.
    pub fn has_trivial_body(&self) -> bool {
        self.params.is_empty() && self.precond.is_true() && self.postcond.is_true()
    }

    pub fn subject_to(&self) -> &[Name] {
        match &self.annotation {
            Some(RuleAnnotation::Restrict { subject_to, .. }) => subject_to,
            _ => &[],
        }
    }

    pub fn despite(&self) -> &[Name] {
        match &self.annotation {
            Some(RuleAnnotation::Restrict { despite, .. }) => despite,
            _ => &[],
        }
    }

    /// Types of the `for` clause, the rule's parameter interface.
    pub fn interface(&self) -> Vec<&LType> {
        self.params.iter().map(|p| &p.ty).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassDecl {
    pub name: Name,
    pub parent: Name,
    pub attributes: Vec<Param>,
    pub span: Span,
}

impl ClassDecl {
    pub fn new(name: &str, parent: Option<&str>) -> Self {
        ClassDecl {
            name: name.into(),
            parent: parent.unwrap_or(TOP_CLASS).into(),
            attributes: Vec::new(),
            span: Span::default(),
        }
    }
}

/// A declared function, predicate or (for non-function types) constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunDecl {
    pub name: Name,
    pub ty: LType,
    pub span: Span,
}

impl FunDecl {
    pub fn new(name: impl Into<Name>, ty: LType) -> Self {
        FunDecl { name: name.into(), ty, span: Span::default() }
    }
}

/// A finite enumerated type. Used for the rule-name types introduced by
/// predicate lifting; elements are distinct constants and exhaust the type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnumDecl {
    pub name: Name,
    pub elements: Vec<Name>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AssertMode {
    Valid,
    Satisfiable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RuleSetAdjustment {
    pub add: Vec<Name>,
    pub delete: Vec<Name>,
}

impl RuleSetAdjustment {
    pub fn is_empty(&self) -> bool {
        self.add.is_empty() && self.delete.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assertion {
    pub name: Name,
    pub mode: AssertMode,
    pub adjust: RuleSetAdjustment,
    pub formula: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleModule {
    pub classes: Vec<ClassDecl>,
    pub enums: Vec<EnumDecl>,
    pub decls: Vec<FunDecl>,
    /// Zero-argument declared constants such as `instCar`.
    pub globals: Vec<FunDecl>,
    pub rules: Vec<Rule>,
    pub assertions: Vec<Assertion>,
}

impl RuleModule {
    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name.as_str() == name)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name.as_str() == name)
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name.as_str() == name)
    }

    pub fn decl(&self, name: &str) -> Option<&FunDecl> {
        self.decls.iter().chain(self.globals.iter()).find(|d| d.name.as_str() == name)
    }
}
