//! Recursive-descent parser producing a [`RuleModule`].
//!
//! Expression precedence, loosest first: `-->` (right associative), `||`,
//! `&&`, comparisons (non-associative), `not`, application, field access.
//! Quantifiers, lambdas and `if .. then .. else` extend as far right as
//! possible.

use crate::error::ParseError;
use crate::lexer::{tokenize, Tok, Token};
use crate::syntax::*;

pub fn parse_module(src: &str) -> Result<RuleModule, ParseError> {
    let mut p = Parser::new(src)?;
    let mut m = RuleModule::default();
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Kw("class") => m.classes.push(p.class_decl()?),
            Tok::Kw("enum") => m.enums.push(p.enum_decl()?),
            Tok::Kw("decl") => {
                let d = p.fun_decl()?;
                if d.ty.is_function() {
                    m.decls.push(d);
                } else {
                    m.globals.push(d);
                }
            }
            Tok::Kw("rule") => m.rules.push(p.rule()?),
            Tok::Kw("fact") => m.rules.push(p.fact()?),
            Tok::Kw("assert") => m.assertions.push(p.assertion()?),
            _ => return Err(p.unexpected(&["`class`", "`enum`", "`decl`", "`rule`", "`fact`", "`assert`"])),
        }
    }
    Ok(m)
}

/// Parses a standalone expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_type(src: &str) -> Result<LType, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Opening positions of annotation braces, innermost last.
    annotation_stack: Vec<Span>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, annotation_stack: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        if matches!(self.peek(), Tok::Eof) {
            if let Some(open) = self.annotation_stack.first() {
                return ParseError::UnterminatedAnnotation { span: *open };
            }
        }
        ParseError::Unexpected {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Kw(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, s: &str) -> bool {
        if self.is_kw(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<Span, ParseError> {
        if self.is_sym(s) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&format!("`{s}`")]))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<Span, ParseError> {
        if self.is_kw(s) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&format!("`{s}`")]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let n = Name::from(s.as_str());
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    /// Accepts a specific contextual word (e.g. `subjectTo`) given as an identifier.
    fn word(&mut self, w: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == w => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&[&format!("`{w}`")])),
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    // ---- declarations ----

    fn class_decl(&mut self) -> Result<ClassDecl, ParseError> {
        let span = self.expect_kw("class")?;
        let name = self.ident()?;
        let parent = if self.eat_kw("extends") { self.ident()? } else { Name::from(TOP_CLASS) };
        let mut attributes = Vec::new();
        if self.eat_sym("{") {
            while !self.is_sym("}") {
                let n = self.ident()?;
                self.expect_sym(":")?;
                let t = self.ty()?;
                attributes.push(Param::new(n, t));
                self.eat_sym(",");
            }
            self.expect_sym("}")?;
        }
        Ok(ClassDecl { name, parent, attributes, span })
    }

    fn enum_decl(&mut self) -> Result<EnumDecl, ParseError> {
        let span = self.expect_kw("enum")?;
        let name = self.ident()?;
        self.expect_sym("{")?;
        let mut elements = Vec::new();
        while !self.is_sym("}") {
            elements.push(self.ident()?);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym("}")?;
        Ok(EnumDecl { name, elements, span })
    }

    fn fun_decl(&mut self) -> Result<FunDecl, ParseError> {
        let span = self.expect_kw("decl")?;
        let name = self.ident()?;
        self.expect_sym(":")?;
        let ty = self.ty()?;
        Ok(FunDecl { name, ty, span })
    }

    fn ty(&mut self) -> Result<LType, ParseError> {
        let dom = self.atomic_ty()?;
        if self.eat_sym("->") {
            Ok(LType::func(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn atomic_ty(&mut self) -> Result<LType, ParseError> {
        if self.eat_sym("(") {
            if self.eat_sym(")") {
                return Ok(LType::Tuple(Vec::new()));
            }
            let first = self.ty()?;
            if self.eat_sym(")") {
                return Ok(first);
            }
            let mut parts = vec![first];
            while self.eat_sym(",") {
                parts.push(self.ty()?);
            }
            self.expect_sym(")")?;
            return Ok(LType::Tuple(parts));
        }
        match self.peek() {
            Tok::Ident(s) => {
                let t = LType::builtin(s).unwrap_or_else(|| LType::class(s));
                self.bump();
                Ok(t)
            }
            _ => Err(self.unexpected(&["type"])),
        }
    }

    // ---- rules ----

    fn rule_name(&mut self) -> Result<Name, ParseError> {
        self.expect_sym("<")?;
        let n = self.ident()?;
        self.expect_sym(">")?;
        Ok(n)
    }

    /// `for x: T, y: U` with optional commas between bindings.
    fn params(&mut self) -> Result<Vec<Param>, ParseError> {
        let mut ps = Vec::new();
        loop {
            let n = self.ident()?;
            self.expect_sym(":")?;
            let t = self.ty()?;
            ps.push(Param::new(n, t));
            let comma = self.is_sym(",");
            let k = usize::from(comma);
            let continues = matches!(self.peek_at(k), Tok::Ident(_)) && matches!(self.peek_at(k + 1), Tok::Sym(":"));
            if !continues {
                break;
            }
            if comma {
                self.bump();
            }
        }
        Ok(ps)
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let span = self.expect_kw("rule")?;
        let name = self.rule_name()?;
        let annotation = if self.is_sym("{") { Some(self.rule_annotation()?) } else { None };
        let derived = matches!(annotation, Some(RuleAnnotation::Derived(_)));
        if derived && !self.is_kw("for") && !self.is_kw("if") {
            let mut r = Rule::new(name, Vec::new(), Expr::bool(true), Expr::bool(true));
            r.annotation = annotation;
            r.span = span;
            return Ok(r);
        }
        let params = if self.eat_kw("for") { self.params()? } else { Vec::new() };
        self.expect_kw("if")?;
        let precond = self.expr()?;
        self.expect_kw("then")?;
        let postcond = self.expr()?;
        Ok(Rule { name, annotation, params, precond, postcond, span })
    }

    fn fact(&mut self) -> Result<Rule, ParseError> {
        let span = self.expect_kw("fact")?;
        let name = self.rule_name()?;
        let annotation = if self.is_sym("{") { Some(self.rule_annotation()?) } else { None };
        let params = if self.eat_kw("for") { self.params()? } else { Vec::new() };
        let postcond = self.expr()?;
        Ok(Rule { name, annotation, params, precond: Expr::bool(true), postcond, span })
    }

    fn open_annotation(&mut self) -> Result<(), ParseError> {
        let sp = self.expect_sym("{")?;
        self.annotation_stack.push(sp);
        Ok(())
    }

    fn close_annotation(&mut self) -> Result<(), ParseError> {
        self.expect_sym("}")?;
        self.annotation_stack.pop();
        Ok(())
    }

    fn rule_annotation(&mut self) -> Result<RuleAnnotation, ParseError> {
        let outer = self.span();
        self.open_annotation()?;
        let mut found: Vec<RuleAnnotation> = Vec::new();
        while !self.is_sym("}") {
            let key_span = self.span();
            let key = match self.peek() {
                Tok::Ident(s) => s.clone(),
                _ => return Err(self.unexpected(&["annotation key"])),
            };
            self.bump();
            let ann = match key.as_str() {
                "restrict" => {
                    self.expect_sym(":")?;
                    self.open_annotation()?;
                    let (s, d) = self.restrict_body()?;
                    self.close_annotation()?;
                    RuleAnnotation::Restrict { subject_to: s, despite: d }
                }
                "subjectTo" | "despite" => {
                    // shorthand `{subjectTo: r1}`: back up and read the entries directly
                    self.pos -= 1;
                    let (s, d) = self.restrict_body()?;
                    RuleAnnotation::Restrict { subject_to: s, despite: d }
                }
                "source" => RuleAnnotation::Source,
                "system" => RuleAnnotation::System,
                "derived" => {
                    self.expect_sym(":")?;
                    self.open_annotation()?;
                    self.word("apply")?;
                    self.expect_sym(":")?;
                    self.open_annotation()?;
                    let t = self.transform_expr()?;
                    self.close_annotation()?;
                    self.close_annotation()?;
                    RuleAnnotation::Derived(t)
                }
                other => {
                    return Err(ParseError::Invalid {
                        span: key_span,
                        msg: format!("unknown rule annotation `{other}`"),
                    })
                }
            };
            found.push(ann);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.close_annotation()?;
        match found.len() {
            0 => Ok(RuleAnnotation::Restrict { subject_to: Vec::new(), despite: Vec::new() }),
            1 => Ok(found.pop().unwrap()),
            _ => Err(ParseError::Invalid { span: outer, msg: "a rule may carry only one annotation kind".to_string() }),
        }
    }

    /// Entries `subjectTo: ..` / `despite: ..`, comma separated, up to `}`.
    fn restrict_body(&mut self) -> Result<(Vec<Name>, Vec<Name>), ParseError> {
        let mut subject_to = Vec::new();
        let mut despite = Vec::new();
        while !self.is_sym("}") {
            if self.is_word("subjectTo") {
                self.bump();
                self.expect_sym(":")?;
                subject_to.extend(self.name_list()?);
            } else if self.is_word("despite") {
                self.bump();
                self.expect_sym(":")?;
                despite.extend(self.name_list()?);
            } else {
                return Err(self.unexpected(&["`subjectTo`", "`despite`"]));
            }
            if !self.eat_sym(",") {
                break;
            }
        }
        Ok((subject_to, despite))
    }

    /// A single name or a bracketed, comma-separated list.
    fn name_list(&mut self) -> Result<Vec<Name>, ParseError> {
        if self.eat_sym("[") {
            let mut v = Vec::new();
            while !self.is_sym("]") {
                v.push(self.ident()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym("]")?;
            Ok(v)
        } else {
            Ok(vec![self.ident()?])
        }
    }

    fn transform_expr(&mut self) -> Result<TransformExpr, ParseError> {
        if self.is_word("restrictSubjectTo") {
            self.bump();
            let target = self.ident()?;
            let overriders = if self.is_sym("[") {
                self.name_list()?
            } else {
                let mut v = Vec::new();
                while let Tok::Ident(_) = self.peek() {
                    v.push(self.ident()?);
                }
                v
            };
            Ok(TransformExpr::RestrictSubjectTo { target, overriders })
        } else if self.is_word("remap") {
            self.bump();
            let target = self.ident()?;
            self.expect_sym("[")?;
            let params = if self.is_sym("]") { Vec::new() } else { self.params()? };
            self.expect_sym("]")?;
            self.expect_sym("[")?;
            let mut subst = Vec::new();
            while !self.is_sym("]") {
                let v = self.ident()?;
                self.expect_sym(":=")?;
                subst.push((v, self.expr()?));
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym("]")?;
            Ok(TransformExpr::Remap { target, params, subst })
        } else {
            Err(self.unexpected(&["`restrictSubjectTo`", "`remap`"]))
        }
    }

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        let span = self.expect_kw("assert")?;
        let name = self.rule_name()?;
        let mut mode = AssertMode::Valid;
        let mut adjust = RuleSetAdjustment::default();
        if self.is_sym("{") {
            self.open_annotation()?;
            while !self.is_sym("}") {
                let key_span = self.span();
                if self.is_word("SMT") {
                    self.bump();
                    self.expect_sym(":")?;
                    self.open_annotation()?;
                    let msp = self.span();
                    mode = match self.peek() {
                        Tok::Ident(s) if s == "valid" => AssertMode::Valid,
                        Tok::Ident(s) if s == "satisfiable" => AssertMode::Satisfiable,
                        Tok::Ident(s) => {
                            return Err(ParseError::Invalid {
                                span: msp,
                                msg: format!("unknown SMT checking mode `{s}`"),
                            })
                        }
                        _ => return Err(self.unexpected(&["`valid`", "`satisfiable`"])),
                    };
                    self.bump();
                    self.close_annotation()?;
                } else if self.is_word("rules") {
                    self.bump();
                    self.expect_sym(":")?;
                    self.open_annotation()?;
                    while !self.is_sym("}") {
                        if self.is_word("add") {
                            self.bump();
                            self.expect_sym(":")?;
                            adjust.add.extend(self.name_list()?);
                        } else if self.is_word("delete") {
                            self.bump();
                            self.expect_sym(":")?;
                            adjust.delete.extend(self.name_list()?);
                        } else {
                            return Err(self.unexpected(&["`add`", "`delete`"]));
                        }
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                    self.close_annotation()?;
                } else if let Tok::Ident(k) = self.peek() {
                    return Err(ParseError::Invalid {
                        span: key_span,
                        msg: format!("unknown assertion annotation `{k}`"),
                    });
                } else {
                    return Err(self.unexpected(&["`SMT`", "`rules`"]));
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.close_annotation()?;
        }
        let formula = self.expr()?;
        Ok(Assertion { name, mode, adjust, formula, span })
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.or_expr()?;
        if self.is_sym("-->") {
            let sp = self.bump().span;
            let rhs = self.expr()?;
            return Ok(Expr::new(ExprKind::Implies(Box::new(lhs), Box::new(rhs)), sp));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.is_sym("||") || self.is_kw("or") {
            let sp = self.bump().span;
            let rhs = self.and_expr()?;
            lhs = Expr::new(ExprKind::Or(Box::new(lhs), Box::new(rhs)), sp);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.cmp_expr()?;
        while self.is_sym("&&") || self.is_kw("and") {
            let sp = self.bump().span;
            let rhs = self.cmp_expr()?;
            lhs = Expr::new(ExprKind::And(Box::new(lhs), Box::new(rhs)), sp);
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.unary()?;
        let op = match self.peek() {
            Tok::Sym("==") => None,
            Tok::Sym("<") => Some(CmpOp::Lt),
            Tok::Sym("<=") => Some(CmpOp::Le),
            Tok::Sym(">") => Some(CmpOp::Gt),
            Tok::Sym(">=") => Some(CmpOp::Ge),
            _ => return Ok(lhs),
        };
        let sp = self.bump().span;
        let rhs = self.unary()?;
        let kind = match op {
            None => ExprKind::Eq(Box::new(lhs), Box::new(rhs)),
            Some(op) => ExprKind::Cmp(op, Box::new(lhs), Box::new(rhs)),
        };
        Ok(Expr::new(kind, sp))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let sp = self.span();
        if self.eat_kw("not") {
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Not(Box::new(e)), sp));
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            let universal = self.is_kw("forall");
            self.bump();
            let v = self.ident()?;
            self.expect_sym(":")?;
            let t = self.ty()?;
            self.expect_sym(".")?;
            let body = Box::new(self.expr()?);
            let kind = if universal { ExprKind::Forall(v, t, body) } else { ExprKind::Exists(v, t, body) };
            return Ok(Expr::new(kind, sp));
        }
        if self.eat_sym("\\") {
            let v = self.ident()?;
            self.expect_sym(":")?;
            let t = self.atomic_ty()?;
            self.expect_sym("->")?;
            let body = self.expr()?;
            return Ok(Expr::new(ExprKind::Lambda(v, t, Box::new(body)), sp));
        }
        if self.eat_kw("if") {
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.expr()?;
            self.expect_kw("else")?;
            let e = self.expr()?;
            return Ok(Expr::new(ExprKind::Ite(Box::new(c), Box::new(t), Box::new(e)), sp));
        }
        self.application()
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Int(_)
                | Tok::Float(_)
                | Tok::Str(_)
                | Tok::Kw("true")
                | Tok::Kw("false")
                | Tok::Sym("(")
        )
    }

    fn application(&mut self) -> Result<Expr, ParseError> {
        let mut f = self.postfix()?;
        while self.starts_atom() {
            let sp = self.span();
            let a = self.postfix()?;
            f = Expr::new(ExprKind::App(Box::new(f), Box::new(a)), sp);
        }
        Ok(f)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.is_sym(".") {
            let sp = self.bump().span;
            let field = self.ident()?;
            e = Expr::new(ExprKind::Field(Box::new(e), field), sp);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let sp = self.span();
        let kind = match self.peek().clone() {
            Tok::Ident(s) => ExprKind::Var(Name::from(s)),
            Tok::Int(i) => ExprKind::Int(i),
            Tok::Float(x) => ExprKind::Float(FloatLit(x)),
            Tok::Str(s) => ExprKind::Str(s),
            Tok::Kw("true") => ExprKind::Bool(true),
            Tok::Kw("false") => ExprKind::Bool(false),
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                return Ok(e);
            }
            _ => return Err(self.unexpected(&["expression"])),
        };
        self.bump();
        Ok(Expr::new(kind, sp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_not_over_cmp_over_and() {
        let e = parse_expr("not a == b && c || d --> e --> f").unwrap();
        let a_eq = Expr::eq(Expr::not(Expr::var("a")), Expr::var("b"));
        let lhs = Expr::or(Expr::and(a_eq, Expr::var("c")), Expr::var("d"));
        let want = Expr::implies(lhs, Expr::implies(Expr::var("e"), Expr::var("f")));
        assert_eq!(e, want);
    }

    #[test]
    fn application_binds_tighter_than_not() {
        let e = parse_expr("not maxSp⁺ maxSpCarWorkday v d r 90").unwrap();
        let app =
            Expr::call("maxSp⁺", ["maxSpCarWorkday", "v", "d", "r"].map(Expr::var).into_iter().chain([Expr::int(90)]));
        assert_eq!(e, Expr::not(app));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let e = parse_expr("forall x: Integer. P x && Q x").unwrap();
        assert!(matches!(e.kind, ExprKind::Forall(..)));
    }

    #[test]
    fn word_connectives() {
        assert_eq!(parse_expr("a and not b").unwrap(), parse_expr("a && not b").unwrap());
    }

    #[test]
    fn curried_function_types_associate_right() {
        let t = parse_type("A -> B -> C").unwrap();
        assert_eq!(t, LType::func(LType::class("A"), LType::func(LType::class("B"), LType::class("C"))));
        let t = parse_type("(A -> B) -> C").unwrap();
        assert_eq!(t, LType::func(LType::func(LType::class("A"), LType::class("B")), LType::class("C")));
    }

    #[test]
    fn params_without_commas() {
        let m = parse_module("rule <r> for x: A y: B if P x then Q y").unwrap();
        assert_eq!(m.rules[0].params.len(), 2);
    }

    #[test]
    fn unterminated_annotation() {
        let err = parse_module("rule <r> {restrict: {subjectTo: a").unwrap_err();
        assert!(matches!(err, ParseError::UnterminatedAnnotation { .. }), "{err}");
    }

    #[test]
    fn multiple_annotation_kinds_rejected() {
        assert!(parse_module("rule <r> {source, system} if a then b").is_err());
    }

    #[test]
    fn error_reports_position_and_expectation() {
        match parse_module("rule <r> if a b").unwrap_err() {
            ParseError::Unexpected { span, expected, .. } => {
                assert_eq!(span.pos(), (1, 16));
                assert_eq!(expected, vec!["`then`".to_string()]);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn header_only_derived_rule() {
        let m =
            parse_module("rule <w> {derived: {apply: {restrictSubjectTo w'Orig h}}}\nrule <h> if a then b").unwrap();
        assert_eq!(
            m.rules[0].derivation(),
            Some(&TransformExpr::RestrictSubjectTo { target: "w'Orig".into(), overriders: vec!["h".into()] })
        );
        assert!(m.rules[0].has_trivial_body());
    }
}
