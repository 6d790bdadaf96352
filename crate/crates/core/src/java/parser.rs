//! Declaration-level parser over the token stream.
//!
//! Method and initializer bodies are not parsed into statements; the parser
//! records their token ranges and any local class declarations inside them.
//! Statement-level facts are recovered by [`super::body`].

use std::fmt;

use super::lexer::{is_primitive, Token};
use crate::model::NodeKind;

/// Half-open token range `[start, end)`.
pub type Span = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line + 1, self.col + 1, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CompilationUnit {
    pub package: String,
    pub imports: Vec<Import>,
    pub types: Vec<TypeDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    /// Dotted path without the trailing `.*`.
    pub path: String,
    pub is_static: bool,
    pub wildcard: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRef {
    /// Dotted segments as written, e.g. `["Map", "Entry"]`.
    pub segments: Vec<String>,
    pub args: Vec<TypeRef>,
    pub dims: u32,
    /// Token index of the first segment.
    pub tok: usize,
}

impl TypeRef {
    pub fn is_primitive(&self) -> bool {
        self.segments.len() == 1 && is_primitive(&self.segments[0])
    }

    pub fn is_var(&self) -> bool {
        self.segments.len() == 1 && self.segments[0] == "var" && self.args.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct TypeParam {
    pub name: String,
    pub tok: usize,
}

#[derive(Debug, Clone)]
pub struct TypeDecl {
    pub kind: NodeKind,
    pub name: String,
    pub name_tok: usize,
    /// From the first modifier to the closing brace, inclusive.
    pub span: Span,
    pub type_params: Vec<TypeParam>,
    pub supers: Vec<TypeRef>,
    /// `extends` clause of a class, used for `super` receivers.
    pub superclass: Option<TypeRef>,
    pub members: Vec<Member>,
    pub enum_constants: Vec<EnumConstant>,
}

#[derive(Debug, Clone)]
pub enum Member {
    Field(FieldDecl),
    Method(MethodDecl),
    Type(TypeDecl),
    Initializer(Body),
}

#[derive(Debug, Clone)]
pub struct FieldDecl {
    pub ty: TypeRef,
    pub vars: Vec<FieldVar>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct FieldVar {
    pub name: String,
    pub tok: usize,
    pub dims: u32,
    pub init: Option<Body>,
}

#[derive(Debug, Clone)]
pub struct MethodDecl {
    pub name: String,
    pub name_tok: usize,
    pub is_ctor: bool,
    pub type_params: Vec<TypeParam>,
    pub ret: Option<TypeRef>,
    pub params: Vec<Param>,
    pub varargs: bool,
    pub body: Option<Body>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct Param {
    pub ty: TypeRef,
    pub name: String,
    pub tok: usize,
}

#[derive(Debug, Clone)]
pub struct EnumConstant {
    pub name: String,
    pub tok: usize,
    pub span: Span,
    pub args: Option<Body>,
    pub body: Vec<Member>,
}

/// Token range of a body or expression plus the local classes declared in it.
#[derive(Debug, Clone, Default)]
pub struct Body {
    pub span: Span,
    pub local_types: Vec<TypeDecl>,
}

const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "abstract", "final", "native", "synchronized", "transient",
    "volatile", "strictfp", "default", "sealed",
];

pub struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

pub fn parse(toks: &[Token]) -> PResult<CompilationUnit> {
    Parser::new(toks).compilation_unit()
}

/// Parses a class body whose `{` is at `open`; used for anonymous classes.
pub fn parse_class_body_at(toks: &[Token], open: usize) -> PResult<(Vec<Member>, usize)> {
    let mut p = Parser::new(toks);
    p.pos = open;
    let members = p.class_body("")?;
    Ok((members, p.pos))
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Parser { toks, pos: 0 }
    }

    pub fn seek(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    fn at(&self, s: &str) -> bool {
        self.peek_at(0).is_some_and(|t| t.is(s))
    }

    fn at_k(&self, k: usize, s: &str) -> bool {
        self.peek_at(k).is_some_and(|t| t.is(s))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (0, 0),
        };
        ParseError { line, col, message: message.into() }
    }

    fn expect(&mut self, s: &str) -> PResult<usize> {
        if self.at(s) {
            self.pos += 1;
            Ok(self.pos - 1)
        } else {
            let found = self.peek_at(0).map_or("end of file".to_string(), |t| format!("`{}`", t.text));
            Err(self.error(format!("expected `{s}`, found {found}")))
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> PResult<(String, usize)> {
        match self.peek_at(0) {
            Some(t) if t.is_name() => {
                self.pos += 1;
                Ok((t.text.clone(), self.pos - 1))
            }
            Some(t) => Err(self.error(format!("expected identifier, found `{}`", t.text))),
            None => Err(self.error("expected identifier, found end of file")),
        }
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut s = self.name()?.0;
        while self.at(".") && self.peek_at(1).is_some_and(|t| t.is_name()) {
            self.pos += 1;
            s.push('.');
            s.push_str(&self.name()?.0);
        }
        Ok(s)
    }

    /// Index of the token closing the bracket at `open`.
    fn matching(&self, open: usize) -> PResult<usize> {
        let (o, c) = match self.toks[open].text.as_str() {
            "(" => ("(", ")"),
            "{" => ("{", "}"),
            "[" => ("[", "]"),
            _ => return Err(self.error("not a bracket")),
        };
        let mut depth = 0usize;
        for (i, t) in self.toks.iter().enumerate().skip(open) {
            if t.is(o) {
                depth += 1;
            } else if t.is(c) {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
        }
        let t = &self.toks[open];
        Err(ParseError { line: t.line, col: t.col, message: format!("unclosed `{o}`") })
    }

    fn skip_balanced(&mut self) -> PResult<()> {
        self.pos = self.matching(self.pos)? + 1;
        Ok(())
    }

    fn compilation_unit(&mut self) -> PResult<CompilationUnit> {
        let mut cu = CompilationUnit::default();
        let save = self.pos;
        self.annotations()?;
        if self.eat("package") {
            cu.package = self.qualified_name()?;
            self.expect(";")?;
        } else {
            self.pos = save;
        }
        while self.at("import") {
            self.pos += 1;
            let is_static = self.eat("static");
            let path = self.qualified_name()?;
            let wildcard = self.at(".") && self.at_k(1, "*");
            if wildcard {
                self.pos += 2;
            }
            self.expect(";")?;
            cu.imports.push(Import { path, is_static, wildcard });
        }
        while self.pos < self.toks.len() {
            if self.eat(";") {
                continue;
            }
            // module-info is not a type declaration
            if self.at("module") || (self.at("open") && self.at_k(1, "module")) {
                self.pos = self.toks.len();
                break;
            }
            cu.types.push(self.type_decl()?);
        }
        Ok(cu)
    }

    fn annotations(&mut self) -> PResult<()> {
        while self.at("@") && !self.at_k(1, "interface") {
            self.pos += 1;
            self.qualified_name()?;
            if self.at("(") {
                self.skip_balanced()?;
            }
        }
        Ok(())
    }

    fn modifiers(&mut self) -> PResult<()> {
        loop {
            self.annotations()?;
            if self.peek_at(0).is_some_and(|t| MODIFIERS.iter().any(|m| t.is(m))) {
                // `default` is a modifier only in front of a member
                if self.at("default") && (self.at_k(1, ":") || self.at_k(1, "->")) {
                    return Ok(());
                }
                self.pos += 1;
            } else if self.at("non") && self.at_k(1, "-") && self.at_k(2, "sealed") {
                self.pos += 3;
            } else {
                return Ok(());
            }
        }
    }

    fn at_type_keyword(&self) -> bool {
        self.at("class")
            || self.at("interface")
            || self.at("enum")
            || (self.at("@") && self.at_k(1, "interface"))
            || (self.at("record") && self.peek_at(1).is_some_and(|t| t.is_name()) && self.at_k(2, "(")
                || self.at("record") && self.peek_at(1).is_some_and(|t| t.is_name()) && self.at_k(2, "<"))
    }

    /// Type declaration starting at the current position (modifiers included).
    pub fn type_decl(&mut self) -> PResult<TypeDecl> {
        let start = self.pos;
        self.modifiers()?;
        let kind = if self.eat("class") {
            NodeKind::Class
        } else if self.eat("interface") {
            NodeKind::Interface
        } else if self.eat("enum") {
            NodeKind::Enum
        } else if self.at("@") && self.at_k(1, "interface") {
            self.pos += 2;
            NodeKind::Interface
        } else if self.at("record") {
            self.pos += 1;
            NodeKind::Class
        } else {
            return Err(self.error("expected a type declaration"));
        };
        let is_record = self.toks[self.pos - 1].is("record");
        let (name, name_tok) = self.name()?;
        let type_params = self.type_params()?;
        let mut record_fields = Vec::new();
        if is_record {
            let open = self.expect("(")?;
            let close = self.matching(open)?;
            while self.pos < close {
                self.annotations()?;
                let ty = self.type_ref()?;
                self.eat("...");
                let (n, tok) = self.name()?;
                record_fields.push(Member::Field(FieldDecl {
                    ty,
                    vars: vec![FieldVar { name: n, tok, dims: 0, init: None }],
                    span: (tok, tok + 1),
                }));
                if !self.eat(",") {
                    break;
                }
            }
            self.pos = close + 1;
        }
        let mut supers = Vec::new();
        let mut superclass = None;
        loop {
            if self.eat("extends") {
                let list = self.type_list()?;
                if kind == NodeKind::Class {
                    superclass = list.first().cloned();
                }
                supers.extend(list);
            } else if self.eat("implements") {
                supers.extend(self.type_list()?);
            } else if self.eat("permits") {
                self.type_list()?;
            } else {
                break;
            }
        }
        let mut enum_constants = Vec::new();
        if !self.at("{") {
            return Err(self.error("expected `{` to open the type body"));
        }
        let members = if kind == NodeKind::Enum {
            self.pos += 1;
            enum_constants = self.enum_constants()?;
            let mut m = Vec::new();
            if self.eat(";") {
                m = self.members_until_close(&name)?;
            } else {
                self.expect("}")?;
            }
            m
        } else {
            self.class_body(&name)?
        };
        let mut all = record_fields;
        all.extend(members);
        Ok(TypeDecl {
            kind,
            name,
            name_tok,
            span: (start, self.pos),
            type_params,
            supers,
            superclass,
            members: all,
            enum_constants,
        })
    }

    fn enum_constants(&mut self) -> PResult<Vec<EnumConstant>> {
        let mut out = Vec::new();
        loop {
            self.annotations()?;
            if self.at(";") || self.at("}") {
                return Ok(out);
            }
            let (name, tok) = self.name()?;
            let args = if self.at("(") {
                let open = self.pos;
                let close = self.matching(open)?;
                self.pos = close + 1;
                Some(self.body_over((open, close + 1))?)
            } else {
                None
            };
            let body = if self.at("{") { self.class_body("")? } else { Vec::new() };
            out.push(EnumConstant { name, tok, span: (tok, self.pos), args, body });
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn type_params(&mut self) -> PResult<Vec<TypeParam>> {
        let mut out = Vec::new();
        if !self.eat("<") {
            return Ok(out);
        }
        loop {
            self.annotations()?;
            let (name, tok) = self.name()?;
            out.push(TypeParam { name, tok });
            if self.eat("extends") {
                self.type_ref()?;
                while self.eat("&") {
                    self.type_ref()?;
                }
            }
            if self.eat(">") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn type_list(&mut self) -> PResult<Vec<TypeRef>> {
        let mut out = vec![self.type_ref()?];
        while self.eat(",") {
            out.push(self.type_ref()?);
        }
        Ok(out)
    }

    /// `Ann* (primitive | Name(.Name)*) TypeArgs? (. Name TypeArgs?)* ([])*`
    pub fn type_ref(&mut self) -> PResult<TypeRef> {
        self.annotations()?;
        let tok = self.pos;
        let first = match self.peek_at(0) {
            Some(t) if t.is_name() || is_primitive(&t.text) => t.text.clone(),
            Some(t) => return Err(self.error(format!("expected a type, found `{}`", t.text))),
            None => return Err(self.error("expected a type, found end of file")),
        };
        self.pos += 1;
        let mut segments = vec![first];
        let mut args = Vec::new();
        if !is_primitive(&segments[0]) {
            loop {
                if self.at("<") {
                    args.extend(self.type_args()?);
                }
                if self.at(".") && self.peek_at(1).is_some_and(|t| t.is_name()) {
                    self.pos += 1;
                    self.annotations()?;
                    segments.push(self.name()?.0);
                } else {
                    break;
                }
            }
        }
        let mut dims = 0;
        loop {
            self.annotations()?;
            if self.at("[") && self.at_k(1, "]") {
                self.pos += 2;
                dims += 1;
            } else {
                break;
            }
        }
        Ok(TypeRef { segments, args, dims, tok })
    }

    fn type_args(&mut self) -> PResult<Vec<TypeRef>> {
        self.expect("<")?;
        let mut out = Vec::new();
        if self.eat(">") {
            return Ok(out);
        }
        loop {
            self.annotations()?;
            if self.eat("?") {
                if self.eat("extends") || self.eat("super") {
                    out.push(self.type_ref()?);
                }
            } else {
                out.push(self.type_ref()?);
            }
            if self.eat(">") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn class_body(&mut self, type_name: &str) -> PResult<Vec<Member>> {
        self.expect("{")?;
        self.members_until_close(type_name)
    }

    fn members_until_close(&mut self, type_name: &str) -> PResult<Vec<Member>> {
        let mut out = Vec::new();
        loop {
            if self.pos >= self.toks.len() {
                return Err(self.error("unexpected end of file in type body"));
            }
            if self.eat("}") {
                return Ok(out);
            }
            if self.eat(";") {
                continue;
            }
            out.push(self.member(type_name)?);
        }
    }

    fn member(&mut self, type_name: &str) -> PResult<Member> {
        let start = self.pos;
        // initializer blocks
        if self.at("{") || (self.at("static") && self.at_k(1, "{")) {
            self.eat("static");
            let open = self.pos;
            let close = self.matching(open)?;
            self.pos = close + 1;
            return Ok(Member::Initializer(self.body_over((open, close + 1))?));
        }
        self.modifiers()?;
        if self.at_type_keyword() {
            self.pos = start;
            return Ok(Member::Type(self.type_decl()?));
        }
        let type_params = self.type_params()?;
        self.annotations()?;
        // constructor, including the compact form of records
        if self.peek_at(0).is_some_and(|t| t.is(type_name)) && (self.at_k(1, "(") || self.at_k(1, "{")) {
            let (name, name_tok) = self.name()?;
            let (params, varargs) = if self.at("(") { self.params()? } else { (Vec::new(), false) };
            self.throws()?;
            let body = self.method_body()?;
            return Ok(Member::Method(MethodDecl {
                name,
                name_tok,
                is_ctor: true,
                type_params,
                ret: None,
                params,
                varargs,
                body,
                span: (start, self.pos),
            }));
        }
        let ty = self.type_ref()?;
        let (name, name_tok) = self.name()?;
        if self.at("(") {
            let (params, varargs) = self.params()?;
            while self.at("[") && self.at_k(1, "]") {
                self.pos += 2;
            }
            self.throws()?;
            if self.eat("default") {
                self.skip_to_semicolon()?;
                self.pos -= 1;
            }
            let body = self.method_body()?;
            return Ok(Member::Method(MethodDecl {
                name,
                name_tok,
                is_ctor: false,
                type_params,
                ret: Some(ty),
                params,
                varargs,
                body,
                span: (start, self.pos),
            }));
        }
        let mut vars = Vec::new();
        let (mut name, mut tok) = (name, name_tok);
        loop {
            let mut dims = 0;
            while self.at("[") && self.at_k(1, "]") {
                self.pos += 2;
                dims += 1;
            }
            let init = if self.eat("=") { Some(self.initializer()?) } else { None };
            vars.push(FieldVar { name, tok, dims, init });
            if self.eat(";") {
                break;
            }
            self.expect(",")?;
            (name, tok) = self.name()?;
        }
        Ok(Member::Field(FieldDecl { ty, vars, span: (start, self.pos) }))
    }

    fn throws(&mut self) -> PResult<()> {
        if self.eat("throws") {
            self.type_list()?;
        }
        Ok(())
    }

    fn skip_to_semicolon(&mut self) -> PResult<()> {
        while self.pos < self.toks.len() {
            if self.at("(") || self.at("{") || self.at("[") {
                self.skip_balanced()?;
            } else if self.eat(";") {
                return Ok(());
            } else {
                self.pos += 1;
            }
        }
        Err(self.error("expected `;`"))
    }

    fn method_body(&mut self) -> PResult<Option<Body>> {
        if self.eat(";") {
            return Ok(None);
        }
        if !self.at("{") {
            return Err(self.error("expected a method body or `;`"));
        }
        let open = self.pos;
        let close = self.matching(open)?;
        self.pos = close + 1;
        Ok(Some(self.body_over((open, close + 1))?))
    }

    /// Variable initializer: up to a top-level `,` that starts another
    /// declarator, or the terminating `;`.
    fn initializer(&mut self) -> PResult<Body> {
        let start = self.pos;
        while self.pos < self.toks.len() {
            if self.at("(") || self.at("{") || self.at("[") {
                self.skip_balanced()?;
                continue;
            }
            if self.at(";") {
                break;
            }
            if self.at(",")
                && self.peek_at(1).is_some_and(|t| t.is_name())
                && (self.at_k(2, "=") || self.at_k(2, ",") || self.at_k(2, ";") || self.at_k(2, "["))
            {
                break;
            }
            if self.at("}") || self.at(")") {
                return Err(self.error("unbalanced initializer"));
            }
            self.pos += 1;
        }
        self.body_over((start, self.pos))
    }

    fn params(&mut self) -> PResult<(Vec<Param>, bool)> {
        self.expect("(")?;
        let mut out = Vec::new();
        let mut varargs = false;
        if self.eat(")") {
            return Ok((out, false));
        }
        loop {
            self.modifiers()?;
            let mut ty = self.type_ref()?;
            if self.eat("...") {
                varargs = true;
                ty.dims += 1;
            }
            // receiver parameter `Foo this`
            if self.at("this") {
                self.pos += 1;
            } else {
                let (name, tok) = self.name()?;
                while self.at("[") && self.at_k(1, "]") {
                    self.pos += 2;
                    ty.dims += 1;
                }
                out.push(Param { ty, name, tok });
            }
            if self.eat(")") {
                return Ok((out, varargs));
            }
            self.expect(",")?;
        }
    }

    /// Records `span` and parses local class declarations inside it.
    fn body_over(&mut self, span: Span) -> PResult<Body> {
        let save = self.pos;
        let mut local_types = Vec::new();
        let mut i = span.0;
        while i < span.1 {
            let t = &self.toks[i];
            let prev_dot = i > 0 && (self.toks[i - 1].is(".") || self.toks[i - 1].is("::"));
            let is_decl = !prev_dot
                && (t.is("class") || t.is("interface") || t.is("enum"))
                && self.toks.get(i + 1).is_some_and(|n| n.is_name());
            let is_record = !prev_dot
                && t.is("record")
                && self.toks.get(i + 1).is_some_and(|n| n.is_name())
                && self.toks.get(i + 2).is_some_and(|n| n.is("(") || n.is("<"));
            if is_decl || is_record {
                self.pos = i;
                let decl = self.type_decl()?;
                i = self.pos;
                local_types.push(decl);
            } else {
                i += 1;
            }
        }
        self.pos = save;
        Ok(Body { span, local_types })
    }
}
