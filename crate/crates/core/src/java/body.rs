//! Statement-level analysis of method bodies, initializers and field
//! initializers by scanning tokens.
//!
//! Finds local variables (typed declarations, for/catch/resource variables,
//! lambda parameters, members of anonymous classes), and the calls and
//! variable references made by the owning entity.

use std::collections::{HashMap, HashSet};

use super::emit::FileOut;
use super::index::{Ctx, Index, Target, Ty, TypeId, OBJECT_METHODS};
use super::lexer::{is_primitive, TokKind, Token};
use super::parser::{parse_class_body_at, Member, Parser, Span, TypeRef};
use crate::model::{EdgeKind, NodeKind};

#[derive(Debug, Clone)]
struct Var {
    name: String,
    id: String,
    ty: Ty,
    /// Last token index where the variable is visible.
    until: usize,
}

/// A lambda found by the pre-pass, keyed by its first token.
#[derive(Debug, Clone)]
struct Lambda {
    params: Vec<(usize, Option<TypeRef>)>,
    arrow: usize,
    end: usize,
}

pub struct Walker<'a, 'o> {
    idx: &'a Index,
    toks: &'a [Token],
    ctx: Ctx,
    /// Source of CALL/REFERENCE/DECLARATION edges.
    owner: String,
    /// Prefix of local variable ids.
    prefix: String,
    out: &'o mut FileOut,
    scopes: Vec<Vec<Var>>,
    call_ty: HashMap<usize, Ty>,
    skip: HashSet<usize>,
    lambdas: HashMap<usize, Lambda>,
    local_spans: HashMap<usize, usize>,
    anon_at: HashSet<usize>,
    /// (closing paren of a for/try header, last token of its statement)
    headers: Vec<(usize, usize)>,
    pending: Option<(TypeRef, usize)>,
    paren_depth: usize,
    ann_end: Option<usize>,
    in_case: bool,
}

/// A variable visible when the walk starts (a parameter).
pub struct Seed {
    pub name: String,
    pub id: String,
    pub ty: Ty,
}

impl<'a, 'o> Walker<'a, 'o> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        idx: &'a Index,
        toks: &'a [Token],
        ctx: Ctx,
        owner: String,
        prefix: String,
        out: &'o mut FileOut,
        seeds: Vec<Seed>,
        local_spans: &[Span],
    ) -> Self {
        let vars = seeds.into_iter().map(|s| Var { name: s.name, id: s.id, ty: s.ty, until: usize::MAX }).collect();
        Walker {
            idx,
            toks,
            ctx,
            owner,
            prefix,
            out,
            scopes: vec![vars],
            call_ty: HashMap::new(),
            skip: HashSet::new(),
            lambdas: HashMap::new(),
            local_spans: local_spans.iter().map(|&(s, e)| (s, e)).collect(),
            anon_at: HashSet::new(),
            headers: Vec::new(),
            pending: None,
            paren_depth: 0,
            ann_end: None,
            in_case: false,
        }
    }

    pub fn run(&mut self, span: Span) {
        self.find_lambdas(span);
        self.walk(span.0, span.1);
    }

    /// Walks the anonymous class body whose `{` is at `open`.
    pub fn run_anon(&mut self, open: usize) {
        self.anon_body(open, self.toks.len());
    }

    fn tok(&self, i: usize) -> Option<&'a Token> {
        self.toks.get(i)
    }

    fn is(&self, i: usize, s: &str) -> bool {
        self.tok(i).is_some_and(|t| t.is(s))
    }

    fn is_name(&self, i: usize) -> bool {
        self.tok(i).is_some_and(|t| t.is_name())
    }

    fn matching(&self, open: usize) -> Option<usize> {
        let (o, c) = match self.toks.get(open)?.text.as_str() {
            "(" => ("(", ")"),
            "{" => ("{", "}"),
            "[" => ("[", "]"),
            _ => return None,
        };
        let mut depth = 0usize;
        for (i, t) in self.toks.iter().enumerate().skip(open) {
            if t.is(o) {
                depth += 1;
            } else if t.is(c) {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
        }
        None
    }

    /// Matching `(` for the `)` at `close`.
    fn matching_back(&self, close: usize) -> Option<usize> {
        let mut depth = 0usize;
        for i in (0..=close).rev() {
            let t = &self.toks[i];
            if t.is(")") {
                depth += 1;
            } else if t.is("(") {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
        }
        None
    }

    fn arity(&self, open: usize) -> usize {
        let Some(close) = self.matching(open) else { return 0 };
        if close == open + 1 {
            return 0;
        }
        let mut depth = 0i32;
        let mut n = 1;
        for t in &self.toks[open + 1..close] {
            match t.text.as_str() {
                "(" | "[" | "{" if t.kind == TokKind::Punct => depth += 1,
                ")" | "]" | "}" if t.kind == TokKind::Punct => depth -= 1,
                "," if t.kind == TokKind::Punct && depth == 0 => n += 1,
                _ => {}
            }
        }
        n
    }

    fn type_at(&self, i: usize) -> Option<(TypeRef, usize)> {
        let mut p = Parser::new(self.toks);
        p.seek(i);
        let r = p.type_ref().ok()?;
        Some((r, p.position()))
    }

    // ---- pre-pass -------------------------------------------------------

    fn find_lambdas(&mut self, span: Span) {
        for a in span.0..span.1 {
            if !self.is(a, "->") || a == 0 {
                continue;
            }
            if self.is_switch_arrow(a) {
                continue;
            }
            let (start, params) = if self.is_name(a - 1) {
                (a - 1, vec![(a - 1, None)])
            } else if self.is(a - 1, ")") {
                let Some(open) = self.matching_back(a - 1) else { continue };
                (open, self.lambda_params(open, a - 1))
            } else {
                continue;
            };
            let end = self.lambda_end(a);
            self.lambdas.insert(start, Lambda { params, arrow: a, end });
        }
    }

    fn is_switch_arrow(&self, a: usize) -> bool {
        let mut depth = 0i32;
        let mut i = a;
        while i > 0 {
            i -= 1;
            let t = &self.toks[i];
            match t.text.as_str() {
                ")" | "]" => depth += 1,
                "(" | "[" => {
                    depth -= 1;
                    if depth < 0 {
                        return false;
                    }
                }
                ";" | "{" | "}" | "->" if t.kind == TokKind::Punct => return false,
                "case" | "default" if depth == 0 && t.kind == TokKind::Ident => return true,
                _ => {}
            }
        }
        false
    }

    fn lambda_params(&self, open: usize, close: usize) -> Vec<(usize, Option<TypeRef>)> {
        let mut out = Vec::new();
        let mut part_start = open + 1;
        let mut depth = 0i32;
        for i in open + 1..=close {
            let t = &self.toks[i];
            let at_end = i == close;
            if !at_end {
                match t.text.as_str() {
                    "<" | "(" | "[" => depth += 1,
                    ">" | ")" | "]" => depth -= 1,
                    _ => {}
                }
            }
            if at_end || (t.is(",") && depth == 0) {
                if i > part_start && self.is_name(i - 1) {
                    let name_tok = i - 1;
                    let ty = if name_tok > part_start {
                        let mut k = part_start;
                        while self.is(k, "final") {
                            k += 1;
                        }
                        self.type_at(k).filter(|(_, p)| *p == name_tok).map(|(r, _)| r)
                    } else {
                        None
                    };
                    out.push((name_tok, ty));
                }
                part_start = i + 1;
            }
        }
        out
    }

    fn lambda_end(&self, arrow: usize) -> usize {
        if self.is(arrow + 1, "{") {
            return self.matching(arrow + 1).unwrap_or(arrow + 1);
        }
        let mut depth = 0i32;
        let mut i = arrow + 1;
        while i < self.toks.len() {
            let t = &self.toks[i];
            if t.kind == TokKind::Punct {
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        if depth == 0 {
                            return i - 1;
                        }
                        depth -= 1;
                    }
                    "," | ";" if depth == 0 => return i - 1,
                    _ => {}
                }
            }
            i += 1;
        }
        self.toks.len() - 1
    }

    // ---- emission helpers ---------------------------------------------------

    fn edge(&mut self, to: String, kind: EdgeKind, at: usize) {
        let from = self.owner.clone();
        self.out.edge(from, to, kind, Some(&self.toks[at]));
    }

    fn type_edges(&mut self, from: &str, r: &TypeRef, ctx: &Ctx) {
        self.out.type_edges(self.idx, from, r, ctx);
    }

    fn declare(&mut self, name_tok: usize, ty_ref: Option<&TypeRef>, ty: Ty, until: usize) {
        let t = &self.toks[name_tok];
        let base = format!("{}{}?{}", self.prefix, t.text, t.line + 1);
        let id = self.out.local_node(base, NodeKind::LocalVariable, t);
        self.out.edge(self.owner.clone(), id.clone(), EdgeKind::Declaration, None);
        if let Some(r) = ty_ref {
            let ctx = self.ctx.clone();
            self.type_edges(&id, r, &ctx);
        }
        self.skip.insert(name_tok);
        let var = Var { name: t.text.clone(), id, ty, until };
        self.scopes.last_mut().expect("scope").push(var);
    }

    fn lookup_var(&self, name: &str, at: usize) -> Option<&Var> {
        self.scopes.iter().rev().flat_map(|s| s.iter().rev()).find(|v| v.name == name && at <= v.until)
    }

    fn ty_of_ref(&self, r: &TypeRef, extra_dims: u32) -> Ty {
        self.idx.ty_of(Some(r), r.dims + extra_dims, &self.ctx)
    }

    fn target_ty(t: Option<Target>) -> Ty {
        match t {
            Some(Target::Type(x)) => Ty::Type(x),
            Some(Target::External(f)) => Ty::External(f),
            _ => Ty::Unknown,
        }
    }

    fn stub(&mut self, id: String, kind: NodeKind) -> String {
        self.out.stub(id.clone(), kind);
        id
    }

    // ---- main walk --------------------------------------------------------

    fn walk(&mut self, start: usize, end: usize) {
        let mut i = start;
        while i < end {
            self.headers.retain(|&(close, _)| close >= i);
            let t = &self.toks[i];
            if let Some(&stop) = self.local_spans.get(&i) {
                i = stop.max(i + 1);
                continue;
            }
            if let Some(lambda) = self.lambdas.get(&i).cloned() {
                self.scopes.push(Vec::new());
                for (tok, ty) in &lambda.params {
                    let vty = ty.as_ref().map_or(Ty::Unknown, |r| self.ty_of_ref(r, 0));
                    self.declare(*tok, ty.as_ref(), vty, lambda.end);
                }
                // the parameters stay visible through the lambda body only
                let body_start = lambda.arrow + 1;
                let body_end = (lambda.end + 1).min(end);
                let saved = (self.pending.take(), self.paren_depth);
                self.walk(body_start, body_end);
                (self.pending, self.paren_depth) = saved;
                self.scopes.pop();
                i = body_end;
                continue;
            }
            if t.kind == TokKind::Punct {
                i = self.punct(i, end);
                continue;
            }
            if t.kind == TokKind::Str {
                i += 1;
                continue;
            }
            if t.kind != TokKind::Ident {
                i += 1;
                continue;
            }
            i = match t.text.as_str() {
                "new" => self.handle_new(i),
                "catch" if self.is(i + 1, "(") => self.handle_catch(i),
                "for" | "try" if self.is(i + 1, "(") => {
                    if let Some(close) = self.matching(i + 1) {
                        let until = self.statement_end(close + 1);
                        self.headers.push((close, until));
                    }
                    i + 1
                }
                "this" | "super" if self.is(i + 1, "(") && !self.is(i.wrapping_sub(1), ".") => {
                    self.explicit_ctor_call(i);
                    i + 1
                }
                "case" => {
                    self.in_case = true;
                    i + 1
                }
                _ if t.is_name() => self.handle_name(i),
                _ if is_primitive(&t.text) => self.handle_primitive(i),
                _ => i + 1,
            };
        }
    }

    fn statement_end(&self, from: usize) -> usize {
        if self.is(from, "{") {
            return self.matching(from).unwrap_or(from);
        }
        let mut depth = 0i32;
        for i in from..self.toks.len() {
            let t = &self.toks[i];
            if t.kind != TokKind::Punct {
                continue;
            }
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    if depth == 0 {
                        return i;
                    }
                    depth -= 1;
                }
                ";" if depth == 0 => return i,
                _ => {}
            }
        }
        self.toks.len() - 1
    }

    fn punct(&mut self, i: usize, end: usize) -> usize {
        let t = &self.toks[i];
        match t.text.as_str() {
            "{" => {
                if self.anon_at.contains(&i) {
                    return self.anon_body(i, end);
                }
                self.scopes.push(Vec::new());
                self.pending = None;
            }
            "}" => {
                if self.scopes.len() > 1 {
                    self.scopes.pop();
                }
                self.pending = None;
            }
            "(" => self.paren_depth += 1,
            ")" => {
                self.paren_depth = self.paren_depth.saturating_sub(1);
                if self.pending.as_ref().is_some_and(|(_, d)| *d > self.paren_depth) {
                    self.pending = None;
                }
            }
            ";" => self.pending = None,
            ":" | "->" => self.in_case = false,
            "," => {
                if let Some((r, d)) = self.pending.clone() {
                    if d == self.paren_depth && self.is_name(i + 1) && self.declarator_follows(i + 2) {
                        let dims = self.count_dims(i + 2);
                        let ty = self.ty_of_ref(&r, dims);
                        let until = self.until_here(i);
                        self.declare(i + 1, Some(&r), ty, until);
                        return i + 2;
                    }
                }
            }
            "@" => {
                let mut k = i + 1;
                if self.is_name(k) {
                    k += 1;
                    while self.is(k, ".") && self.is_name(k + 1) {
                        k += 2;
                    }
                    if self.is(k, "(") {
                        k = self.matching(k).map_or(k + 1, |c| c + 1);
                    }
                    self.ann_end = Some(k - 1);
                    return k;
                }
            }
            _ => {}
        }
        i + 1
    }

    fn declarator_follows(&self, k: usize) -> bool {
        ["=", ";", ",", ":", "["].iter().any(|s| self.is(k, s)) || (self.is(k, ")") && self.in_header())
    }

    fn in_header(&self) -> bool {
        !self.headers.is_empty()
    }

    fn count_dims(&self, mut k: usize) -> u32 {
        let mut d = 0;
        while self.is(k, "[") && self.is(k + 1, "]") {
            d += 1;
            k += 2;
        }
        d
    }

    fn until_here(&self, i: usize) -> usize {
        match self.headers.last() {
            Some(&(close, until)) if close > i => until,
            _ => usize::MAX,
        }
    }

    fn at_statement_start(&self, i: usize) -> bool {
        if i == 0 {
            return true;
        }
        let p = &self.toks[i - 1];
        if p.kind == TokKind::Punct && matches!(p.text.as_str(), "{" | "}" | ";" | ":") {
            return true;
        }
        if p.is("final") || self.ann_end == Some(i - 1) {
            return true;
        }
        // for / try-with-resources header
        p.is("(") && i >= 2 && (self.toks[i - 2].is("for") || self.toks[i - 2].is("try"))
    }

    fn handle_name(&mut self, i: usize) -> usize {
        if self.skip.contains(&i) {
            return i + 1;
        }
        let name = self.toks[i].text.clone();
        if name != "yield" && self.at_statement_start(i) {
            if let Some((r, p)) = self.type_at(i) {
                if self.is_name(p) && self.declarator_follows(p + 1) {
                    let dims = self.count_dims(p + 1);
                    let ty = if r.is_var() { self.infer_var(p) } else { self.ty_of_ref(&r, dims) };
                    let until = self.until_here(i);
                    let ty_ref = (!r.is_var()).then_some(&r);
                    self.declare(p, ty_ref, ty, until);
                    self.pending = Some((r, self.paren_depth));
                    return p + 1;
                }
            }
        }
        let prev = if i > 0 { self.toks[i - 1].text.as_str() } else { "" };
        let prev_punct = i > 0 && self.toks[i - 1].kind == TokKind::Punct;
        let call = self.is(i + 1, "(");
        if prev_punct && prev == "." {
            let recv = self.expr_ty(i - 2);
            if call {
                self.member_call(i, &recv);
            } else {
                self.member_field(i, &recv);
            }
        } else if prev_punct && prev == "::" {
            let recv = self.expr_ty(i - 2);
            self.method_ref(i, &recv);
        } else if call {
            self.unqualified_call(i);
        } else {
            self.plain_name(i);
        }
        i + 1
    }

    fn handle_primitive(&mut self, i: usize) -> usize {
        if self.at_statement_start(i) {
            if let Some((r, p)) = self.type_at(i) {
                if self.is_name(p) && self.declarator_follows(p + 1) {
                    let dims = self.count_dims(p + 1);
                    let ty = self.ty_of_ref(&r, dims);
                    let until = self.until_here(i);
                    self.declare(p, None, ty, until);
                    self.pending = Some((r, self.paren_depth));
                    return p + 1;
                }
            }
        }
        i + 1
    }

    fn infer_var(&self, name_tok: usize) -> Ty {
        if self.is(name_tok + 1, "=") && self.is(name_tok + 2, "new") {
            if let Some((r, _)) = self.type_at(name_tok + 3) {
                return self.ty_of_ref(&r, 0);
            }
        }
        Ty::Unknown
    }

    fn plain_name(&mut self, i: usize) {
        let name = self.toks[i].text.clone();
        if i > 0 {
            let p = &self.toks[i - 1];
            if p.is("case") || p.is("break") || p.is("continue") || self.in_case {
                return;
            }
            // label
            if self.is(i + 1, ":") && p.kind == TokKind::Punct && matches!(p.text.as_str(), "{" | "}" | ";") {
                return;
            }
        }
        if let Some(v) = self.lookup_var(&name, i) {
            let id = v.id.clone();
            self.edge(id, EdgeKind::Reference, i);
            return;
        }
        if let Some((t, f)) = self.enclosing_field(&name) {
            let id = self.idx.types[t].fields[f].id.clone();
            self.edge(id, EdgeKind::Reference, i);
            return;
        }
        if let Some(id) = self.static_import_field(&name) {
            self.edge(id, EdgeKind::Reference, i);
            return;
        }
        if self.idx.resolve_simple(&name, &self.ctx).is_some() {
            return;
        }
        let lower = name.chars().next().is_some_and(|c| c.is_lowercase());
        if lower && self.is(i + 1, ".") {
            // package prefix of a qualified name
            return;
        }
        self.out.unresolved += 1;
    }

    fn enclosing_field(&self, name: &str) -> Option<(TypeId, usize)> {
        let mut cur = self.ctx.ty;
        while let Some(t) = cur {
            if let Some(hit) = self.idx.find_field(t, name) {
                return Some(hit);
            }
            cur = self.idx.types[t].outer;
        }
        None
    }

    fn static_import_field(&mut self, name: &str) -> Option<String> {
        let imports = &self.idx.files[self.ctx.file].1;
        for imp in imports.iter().filter(|m| m.is_static) {
            let (owner, member) = if imp.wildcard {
                (imp.path.as_str(), name)
            } else {
                match imp.path.rsplit_once('.') {
                    Some((o, m)) if m == name => (o, m),
                    _ => continue,
                }
            };
            match self.idx.by_fqn.get(owner) {
                Some(&t) => {
                    if let Some((ft, f)) = self.idx.find_field(t, member) {
                        return Some(self.idx.types[ft].fields[f].id.clone());
                    }
                }
                None if !imp.wildcard => return Some(self.stub(format!("{owner}.{member}."), NodeKind::Field)),
                None => {}
            }
        }
        None
    }

    /// The static type of the expression whose last token is `j`.
    fn expr_ty(&self, j: usize) -> Ty {
        let Some(t) = self.tok(j) else { return Ty::Unknown };
        match t.kind {
            TokKind::Str => return Ty::External("java.lang.String".into()),
            TokKind::Punct if t.is(")") => return self.call_ty.get(&j).cloned().unwrap_or(Ty::Unknown),
            TokKind::Ident => {}
            _ => return Ty::Unknown,
        }
        let own = self.ctx.ty;
        if t.is("this") {
            if j > 0 && self.is(j - 1, ".") {
                // Outer.this
                return Self::target_ty(self.qualified_before(j - 2));
            }
            return own.map_or(Ty::Unknown, Ty::Type);
        }
        if t.is("super") {
            let sc = own.and_then(|o| self.idx.types[o].superclass.clone());
            return match sc {
                Some(s) => Self::target_ty(Some(s)),
                None => Ty::External("java.lang.Object".into()),
            };
        }
        if !t.is_name() {
            return Ty::Unknown;
        }
        let name = t.text.as_str();
        if j > 0 && self.is(j - 1, ".") {
            let base = self.expr_ty(j.saturating_sub(2));
            return match base {
                Ty::Type(bt) => {
                    if let Some((ft, f)) = self.idx.find_field(bt, name) {
                        self.idx.field_ty(ft, f)
                    } else if let Some(m) = self.idx.member_type(bt, name) {
                        Ty::Type(m)
                    } else {
                        Ty::Unknown
                    }
                }
                Ty::External(f) if looks_like_type(name) => Ty::External(format!("{f}.{name}")),
                Ty::Unknown => {
                    if looks_like_type(name) {
                        Self::target_ty(self.qualified_before(j))
                    } else {
                        Ty::Unknown
                    }
                }
                _ => Ty::Unknown,
            };
        }
        if let Some(v) = self.lookup_var(name, j) {
            return v.ty.clone();
        }
        if let Some((ft, f)) = self.enclosing_field(name) {
            return self.idx.field_ty(ft, f);
        }
        Self::target_ty(self.idx.resolve_simple(name, &self.ctx))
    }

    /// Resolves the dotted name ending at `j` as a type.
    fn qualified_before(&self, j: usize) -> Option<Target> {
        let mut segs = vec![self.tok(j)?.text.clone()];
        let mut k = j;
        while k >= 2 && self.is(k - 1, ".") && self.is_name(k - 2) {
            k -= 2;
            segs.push(self.toks[k].text.clone());
        }
        segs.reverse();
        self.idx.resolve_segments(&segs, &self.ctx)
    }

    fn record_call(&mut self, open: usize, ty: Ty) {
        if let Some(close) = self.matching(open) {
            self.call_ty.insert(close, ty);
        }
    }

    fn member_call(&mut self, i: usize, recv: &Ty) {
        let name = self.toks[i].text.clone();
        let arity = self.arity(i + 1);
        let ret = match recv {
            Ty::Type(t) => self.call_on_type(i, *t, &name, Some(arity), false),
            Ty::External(f) => {
                let id = self.stub(format!("{f}.{name}()."), NodeKind::Method);
                self.edge(id, EdgeKind::Call, i);
                Ty::Unknown
            }
            Ty::Array => Ty::Unknown,
            Ty::Unknown => {
                self.out.unresolved += 1;
                Ty::Unknown
            }
        };
        self.record_call(i + 1, ret);
    }

    /// Binds `name` on project type `t`: a project method, else the first
    /// external supertype, else `java.lang.Object`. Returns the result type.
    fn call_on_type(&mut self, i: usize, t: TypeId, name: &str, arity: Option<usize>, quiet: bool) -> Ty {
        if let Some((mt, m)) = self.idx.find_method(t, name, arity) {
            let id = self.idx.types[mt].methods[m].id.clone();
            self.edge(id, EdgeKind::Call, i);
            return self.idx.return_ty(mt, m);
        }
        if let Some(ext) = self.idx.external_super(t) {
            let id = self.stub(format!("{ext}.{name}()."), NodeKind::Method);
            self.edge(id, EdgeKind::Call, i);
            return Ty::Unknown;
        }
        if OBJECT_METHODS.contains(&name) {
            let id = self.stub(format!("java.lang.Object.{name}()."), NodeKind::Method);
            self.edge(id, EdgeKind::Call, i);
            return Ty::Unknown;
        }
        if !quiet {
            self.out.unresolved += 1;
        }
        Ty::Unknown
    }

    fn member_field(&mut self, i: usize, recv: &Ty) {
        let name = self.toks[i].text.clone();
        match recv {
            Ty::Type(t) => {
                if let Some((ft, f)) = self.idx.find_field(*t, &name) {
                    let id = self.idx.types[ft].fields[f].id.clone();
                    self.edge(id, EdgeKind::Reference, i);
                } else if self.idx.member_type(*t, &name).is_some() || name == "class" {
                } else if let Some(ext) = self.idx.external_super(*t) {
                    let id = self.stub(format!("{ext}.{name}."), NodeKind::Field);
                    self.edge(id, EdgeKind::Reference, i);
                } else {
                    self.out.unresolved += 1;
                }
            }
            Ty::External(f) => {
                if looks_like_type(&name) && (self.is(i + 1, ".") || self.is(i + 1, "<") || self.is(i + 1, "::")) {
                    return;
                }
                let id = self.stub(format!("{f}.{name}."), NodeKind::Field);
                self.edge(id, EdgeKind::Reference, i);
            }
            Ty::Array => {}
            Ty::Unknown => {
                // package segments and qualified type names are not references
                let lower = name.chars().next().is_some_and(|c| c.is_lowercase());
                let continues = self.is(i + 1, ".");
                if continues && (lower || looks_like_type(&name)) {
                    return;
                }
                self.out.unresolved += 1;
            }
        }
    }

    fn method_ref(&mut self, i: usize, recv: &Ty) {
        let name = self.toks[i].text.clone();
        match recv {
            Ty::Type(t) => {
                self.call_on_type(i, *t, &name, None, false);
            }
            Ty::External(f) => {
                let id = self.stub(format!("{f}.{name}()."), NodeKind::Method);
                self.edge(id, EdgeKind::Call, i);
            }
            _ => self.out.unresolved += 1,
        }
    }

    fn unqualified_call(&mut self, i: usize) {
        let name = self.toks[i].text.clone();
        let arity = self.arity(i + 1);
        let ret = self.resolve_unqualified(i, &name, arity);
        self.record_call(i + 1, ret);
    }

    fn resolve_unqualified(&mut self, i: usize, name: &str, arity: usize) -> Ty {
        let mut cur = self.ctx.ty;
        while let Some(t) = cur {
            if let Some((mt, m)) = self.idx.find_method(t, name, Some(arity)) {
                let id = self.idx.types[mt].methods[m].id.clone();
                self.edge(id, EdgeKind::Call, i);
                return self.idx.return_ty(mt, m);
            }
            cur = self.idx.types[t].outer;
        }
        if let Some(ext) = self.ctx.ty.and_then(|t| self.idx.external_super(t)) {
            let id = self.stub(format!("{ext}.{name}()."), NodeKind::Method);
            self.edge(id, EdgeKind::Call, i);
            return Ty::Unknown;
        }
        let imports = self.idx.files[self.ctx.file].1.clone();
        for imp in imports.iter().filter(|m| m.is_static) {
            let owner = if imp.wildcard {
                imp.path.as_str()
            } else {
                match imp.path.rsplit_once('.') {
                    Some((o, m)) if m == name => o,
                    _ => continue,
                }
            };
            match self.idx.by_fqn.get(owner) {
                Some(&t) => {
                    if let Some((mt, m)) = self.idx.find_method(t, name, Some(arity)) {
                        let id = self.idx.types[mt].methods[m].id.clone();
                        self.edge(id, EdgeKind::Call, i);
                        return self.idx.return_ty(mt, m);
                    }
                }
                None if !imp.wildcard => {
                    let id = self.stub(format!("{owner}.{name}()."), NodeKind::Method);
                    self.edge(id, EdgeKind::Call, i);
                    return Ty::Unknown;
                }
                None => {}
            }
        }
        if OBJECT_METHODS.contains(&name) {
            let id = self.stub(format!("java.lang.Object.{name}()."), NodeKind::Method);
            self.edge(id, EdgeKind::Call, i);
            return Ty::Unknown;
        }
        self.out.unresolved += 1;
        Ty::Unknown
    }

    fn explicit_ctor_call(&mut self, i: usize) {
        let Some(own) = self.ctx.ty else { return };
        let arity = self.arity(i + 1);
        let target = if self.toks[i].is("this") {
            Some(Target::Type(own))
        } else {
            self.idx.types[own].superclass.clone()
        };
        self.ctor_call(i, target, arity, false);
    }

    fn ctor_call(&mut self, at: usize, target: Option<Target>, arity: usize, anonymous: bool) {
        match target {
            Some(Target::Type(t)) => {
                if let Some(m) = self.idx.find_ctor(t, arity) {
                    let id = self.idx.types[t].methods[m].id.clone();
                    self.edge(id, EdgeKind::Call, at);
                } else if self.idx.has_ctors(t) && !anonymous {
                    self.out.unresolved += 1;
                }
            }
            Some(Target::External(f)) if !anonymous => {
                let simple = f.rsplit('.').next().unwrap_or(&f).to_string();
                let id = self.stub(format!("{f}.{simple}()."), NodeKind::Constructor);
                self.edge(id, EdgeKind::Call, at);
            }
            Some(_) => {}
            None => self.out.unresolved += 1,
        }
    }

    fn handle_new(&mut self, i: usize) -> usize {
        let Some((r, p)) = self.type_at(i + 1) else { return i + 1 };
        if !self.is(p, "(") {
            // array creation
            return p;
        }
        let target = self.idx.resolve_ref(&r, &self.ctx);
        let arity = self.arity(p);
        let close = self.matching(p);
        let anonymous = close.is_some_and(|c| self.is(c + 1, "{"));
        if r.is_primitive() {
            return p;
        }
        self.ctor_call(r.tok, target.clone(), arity, anonymous);
        self.record_call(p, Self::target_ty(target));
        if let (Some(c), true) = (close, anonymous) {
            self.anon_at.insert(c + 1);
        }
        p
    }

    fn handle_catch(&mut self, i: usize) -> usize {
        let open = i + 1;
        let Some(close) = self.matching(open) else { return i + 1 };
        let mut k = open + 1;
        while self.is(k, "final") || self.is(k, "@") {
            if self.is(k, "@") {
                k += 2;
                if self.is(k, "(") {
                    k = self.matching(k).map_or(k, |c| c + 1);
                }
            } else {
                k += 1;
            }
        }
        let mut types = Vec::new();
        while let Some((r, p)) = self.type_at(k) {
            types.push(r);
            if self.is(p, "|") {
                k = p + 1;
            } else {
                k = p;
                break;
            }
        }
        if types.is_empty() || !self.is_name(k) || k + 1 != close {
            return i + 1;
        }
        let until = self.statement_end(close + 1);
        let ty = if types.len() == 1 { self.ty_of_ref(&types[0], 0) } else { Ty::Unknown };
        self.declare(k, types.first(), ty, until);
        let id = self.scopes.last().and_then(|s| s.last()).map(|v| v.id.clone()).expect("declared");
        let ctx = self.ctx.clone();
        for r in types.iter().skip(1) {
            self.type_edges(&id, r, &ctx);
        }
        close + 1
    }

    /// Members of an anonymous class body at `open`: their variables become
    /// locals of the owner and their code is attributed to the owner.
    fn anon_body(&mut self, open: usize, end: usize) -> usize {
        let Ok((members, after)) = parse_class_body_at(self.toks, open) else {
            self.scopes.push(Vec::new());
            return open + 1;
        };
        self.scopes.push(Vec::new());
        for m in &members {
            if let Member::Field(fd) = m {
                for v in &fd.vars {
                    let ty = self.ty_of_ref(&fd.ty, v.dims);
                    self.declare(v.tok, Some(&fd.ty), ty, usize::MAX);
                }
            }
        }
        for m in &members {
            match m {
                Member::Field(fd) => {
                    for v in &fd.vars {
                        if let Some(init) = &v.init {
                            self.find_lambdas(init.span);
                            self.walk(init.span.0, init.span.1);
                        }
                    }
                }
                Member::Method(md) => {
                    let Some(body) = &md.body else { continue };
                    self.scopes.push(Vec::new());
                    for prm in &md.params {
                        let ty = self.ty_of_ref(&prm.ty, 0);
                        self.declare(prm.tok, Some(&prm.ty), ty, usize::MAX);
                    }
                    self.find_lambdas(body.span);
                    let depth = self.scopes.len();
                    self.walk(body.span.0, body.span.1);
                    self.scopes.truncate(depth);
                    self.scopes.pop();
                }
                Member::Initializer(body) => {
                    self.find_lambdas(body.span);
                    let depth = self.scopes.len();
                    self.walk(body.span.0, body.span.1);
                    self.scopes.truncate(depth);
                }
                Member::Type(_) => {}
            }
        }
        self.scopes.pop();
        after.min(end.max(after))
    }
}

/// `Entry`, `Map` but not `PI` or `MAX_VALUE`.
fn looks_like_type(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_uppercase()) && name.chars().any(|c| c.is_lowercase())
}
